import json
import logging
from pathlib import Path
from typing import List, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from errors import OutputError, ParseError
from schemas.models import BoundaryPoint, MatrixFile, SuperOperator, SuperOpFile, TensorDims

logger = logging.getLogger(__name__)

VEC_CONVENTION = "column-major"


def matrix_to_file(matrix: np.ndarray) -> MatrixFile:
    matrix = np.asarray(matrix, dtype=np.complex128)
    rows, cols = matrix.shape
    entries = [(float(z.real), float(z.imag)) for z in matrix.reshape(-1)]
    return MatrixFile(rows=rows, cols=cols, entries=entries)


def file_to_matrix(document: MatrixFile) -> np.ndarray:
    values = np.array([complex(re, im) for re, im in document.entries], dtype=np.complex128)
    return values.reshape(document.rows, document.cols)


def matrix_json(matrix: np.ndarray, indent: int | None = None) -> str:
    return json.dumps(matrix_to_file(matrix).model_dump(), indent=indent)


def _load(path, model):
    try:
        payload = json.loads(Path(path).read_text())
        return model.model_validate(payload)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror or e}")
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8 text")
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})")
    except ValidationError as e:
        raise ParseError(f"{path} does not match the expected schema: {e.errors()[0]['msg']}")


def _dump(path, payload: dict):
    try:
        Path(path).write_text(json.dumps(payload))
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}")
    logger.info(f"Wrote {path}")


def read_matrix(path) -> np.ndarray:
    return file_to_matrix(_load(path, MatrixFile))


def write_matrix(path, matrix: np.ndarray):
    _dump(path, matrix_to_file(matrix).model_dump())


def read_superop(path) -> Tuple[TensorDims, SuperOperator]:
    document = _load(path, SuperOpFile)
    dims = TensorDims(dims=document.dims)
    return dims, SuperOperator(dim=dims.total, matrix=file_to_matrix(document.matrix))


def write_superop(path, dims: TensorDims, phi: SuperOperator):
    document = SuperOpFile(dims=dims.dims, vec=VEC_CONVENTION, matrix=matrix_to_file(phi.matrix))
    _dump(path, document.model_dump())


def write_boundary_csv(path, points: List[BoundaryPoint]):
    """theta,support,re,im with shortest round-trip float text and CRLF rows."""
    frame = pd.DataFrame(
        {
            "theta": [repr(p.angle) for p in points],
            "support": [repr(p.support_value) for p in points],
            "re": [repr(p.witness.real) for p in points],
            "im": [repr(p.witness.imag) for p in points],
        }
    )
    try:
        frame.to_csv(path, index=False, lineterminator="\r\n")
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}")
    logger.info(f"Wrote {len(points)} boundary points to {path}")
