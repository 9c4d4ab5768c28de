import math
from enum import Enum
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

# --- Linear algebra results ---


class HermitianEigen(BaseModel):
    values: np.ndarray  # ascending
    vectors: np.ndarray  # columns are unit eigenvectors

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class RadiusResult(BaseModel):
    radius: float = Field(ge=0.0)
    theta_star: float
    attaining_vector: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class BoundaryPoint(BaseModel):
    angle: float
    support_value: float
    witness: complex  # x*Ax for the top eigenvector x of H(angle)

    class Config:
        arbitrary_types_allowed = True
        frozen = True


# --- Maps on matrix spaces ---


class TensorDims(BaseModel):
    dims: List[int]

    class Config:
        frozen = True

    @field_validator("dims")
    @classmethod
    def check_dims(cls, dims: List[int]) -> List[int]:
        if len(dims) < 1:
            raise ValueError("at least one tensor factor is required")
        if any(n < 2 for n in dims):
            raise ValueError(f"every factor dimension must be >= 2, got {dims}")
        return dims

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    @property
    def count(self) -> int:
        return len(self.dims)


class SuperOperator(BaseModel):
    dim: int = Field(ge=1)
    matrix: np.ndarray  # dim^2 x dim^2, acts on column-major vec

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @model_validator(mode="after")
    def check_shape(self):
        expected = (self.dim**2, self.dim**2)
        if self.matrix.shape != expected:
            raise ValueError(f"superoperator matrix must be {expected}, got {self.matrix.shape}")
        return self


class FactorType(str, Enum):
    IDENTITY = "identity"
    TRANSPOSE = "transpose"


class CanonicalPreserver(BaseModel):
    """X = A_1 ⊗ ... ⊗ A_m  ↦  xi · U (phi_1(A_1) ⊗ ... ⊗ phi_m(A_m)) U*."""

    dims: TensorDims
    xi: complex
    unitary: np.ndarray
    factor_types: List[FactorType]

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @model_validator(mode="after")
    def check_invariants(self):
        n = self.dims.total
        if abs(abs(self.xi) - 1.0) > 1e-12:
            raise ValueError(f"xi must be a complex unit, |xi| = {abs(self.xi)}")
        if self.unitary.shape != (n, n):
            raise ValueError(f"unitary must be {n}x{n}, got {self.unitary.shape}")
        gram = self.unitary.conj().T @ self.unitary
        if np.linalg.norm(gram - np.eye(n)) > 1e-9:
            raise ValueError("unitary is not unitary within 1e-9")
        if len(self.factor_types) != self.dims.count:
            raise ValueError("one factor type per tensor factor is required")
        return self

    @property
    def transposed_factors(self) -> List[int]:
        return [k for k, t in enumerate(self.factor_types) if t == FactorType.TRANSPOSE]


# --- Verification and classification ---


class VerdictStatus(str, Enum):
    PRESERVING = "preserving"
    VIOLATED = "violated"


class Verdict(BaseModel):
    status: VerdictStatus
    invariant: Literal["radius", "range"] = "radius"
    witness: Optional[List[np.ndarray]] = None  # factor matrices A_1..A_m
    w_input: Optional[float] = None
    w_output: Optional[float] = None
    angle: Optional[float] = None  # support direction, range checks only
    samples: int = 0

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @property
    def gap(self) -> float:
        if self.w_input is None or self.w_output is None:
            return 0.0
        return abs(self.w_input - self.w_output)


class AttainingBasis(BaseModel):
    indices: List[Tuple[int, ...]]  # lexicographic multi-indices
    vectors: np.ndarray  # column k attains w(B_idx) for idx = indices[k]
    phases: np.ndarray  # xi_idx = u* B_idx u

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class ClassificationStatus(str, Enum):
    CLASSIFIED = "classified"
    NOT_PRESERVING = "not_preserving"
    RECONSTRUCTION_FAILED = "reconstruction_failed"


class ClassificationResult(BaseModel):
    status: ClassificationStatus
    preserver: Optional[CanonicalPreserver] = None
    verdict: Optional[Verdict] = None
    stage: Optional[str] = None
    diagnostic: Optional[float] = None
    residual: Optional[float] = None
    superop_deviation: Optional[float] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True


# --- File formats ---


class MatrixFile(BaseModel):
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    entries: List[Tuple[float, float]]  # row-major [re, im] pairs

    class Config:
        allow_inf_nan = False

    @model_validator(mode="after")
    def check_entries(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}"
            )
        return self


class SuperOpFile(BaseModel):
    dims: List[int]
    vec: Literal["column-major"]
    matrix: MatrixFile

    @model_validator(mode="after")
    def check_size(self):
        if not self.dims or any(n < 2 for n in self.dims):
            raise ValueError(f"every factor dimension must be >= 2, got {self.dims}")
        side = math.prod(self.dims) ** 2
        if (self.matrix.rows, self.matrix.cols) != (side, side):
            raise ValueError(
                f"dims {self.dims} require a {side}x{side} matrix, "
                f"got {self.matrix.rows}x{self.matrix.cols}"
            )
        return self
