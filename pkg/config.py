import os
import logging
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

NUMRAD_LOG = os.getenv("NUMRAD_LOG", "info")

# Tolerance ladder
RADIUS_TOL = float(os.getenv("NUMRAD_RADIUS_TOL", "1e-10"))
VERIFY_TOL = float(os.getenv("NUMRAD_VERIFY_TOL", "1e-7"))
RESIDUAL_GATE = float(os.getenv("NUMRAD_RESIDUAL_GATE", "1e-6"))
STRUCTURE_TOL = 1e-8
HERMITIAN_TOL = 1e-10
UNIT_TOL = 1e-10

# Angle grids
ANGLE_GRID = int(os.getenv("NUMRAD_ANGLE_GRID", "720"))
SUPPORT_ANGLES = 72
REFINE_CANDIDATES = 3

# Desk-scale limits
MAX_DIM = 256
MAX_CLASSIFY_DIM = 16
RESIDUAL_SAMPLES = 100

LOG_LEVELS = {
    "quiet": logging.ERROR,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def init_logging(level_name: str | None = None):
    name = (level_name or NUMRAD_LOG).strip().lower()
    level = LOG_LEVELS.get(name)
    logging.basicConfig(
        level=level or logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(level or logging.INFO)
    if level is None:
        logging.getLogger(__name__).warning(f"Unknown NUMRAD_LOG value '{name}', using 'info'")
