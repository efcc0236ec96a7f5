import os
from pathlib import Path

from dotenv import load_dotenv

env_path = Path(__file__).resolve().parent.parent.parent / ".env"
load_dotenv(dotenv_path=env_path)

DEFAULT_GRID_OVERSAMPLE = int(os.getenv("PSIAPPROX_GRID_OVERSAMPLE", "16"))
DEFAULT_TOL = float(os.getenv("PSIAPPROX_TOL", "1e-9"))
DEFAULT_MAX_ITER = int(os.getenv("PSIAPPROX_MAX_ITER", "500"))
DEFAULT_SEED = int(os.getenv("PSIAPPROX_SEED", "0"))
DEFAULT_SEED_COUNT = int(os.getenv("PSIAPPROX_SEED_COUNT", "4"))
DEFAULT_CLASS_CAP = float(os.getenv("PSIAPPROX_CLASS_CAP", "64"))

SCHEMA_VERSION = 1
CSV_FLOAT_FORMAT = "%.17g"
