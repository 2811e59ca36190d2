# lkgeom/conf.py
import os
from dotenv import load_dotenv

BASE_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
ENV_PATH = os.path.join(BASE_DIR, "env.properties")
load_dotenv(ENV_PATH)


# Geometric predicates work on unit-scale data
GEOM_TOL = 1e-9
ORTHO_TOL = 1e-10
MAX_AMBIENT_DIM = 6

# Monte Carlo defaults
DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1
DEFAULT_TOLERANCE = 1e-3
MC_CHUNK = 65_536
ANGLE_MC_SAMPLES = 100_000

# Polar invariants / pushforward
ANGULAR_GRID = 2048
PROBE_SCALE = 1e-2
GENERICITY_ANGLE_TOL = 1e-3
POLAR_RESAMPLE_LIMIT = 0.10

# Crofton: fraction of near-tangential flats tolerated before giving up
CROFTON_NONGENERIC_LIMIT = 0.01

# Semialgebraic oracle grid
ORACLE_MIN_LEVEL = 6
ORACLE_MAX_LEVEL = 12
ORACLE_ETA = 1.0
ORACLE_EPS = 1e-2

# Only environment knobs: output dir and logging. Nothing read here may change
# computed values, so the same argv always gives the same bytes.
OUTPUT_DIR = os.getenv("LKGEOM_OUTPUT_DIR")
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_FORMAT = os.getenv("LOG_FORMAT", "human")


def validate_config() -> None:
    """
    Fail-fast config validation.
    Called once by the CLI before dispatch.
    """
    errors = []
    if LOG_FORMAT not in ("human", "json"):
        errors.append(f"LOG_FORMAT={LOG_FORMAT!r} must be 'human' or 'json'")
    if LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        errors.append(f"LOG_LEVEL={LOG_LEVEL!r} is not a logging level")
    if OUTPUT_DIR is not None and not os.path.isdir(OUTPUT_DIR):
        errors.append(f"LKGEOM_OUTPUT_DIR={OUTPUT_DIR!r} is not a directory")
    if not (ORACLE_MIN_LEVEL < ORACLE_MAX_LEVEL):
        errors.append("ORACLE_MIN_LEVEL must be below ORACLE_MAX_LEVEL")
    if errors:
        raise RuntimeError("Config validation failed:\n" + "\n".join(f"  - {e}" for e in errors))
