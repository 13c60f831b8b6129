import os
import sys

from .env_loader import load_env

load_env()

# --- TOLERANCES ---
EPS_POINT = 1e-12           # two points closer than this coincide
EPS_COLLINEAR = 1e-14       # cross-product threshold for degenerate triangles
NEAR_BOUNDARY = 1e-8        # 1 - |p|^2 below this uses the near-boundary distance form
UNIT_SPHERE_TOL = 1e-12

# --- HYPERBOLIC CONSTRUCTION ---
DEFAULT_ALPHA = 0.45
DEFAULT_BOOTSTRAP_LAYERS = 3
BOOTSTRAP_LOG_SHIFT = 0.5   # r_n = alpha * ln(n + shift) for bootstrap layers
SLOPE_TOLERANCE = 0.1
MIN_LAYERS_FOR_FIT = 100    # schedule order fits need at least a decade above 10

# --- EUCLIDEAN CONSTRUCTION ---
MAX_EUCLIDEAN_VERTICES = 2_000_000
LAYER_COUNT_LIMIT = int(sys.float_info.max)

# --- CROSSING CHECK ---
GRID_CELL_QUANTILE = 0.5
PAIR_CHUNK = 2_000_000

# --- FILES ---
FORMAT_VERSION = "1"
COORD_DIGITS = 17

# --- CLI ---
EXIT_CODES = {
    'ok':                   0,
    'validation_failed':    1,
    'usage':                2,
    'schedule':             3,
}

DEFAULT_CHECKS = {
    'planar':   ('degree', 'crossing', 'euler', 'disk'),
    'closed':   ('degree', 'euler', 'closed'),
}

# --- ENVIRONMENT ---
LOG_LEVEL = os.getenv('GEOTRI_LOG_LEVEL', 'WARNING').upper()
WORKERS = max(1, int(os.getenv('GEOTRI_WORKERS', '4')))
