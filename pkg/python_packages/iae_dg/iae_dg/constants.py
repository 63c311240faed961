""" special constants used throughout iae_dg
"""

# the current `entry_point` to use for python-based problem finders
EP_PROBLEM_V1 = "iae_dg_problem_v1"

# overrides the default output directory of the experiment runner
ENV_OUTPUT_DIR = "IAE_DG_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "build/iae-dg"

# basis orders (polynomial degree m - 1) and quadrature sizes
MAX_BASIS_ORDER = 8
MAX_GAUSS_POINTS = 64

# moment integrals use q = m + QUAD_EXTRA nodes per direction unless overridden
QUAD_EXTRA = 6

# right-hand-side oracle: composite Gauss on panels of this width
ORACLE_PANEL_WIDTH = 0.1
ORACLE_POINTS = 64
ORACLE_MIN_POINTS = 16

IDENTITY_TOL = 1e-12
CONDITION_LIMIT = 1e12
RESIDUAL_TOL = 1e-10

# extended-precision residual corrections applied to every step solve
REFINEMENT_STEPS = 2

# errors below this are at the rounding floor and excluded from order checks
ERROR_FLOOR = 1e-12

GLOBAL_SAMPLES = 10
MIN_GLOBAL_SAMPLES = 5

# lower bound used for |K21(t,t) K12(t,t)| and |k(t,t)| checks
DEFAULT_K0 = 1e-8
