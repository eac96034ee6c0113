"""Simple module for maintaining configuration"""

RENYI_SPECTRUM_PROGRESS_ENV_VAR_KEY = "RENYI_SPECTRUM_SHOW_PROGRESS"
RENYI_SPECTRUM_LOG_LEVEL_ENV_VAR_KEY = "RENYI_SPECTRUM_LOG_LEVEL"
RENYI_SPECTRUM_TIMESTAMP_ENV_VAR_KEY = "SOURCE_DATE_EPOCH"

RENYI_SPECTRUM_LOGGING_HANDLER = {
    "class": "rich.logging.RichHandler",
    "level": "WARNING",
    "markup": True,
    "log_time_format": "[%X]",
}

# kernels
KERNEL_CHEBYSHEV_ORDER = 64
KERNEL_CRITICAL_ORDER = 512
KERNEL_MAX_ORDER = 2048
KERNEL_QUADRATURE_POINTS = 256
KERNEL_TOLERANCE = 1e-10
KERNEL_TAIL_LENGTH = 4

# root finding
ROOT_PARAMETER_TOLERANCE = 1e-12
ROOT_U_TOLERANCE = 1e-8
ROOT_MAX_ITERATIONS = 200
ENTANGLED_ALPHA_START = 2.0
ENTANGLED_ALPHA_GROWTH = 4.0
ENTANGLED_ALPHA_LIMIT = 1e8

# density reconstruction
DENSITY_NEGATIVE_TOLERANCE = 1e-10
EDGE_ZERO_TOLERANCE = 1e-8
CDF_THETA_POINTS = 4097
MIN_GRID_POINTS = 16

# critical lines
Q_MIN_EXCLUSIVE = 0.5
UC_MINIMUM_BRACKET = (1.0, 20.0)
UC_MINIMUM_SCAN_POINTS = 200
UC_MINIMUM_SEARCH_MAX = 50.0

# coulomb gas oracle
ORACLE_MIN_N = 8
ORACLE_MAX_ITERATIONS = 200
ORACLE_STEP_TOLERANCE = 1e-10
ORACLE_CONSTRAINT_TOLERANCE = 1e-10
ORACLE_COLLISION_SPACING = 1e-14
ORACLE_MAX_RESTARTS = 3
ORACLE_JITTER = 1e-3
METROPOLIS_BURN_IN_FACTOR = 10
METROPOLIS_THINNING_FACTOR = 1
METROPOLIS_TARGET_ACCEPTANCE = 0.5
METROPOLIS_ACCEPTANCE_BOUNDS = (0.1, 0.9)

# haar sampler
HAAR_MIN_N = 2

# command line
EXIT_SUCCESS = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4
CSV_FLOAT_FORMAT = ".17g"
DEFAULT_GRID_POINTS = 256
DEFAULT_SEED = 20190101
