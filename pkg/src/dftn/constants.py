"""
Global constants for the dftn CLI.
"""

# Quantizer defaults
DEFAULT_K_W = 2
DEFAULT_K_A = 2
DEFAULT_XI = 2.8
DEFAULT_EPSILON_A = 1.0
ROUND_HALF_AWAY = "half-away"
ROUNDING_RULES = (ROUND_HALF_AWAY,)

# Activation STE passes gradients where |A| <= this value
STE_ACTIVATION_THRESHOLD = 0.5

# Slack allowed when asserting the restricted reconstruction bound
BOUND_SLACK = 1e-9

# Batch normalization
BN_MOMENTUM = 0.1
BN_EPSILON = 1e-5

# AdaDelta
ADADELTA_RHO = 0.95
ADADELTA_EPS = 1e-6
ADADELTA_LR = 1.0
ADADELTA_DECAY = 1.0

# Network topology (per sub-network)
CONV_KERNELS = (11, 10, 6)
CONV_FILTERS = (50, 40, 30)
CONV_STRIDES = (1, 1, 1)
POOL_SIZES = (2, 3, 1)
DENSE_UNITS = 1000

# Training
DEFAULT_EPOCHS = 50
DEFAULT_BATCH = 1024
DEFAULT_SEED = 0
DEFAULT_PHI_SEED = 0
DEFAULT_VALIDATION_FRACTION = 0.2

# Sliding windows
DEFAULT_WINDOW_T = 64
DEFAULT_STRIDE = 3
UNIMIB_WINDOW_T = 96

# Synthetic data
SYNTH_CLASSES = 4
SYNTH_WINDOWS_PER_CLASS = 100
SYNTH_NOISE = 0.3
SYNTH_SAMPLE_RATE = 30.0
SYNTH_BRANCHES = (("hand", 4), ("back", 4), ("ankle", 4))

# Packed model file
DFTN_MAGIC = b"DFTN"
DFTN_FORMAT_VERSION = 1
WORD_BITS = 64

# Output file names
MODEL_FILE_NAME = "model.dftn"
METRICS_FILE_NAME = "metrics.csv"
CHECKPOINT_FILE_NAME = "state.npz"
RESOLVED_CONFIG_NAME = "resolved_config.ini"
STANDARDIZER_FILE_NAME = "standardizer.json"
PREDICTIONS_FILE_NAME = "predictions.csv"
EVAL_FILE_NAME = "eval_metrics.csv"
SWEEP_FILE_NAME = "xi_sweep.csv"

# Logging constants
LOG_APP_NAME = "DFTN"
LOG_FILE_NAME = "dftn"
LOG_RETENTION_DAYS = 7
LOG_LINES_TO_SHOW = 20
LOG_DIR_ENV = "DFTN_LOG_DIR"

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
