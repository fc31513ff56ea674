GN_NODES = 128
GN_GROUPS = 4
GN_GROUP_SIZE = 32
GN_AVG_DEGREE = 16.0

LFR_NODES = 1000
LFR_AVG_DEGREE = 20.0
LFR_MAX_DEGREE = 50
LFR_GAMMA = 2.0
LFR_BETA = 1.0
LFR_MIXING_TOLERANCE = 0.05
LFR_MAX_SWEEPS = 1000

GN_SWEEP = [float(z) for z in range(1, 13)]
LFR_SWEEP = [round(0.1 * i, 1) for i in range(1, 10)]

SENSITIVITY_GRID = [0.05, 0.10, 0.15]
SENSITIVITY_GN_Z_OUT = 8.0
SENSITIVITY_LFR_MU = 0.5

INSTANCES_PER_POINT = 10
DEFAULT_P_D = 0.05
DEFAULT_P_A = 0.05
MASTER_SEED = 42

METHODS = ["baseline1", "baseline2-cn", "cdlp"]

RNG_ALGORITHM = "numpy.PCG64"
RESULTS_SCHEMA = "cdlp-results/v1"
SUMMARY_SCHEMA = "cdlp-summary/v1"
FLOAT_FORMAT = "%.6g"
