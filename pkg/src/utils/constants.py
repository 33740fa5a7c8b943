"""
Constants - Physical defaults and numerical tuning constants
"""

# Tool identity
TITLE = "mimo-estim"
CSV_SCHEMA_VERSION = 1

# UPA parameters (carrier, spacing, BS height)
SPEED_OF_LIGHT = 3.0e8  # m/s, rounded so that 3 GHz gives a 0.1 m wavelength
CARRIER_FREQUENCY = 3.0e9  # Hz
WAVELENGTH = SPEED_OF_LIGHT / CARRIER_FREQUENCY  # meters
SPACING_WAVELENGTHS = 0.25
DELTA_H = SPACING_WAVELENGTHS * WAVELENGTH
DELTA_V = SPACING_WAVELENGTHS * WAVELENGTH
BS_HEIGHT = 10.0  # meters above the UE plane

# Simulation parameters
D_MIN = 5.0  # meters
D_MAX = 100.0  # meters
AZIMUTH_RANGE_DEG = (-60.0, 60.0)
SPREAD_AZIMUTH_DEG = 10.0
SPREAD_ELEVATION_DEG = 10.0
BANDWIDTH = 100e6  # Hz
RHO_DBM = 20.0
NOISE_DBM = -87.0
TAU_P = 10
TAU_C = 200

# Path loss model: beta = PATHLOSS_REF_DB - PATHLOSS_SLOPE_DB * log10(d / PATHLOSS_REF_DISTANCE)
PATHLOSS_REF_DB = -148.1
PATHLOSS_SLOPE_DB = 37.6
PATHLOSS_REF_DISTANCE = 1000.0  # meters

# Angular density truncation (Gaussian mass beyond this many sigmas is ignored)
GAUSSIAN_TAIL_SIGMAS = 8.0
DENSITY_NORMALIZATION_TOL = 1e-10

# Quadrature for the local scattering integral
QUADRATURE_INITIAL_NODES = 16
QUADRATURE_MAX_NODES = 512
QUADRATURE_TOLERANCE = 1e-6

# Matrix tolerances
PSD_TOLERANCE = 1e-9  # min eigenvalue >= -PSD_TOLERANCE * ||R||
HERMITIAN_TOLERANCE = 1e-10
RANK_TOLERANCE = 1e-12  # channel factor keeps eigenvalues above this * lambda_max
ISO_EIGEN_THRESHOLD = 1e-10

# Nearest Kronecker product power iteration
NKP_TOLERANCE = 1e-12
NKP_MAX_ITERATIONS = 10000

# Covariance learning
DEFAULT_ETA = 0.8

# Monte Carlo sizes at desk scale
NUM_UE_DROPS = 100
NUM_BLOCKS_PER_DROP = 200
NUM_UE_POSITIONS = 100
NUM_UES = 10

# Experiment sweeps
# Each entry is the desk-scale grid; the --full grid lifts the caps
SWEEPS = {
    "upa_sizes": [16, 64, 144, 256],
    "upa_sizes_full": [16, 64, 144, 256, 576, 1024],
    "ula_sizes": [16, 32, 64, 128],
    "ula_sizes_full": [16, 32, 64, 128, 256, 512],
    "sigma_theta_deg": [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
    "mean_elevation_deg": [0.0, 60.0],
    "nsae_shapes": [(16, 16), (1, 256), (4, 64)],
    "m_observations": [5, 10, 20, 50],
    "se_m_observations": [20, 50, 100],
    "rho_dbm": [10.0, 15.0, 20.0, 25.0, 30.0],
    "eta": [1.0, 0.8, 0.0],
}

# NSAE experiment fixed parameters
NSAE_GAMMA_DB = 10.0
NSAE_SPREAD_AZIMUTH_DEG = 10.0

# Complexity report
COMPLEXITY_N = 4096
COMPLEXITY_MEASURE_LIMIT = 1024  # largest N for which apply counts are measured

# Worker pool
THREADS_ENV_VAR = "MIMO_ESTIM_THREADS"

# Experiment defaults
DEFAULT_SEED = 1
DEFAULT_M_OBSERVATIONS = 50
SE_K_UES = 5  # desk-scale K for the SE sweeps (the full grid uses NUM_UES)
UPA_ESTIMATORS = ["mmse", "kba", "nkp", "kba_dft", "ls", "los", "iso"]
ULA_ESTIMATORS = ["mmse", "dft", "kba", "ls", "los", "iso"]
COMBINERS = ["rzf", "mr"]

# "estimator:covariance" pairs compared in the SE sweeps
SE_POLICIES = ["mmse:perfect", "kba:structured", "mmse:regularized", "mmse:sample", "ls:perfect"]
