from enum import Enum

# Absolute tolerance below which two eigenvalues are treated as one multiple eigenvalue.
TIE_TOLERANCE = 1e-12
# Eigenvalues outside [0, 1] by more than this are reported before being clamped.
CLAMP_TOLERANCE = 1e-9
# Unit norm of windows.
NORM_TOLERANCE = 1e-12
# Order-doubling error above which the STFT oracle warns.
STFT_ORACLE_TOLERANCE = 1e-8
# tail_mass above this fraction of |Omega| means the Hermite basis is too small.
INSUFFICIENT_BASIS_FRACTION = 0.01
# Laguerre evaluation switches from the explicit sum to the three-term recurrence above this degree.
LAGUERRE_EXPLICIT_SUM_MAX_DEGREE = 20

# Sequential sampler.
REJECTION_CAP = 10 ** 6
PROPOSAL_BATCH = 64
BOUNDING_TRACE_LOSS = 1e-6

# Radial laws.
RADIAL_TABLE_NODES = 4096
RADIAL_CELL_ORDER = 12
RADIAL_CDF_TOLERANCE = 1e-9

# Monte Carlo goodness of fit.
MIN_SAMPLES_FOR_RADII_TEST = 1000
DEFAULT_ANNULI = 8
SIGMA_BAND = 3.0

# Chunk of quadrature nodes evaluated at once, keeps node-by-basis matrices small.
NODE_CHUNK = 16384

DEFAULT_SEED = 20240601
DEFAULT_SAMPLES = 1000
DEFAULT_GRID = 81


def default_basis_size(n_omega: int) -> int:
    return max(2 * n_omega, n_omega + 64)


def default_radial_order(max_index: int) -> int:
    return 4 * max_index + 32


def default_angular_order(basis_size: int) -> int:
    return max(64, 4 * basis_size)


class WindowKind(Enum):
    HERMITE = "hermite"
    FILE = "file"


class ShapeKind(Enum):
    DISK = "disk"
    ANNULUS = "annulus"
    RECTANGLE = "rect"
    POLYGON = "poly"
    SCALED = "scaled"
