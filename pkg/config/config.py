"""
Configuration settings for the triangular ratio metric toolkit
"""

import math
import os

# Geometry tolerances
TANGENCY_EPS = 1e-12  # |cos(phi) - a| below this is the line case
BOUNDARY_TOL = 1e-10  # |w| = 1 check for boundary points
POLYGON_COLLINEAR_TOL = 1e-12

# Denominator minimization on the unit circle
LEADING_COEFFICIENT_TOL = 1e-12  # relative size below which the critical-point quartic is a cubic
ROOT_MODULUS_TOL = 1e-6  # roots this close to |x| = 1 are critical angles
NEWTON_STEPS = 4
NEWTON_MAX_STEP = 1e-2
CONTACT_ANGLE_TOL = 1e-6  # two contacts closer than this are the same point
CONTACT_VALUE_TOL = 1e-10  # minima this close to the global one are all contacts

# Brute-force oracle
BRUTEFORCE_SAMPLES = 100000
MIN_BRUTEFORCE_SAMPLES = 100
REFINE_XTOL = 1e-12

# Ellipse checks
CONTAINMENT_SAMPLES = 720

# Distortion suites
VIOLATION_TOL = 1e-9
PROOF_TERM_TOL = 1e-10
DEGENERATE_S = 1e-12  # trials with s_before below this are resampled
MIN_LOG_GAP = 1e-3  # 1 - |z| is log-uniform on [MIN_LOG_GAP, 1]
A_STRATA = [round(0.05 * k, 2) for k in range(1, 20)]
MAX_A = 0.99

# Run defaults
DEFAULT_SEED = 7
DEFAULT_TRIALS = 10000
DEFAULT_TOLERANCE = VIOLATION_TOL
DEFAULT_SCAN_STEPS = 360
SHARPNESS_BUDGET = 100000
SHARPNESS_CHUNK = 400  # evaluations per local search start
SHARPNESS_MIN_BUDGET = 1000
TRIAL_CHUNK = 1000  # trials drawn and evaluated together; fixes the random streams

# Parallelism (0 = one worker per CPU)
THREADS = os.environ.get('TRIMETRIC_THREADS', '0')  # parsed by resolve_threads

# Angles
TWO_PI = 2.0 * math.pi

# Logging settings
LOG_LEVEL = os.environ.get('TRIMETRIC_LOG_LEVEL', 'INFO')
LOG_FILE = os.environ.get('TRIMETRIC_LOG_FILE', '')
