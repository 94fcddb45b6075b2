"""
Configuration module for the Bell-sampling learner.
Loads environment variables and provides application settings.
"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file (none are required)
load_dotenv()

# Dense Oracle Capacity (explicit caps, never silent truncation)
DENSE_MAX_QUBITS = int(os.getenv('BELL_DENSE_MAX_QUBITS', '14'))
DISTRIBUTION_MAX_QUBITS = int(os.getenv('BELL_DISTRIBUTION_MAX_QUBITS', '7'))
SEARCH_MAX_QUBITS = int(os.getenv('BELL_SEARCH_MAX_QUBITS', '12'))
DENSE_BACKEND_MAX_QUBITS = int(os.getenv('BELL_DENSE_BACKEND_MAX_QUBITS', '5'))

# Numerical Tolerances
AMPLITUDE_TOLERANCE = 1e-10  # exact-in-theory identities
NORM_TOLERANCE = 1e-12       # unit norm check

# Learner / Experiment Configuration
BACKENDS = ('tableau', 'dense', 'coset')
DEFAULT_BACKEND = os.getenv('BELL_BACKEND', 'coset')
DEFAULT_SEED = 0
DEFAULT_JOBS = int(os.getenv('BELL_JOBS', '0')) or (os.cpu_count() or 1)
BENCH_SIZES = (64, 128, 256, 512)

# Logging
LOG_LEVEL = os.getenv('BELL_LOG_LEVEL', 'WARNING').upper()
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# CLI exit statuses
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3
