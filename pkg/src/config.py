import os

# --- Paths ---
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.dirname(BASE_DIR)

CORPUS_DIR = os.path.join(PROJECT_ROOT, "corpus")
PROGRAM_SUFFIX = ".shy"

# --- Checking ---
DEFAULT_BOUND = int(os.getenv("SHYLOCK_DEFAULT_BOUND", "3"))

# post* gives up once this many control locations were discovered
MAX_CONTROLS = int(os.getenv("SHYLOCK_MAX_CONTROLS", "20000"))
WITNESS_SEARCH_LIMIT = int(os.getenv("SHYLOCK_WITNESS_LIMIT", "200000"))

# --- Simulation ---
DEFAULT_STEPS = int(os.getenv("SHYLOCK_DEFAULT_STEPS", "100"))
DEFAULT_TRIALS = int(os.getenv("SHYLOCK_DEFAULT_TRIALS", "20"))
DEFAULT_SEED = int(os.getenv("SHYLOCK_DEFAULT_SEED", "0"))
BISIM_WORKERS = int(os.getenv("SHYLOCK_BISIM_WORKERS", "1"))

# --- Logging ---
LOG_LEVEL = os.getenv("SHYLOCK_LOG_LEVEL", "WARNING")
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# --- Exit codes ---
EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_BOUND = 2
EXIT_BISIM_FAILED = 3
EXIT_USAGE = 64
EXIT_DATA_ERROR = 65
