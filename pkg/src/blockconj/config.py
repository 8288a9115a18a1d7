import os

from dotenv import load_dotenv

# =========================
# ENV
# =========================
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(os.path.dirname(current_dir))
env_path = os.path.join(project_root, ".env")

load_dotenv(env_path)


# =========================
# SEARCH DEFAULTS
# =========================
DEFAULT_BOUND = int(os.getenv("TORAL_BOUND", "50"))
DEFAULT_SEED = int(os.getenv("TORAL_SEED", "0"))

# random pairs tried before the exhaustive partition-of-unity fallback
PARTITION_SAMPLES = int(os.getenv("TORAL_PARTITION_SAMPLES", "400"))

# R-span computations allowed while minimising generators
GENERATOR_BUDGET = int(os.getenv("TORAL_GENERATOR_BUDGET", "64"))

# random lattice combinations tried by the inverse-criterion search
XI_SAMPLES = int(os.getenv("TORAL_XI_SAMPLES", "2000"))


# =========================
# OUTPUT
# =========================
OUTPUT_FORMAT = os.getenv("TORAL_FORMAT", "text")
LOG_LEVEL = os.getenv("TORAL_LOG_LEVEL", "WARNING")
