import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    # Reproducibility
    DEFAULT_SEED = int(os.getenv('CS_SOS_SEED', 0))
    RANDOM_BOUND = int(os.getenv('CS_SOS_RANDOM_BOUND', 10))

    # Tolerances (floating checks only; exact checks never use one)
    DEFAULT_TOL = float(os.getenv('CS_SOS_TOL', 1e-6))
    HESSIAN_TOL = float(os.getenv('CS_SOS_HESSIAN_TOL', 1e-8))

    # Certification ranges
    K_MIN = int(os.getenv('CS_SOS_K_MIN', 16))
    K_MAX = int(os.getenv('CS_SOS_K_MAX', 24))
    GAP_TABLE_RANGE = (2, 24)

    # Dense SOS machinery
    SDP_SOLVER = os.getenv('CS_SOS_SDP_SOLVER', 'CLARABEL')
    SPHERE_STARTS = int(os.getenv('CS_SOS_SPHERE_STARTS', 40))

    # File paths
    OUTPUT_DIR = os.getenv('CS_SOS_OUTPUT_DIR', 'data/certificates')

    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    # Flask
    FLASK_DEBUG = os.getenv('FLASK_DEBUG', 'False').lower() == 'true'
    PORT = int(os.getenv('PORT', 5001))
