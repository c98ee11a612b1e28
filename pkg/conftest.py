import logging

import numpy as np
import pytest

from config import Config

logging.basicConfig(level=logging.WARNING)


@pytest.fixture
def rng():
    return np.random.default_rng(Config.DEFAULT_SEED)
