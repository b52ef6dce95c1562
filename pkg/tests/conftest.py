import pathlib

import numpy as np
import pytest

from ife import feature_map_from_array

DATA_DIR = pathlib.Path(__file__).parent / "data"


def random_map(rng, channels=None, hw_range=(3, 32), dtype=np.float32):
    c = channels if channels is not None else int(rng.integers(1, 9))
    h = int(rng.integers(hw_range[0], hw_range[1] + 1))
    w = int(rng.integers(hw_range[0], hw_range[1] + 1))
    return feature_map_from_array(rng.standard_normal((c, h, w)).astype(dtype))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
