import math
import random

import pytest

from metaplectic.metgroup import IwasawaCoords, from_iwasawa

FOUR_PI = 4.0 * math.pi


def random_coords(rng, x_range=3.0, log_y_range=2.0):
    return IwasawaCoords(rng.uniform(-x_range, x_range),
                         math.exp(rng.uniform(-log_y_range, log_y_range)),
                         rng.uniform(0.0, FOUR_PI))


def random_element(rng, x_range=3.0, log_y_range=2.0):
    return from_iwasawa(random_coords(rng, x_range, log_y_range))


@pytest.fixture
def rng():
    return random.Random(20240815)
