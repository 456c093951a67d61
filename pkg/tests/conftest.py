from pathlib import Path
import math

import pytest

from dispersion import Instance

FIXTURES = Path(__file__).parent / "fixtures"
SQRT3 = math.sqrt(3.0)


def line(xs, k, gamma=2):
    return Instance.from_coords([(x, 0.0) for x in xs], k, gamma, "line")


def plane(pts, k, gamma=2):
    return Instance.from_coords(pts, k, gamma, "plane")


TRIANGLE = [(0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2)]
SQUARE = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
SQUARE_CENTER = SQUARE + [(0.5, 0.5)]


@pytest.fixture
def fixtures_dir():
    return FIXTURES
