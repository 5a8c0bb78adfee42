import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tagscape.geometry import RegionPolygon, RegionSet


def square_region(side: float = 1.0, origin: tuple[float, float] = (0.0, 0.0),
                  holes: list | None = None) -> RegionSet:
    x0, y0 = origin
    ring = [[x0, y0], [x0 + side, y0], [x0 + side, y0 + side],
            [x0, y0 + side], [x0, y0]]
    return RegionSet([RegionPolygon(exterior=ring, holes=holes or [])])


def square_hole(x0: float, y0: float, side: float) -> list[list[float]]:
    return [[x0, y0], [x0, y0 + side], [x0 + side, y0 + side],
            [x0 + side, y0], [x0, y0]]


@pytest.fixture
def unit_square() -> RegionSet:
    return square_region(1.0)


@pytest.fixture
def big_square() -> RegionSet:
    return square_region(1000.0)


@pytest.fixture
def holed_square() -> RegionSet:
    # 10x10 square with a 2x2 hole in the middle
    return square_region(10.0, holes=[square_hole(4.0, 4.0, 2.0)])


@pytest.fixture(scope="session")
def demo_region():
    from tagscape.demo import demo_region as load
    return load()


@pytest.fixture(scope="session")
def demo_tags():
    from tagscape.demo import demo_tags as load
    return load()
