import numpy as np
import pytest

from finbeam import ElementProps, build_structure

# Material and section of the reference design: E = 2e7 Pa, rectangular
# 20 mm x 1 mm cross-section.
E_MOD = 2e7
SECTION_B = 20e-3
SECTION_H = 1e-3
AREA = SECTION_B * SECTION_H
INERTIA = SECTION_B * SECTION_H**3 / 12.0
FINGER_HEIGHT = 72e-3


@pytest.fixture
def table_props():
    return ElementProps(E_MOD, AREA, INERTIA)


@pytest.fixture
def make_cantilever():
    """Factory for a horizontal clamped-free beam along +x."""

    def build(n_elements=16, length=FINGER_HEIGHT, props=None):
        props = props or ElementProps(E_MOD, AREA, INERTIA)
        nodes = [(i, i * length / n_elements, 0.0)
                 for i in range(n_elements + 1)]
        elements = [(i, i + 1, props) for i in range(n_elements)]
        return build_structure(nodes, elements, {0: (True, True, True)})

    return build


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
