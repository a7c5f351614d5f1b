from fractions import Fraction

import numpy as np
import pytest

from hemisum.geometry import Cube6
from hemisum.oracle import (
    OPTIMUM_FLOAT,
    criticality_check,
    cube_upper_bound,
    equilateral_pole_value,
    numeric_max_search,
    objective_params,
    objective_params_mp,
    sample_soundness,
)


def test_start_at_optimum():
    res = numeric_max_search(1, 0, start=[0, 0, 0, 0])
    assert abs(res.value - OPTIMUM_FLOAT) < 1e-12


def test_search_never_exceeds_optimum():
    res = numeric_max_search(10, 3)
    assert res.value <= OPTIMUM_FLOAT + 1e-9


def test_search_reproducible():
    a, b = numeric_max_search(5, 7), numeric_max_search(5, 7)
    assert a.value == b.value and np.array_equal(a.params, b.params)


def test_high_v_stays_below_optimum():
    # v near 1 with |u| <= v away from u = v = 1 keeps D away from (-1, 0)
    res = numeric_max_search(20, 1, v_min=0.9, v_max=0.95)
    assert res.value < OPTIMUM_FLOAT - 1e-3


def test_restarts_validated():
    with pytest.raises(ValueError):
        numeric_max_search(0)


def test_equilateral_pole():
    assert abs(equilateral_pole_value() - (3 * 3 ** 0.5 + 3 * 2 ** 0.5)) < 1e-10


def test_criticality():
    g = criticality_check([0, 0, 0, 0], 1e-5)
    assert g["max_abs_interior"] < 1e-6
    assert criticality_check([0.05, 0, 0, 0])["s"] < -1e-3
    g1, g2 = criticality_check([0.03, 0.02, 0, 0.1], 1e-3), criticality_check([0.03, 0.02, 0, 0.1], 5e-4)
    assert abs(g1["s"] - g2["s"]) < 1e-5


def test_mp_objective_agrees():
    p = [0.1, -0.05, 0.02, 0.3]
    assert abs(float(objective_params_mp(p)) - objective_params(p)) < 1e-12


def test_sample_soundness():
    cube = Cube6.from_indices(0, [15, 8, 0, 8, 8, 15])  # cells at B, C, D of the square
    assert sample_soundness(cube, 300, 0)
    assert not sample_soundness(cube, 300, 0, bound=cube_upper_bound(cube) / 2)
    with pytest.raises(ValueError):
        sample_soundness(cube, 0)


def test_point_cube_bound_tight():
    from hemisum.geometry import Box2
    pt = Cube6(Box2.of(1, 1, 0, 0), Box2.of(-1, -1, 0, 0), Box2.of(0, 0, 1, 1), 0, Fraction(0))
    assert 0 <= float(cube_upper_bound(pt)) - OPTIMUM_FLOAT <= 6 * 2.0 ** -30
