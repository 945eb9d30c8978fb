import numpy as np
import pytest

from pickspace.errors import DimMismatch, NotContraction
from pickspace.mult import (ampliate, b_multiplier, contractivity_kernel,
                            is_contractive_multiplier, m_matrix, multiplier_from_spec,
                            multiplier_from_values, random_multiplier, range_space)
from pickspace.numlin import opnorm
from pickspace.rkhs import make_kernel


def test_constant_multipliers():
    k = make_kernel("szego", [0, 0.3, -0.4j])
    half = multiplier_from_values(k, [0.5] * 3)
    assert is_contractive_multiplier(half)
    assert opnorm(m_matrix(half)) == pytest.approx(0.5)
    assert not is_contractive_multiplier(half.scaled(3))


def test_coordinate_multiplier_on_szego():
    pts = [0, 0.3, -0.4j, 0.5 + 0.2j]
    k = make_kernel("szego", pts)
    z = multiplier_from_values(k, pts)
    v = is_contractive_multiplier(z)
    assert v and v.witness > -1e-12
    # z / 0.9 has supremum below one on these points but is not contractive
    assert not is_contractive_multiplier(z.scaled(1 / 0.5))


def test_b_multiplier_is_contractive(da_pick):
    b = b_multiplier(da_pick)
    assert b.dim_out == 1 and b.dim_in == da_pick.dim_b
    assert is_contractive_multiplier(b)


def test_kernel_and_norm_tests_agree(rng):
    k = make_kernel("drury_arveson", [[0, 0], [0.3, 0.1], [0.2j, -0.4]])
    for scale in (0.5, 0.99, 1.01, 2.0):
        g = random_multiplier(k, 2, 2, rng, scale=scale)
        assert bool(is_contractive_multiplier(g)) == (scale <= 1)
        assert opnorm(m_matrix(g)) == pytest.approx(scale)


def test_contractivity_kernel_diagonal(rng):
    k = make_kernel("szego", [0, 0.5])
    g = multiplier_from_values(k, [[[0.2]], [[0.4j]]])
    ck = contractivity_kernel(g)
    assert ck[1, 1].real == pytest.approx((1 - 0.16) * 4 / 3)


def test_ampliation(rng):
    k = make_kernel("szego", [0, 0.3, -0.4j])
    g = random_multiplier(k, 2, 1, rng)
    op = ampliate(g, left_aux=(3,))
    assert op.onb_matrix.shape == (3 * 2 * 3, 3 * 1 * 3)
    assert opnorm(op.onb_matrix) == pytest.approx(opnorm(m_matrix(g)))
    op2 = ampliate(g, right_aux=(2,))
    assert opnorm(op2.onb_matrix) == pytest.approx(opnorm(m_matrix(g)))


def test_range_space_requires_contraction(rng):
    k = make_kernel("szego", [0, 0.5])
    with pytest.raises(NotContraction):
        range_space(multiplier_from_values(k, [2, 2]))


def test_multiplier_spec():
    k = make_kernel("szego", [0, 0.5])
    spec = {"dim_out": 1, "dim_in": 2, "values": [[[[0.1, 0], [0, 0.2]]], [[[0, 0], [0.3, 0]]]]}
    g = multiplier_from_spec(spec, k)
    assert g.values.shape == (2, 1, 2)
    assert g.values[0, 0, 1] == 0.2j
    with pytest.raises(DimMismatch):
        multiplier_from_spec({"dim_out": 1, "dim_in": 1, "values": [0.1]}, k)
