import numpy as np
import pytest

from pickspace.errors import DomainViolation, SingularKernel, SpaceMismatch
from pickspace.rkhs import (amp_left, amp_right, from_onb, inner_product, kernel_element,
                            kernel_from_spec, make_kernel, onb_of_values, plain,
                            pointwise_onb, to_onb, values_of_onb)
from conftest import DA_POINTS

SZEGO_TWO = np.array([[1, 1], [1, 4 / 3]])
EXAMPLE52_TWO = np.array([[1, 1], [1, 32 / 27]])


def test_szego_two_point_gram():
    k = make_kernel("szego", [0, 0.5])
    assert np.allclose(k.gram, SZEGO_TWO, atol=1e-15)


def test_example52_two_point_gram():
    k = make_kernel("example52", [0, 0.5])
    assert abs(k.gram[1, 1] - 32 / 27) <= 1e-12 * 32 / 27
    assert np.allclose(k.gram, EXAMPLE52_TWO, atol=1e-15)


def test_drury_arveson_matches_formula():
    k = make_kernel("drury_arveson", DA_POINTS)
    pts = np.array(DA_POINTS, dtype=complex)
    expected = 1 / (1 - pts @ pts.conj().T)
    assert np.allclose(k.gram, expected, atol=1e-14)
    assert k.gram[1, 2] == pytest.approx(expected[1, 2])


def test_power_series_prefix_semantics():
    pts = [0, 0.3, -0.5j]
    one = make_kernel("power_series", [[p] for p in pts], coeffs=[1])
    sz = make_kernel("szego", pts)
    assert np.allclose(one.gram, sz.gram, atol=1e-14)
    three = make_kernel("power_series", [[p] for p in pts], coeffs=[1, 1, 1])
    assert np.allclose(three.gram, sz.gram, atol=1e-14)
    dirichlet = make_kernel("power_series", [[0.5]], coeffs=[1, 0.5, 1 / 3])
    # 1 + z/2 + (1/3) z^2/(1-z) at z = 1/4
    assert dirichlet.gram[0, 0].real == pytest.approx(1 + 1 / 8 + (1 / 48) / 0.75)


def test_domain_and_distinctness():
    with pytest.raises(DomainViolation):
        make_kernel("szego", [0, 1.0])
    with pytest.raises(DomainViolation):
        make_kernel("drury_arveson", [[0.8, 0.8]])
    with pytest.raises(ValueError):
        make_kernel("szego", [0.2, 0.2])
    with pytest.raises(ValueError):
        make_kernel("nope", [0])


def test_explicit_kernel_accepts_identity_and_rejects_singular():
    k = make_kernel("explicit", matrix=np.eye(3))
    assert k.n == 3
    with pytest.raises(SingularKernel):
        make_kernel("explicit", matrix=[[1, 1], [1, 1]])


def test_kernel_from_json_spec():
    spec = {"family": "drury_arveson", "points": [[[0.1, 0], [0, 0.2]], [[0, 0], [0, 0]]]}
    k = kernel_from_spec(spec)
    assert k.gram[0, 0].real == pytest.approx(1 / (1 - 0.05))
    ex = kernel_from_spec({"family": "explicit", "matrix": [[[2, 0], [0, 1]], [[0, -1], [2, 0]]]})
    assert ex.gram[0, 1] == 1j


def test_reproducing_property(rng):
    k = make_kernel("szego", [0, 0.3, -0.4j, 0.5])
    f = from_onb(rng.standard_normal(4) + 1j * rng.standard_normal(4), k)
    for j in range(4):
        kj = kernel_element(k, j)
        assert inner_product(f, kj, k) == pytest.approx(f.values[j])
    gram = np.array([[inner_product(kernel_element(k, j), kernel_element(k, i), k)
                      for j in range(4)] for i in range(4)])
    assert np.allclose(gram, k.gram)


def test_onb_coordinates_are_isometric(rng):
    k = make_kernel("drury_arveson", DA_POINTS)
    space = k.space(2)
    u, v = (rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
            for _ in range(2))
    f, g = from_onb(u, k, space), from_onb(v, k, space)
    assert inner_product(f, g, k) == pytest.approx(np.vdot(v, u))
    assert np.allclose(to_onb(f, k), u)
    vals = values_of_onb(k, u[:, None], 2)
    assert np.allclose(onb_of_values(k, vals, 2)[:, 0], u)


def test_pointwise_operator_acts_on_values(rng):
    k = make_kernel("szego", [0, 0.3, -0.4j])
    blocks = rng.standard_normal((3, 2, 2)) + 0j
    m = pointwise_onb(k, blocks)
    f = from_onb(rng.standard_normal(6) + 0j, k, k.space(2))
    out = from_onb(m @ to_onb(f, k), k, k.space(2))
    for i in range(3):
        assert np.allclose(out.at(i), blocks[i] @ f.at(i))


def test_amplification_layouts():
    x = np.arange(6, dtype=complex).reshape(3, 2)
    left = amp_left(x, 2, plain(2), plain(3))
    assert np.allclose(left, np.kron(np.eye(2), x))
    right = amp_right(x, 2, plain(2), plain(3))
    assert np.allclose(right, np.kron(x, np.eye(2)))


def test_space_mismatch():
    k = make_kernel("szego", [0, 0.5])
    with pytest.raises(SpaceMismatch):
        from_onb(np.zeros(3), k)
    with pytest.raises(SpaceMismatch):
        kernel_element(k, 0, vector=[1, 2])
