"""Property-based checks of the core identities."""

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pickspace.beurling import InvariantSubspaceInput, construct_g
from pickspace.jsonio import decode_array, encode_array
from pickspace.mult import m_matrix, random_multiplier
from pickspace.numlin import complete_to_coisometry, opnorm, pinv, psd_factor
from pickspace.pick import check_pick, decompose, delta_projection_check
from pickspace.embed import embedding_check
from pickspace.realize import gamma_map, gleason_check, identity_residual, tilde_b
from pickspace.rkhs import make_kernel
from pickspace.sampling import random_realization
from pickspace.subspace import RangeSpace, complement_decompose, complementary, same_range

SETTINGS = settings(max_examples=30, deadline=None)

reals = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
cmat = st.integers(1, 5).flatmap(
    lambda n: st.tuples(arrays(np.float64, (n, n), elements=reals),
                        arrays(np.float64, (n, n), elements=reals)))
disk_point = st.tuples(st.floats(-0.8, 0.8), st.floats(-0.8, 0.8)).map(
    lambda t: complex(*t)).filter(lambda z: abs(z) <= 0.8)


def _separated(pts, sep=0.15):
    return all(abs(a - b) >= sep for i, a in enumerate(pts) for b in pts[i + 1:])


@SETTINGS
@given(cmat)
def test_psd_factor_reconstructs(parts):
    a = parts[0] + 1j * parts[1]
    m = a.conj().T @ a
    factor, rank = psd_factor(m)
    assert rank <= m.shape[0]
    assert opnorm(factor.conj().T @ factor - m) <= 1e-9 * max(1.0, opnorm(m))


@SETTINGS
@given(cmat)
def test_pinv_penrose(parts):
    a = parts[0] + 1j * parts[1]
    p = pinv(a)
    scale = max(1.0, opnorm(a))
    assert opnorm(a @ p @ a - a) <= 1e-8 * scale
    assert opnorm((a @ p).conj().T - a @ p) <= 1e-8


@SETTINGS
@given(cmat, st.floats(0.0, 1.0))
def test_coisometric_completion(parts, scale):
    a = parts[0] + 1j * parts[1]
    nrm = opnorm(a)
    assume(nrm > 0)
    t = scale * a / nrm
    u, _ = complete_to_coisometry(t)
    assert opnorm(u @ u.conj().T - np.eye(t.shape[0])) <= 1e-9


@SETTINGS
@given(st.lists(disk_point, min_size=2, max_size=6))
def test_szego_points_are_pick(pts):
    assume(_separated(pts))
    k = make_kernel("szego", pts)
    assert check_pick(k)
    p = decompose(k)
    assert delta_projection_check(p) <= 1e-9
    assert embedding_check(p) <= 1e-9


@SETTINGS
@given(st.lists(st.tuples(disk_point, disk_point), min_size=2, max_size=6))
def test_drury_arveson_points_are_pick(pairs):
    pts = [np.array(p) / max(1.0, np.linalg.norm(p) / 0.8) for p in pairs]
    assume(all(np.linalg.norm(a - b) >= 0.15 for i, a in enumerate(pts) for b in pts[i + 1:]))
    k = make_kernel("drury_arveson", pts)
    p = decompose(k)
    assert delta_projection_check(p) <= 1e-9
    assert p.dim_b <= 2


@SETTINGS
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 3), st.integers(1, 2))
def test_realization_identities(seed, dim_x, dim_g):
    rng = np.random.default_rng(seed)
    k = make_kernel("drury_arveson", [[0, 0], [0.3, 0.1], [0.2j, -0.4], [0.5, 0.5j]])
    p = decompose(k)
    gm = gamma_map(random_realization(p, dim_x, dim_g, rng))
    assert identity_residual(gm) <= 1e-10
    ident, slack = gleason_check(gm, tilde_b(gm))
    assert ident <= 1e-10 and slack >= -1e-10


@SETTINGS
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 2), st.integers(1, 3))
def test_beurling_round_trip(seed, dim_out, dim_in):
    rng = np.random.default_rng(seed)
    k = make_kernel("szego", [0.1, 0.4j, -0.5, 0.3 + 0.3j])
    p = decompose(k, base_index=int(rng.integers(4)))
    f = random_multiplier(k, dim_out, dim_in, rng)
    res = construct_g(InvariantSubspaceInput.from_multiplier(p, f))
    assert res.residual <= 1e-8 and res.contractive
    mg = m_matrix(res.g)
    assert opnorm(mg) <= 1 + 1e-8


@SETTINGS
@given(cmat, st.floats(0.05, 1.0), st.integers(0, 2 ** 16))
def test_complement_pythagoras(parts, scale, seed):
    a = parts[0] + 1j * parts[1]
    nrm = opnorm(a)
    assume(nrm > 0)
    rs = RangeSpace.from_matrix(scale * a / nrm)
    x = np.random.default_rng(seed).standard_normal(a.shape[0]) + 0j
    dec = complement_decompose(rs, x)
    assert dec.pythagoras_residual <= 1e-9 * max(1.0, float(np.vdot(x, x).real))
    ok, _ = same_range(complementary(complementary(rs)), rs)
    assert ok


@SETTINGS
@given(cmat)
def test_json_round_trip(parts):
    a = parts[0] + 1j * parts[1]
    assert np.array_equal(decode_array(encode_array(a), ndim=2), a)
