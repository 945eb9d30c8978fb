"""Transfer-function realizations and complementary spaces of multiplier ranges.

A coisometry ``U = [[a, b], [c, d]] : X (+) G' -> (B (x) X) (+) G`` gives

    G(lam) = d + c (I - Z(lam) a)^{-1} Z(lam) b,      Z(lam) = B(lam) (x) I_X,
    (gamma x)(lam) = delta(lam) c (I - Z(lam) a)^{-1} x,

with ``m_G m_G^* + gamma gamma^* = I``, so ``M_G^sharp = R_gamma``.
``B (x) X`` is laid out as ``kron(B, X)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionsViolated, DimMismatch, NotContraction, NotNormalized, SingularResolvent
from .mult import MultiplierData, m_matrix, range_space
from .numlin import (DEFAULT_TOL, Tolerances, complete_to_coisometry, hermitian_eig, opnorm,
                     orth, pinv)
from .pick import (PickDecomposition, b_matrix, decompose, is_normalized, normalize,
                   one_onb, pi_matrix)
from .rkhs import amp_left, onb_of_values, plain
from .subspace import RangeSpace, complementary, same_range

__all__ = [
    "Realization",
    "GammaMap",
    "TildeB",
    "z_matrix",
    "transfer_eval",
    "gamma_values",
    "gamma_map",
    "identity_residual",
    "complement_check",
    "ComplementResult",
    "tilde_b",
    "gleason_residuals",
    "gleason_check",
    "whole_space_check",
    "solve_gleason",
    "b_star_restricted",
    "complementary_from_conditions",
    "complementary_general",
    "realization_from_spec",
]


def z_matrix(p: PickDecomposition, i: int, dim_x: int) -> np.ndarray:
    """``Z_X(lam_i) = B(lam_i) (x) I_X``, shape ``(dim_x, dim_b * dim_x)``."""
    return np.kron(p.beta[:, i].conj()[None, :], np.eye(dim_x))


def _resolvent(p: PickDecomposition, i: int, a: np.ndarray, dim_x: int, tol: Tolerances):
    m = np.eye(dim_x) - z_matrix(p, i, dim_x) @ a
    if dim_x == 0:
        return m, 1.0
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= tol.rank_tol * max(1.0, s[0]):
        raise SingularResolvent(f"I - Z(lam_{i}) a is singular (sigma_min {s[-1]:.3e})")
    return m, float(s[0] / s[-1])


@dataclass(frozen=True, eq=False)
class Realization:
    pick: PickDecomposition
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        a, b, c, d = (np.atleast_2d(np.asarray(m, dtype=np.complex128))
                      for m in (self.a, self.b, self.c, self.d))
        for name, m in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, m)
        x = a.shape[1]
        r = self.pick.dim_b
        if a.shape != (r * x, x):
            raise DimMismatch(f"a must be {(r * x, x)}, got {a.shape}")
        if b.shape[0] != r * x or c.shape[1] != x or d.shape != (c.shape[0], b.shape[1]):
            raise DimMismatch(f"inconsistent block shapes a{a.shape} b{b.shape} "
                              f"c{c.shape} d{d.shape}")
        if self.check:
            res = self.coisometry_residual
            if res > self.pick.tol.residual_tol:
                raise NotContraction(f"U is not a coisometry (||UU*-I|| = {res:.3e})")

    @property
    def dim_x(self) -> int:
        return self.a.shape[1]

    @property
    def dim_g(self) -> int:
        return self.c.shape[0]

    @property
    def dim_g_prime(self) -> int:
        return self.b.shape[1]

    @property
    def u(self) -> np.ndarray:
        return np.block([[self.a, self.b], [self.c, self.d]])

    @property
    def coisometry_residual(self) -> float:
        u = self.u
        return opnorm(u @ u.conj().T - np.eye(u.shape[0]))

    def on(self, pick: PickDecomposition) -> "Realization":
        """Same blocks over another decomposition with the same ``beta``."""
        return Realization(pick, self.a, self.b, self.c, self.d, self.check)


def transfer_eval(r: Realization, with_conditioning: bool = False):
    """Values ``G(lam_i)`` of the transfer function on the sample."""
    p, x, tol = r.pick, r.dim_x, r.pick.tol
    vals, conds = [], []
    for i in range(p.n):
        m, cond = _resolvent(p, i, r.a, x, tol)
        z = z_matrix(p, i, x)
        vals.append(r.d + r.c @ np.linalg.solve(m, z @ r.b))
        conds.append(cond)
    g = MultiplierData(p.kernel, np.stack(vals))
    return (g, conds) if with_conditioning else g


def gamma_values(p: PickDecomposition, a, c, tol: Tolerances | None = None) -> np.ndarray:
    """Value-coordinate matrix of ``gamma`` (rows point-major, one column per X basis vector).

    Only ``a`` and ``c`` enter, so this works without a full coisometry.
    """
    tol = tol or p.tol
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    c = np.atleast_2d(np.asarray(c, dtype=complex))
    x = a.shape[1]
    rows = []
    for i in range(p.n):
        m, _ = _resolvent(p, i, a, x, tol)
        rows.append(p.delta[i] * c @ np.linalg.inv(m))
    return np.vstack(rows)


@dataclass(frozen=True, eq=False)
class GammaMap:
    realization: Realization
    values: np.ndarray      # value coordinates, (n * dim_g, dim_x)
    gamma_op: np.ndarray    # orthonormal coordinates

    @property
    def pick(self) -> PickDecomposition:
        return self.realization.pick

    def range_space(self) -> RangeSpace:
        p = self.pick
        return RangeSpace(p.kernel.space(self.realization.dim_g), self.gamma_op, p.tol,
                          p.kernel)

    def observability(self, i: int) -> np.ndarray:
        """``O(lam_i) = (I - a^* Z(lam_i)^*)^{-1} c^*``."""
        r = self.realization
        z = z_matrix(self.pick, i, r.dim_x)
        return np.linalg.solve(np.eye(r.dim_x) - r.a.conj().T @ z.conj().T, r.c.conj().T)


def gamma_map(r: Realization) -> GammaMap:
    p = r.pick
    vals = gamma_values(p, r.a, r.c)
    onb = onb_of_values(p.kernel, vals, r.dim_g)
    return GammaMap(r, vals, onb)


def identity_residual(gm: GammaMap, g: MultiplierData | None = None) -> float:
    """``||m_G m_G^* + gamma gamma^* - I||``."""
    g = g if g is not None else transfer_eval(gm.realization)
    m = m_matrix(g)
    total = m @ m.conj().T + gm.gamma_op @ gm.gamma_op.conj().T
    return opnorm(total - np.eye(total.shape[0]))


def complement_check(gm: GammaMap, g: MultiplierData | None = None):
    """``same_range(R_gamma, M_G^sharp)`` -> (verdict, gram gap)."""
    g = g if g is not None else transfer_eval(gm.realization)
    return same_range(gm.range_space(), complementary(range_space(g)))


def _require_normalized(p: PickDecomposition):
    if not is_normalized(p):
        raise NotNormalized("kernel is not normalized at the base point (delta != 1); "
                            "normalize it first")


@dataclass(frozen=True, eq=False)
class TildeB:
    """The replacement operator for ``B^* (x) I`` on ``R_gamma``.

    ``basis`` spans ``(ker gamma)^perp``; ``c_op = gamma @ basis`` is the
    injective presentation of ``R_gamma`` and ``op`` acts on its
    coordinates, ``B (x) R_gamma`` coordinates laid out as ``kron(B, .)``.
    """

    pick: PickDecomposition
    dim_g: int
    c_op: np.ndarray
    op: np.ndarray
    basis: np.ndarray
    relation_residual: float

    @property
    def domain_rs(self) -> RangeSpace:
        p = self.pick
        return RangeSpace(p.kernel.space(self.dim_g), self.c_op, p.tol, p.kernel)

    @property
    def norm(self) -> float:
        return opnorm(self.op)


def tilde_b(gm: GammaMap) -> TildeB:
    """``(I_B (x) P) a`` restricted to ``(ker gamma)^perp``.

    ``relation_residual`` is ``||tildeB gamma - (I (x) gamma) a||``, which
    equals ``||(I (x) gamma) a (I - P)||``.
    """
    p, r = gm.pick, gm.realization
    _require_normalized(p)
    tol = p.tol
    gamma = gm.gamma_op
    v1 = orth(gamma.conj().T, tol)          # basis of (ker gamma)^perp
    k = v1.shape[1]
    op = np.kron(np.eye(p.dim_b), v1.conj().T) @ r.a @ v1
    lifted = amp_left(gamma, p.dim_b, plain(r.dim_x), p.kernel.space(r.dim_g))
    proj_perp = np.eye(r.dim_x) - v1 @ v1.conj().T
    rel = opnorm(lifted @ r.a @ proj_perp)
    if k == 0:
        op = np.zeros((0, 0), dtype=complex)
    return TildeB(p, r.dim_g, gamma @ v1, op, v1, rel)


def gleason_residuals(p: PickDecomposition, c_op, t_op, dim_g: int):
    """Gleason identity residual and difference-quotient slack for injective ``C``.

    identity: max over basis vectors of ``||C - (B(x)I)(I(x)C)T - (pi(x)I)C||``
    slack: min eigenvalue of ``I - T^*T - C^*(pi(x)I)C``.
    """
    c = np.asarray(c_op, dtype=complex)
    t = np.asarray(t_op, dtype=complex)
    k = c.shape[1]
    if k == 0:
        return 0.0, 0.0
    space = p.kernel.space(dim_g)
    lifted = amp_left(c, p.dim_b, plain(k), space)
    pi = pi_matrix(p, dim_g)
    err = c - b_matrix(p, dim_g) @ lifted @ t - pi @ c
    identity = float(np.max(np.linalg.norm(err, axis=0)))
    q = np.eye(k) - t.conj().T @ t - c.conj().T @ pi @ c
    w, _ = hermitian_eig(0.5 * (q + q.conj().T), p.tol)
    return identity, float(w[-1])


def gleason_check(gm: GammaMap, tb: TildeB | None = None):
    """(identity_residual, inequality_slack) on ``R_gamma`` for a normalized kernel."""
    _require_normalized(gm.pick)
    tb = tb if tb is not None else tilde_b(gm)
    return gleason_residuals(gm.pick, tb.c_op, tb.op, tb.dim_g)


def whole_space_check(p: PickDecomposition, dim_g: int = 1):
    """Whole-space analogues with ``tildeB`` replaced by ``B^* (x) I``.

    Returns the residuals of ``I = BB^*(x)I + pi(x)I`` and of
    ``(B^*(x)I)^*(B^*(x)I) = I - pi(x)I`` (both equalities).
    """
    _require_normalized(p)
    b = b_matrix(p, dim_g)
    pi = pi_matrix(p, dim_g)
    eye = np.eye(b.shape[0])
    bstar = b.conj().T
    gleason = opnorm(eye - b @ bstar - pi)
    quotients = opnorm(bstar.conj().T @ bstar - (eye - pi))
    return gleason, quotients


def solve_gleason(p: PickDecomposition, c_op, dim_g: int) -> np.ndarray:
    """Minimal-norm ``T`` solving ``(B(x)I)(I(x)C) T = C - (pi(x)I) C``."""
    c = np.asarray(c_op, dtype=complex)
    space = p.kernel.space(dim_g)
    lifted = amp_left(c, p.dim_b, plain(c.shape[1]), space)
    a_mat = b_matrix(p, dim_g) @ lifted
    rhs = c - pi_matrix(p, dim_g) @ c
    return pinv(a_mat, p.tol) @ rhs


def b_star_restricted(p: PickDecomposition, c_op, dim_g: int):
    """``(B^*(x)I)|N`` in the coordinates of an injective ``C``.

    Returns ``(T, residual)`` where ``residual = ||(I(x)C) T - (B^*(x)I) C||``
    vanishes exactly when ``(B^*(x)I) N`` lies in ``B (x) N``.
    """
    c = np.asarray(c_op, dtype=complex)
    space = p.kernel.space(dim_g)
    lifted = amp_left(c, p.dim_b, plain(c.shape[1]), space)
    target = b_matrix(p, dim_g).conj().T @ c
    t = pinv(lifted, p.tol) @ target
    return t, opnorm(lifted @ t - target)


@dataclass(frozen=True, eq=False)
class ComplementResult:
    g: MultiplierData
    realization: Realization
    identity_residual: float
    inequality_slack: float
    gamma_residual: float
    same_range: bool
    gram_gap: float
    added_dim: int


def _injective(rs: RangeSpace, t, dim_b: int, tol: Tolerances):
    c = rs.c_op
    s = np.linalg.svd(c, compute_uv=False)
    if c.shape[1] and s.size == c.shape[1] and s[-1] > tol.rank_tol * max(s[0], 1e-300):
        return c, t
    w1 = orth(c.conj().T, tol)
    t = None if t is None else np.kron(np.eye(dim_b), w1.conj().T) @ t @ w1
    return c @ w1, t


def complementary_from_conditions(rs: RangeSpace, tb, pick: PickDecomposition,
                                  dim_g: int | None = None) -> ComplementResult:
    """Build ``G`` with ``M_G^sharp = N`` from a candidate ``tildeB`` on ``N = R_C``.

    ``tb`` is a :class:`TildeB` (carrying its own presentation of ``N``),
    a matrix on the coordinates of ``C``'s domain (``B (x) N`` as
    ``kron(B, .)``), or ``None`` to use :func:`solve_gleason`.  Requires a
    kernel normalized at the base point.
    """
    p = pick
    _require_normalized(p)
    tol = p.tol
    dim_g = dim_g if dim_g is not None else rs.ambient.coeff_dim * int(np.prod(rs.ambient.aux_dims or (1,)))
    if isinstance(tb, TildeB):
        # its own injective presentation; must describe the same space
        ok, gap = same_range(rs, tb.domain_rs)
        if not ok:
            raise DimMismatch(f"tildeB was built for a different space (gram gap {gap:.3e})")
        c, t = tb.c_op, tb.op
    else:
        t = None if tb is None else np.asarray(tb, dtype=complex)
        c, t = _injective(rs, t, p.dim_b, tol)
    k = c.shape[1]
    if t is None:
        t = solve_gleason(p, c, dim_g)
    if t.shape != (p.dim_b * k, k):
        raise DimMismatch(f"tildeB must be {(p.dim_b * k, k)}, got {t.shape}")
    identity, slack = gleason_residuals(p, c, t, dim_g)
    failed = []
    if identity > tol.residual_tol:
        failed.append("gleason")
    if slack < -tol.residual_tol:
        failed.append("inequality")
    if failed:
        raise ConditionsViolated(
            f"conditions fail: {failed} (identity {identity:.3e}, slack {slack:.3e})", failed)

    pi_row = np.kron(one_onb(p).conj()[None, :], np.eye(dim_g))
    c_new = pi_row @ c
    column = np.vstack([t, c_new])
    norm = opnorm(column)
    if norm > 1.0 + tol.residual_tol:
        raise NotContraction(f"column [tildeB; pi C] has norm {norm:.12g}", norm)
    completion, added = complete_to_coisometry(column, tol)
    w = completion[:, k:]
    if added == 0:
        w = np.zeros((column.shape[0], 1), dtype=complex)
    rk = p.dim_b * k
    real = Realization(p, t, w[:rk], c_new, w[rk:], check=True)
    g = transfer_eval(real)
    gm = gamma_map(real)
    gamma_res = opnorm(gm.gamma_op - c)
    verdict, gap = same_range(rs, complementary(range_space(g)))
    return ComplementResult(g, real, identity, slack, gamma_res, bool(verdict), gap, added)


def complementary_general(rs: RangeSpace, pick: PickDecomposition, tb=None) -> ComplementResult:
    """Same construction for a kernel that is not normalized at the base point.

    ``N`` is moved to ``H(K')`` by ``Omega f = f / delta``; the multiplier
    built there is the answer for ``H(K)`` too.  The reported range check
    is redone in the original space.
    """
    nk = normalize(pick)
    pprime = decompose(nk.kprime, pick.base_index, pick.tol)
    if not pick.is_minimal:
        pprime = pprime.with_beta(pick.beta)
    dim_g = rs.ambient.fiber_dim
    omega = nk.omega_matrix(dim_g)
    moved = RangeSpace(nk.kprime.space(dim_g), omega @ rs.c_op, pick.tol, nk.kprime)
    res = complementary_from_conditions(moved, tb, pprime, dim_g)
    g = MultiplierData(pick.kernel, res.g.values)
    verdict, gap = same_range(rs, complementary(range_space(g)))
    real = res.realization.on(pick)
    return ComplementResult(g, real, res.identity_residual, res.inequality_slack,
                            res.gamma_residual, bool(verdict), gap, res.added_dim)


def realization_from_spec(spec: dict, p: PickDecomposition, check: bool = True) -> Realization:
    """``{"dim_x", "a", "b", "c", "d"}`` (matrices as nested ``[re, im]``)."""
    from .jsonio import decode_array

    blocks = [decode_array(spec[name], ndim=2) for name in "abcd"]
    real = Realization(p, *blocks, check=check)
    if "dim_x" in spec and int(spec["dim_x"]) != real.dim_x:
        raise DimMismatch(f"dim_x {spec['dim_x']} disagrees with a of shape {real.a.shape}")
    return real
