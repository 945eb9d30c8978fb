"""Beurling-type representation of completely invariant subspaces.

A contractively included ``M = R_C`` inside ``H(K) (x) G`` is invariant
under ``B (x) I_G`` (contractively) iff the defect

    C C^* - (B (x) I)(I_B (x) C C^*)(B^* (x) I)

is PSD.  Factor it as ``X X^*``; then ``G(lam)^* xi = X^*(k_lam (x) xi) /
conj(delta(lam))`` is a contractive multiplier with ``m_G m_G^* = C C^*``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotContraction, NotInvariant, NotIsometric
from .mult import MultiplierData, is_contractive_multiplier, m_matrix
from .numlin import DEFAULT_TOL, Tolerances, Verdict, hermitian_eig, is_psd, opnorm, orth, psd_factor
from .pick import PickDecomposition, b_matrix
from .rkhs import amp_left, kernel_columns_onb

__all__ = [
    "InvariantSubspaceInput",
    "BeurlingResult",
    "invariance_defect",
    "check_b_invariance",
    "assemble_multiplier",
    "construct_g",
    "inner_from_closed",
    "verify_factorization",
    "closed_range",
    "beurling_report",
]


@dataclass(frozen=True, eq=False)
class InvariantSubspaceInput:
    """``M = R_C`` with ``C`` given in orthonormal coordinates of ``H(K) (x) G``."""

    pick: PickDecomposition
    coeff_dim: int
    c_op: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c_op, dtype=np.complex128)
        if c.ndim == 1:
            c = c[:, None]
        expected = self.pick.n * self.coeff_dim
        if c.shape[0] != expected:
            raise DimMismatch(f"C has {c.shape[0]} rows, expected {expected}")
        norm = opnorm(c)
        if norm > 1.0 + self.pick.tol.residual_tol:
            raise NotContraction(f"C has norm {norm:.12g} > 1", norm)
        object.__setattr__(self, "c_op", c)

    @property
    def tol(self) -> Tolerances:
        return self.pick.tol

    @classmethod
    def from_multiplier(cls, p: PickDecomposition, f: MultiplierData):
        return cls(p, f.dim_out, m_matrix(f))


@dataclass(frozen=True, eq=False)
class BeurlingResult:
    x_op: np.ndarray
    g: MultiplierData
    residual: float
    min_eig: float
    contractive: bool
    inner: bool | None = None
    degenerate_points: tuple = ()

    @property
    def dim_g_prime(self) -> int:
        return self.g.dim_in


def invariance_defect(inp: InvariantSubspaceInput) -> np.ndarray:
    p, g = inp.pick, inp.coeff_dim
    cc = inp.c_op @ inp.c_op.conj().T
    space = p.kernel.space(g)
    lifted = amp_left(cc, p.dim_b, space, space)
    b = b_matrix(p, g)
    d = cc - b @ lifted @ b.conj().T
    return 0.5 * (d + d.conj().T)


def check_b_invariance(inp: InvariantSubspaceInput) -> Verdict:
    """PSD test of the invariance defect; witness is its min eigenvalue."""
    return is_psd(invariance_defect(inp), inp.tol)


def assemble_multiplier(p: PickDecomposition, x, coeff_dim: int):
    """``G(lam_i)^* = X^*(k_{lam_i} (x) I_G) / conj(delta(lam_i))`` (0 where delta = 0).

    Returns the multiplier and the indices where delta vanished.
    """
    x = np.asarray(x, dtype=complex)
    kcols = kernel_columns_onb(p.kernel, coeff_dim)
    gp = x.shape[1]
    floor = p.tol.rank_tol * np.max(np.abs(p.delta))
    values = np.zeros((p.n, coeff_dim, gp), dtype=complex)
    degenerate = []
    for i in range(p.n):
        if abs(p.delta[i]) <= floor:
            degenerate.append(i)
            continue
        cols = kcols[:, i * coeff_dim:(i + 1) * coeff_dim]
        g_star = x.conj().T @ cols / np.conj(p.delta[i])
        values[i] = g_star.conj().T
    return MultiplierData(p.kernel, values), tuple(degenerate)


def construct_g(inp: InvariantSubspaceInput) -> BeurlingResult:
    """Multiplier ``G`` with ``M = M_G``; raises NotInvariant if the defect is not PSD."""
    p, tol = inp.pick, inp.tol
    defect = invariance_defect(inp)
    verdict = is_psd(defect, tol)
    if not verdict:
        raise NotInvariant(
            f"subspace is not B-invariant (defect eigenvalue {verdict.witness:.3e})",
            verdict.witness)
    factor, rank = psd_factor(defect, tol)
    x = factor.conj().T
    if rank == 0:
        x = np.zeros((defect.shape[0], 1), dtype=complex)
    g, degenerate = assemble_multiplier(p, x, inp.coeff_dim)
    if degenerate:
        warnings.warn(f"delta vanishes at points {list(degenerate)}; G set to 0 there",
                      RuntimeWarning, stacklevel=2)
    m = m_matrix(g)
    residual = opnorm(m @ m.conj().T - inp.c_op @ inp.c_op.conj().T)
    contractive = bool(is_contractive_multiplier(g, tol))
    return BeurlingResult(x, g, residual, verdict.witness, contractive,
                          degenerate_points=degenerate)


def inner_from_closed(inp: InvariantSubspaceInput) -> BeurlingResult:
    """Closed-subspace case: ``m_G m_G^*`` is the orthogonal projection onto ``M``."""
    tol = inp.tol
    c = inp.c_op
    iso = opnorm(c.conj().T @ c - np.eye(c.shape[1]))
    if iso > tol.residual_tol:
        raise NotIsometric(f"C*C differs from I by {iso:.3e}")
    result = construct_g(inp)
    m = m_matrix(result.g)
    proj = m @ m.conj().T
    idem = opnorm(proj @ proj - proj)
    selfadj = opnorm(proj - proj.conj().T)
    inner = idem <= tol.residual_tol and selfadj <= tol.residual_tol
    return BeurlingResult(result.x_op, result.g, result.residual, result.min_eig,
                          result.contractive, inner, result.degenerate_points)


def projection_rank(proj, tol: Tolerances = DEFAULT_TOL) -> int:
    w, _ = hermitian_eig(0.5 * (proj + proj.conj().T), tol)
    return int(np.count_nonzero(w > 0.5))


def verify_factorization(g1: MultiplierData, g2: MultiplierData, gamma: MultiplierData,
                         tol: Tolerances | None = None) -> Verdict:
    """``G1 = G2 Gamma`` pointwise with ``Gamma`` contractive.

    Witness is ``max_i ||G1(lam_i) - G2(lam_i) Gamma(lam_i)||``.
    """
    tol = tol or g1.kernel.tol
    if g2.dim_in != gamma.dim_out or g1.dim_out != g2.dim_out or g1.dim_in != gamma.dim_in:
        raise DimMismatch(
            f"cannot compose: G1 {g1.dim_out}x{g1.dim_in}, G2 {g2.dim_out}x{g2.dim_in}, "
            f"Gamma {gamma.dim_out}x{gamma.dim_in}")
    if not (g1.n == g2.n == gamma.n):
        raise DimMismatch("multipliers are defined on different point sets")
    diff = max(opnorm(g1.values[i] - g2.values[i] @ gamma.values[i]) for i in range(g1.n))
    contractive = is_contractive_multiplier(gamma, tol)
    if not contractive:
        return Verdict(False, diff, "Gamma is not a contractive multiplier")
    return Verdict(diff <= tol.residual_tol, diff)


def closed_range(g: MultiplierData, tol: Tolerances | None = None) -> np.ndarray:
    """Isometric ``C`` onto ``ran m_G`` (a closed, B-invariant subspace)."""
    tol = tol or g.kernel.tol
    return orth(m_matrix(g), tol)


def beurling_report(inp: InvariantSubspaceInput, inner: bool = False) -> dict:
    verdict = check_b_invariance(inp)
    report = {"invariance": bool(verdict), "min_eig": float(verdict.witness)}
    if not verdict:
        report.update({"dim_g_prime": None, "residual": None, "inner": None})
        return report
    result = inner_from_closed(inp) if inner else construct_g(inp)
    report.update({
        "dim_g_prime": result.dim_g_prime,
        "residual": float(result.residual),
        "contractive": result.contractive,
        "inner": result.inner if inner else None,
    })
    return report
