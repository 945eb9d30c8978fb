"""Contractively included subspaces presented as ranges of contractions.

``R_C`` carries the norm ``||x||_C = inf{||y|| : C y = x}``, realised by
the minimal preimage ``C^+ x``.  All vectors are orthonormal coordinates
of the ambient space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotContraction, NotInRange, RangeInclusionFails, SpaceMismatch
from .numlin import DEFAULT_TOL, Tolerances, hermitian_eig, opnorm, pinv, psd_sqrt
from .rkhs import KernelData, SpaceDescriptor, VecElement, plain, to_onb

__all__ = [
    "RangeSpace",
    "range_norm",
    "same_range",
    "douglas_solve",
    "complementary",
    "complement_decompose",
]


@dataclass(frozen=True, eq=False)
class RangeSpace:
    """The range of a contraction ``C`` with its range norm."""

    ambient: SpaceDescriptor
    c_op: np.ndarray
    tol: Tolerances = DEFAULT_TOL
    kernel: KernelData | None = None

    def __post_init__(self):
        c = np.asarray(self.c_op, dtype=np.complex128)
        if c.ndim != 2 or c.shape[0] != self.ambient.dim:
            raise SpaceMismatch(f"C has shape {c.shape}, ambient dimension is "
                                f"{self.ambient.dim}")
        norm = opnorm(c)
        if norm > 1.0 + self.tol.residual_tol:
            raise NotContraction(f"C has norm {norm:.12g} > 1", norm)
        object.__setattr__(self, "c_op", c)

    @classmethod
    def from_matrix(cls, c, ambient=None, tol=DEFAULT_TOL, kernel=None):
        c = np.asarray(c, dtype=complex)
        return cls(ambient or plain(c.shape[0]), c, tol, kernel)

    @property
    def dim(self) -> int:
        return self.c_op.shape[0]

    @cached_property
    def gram_op(self) -> np.ndarray:
        g = self.c_op @ self.c_op.conj().T
        return 0.5 * (g + g.conj().T)

    @cached_property
    def c_pinv(self) -> np.ndarray:
        return pinv(self.c_op, self.tol)

    @cached_property
    def preimage_projector(self) -> np.ndarray:
        """Orthogonal projector onto ``(ker C)^perp`` in the domain of ``C``."""
        return self.c_pinv @ self.c_op

    def coords(self, x) -> np.ndarray:
        if isinstance(x, VecElement):
            if self.kernel is None:
                raise SpaceMismatch("value-coordinate input needs a kernel on the range space")
            if x.space != self.ambient:
                raise SpaceMismatch("element lives in a different space")
            return to_onb(x, self.kernel)
        v = np.asarray(x, dtype=complex).reshape(-1)
        if v.size != self.dim:
            raise SpaceMismatch(f"vector of size {v.size} for ambient dimension {self.dim}")
        return v


def range_norm(rs: RangeSpace, x) -> float:
    """``||C^+ x||``, or NotInRange when ``x`` is not (numerically) in ``ran C``."""
    v = rs.coords(x)
    pre = rs.c_pinv @ v
    residual = float(np.linalg.norm(rs.c_op @ pre - v))
    scale = float(np.linalg.norm(v))
    if residual > rs.tol.residual_tol * max(scale, 1e-300) and residual > 0.0:
        raise NotInRange(f"vector is not in the range (residual {residual:.3e})", residual)
    return float(np.linalg.norm(pre))


def _gram_gap(g1, g2):
    n1, n2 = opnorm(g1), opnorm(g2)
    return opnorm(g1 - g2), max(1.0, n1, n2)


def same_range(rs1: RangeSpace, rs2: RangeSpace):
    """``R_{C1} = R_{C2}`` isometrically iff ``C1 C1^* = C2 C2^*``.

    Returns ``(verdict, gap)`` with ``gap = ||C1C1^* - C2C2^*||``.
    """
    if rs1.dim != rs2.dim:
        raise SpaceMismatch(f"ambient dimensions differ: {rs1.dim} vs {rs2.dim}")
    gap, scale = _gram_gap(rs1.gram_op, rs2.gram_op)
    return gap <= rs1.tol.residual_tol * scale, gap


@dataclass(frozen=True)
class DouglasResult:
    d: np.ndarray
    min_eig: float
    factor_residual: float
    d_norm: float


def douglas_solve(t, rs1: RangeSpace, rs2: RangeSpace) -> DouglasResult:
    """Certify that ``T`` maps ``R_{C1}`` contractively into ``R_{C2}``.

    Tests ``T C1 C1^* T^* <= C2 C2^*``; on success returns the minimal
    ``D = C2^+ T C1`` with ``T C1 = C2 D``.  On failure raises
    RangeInclusionFails carrying the negative eigenvalue and eigenvector.
    """
    t = np.asarray(t, dtype=complex)
    if t.shape != (rs2.dim, rs1.dim):
        raise SpaceMismatch(f"T has shape {t.shape}, expected {(rs2.dim, rs1.dim)}")
    tol = rs2.tol
    tc1 = t @ rs1.c_op
    diff = rs2.gram_op - tc1 @ tc1.conj().T
    w, v = hermitian_eig(diff, tol)
    floor = -tol.psd_tol * max(1.0, opnorm(diff))
    if w[-1] < floor:
        raise RangeInclusionFails(
            f"T C1 C1* T* <= C2 C2* fails (eigenvalue {w[-1]:.3e})", float(w[-1]), v[:, -1])
    d = rs2.c_pinv @ tc1
    residual = opnorm(tc1 - rs2.c_op @ d)
    return DouglasResult(d, float(w[-1]), residual, opnorm(d))


def complementary(rs: RangeSpace) -> RangeSpace:
    """The complementary space, as the range of ``(I - C C^*)^{1/2}``."""
    defect = np.eye(rs.dim) - rs.gram_op
    root = psd_sqrt(0.5 * (defect + defect.conj().T), rs.tol)
    return RangeSpace(rs.ambient, root, rs.tol, rs.kernel)


@dataclass(frozen=True)
class Decomposition:
    x_range: np.ndarray
    x_complement: np.ndarray
    norm_range: float
    norm_complement: float
    pythagoras_residual: float


def complement_decompose(rs: RangeSpace, x) -> Decomposition:
    """Split ``x = C C^* x + (I - C C^*) x`` with the Pythagorean norms."""
    v = rs.coords(x)
    cstar = rs.c_op.conj().T @ v
    x1 = rs.c_op @ cstar
    x2 = v - x1
    defect = np.eye(rs.dim) - rs.gram_op
    root = psd_sqrt(0.5 * (defect + defect.conj().T), rs.tol)
    n1 = float(np.linalg.norm(cstar))
    n2 = float(np.linalg.norm(root @ v))
    resid = abs(float(np.vdot(v, v).real) - n1 ** 2 - n2 ** 2)
    return Decomposition(x1, x2, n1, n2, resid)
