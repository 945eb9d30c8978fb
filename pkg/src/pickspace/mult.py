"""Operator-valued multipliers on a finite sample.

On a strictly positive definite finite sample every pointwise family of
matrices ``G(lam_i)`` is a bounded multiplier, so the only real question
is contractivity.  It is decided by the kernel test

    [(I - G(lam_i) G(lam_j)^*) K(lam_i, lam_j)]_{ij}  >=  0

and cross-checked against the operator norm of ``m_G`` in orthonormal
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotContraction, SpaceMismatch
from .numlin import DEFAULT_TOL, Tolerances, Verdict, is_psd, opnorm
from .rkhs import KernelData, OperatorData, SpaceDescriptor, pointwise_onb

__all__ = [
    "MultiplierData",
    "MultiplierOperator",
    "multiplier_from_values",
    "multiplier_from_spec",
    "b_multiplier",
    "m_matrix",
    "multiplier_operator",
    "contractivity_kernel",
    "is_contractive_multiplier",
    "ampliate",
    "range_space",
    "random_multiplier",
]


@dataclass(frozen=True, eq=False)
class MultiplierData:
    kernel: KernelData
    values: np.ndarray  # shape (n, dim_out, dim_in)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 3 or v.shape[0] != self.kernel.n:
            raise DimMismatch(
                f"need {self.kernel.n} matrices of equal size, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("multiplier values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def dim_out(self) -> int:
        return self.values.shape[1]

    @property
    def dim_in(self) -> int:
        return self.values.shape[2]

    @property
    def n(self) -> int:
        return self.kernel.n

    def __getitem__(self, i):
        return self.values[i]

    def scaled(self, c) -> "MultiplierData":
        return MultiplierData(self.kernel, c * self.values)


def multiplier_from_values(k: KernelData, values) -> MultiplierData:
    vals = [np.atleast_2d(np.asarray(v, dtype=complex)) for v in values]
    return MultiplierData(k, np.stack(vals))


def multiplier_from_spec(spec: dict, k: KernelData) -> MultiplierData:
    """``{"dim_out", "dim_in", "values": [matrix per point]}`` -> MultiplierData."""
    from .jsonio import decode_array

    dim_out, dim_in = int(spec["dim_out"]), int(spec["dim_in"])
    vals = []
    for entry in spec["values"]:
        m = decode_array(entry, ndim=2) if dim_out * dim_in > 1 else \
            decode_array(entry).reshape(1, 1)
        vals.append(m.reshape(dim_out, dim_in))
    if len(vals) != k.n:
        raise DimMismatch(f"{len(vals)} multiplier values for {k.n} points")
    return MultiplierData(k, np.stack(vals))


def b_multiplier(p) -> MultiplierData:
    """The row multiplier ``B(lam) = <., beta(lam)>`` as a 1 x dim_b family."""
    return MultiplierData(p.kernel, p.beta.conj().T[:, None, :])


def m_matrix(g: MultiplierData) -> np.ndarray:
    return pointwise_onb(g.kernel, g.values)


@dataclass(frozen=True, eq=False)
class MultiplierOperator:
    data: MultiplierData
    op: OperatorData

    @property
    def matrix(self) -> np.ndarray:
        return self.op.onb_matrix


def multiplier_operator(g: MultiplierData) -> MultiplierOperator:
    k = g.kernel
    op = OperatorData(k.space(g.dim_in), k.space(g.dim_out), m_matrix(g))
    return MultiplierOperator(g, op)


def contractivity_kernel(g: MultiplierData) -> np.ndarray:
    """Block matrix with (i, j) block ``(I - G_i G_j^*) K_ij``."""
    k = g.kernel
    gg = np.einsum("iab,jcb->iajc", g.values, g.values.conj())
    eye = np.eye(g.dim_out)
    blocks = (eye[None, :, None, :] - gg) * k.gram[:, None, :, None]
    size = k.n * g.dim_out
    mat = blocks.reshape(size, size)
    return 0.5 * (mat + mat.conj().T)


def is_contractive_multiplier(g: MultiplierData, tol: Tolerances | None = None) -> Verdict:
    """Kernel PSD verdict; witness is the min eigenvalue of the block kernel.

    ``detail`` carries ``||m_G||`` and flags disagreement with the norm
    route, which can only happen inside the tolerance band.
    """
    tol = tol or g.kernel.tol
    verdict = is_psd(contractivity_kernel(g), tol)
    norm = opnorm(m_matrix(g))
    by_norm = norm <= 1.0 + tol.residual_tol
    detail = f"||m_G|| = {norm:.12g}"
    if bool(verdict) != by_norm:
        detail += " (kernel and norm tests disagree within tolerance band)"
    return Verdict(bool(verdict), verdict.witness, detail)


def ampliate(g, left_aux=(), right_aux=()) -> OperatorData:
    """``I_left (x) m_G (x) I_right`` on the extended tensor spaces.

    The multiplier's coefficient slot sits between the left and right
    auxiliary factors in the fibre.
    """
    data = g.data if isinstance(g, MultiplierOperator) else g
    left, right = tuple(int(d) for d in left_aux), tuple(int(d) for d in right_aux)
    lf = int(np.prod(left)) if left else 1
    rf = int(np.prod(right)) if right else 1
    blocks = np.stack([np.kron(np.kron(np.eye(lf), data.values[i]), np.eye(rf))
                       for i in range(data.n)])
    n = data.n
    dom = SpaceDescriptor.from_factors(left + (data.dim_in,) + right, n)
    cod = SpaceDescriptor.from_factors(left + (data.dim_out,) + right, n)
    return OperatorData(dom, cod, pointwise_onb(data.kernel, blocks))


def range_space(g, tol: Tolerances | None = None):
    """``M_G`` as the range space of ``m_G`` (raises if G is not contractive)."""
    from .subspace import RangeSpace

    data = g.data if isinstance(g, MultiplierOperator) else g
    tol = tol or data.kernel.tol
    m = m_matrix(data)
    norm = opnorm(m)
    if norm > 1.0 + tol.residual_tol:
        raise NotContraction(f"m_G has norm {norm:.12g} > 1", norm)
    return RangeSpace(data.kernel.space(data.dim_out), m, tol, data.kernel)


def random_multiplier(k: KernelData, dim_out: int, dim_in: int, rng,
                      scale: float = 0.95) -> MultiplierData:
    """Gaussian pointwise matrices rescaled so that ``||m_G|| = scale``."""
    shape = (k.n, dim_out, dim_in)
    vals = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    g = MultiplierData(k, vals)
    norm = opnorm(m_matrix(g))
    if norm == 0.0:
        raise SpaceMismatch("degenerate random multiplier")
    return g.scaled(scale / norm)
