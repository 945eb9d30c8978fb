"""Pick decomposition of a kernel relative to a base point.

For a base point ``lam_0`` write ``delta = k_{lam_0} / ||k_{lam_0}||`` and

    F[i, j] = 1 - delta(lam_i) conj(delta(lam_j)) / K(lam_i, lam_j).

``K`` is a Pick kernel exactly when ``F`` is PSD; the minimal factorisation
``F = beta^* beta`` gives the vectors ``beta(lam_i)`` (columns of ``beta``)
and the row multiplier ``B(lam) = <., beta(lam)>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPick, ZeroDelta, ZeroKernelEntry, SpaceMismatch
from .numlin import DEFAULT_TOL, Tolerances, Verdict, is_psd, opnorm, psd_factor
from .rkhs import KernelData, OperatorData, SpaceDescriptor, pointwise_onb

__all__ = [
    "PickDecomposition",
    "NormalizedKernel",
    "delta_vector",
    "beta_gram",
    "check_pick",
    "check_pick_all_bases",
    "decompose",
    "b_operator",
    "b_matrix",
    "pi_matrix",
    "one_onb",
    "delta_projection_check",
    "normalize",
    "is_normalized",
    "decomposition_report",
]


def delta_vector(k: KernelData, base_index: int = 0) -> np.ndarray:
    return k.gram[:, base_index] / np.sqrt(k.gram[base_index, base_index].real)


def beta_gram(k: KernelData, base_index: int = 0) -> np.ndarray:
    """The matrix ``F`` of the one-minus-ratio kernel at ``base_index``."""
    if not 0 <= base_index < k.n:
        raise IndexError(f"base index {base_index} out of range for {k.n} points")
    if np.any(k.gram == 0):
        raise ZeroKernelEntry("kernel vanishes on some pair of points; "
                              "the Pick decomposition is undefined")
    d = delta_vector(k, base_index)
    f = 1.0 - np.outer(d, d.conj()) / k.gram
    return 0.5 * (f + f.conj().T)


def check_pick(k: KernelData, base_index: int = 0, tol: Tolerances | None = None) -> Verdict:
    """Is ``F`` PSD (and every ``||beta(lam)|| < 1``)?  Witness: min eigenvalue."""
    tol = tol or k.tol
    f = beta_gram(k, base_index)
    verdict = is_psd(f, tol)
    if not verdict:
        return Verdict(False, verdict.witness, "F has a negative eigenvalue")
    diag = f.diagonal().real
    if np.any(diag >= 1.0):
        return Verdict(False, verdict.witness, "some ||beta(lam)|| >= 1")
    return Verdict(True, verdict.witness)


def check_pick_all_bases(k: KernelData, tol: Tolerances | None = None):
    """Run :func:`check_pick` at every base point.

    Returns the list of verdicts and a warning string when they disagree;
    for a nowhere-vanishing kernel the answer should not depend on the base.
    """
    verdicts = [check_pick(k, b, tol) for b in range(k.n)]
    oks = {bool(v) for v in verdicts}
    warning = ""
    if len(oks) > 1:
        bad = [b for b, v in enumerate(verdicts) if not v]
        warning = f"Pick verdict depends on the base point (fails at {bad})"
    return verdicts, warning


@dataclass(frozen=True, eq=False)
class PickDecomposition:
    kernel: KernelData
    base_index: int
    delta: np.ndarray
    beta_gram: np.ndarray
    beta: np.ndarray
    beta_minimal: np.ndarray
    f_min_eig: float
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    @property
    def dim_b(self) -> int:
        return self.beta.shape[0]

    @property
    def n(self) -> int:
        return self.kernel.n

    @property
    def is_minimal(self) -> bool:
        return self.beta is self.beta_minimal

    def beta_at(self, i: int) -> np.ndarray:
        return self.beta[:, i]

    def with_beta(self, beta) -> "PickDecomposition":
        """Same decomposition with a user-supplied (possibly larger) ``beta``.

        ``beta`` has one column per point; the check is
        ``<beta(lam_j), beta(lam_i)> = F[i, j]``.
        """
        b = np.asarray(beta, dtype=complex)
        if b.ndim != 2 or b.shape[1] != self.n:
            raise SpaceMismatch(f"beta must have {self.n} columns, got shape {b.shape}")
        residual = opnorm(b.conj().T @ b - self.beta_gram)
        if residual > self.tol.residual_tol * max(1.0, opnorm(self.beta_gram)):
            raise NotPick(f"supplied beta does not reproduce F (residual {residual:.3e})")
        return PickDecomposition(self.kernel, self.base_index, self.delta,
                                 self.beta_gram, b, self.beta_minimal,
                                 self.f_min_eig, self.tol)

    def enlarged(self, extra: int = 1) -> "PickDecomposition":
        """Embed ``B`` into ``B (+) C^extra`` (new coordinates carry zeros)."""
        b = np.vstack([self.beta, np.zeros((extra, self.n), dtype=complex)])
        return self.with_beta(b)


def decompose(k: KernelData, base_index: int = 0,
              tol: Tolerances | None = None) -> PickDecomposition:
    """Minimal Pick decomposition at ``base_index``; raises NotPick on failure."""
    tol = tol or k.tol
    verdict = check_pick(k, base_index, tol)
    if not verdict:
        raise NotPick(f"kernel is not Pick at base {base_index}: {verdict.detail} "
                      f"(min eigenvalue {verdict.witness:.3e})", verdict.witness)
    f = beta_gram(k, base_index)
    beta, _ = psd_factor(f, tol)
    delta = delta_vector(k, base_index)
    for arr in (f, beta, delta):
        arr.setflags(write=False)
    return PickDecomposition(k, base_index, delta, f, beta, beta, verdict.witness, tol)


def b_matrix(p: PickDecomposition, coeff_dim: int = 1) -> np.ndarray:
    """Orthonormal matrix of ``B (x) I_G : B (x) H(K) (x) G -> H(K) (x) G``."""
    eye = np.eye(coeff_dim)
    blocks = np.stack([np.kron(p.beta[:, i].conj()[None, :], eye) for i in range(p.n)])
    return pointwise_onb(p.kernel, blocks)


def b_operator(p: PickDecomposition, coeff_dim: int = 1) -> OperatorData:
    dom = SpaceDescriptor((p.dim_b,), coeff_dim, p.n)
    cod = SpaceDescriptor((), coeff_dim, p.n)
    return OperatorData(dom, cod, b_matrix(p, coeff_dim))


def delta_onb(p: PickDecomposition) -> np.ndarray:
    return p.kernel.factor_inv @ p.delta


def one_onb(p: PickDecomposition) -> np.ndarray:
    """Orthonormal coordinates of the constant function 1."""
    return p.kernel.factor_inv @ np.ones(p.n, dtype=complex)


def pi_matrix(p: PickDecomposition, coeff_dim: int = 1) -> np.ndarray:
    """``pi (x) I_G`` where ``pi f = <f, delta> delta``."""
    u = delta_onb(p)
    return np.kron(np.outer(u, u.conj()), np.eye(coeff_dim))


def delta_projection_check(p: PickDecomposition) -> float:
    """``||(I - B B^*) - pi||`` in operator norm."""
    b = b_matrix(p)
    lhs = np.eye(p.n) - b @ b.conj().T
    return opnorm(lhs - pi_matrix(p))


@dataclass(frozen=True, eq=False)
class NormalizedKernel:
    """``K'(mu, lam) = K(mu, lam) / (delta(mu) conj(delta(lam)))`` and ``Omega``."""

    source: PickDecomposition
    kprime: KernelData
    omega_diag: np.ndarray

    def omega_matrix(self, coeff_dim: int = 1) -> np.ndarray:
        """Orthonormal matrix of ``Omega (x) I_G : H(K) (x) G -> H(K') (x) G``."""
        src = self.source.kernel
        m = self.kprime.factor_inv @ (self.omega_diag[:, None] * src.factor)
        return np.kron(m, np.eye(coeff_dim))

    def decompose(self) -> PickDecomposition:
        return decompose(self.kprime, self.source.base_index, self.source.tol)


def is_normalized(p: PickDecomposition, tol: Tolerances | None = None) -> bool:
    tol = tol or p.tol
    return bool(np.max(np.abs(p.delta - 1.0)) <= tol.residual_tol)


def normalize(p: PickDecomposition) -> NormalizedKernel:
    """Rescale the kernel so that ``delta == 1`` at the same base point."""
    d = p.delta
    if np.any(np.abs(d) <= p.tol.rank_tol * np.max(np.abs(d))):
        bad = np.flatnonzero(np.abs(d) <= p.tol.rank_tol * np.max(np.abs(d)))
        raise ZeroDelta(f"delta vanishes at points {bad.tolist()}")
    kp = p.kernel.gram / np.outer(d, d.conj())
    kprime = KernelData(p.kernel.points, kp, "normalized", (), p.kernel.tol)
    omega = 1.0 / d
    omega.setflags(write=False)
    return NormalizedKernel(p, kprime, omega)


def decomposition_report(p: PickDecomposition) -> dict:
    from .jsonio import encode_array
    return {
        "base_index": p.base_index,
        "delta": encode_array(p.delta),
        "dim_b": p.dim_b,
        "beta": encode_array(p.beta),
        "f_min_eig": float(p.f_min_eig),
        "beta_norms": [float(x) for x in np.linalg.norm(p.beta, axis=0)],
    }
