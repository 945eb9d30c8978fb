"""Dense complex linear algebra used by the rest of the package.

Everything here is a thin, deterministic layer over ``numpy.linalg``:
Hermitian eigendecomposition with a fixed phase convention, PSD tests
with an eigenvalue witness, eigen-route PSD factorisation, a truncated
pseudo-inverse and coisometric completion of a contraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotContraction, NotFinite, NotHermitian, NotPSD

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Verdict",
    "as_cmatrix",
    "opnorm",
    "hermitian_eig",
    "is_psd",
    "psd_factor",
    "psd_sqrt",
    "pinv",
    "complete_to_coisometry",
    "orth",
    "null_space",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds, all relative and strictly inside (0, 1)."""

    psd_tol: float = 1e-10
    rank_tol: float = 1e-10
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("psd_tol", "rank_tol", "residual_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")

    def replace(self, **changes) -> "Tolerances":
        fields = {"psd_tol": self.psd_tol, "rank_tol": self.rank_tol,
                  "residual_tol": self.residual_tol}
        fields.update({k: v for k, v in changes.items() if v is not None})
        return Tolerances(**fields)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome of a numerical test together with its witness value."""

    ok: bool
    witness: float
    detail: str = ""

    def __bool__(self):
        return bool(self.ok)


def as_cmatrix(m, name="matrix") -> np.ndarray:
    """Return ``m`` as a 2-d complex128 array, rejecting NaN/Inf."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotFinite(f"{name} has non-finite entries")
    return a


def opnorm(m) -> float:
    """Operator norm (largest singular value); 0 for empty matrices."""
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def _fix_phases(v: np.ndarray) -> np.ndarray:
    # first component with modulus above noise made real positive
    v = v.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        scale = np.max(np.abs(col)) if col.size else 0.0
        if scale == 0.0:
            continue
        idx = int(np.argmax(np.abs(col) > 1e-8 * scale))
        entry = col[idx]
        v[:, k] = col * (abs(entry) / entry)
    return v


def _hermitize(m: np.ndarray, tol: Tolerances) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix is not square: {m.shape}")
    scale = opnorm(m)
    asym = opnorm(m - m.conj().T)
    if asym > tol.residual_tol * max(scale, 1e-300) and asym > 0.0:
        raise NotHermitian(
            f"relative asymmetry {asym / max(scale, 1e-300):.3e} exceeds "
            f"{tol.residual_tol:.1e}")
    return 0.5 * (m + m.conj().T)


def hermitian_eig(m, tol: Tolerances = DEFAULT_TOL):
    """Eigenvalues in descending order and the matching unitary eigenvectors.

    Each eigenvector has its first non-negligible component real positive,
    so repeated calls on the same input give identical coordinates.
    """
    a = _hermitize(as_cmatrix(m), tol)
    w, v = np.linalg.eigh(a)
    order = np.argsort(w)[::-1]
    return w[order], _fix_phases(v[:, order])


def is_psd(m, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """PSD test: min eigenvalue >= -psd_tol * max(1, ||m||)."""
    a = as_cmatrix(m)
    if a.size == 0:
        return Verdict(True, 0.0)
    w, _ = hermitian_eig(a, tol)
    floor = -tol.psd_tol * max(1.0, opnorm(a))
    min_eig = float(w[-1])
    return Verdict(min_eig >= floor, min_eig)


def psd_factor(m, tol: Tolerances = DEFAULT_TOL):
    """Factor a PSD matrix as ``factor^* factor`` via its eigendecomposition.

    Returns
    -------
    factor : ndarray, shape (r, n)
        Rows ``sqrt(w_k) v_k^*`` for the ``r`` eigenvalues above
        ``rank_tol * w_max``.
    rank : int
    """
    a = as_cmatrix(m)
    n = a.shape[0]
    if a.size == 0:
        return np.zeros((0, n), dtype=complex), 0
    verdict = is_psd(a, tol)
    if not verdict:
        raise NotPSD(f"matrix is not PSD (min eigenvalue {verdict.witness:.3e})",
                     verdict.witness)
    w, v = hermitian_eig(a, tol)
    wmax = max(float(w[0]), 0.0)
    keep = w > tol.rank_tol * wmax if wmax > 0 else np.zeros_like(w, dtype=bool)
    r = int(np.count_nonzero(keep))
    factor = np.sqrt(w[:r])[:, None] * v[:, :r].conj().T
    return factor, r


def psd_sqrt(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian square root of a PSD matrix (negative noise clipped to 0)."""
    a = as_cmatrix(m)
    if a.size == 0:
        return a.copy()
    verdict = is_psd(a, tol)
    if not verdict:
        raise NotPSD(f"matrix is not PSD (min eigenvalue {verdict.witness:.3e})",
                     verdict.witness)
    w, v = hermitian_eig(a, tol)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def pinv(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with relative singular-value cutoff."""
    a = as_cmatrix(m)
    if a.size == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=complex)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=complex)
    keep = s > tol.rank_tol * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (vh.conj().T * inv) @ u.conj().T


def orth(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical range of ``m``."""
    a = as_cmatrix(m)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    r = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    return u[:, :r]


def null_space(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``m``."""
    a = as_cmatrix(m)
    ncols = a.shape[1]
    if a.size == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(ncols, dtype=complex)
    r = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    return vh[r:].conj().T


def complete_to_coisometry(t, tol: Tolerances = DEFAULT_TOL):
    """Append columns to a contraction so that the result is a coisometry.

    For ``t`` of shape ``(k, h)`` with ``||t|| <= 1`` returns
    ``[t | b]`` with ``[t|b][t|b]^* = I_k``; ``b`` has ``g`` columns where
    ``g`` is the numerical rank of the defect ``I - t t^*``.
    """
    a = as_cmatrix(t)
    k = a.shape[0]
    norm = opnorm(a)
    if norm > 1.0 + tol.residual_tol:
        raise NotContraction(f"norm {norm:.12g} exceeds 1", norm)
    defect = np.eye(k) - a @ a.conj().T
    defect = 0.5 * (defect + defect.conj().T)
    w, v = hermitian_eig(defect, tol)
    w = np.clip(w, 0.0, None)
    keep = w > tol.rank_tol * max(1.0, float(w[0]) if w.size else 0.0)
    b = v[:, keep] * np.sqrt(w[keep])
    return np.hstack([a, b]), int(np.count_nonzero(keep))
