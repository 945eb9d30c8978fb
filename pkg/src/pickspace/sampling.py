"""Seeded generators for randomized checks.

Everything takes a ``numpy.random.Generator``; the suite derives one per
case from ``default_rng([seed, section, case])`` so cases are independent
and reproducible.
"""

from __future__ import annotations

import numpy as np

from .beurling import closed_range
from .mult import random_multiplier
from .numlin import DEFAULT_TOL, null_space
from .pick import PickDecomposition, decompose
from .realize import Realization
from .rkhs import make_kernel

__all__ = [
    "random_points",
    "random_kernel",
    "random_pick",
    "random_realization",
    "random_contraction",
    "random_closed_invariant",
    "random_closed_coinvariant",
    "random_xi",
    "KERNEL_CHOICES",
]

# (family, point dimension, coefficients)
KERNEL_CHOICES = (
    ("szego", 1, None),
    ("drury_arveson", 2, None),
    ("power_series", 2, (1.0, 1.0, 1.0)),
    ("power_series", 2, (1.0, 0.5, 1.0 / 3.0)),
)


def _cgauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_points(n: int, dim: int, rng, radius: float = 0.8, min_sep: float = 0.15,
                  include_origin: bool = False, tries: int = 10_000):
    """``n`` points in the ball of ``radius`` with pairwise distance >= ``min_sep``."""
    pts = [np.zeros(dim, dtype=complex)] if include_origin else []
    for _ in range(tries):
        if len(pts) == n:
            break
        v = _cgauss(rng, dim)
        v *= radius * rng.uniform() ** (1.0 / (2 * dim)) / np.linalg.norm(v)
        if all(np.linalg.norm(v - q) >= min_sep for q in pts):
            pts.append(v)
    if len(pts) < n:
        raise RuntimeError(f"could not place {n} separated points")
    return [p[0] if dim == 1 else p for p in pts]


def random_kernel(rng, n: int, choice=None, include_origin: bool = True, tol=DEFAULT_TOL,
                  **kw):
    family, dim, coeffs = choice or KERNEL_CHOICES[int(rng.integers(len(KERNEL_CHOICES)))]
    pts = random_points(n, dim, rng, include_origin=include_origin, **kw)
    return make_kernel(family, pts, coeffs=coeffs, tol=tol)


def random_pick(rng, n: int, choice=None, include_origin: bool = True,
                base_index: int = 0, tol=DEFAULT_TOL) -> PickDecomposition:
    """Decomposition at a base point; with the origin included and
    ``base_index = 0`` the kernel is normalized."""
    return decompose(random_kernel(rng, n, choice, include_origin, tol), base_index)


def random_contraction(rng, rows: int, cols: int, scale: float = 0.95) -> np.ndarray:
    m = _cgauss(rng, (rows, cols))
    return scale * m / np.linalg.norm(m, 2)


def random_realization(p: PickDecomposition, dim_x: int, dim_g: int, rng,
                       dim_g_prime: int | None = None) -> Realization:
    """Haar-type coisometry ``U : X (+) G' -> (B (x) X) (+) G``."""
    rows = p.dim_b * dim_x + dim_g
    gp = dim_g_prime if dim_g_prime is not None else rows - dim_x + 1
    if dim_x + gp < rows:
        raise ValueError("G' too small for a coisometry")
    q, _ = np.linalg.qr(_cgauss(rng, (dim_x + gp, rows)))
    u = q.conj().T
    rx = p.dim_b * dim_x
    return Realization(p, u[:rx, :dim_x], u[:rx, dim_x:], u[rx:, :dim_x], u[rx:, dim_x:])


def random_closed_invariant(p: PickDecomposition, dim_g: int, rng, dim_in: int = 1):
    """Isometric ``C`` onto ``ran m_F``, a closed ``B``-invariant subspace."""
    f = random_multiplier(p.kernel, dim_g, dim_in, rng)
    return closed_range(f, p.tol), f


def random_closed_coinvariant(p: PickDecomposition, dim_g: int, rng, dim_in: int = 1):
    """Isometric ``C`` onto ``(ran m_F)^perp``, invariant under ``B^* (x) I``."""
    c, _ = random_closed_invariant(p, dim_g, rng, dim_in)
    return null_space(c.conj().T, p.tol)


def random_xi(dim: int, rng, max_norm: float = 0.9) -> np.ndarray:
    v = _cgauss(rng, dim)
    return max_norm * rng.uniform() * v / np.linalg.norm(v)
