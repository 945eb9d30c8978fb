"""Finite-sample reproducing kernel spaces and their tensor products.

A function space ``H(K)`` over ``n`` points is stored two ways:

* value coordinates -- the values ``f(lam_i)``, point-major, with the
  fibre (auxiliary factors first, then the coefficient index) innermost.
  The inner product is weighted by ``K^{-1}``.
* orthonormal coordinates -- ``u = (S^{-1} (x) I) f`` with ``K = S S^*``
  fixed by the Hermitian eigendecomposition of ``K``.  Adjoints are plain
  conjugate transposes here, so every operator is kept in this form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Sequence

import numpy as np

from .errors import DomainViolation, SingularKernel, SpaceMismatch, ZeroKernelEntry
from .numlin import DEFAULT_TOL, Tolerances, as_cmatrix, hermitian_eig, opnorm

__all__ = [
    "FAMILIES",
    "KernelData",
    "SpaceDescriptor",
    "VecElement",
    "OperatorData",
    "make_kernel",
    "kernel_from_spec",
    "inner_product",
    "to_onb",
    "from_onb",
    "kernel_element",
    "amp_left",
    "amp_right",
    "pointwise_onb",
]

FAMILIES = ("explicit", "szego", "drury_arveson", "power_series", "example52")


@dataclass(frozen=True)
class SpaceDescriptor:
    """Shape of ``aux_1 (x) ... (x) H(K) (x) coeff``.

    ``n_points=None`` describes a plain coefficient space with no function
    factor (``dim = prod(aux_dims) * coeff_dim``).
    """

    aux_dims: tuple = ()
    coeff_dim: int = 1
    n_points: int | None = None

    @property
    def fiber_dim(self) -> int:
        return prod(self.aux_dims) * self.coeff_dim

    @property
    def dim(self) -> int:
        return (self.n_points or 1) * self.fiber_dim

    @property
    def is_function_space(self) -> bool:
        return self.n_points is not None

    @property
    def factors(self) -> tuple:
        return tuple(self.aux_dims) + (self.coeff_dim,)

    @classmethod
    def from_factors(cls, factors: Sequence[int], n_points=None) -> "SpaceDescriptor":
        factors = tuple(int(f) for f in factors) or (1,)
        return cls(factors[:-1], factors[-1], n_points)

    def with_left(self, *dims) -> "SpaceDescriptor":
        return SpaceDescriptor(tuple(dims) + tuple(self.aux_dims), self.coeff_dim,
                               self.n_points)


def plain(dim: int) -> SpaceDescriptor:
    return SpaceDescriptor((), int(dim), None)


@dataclass(frozen=True, eq=False)
class KernelData:
    """Strictly positive definite kernel matrix on a finite point set.

    ``gram[i, j] = K(lam_i, lam_j)`` so the kernel function ``k_{lam_j}``
    has value vector ``gram[:, j]``.
    """

    points: tuple
    gram: np.ndarray
    family: str = "explicit"
    coeffs: tuple = ()
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        g = as_cmatrix(self.gram, "gram")
        if g.shape[0] != g.shape[1]:
            raise SingularKernel(f"gram must be square, got {g.shape}")
        w, v = hermitian_eig(g, self.tol)
        scale = max(float(w[0]), 1e-300)
        if w[-1] <= self.tol.psd_tol * scale:
            raise SingularKernel(
                f"kernel is not strictly positive definite (min eigenvalue {w[-1]:.3e})")
        g = 0.5 * (g + g.conj().T)
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)
        sqrt_w = np.sqrt(w)
        s = v * sqrt_w
        s_inv = (v / sqrt_w).conj().T
        s.setflags(write=False)
        s_inv.setflags(write=False)
        object.__setattr__(self, "_s", s)
        object.__setattr__(self, "_s_inv", s_inv)
        object.__setattr__(self, "eigenvalues", w)

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    @property
    def factor(self) -> np.ndarray:
        """``S`` with ``K = S S^*``; value coordinates = ``S`` @ onb coordinates."""
        return self._s

    @property
    def factor_inv(self) -> np.ndarray:
        return self._s_inv

    @cached_property
    def gram_inv(self) -> np.ndarray:
        return np.linalg.inv(self.gram)

    def space(self, coeff_dim=1, aux_dims=()) -> SpaceDescriptor:
        return SpaceDescriptor(tuple(aux_dims), int(coeff_dim), self.n)

    def with_tol(self, tol: Tolerances) -> "KernelData":
        return KernelData(self.points, self.gram, self.family, self.coeffs, tol)


@dataclass(frozen=True, eq=False)
class VecElement:
    """Element of a tensor space in value coordinates (point-major)."""

    space: SpaceDescriptor
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.space.dim:
            raise SpaceMismatch(
                f"{vals.size} values given for a space of dimension {self.space.dim}")
        object.__setattr__(self, "values", vals)

    def at(self, i: int) -> np.ndarray:
        """Value at the i-th point, shaped by the fibre factors."""
        f = self.space.fiber_dim
        return self.values[i * f:(i + 1) * f].reshape(self.space.factors)


@dataclass(frozen=True, eq=False)
class OperatorData:
    """Operator between two spaces stored in orthonormal coordinates."""

    domain: SpaceDescriptor
    codomain: SpaceDescriptor
    onb_matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.onb_matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape != (self.codomain.dim, self.domain.dim):
            raise SpaceMismatch(
                f"matrix shape {m.shape} does not match "
                f"{self.codomain.dim}x{self.domain.dim}")
        object.__setattr__(self, "onb_matrix", m)

    @property
    def matrix(self) -> np.ndarray:
        return self.onb_matrix

    def adjoint(self) -> "OperatorData":
        return OperatorData(self.codomain, self.domain, self.onb_matrix.conj().T)

    def norm(self) -> float:
        return opnorm(self.onb_matrix)

    def __matmul__(self, other: "OperatorData") -> "OperatorData":
        if other.codomain != self.domain:
            raise SpaceMismatch(f"cannot compose {self.domain} with {other.codomain}")
        return OperatorData(other.domain, self.codomain, self.onb_matrix @ other.onb_matrix)


# -- kernel construction ----------------------------------------------------

def _as_points(points, family):
    pts = []
    for p in points:
        arr = np.atleast_1d(np.asarray(p, dtype=np.complex128)).reshape(-1)
        pts.append(arr)
    if not pts:
        raise ValueError("at least one point is required")
    dims = {p.size for p in pts}
    if len(dims) != 1:
        raise ValueError(f"{family} points must share one dimension, got {sorted(dims)}")
    return np.vstack(pts)


def _ball_check(pts, family, scalar=False):
    if scalar and pts.shape[1] != 1:
        raise ValueError(f"{family} expects scalar points")
    norms = np.linalg.norm(pts, axis=1)
    bad = np.flatnonzero(norms >= 1.0)
    if bad.size:
        raise DomainViolation(
            f"{family} points must lie in the open unit ball; index {int(bad[0])} "
            f"has norm {norms[bad[0]]:.6g}")


def _distinct_check(pts):
    n = pts.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            if np.array_equal(pts[i], pts[j]):
                raise ValueError(f"points {i} and {j} coincide")


def _power_series(z, coeffs):
    # prefix a_0..a_{m-1}, then a_{m-1} repeated: a_{m-1} z^{m-1} / (1 - z)
    coeffs = [float(c) for c in coeffs]
    m = len(coeffs)
    total = np.zeros_like(z)
    zk = np.ones_like(z)
    for a in coeffs[:-1]:
        total = total + a * zk
        zk = zk * z
    return total + coeffs[-1] * zk / (1.0 - z)


def make_kernel(family: str, points=None, *, coeffs=None, matrix=None,
                tol: Tolerances = DEFAULT_TOL) -> KernelData:
    """Assemble a kernel matrix from one of the supported families.

    ``power_series`` reads ``coeffs`` as a prefix of Taylor coefficients in
    ``z = <mu, lam>`` whose last entry repeats forever, so ``[1]`` is the
    Szego/Drury-Arveson kernel and ``[1, 1/2, 1/3]`` a Dirichlet-type one.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown kernel family {family!r}; expected one of {FAMILIES}")
    coeffs_t: tuple = ()
    if family == "explicit":
        if matrix is None:
            raise ValueError("explicit kernels need a matrix")
        gram = as_cmatrix(matrix, "kernel matrix")
        n = gram.shape[0]
        labels = tuple(points) if points is not None else tuple(range(n))
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for a {n}x{n} kernel matrix")
        return KernelData(labels, gram, "explicit", (), tol)

    if points is None:
        raise ValueError(f"{family} kernels need points")
    pts = _as_points(points, family)
    _distinct_check(pts)
    if family == "szego":
        _ball_check(pts, family, scalar=True)
        z = pts[:, 0][:, None] * pts[:, 0].conj()[None, :]
        gram = 1.0 / (1.0 - z)
    elif family == "drury_arveson":
        _ball_check(pts, family)
        gram = 1.0 / (1.0 - pts @ pts.conj().T)
    elif family == "power_series":
        if not coeffs:
            raise ValueError("power_series kernels need coefficients")
        if any(float(c) <= 0 for c in coeffs):
            raise ValueError("power_series coefficients must be positive")
        coeffs_t = tuple(float(c) for c in coeffs)
        _ball_check(pts, family)
        gram = _power_series(pts @ pts.conj().T, coeffs_t)
    else:  # example52
        _ball_check(pts, family, scalar=True)
        z = pts[:, 0][:, None] * pts[:, 0].conj()[None, :]
        gram = 1.0 / (1.0 - 0.5 * (z + z * z))

    if np.any(np.abs(gram) <= tol.rank_tol * np.max(np.abs(gram))):
        raise ZeroKernelEntry(f"{family} kernel vanishes on some pair of points")
    labels = tuple(tuple(complex(c) for c in row) if row.size > 1 else complex(row[0])
                   for row in pts)
    return KernelData(labels, gram, family, coeffs_t, tol)


def _decode_complex(x):
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
            isinstance(c, (int, float)) for c in x):
        return complex(x[0], x[1])
    if isinstance(x, str):
        return complex(x.replace(" ", ""))
    return complex(x)


def _decode_point(p):
    # a point is a complex number or a list of complex numbers
    if isinstance(p, (list, tuple)) and p and isinstance(p[0], (list, tuple, str)):
        return [_decode_complex(c) for c in p]
    if isinstance(p, (list, tuple)) and len(p) == 2 and all(
            isinstance(c, (int, float)) for c in p):
        return [_decode_complex(p)]
    if isinstance(p, (list, tuple)):
        return [_decode_complex(c) for c in p]
    return [_decode_complex(p)]


def kernel_from_spec(spec: dict, tol: Tolerances = DEFAULT_TOL) -> KernelData:
    """Build a kernel from the JSON kernel specification (see README)."""
    family = spec.get("family")
    if family is None:
        raise ValueError("kernel spec needs a 'family' field")
    matrix = None
    if spec.get("matrix") is not None:
        matrix = [[_decode_complex(c) for c in row] for row in spec["matrix"]]
    points = spec.get("points")
    if points is not None and family != "explicit":
        points = [_decode_point(p) for p in points]
    return make_kernel(family, points, coeffs=spec.get("coeffs"), matrix=matrix, tol=tol)


# -- elements and coordinates -----------------------------------------------

def _check_space(space: SpaceDescriptor, k: KernelData):
    if space.n_points != k.n:
        raise SpaceMismatch(f"space over {space.n_points} points, kernel has {k.n}")


def kernel_element(k: KernelData, index: int, vector=None, space=None) -> VecElement:
    """``k_{lam_index} (x) vector`` in value coordinates."""
    space = space or k.space()
    _check_space(space, k)
    vec = np.ones(1) if vector is None else np.asarray(vector, dtype=complex).reshape(-1)
    if vec.size != space.fiber_dim:
        raise SpaceMismatch(f"vector of size {vec.size} for fibre {space.fiber_dim}")
    values = np.kron(k.gram[:, index], vec)
    return VecElement(space, values)


def inner_product(f: VecElement, g: VecElement, k: KernelData) -> complex:
    """``<f, g> = sum_ij (K^{-1})_ij <f(lam_j), g(lam_i)>``, linear in ``f``."""
    if f.space != g.space:
        raise SpaceMismatch("elements live in different spaces")
    _check_space(f.space, k)
    d = f.space.fiber_dim
    fv = f.values.reshape(k.n, d)
    gv = g.values.reshape(k.n, d)
    weighted = np.linalg.solve(k.gram, fv)
    return complex(np.sum(gv.conj() * weighted))


def to_onb(v: VecElement, k: KernelData) -> np.ndarray:
    _check_space(v.space, k)
    d = v.space.fiber_dim
    return (k.factor_inv @ v.values.reshape(k.n, d)).reshape(-1)


def from_onb(u, k: KernelData, space: SpaceDescriptor | None = None) -> VecElement:
    space = space or k.space()
    _check_space(space, k)
    u = np.asarray(u, dtype=complex).reshape(-1)
    if u.size != space.dim:
        raise SpaceMismatch(f"{u.size} coordinates for a space of dimension {space.dim}")
    return VecElement(space, (k.factor @ u.reshape(k.n, space.fiber_dim)).reshape(-1))


def onb_of_values(k: KernelData, values, fiber_dim: int) -> np.ndarray:
    """Convert value-coordinate columns (point-major) to orthonormal coordinates."""
    vals = np.asarray(values, dtype=complex)
    cols = vals.reshape(k.n, fiber_dim, -1)
    return np.einsum("pi,ifc->pfc", k.factor_inv, cols).reshape(k.n * fiber_dim, -1)


def values_of_onb(k: KernelData, onb, fiber_dim: int) -> np.ndarray:
    u = np.asarray(onb, dtype=complex)
    cols = u.reshape(k.n, fiber_dim, -1)
    return np.einsum("ip,pfc->ifc", k.factor, cols).reshape(k.n * fiber_dim, -1)


def kernel_columns_onb(k: KernelData, fiber_dim: int = 1) -> np.ndarray:
    """Columns ``k_{lam_i} (x) e_s`` in orthonormal coordinates.

    Column ``i * fiber_dim + s``; since ``S^{-1} K = S^*`` this is
    ``S^*[:, i] (x) e_s``.
    """
    return np.kron(k.factor.conj().T, np.eye(fiber_dim))


def pointwise_onb(k: KernelData, blocks) -> np.ndarray:
    """Orthonormal matrix of the pointwise map ``f(lam_i) -> blocks[i] f(lam_i)``."""
    b = np.asarray(blocks, dtype=complex)
    if b.ndim != 3 or b.shape[0] != k.n:
        raise SpaceMismatch(f"need {k.n} pointwise blocks, got array of shape {b.shape}")
    out = np.einsum("pi,iab,iq->paqb", k.factor_inv, b, k.factor)
    return out.reshape(k.n * b.shape[1], k.n * b.shape[2])


def _split(desc: SpaceDescriptor):
    if desc.is_function_space:
        return desc.n_points, desc.fiber_dim
    return 1, desc.dim


def amp_left(matrix, r: int, domain: SpaceDescriptor, codomain: SpaceDescriptor):
    """Matrix of ``I_r (x) X`` with the new factor as leftmost fibre/aux factor."""
    x = np.asarray(matrix, dtype=complex)
    co, ci = _split(codomain)
    do, di = _split(domain)
    x4 = x.reshape(co, ci, do, di)
    out = np.einsum("ijkl,bc->ibjkcl", x4, np.eye(r))
    return out.reshape(co * r * ci, do * r * di)


def amp_right(matrix, r: int, domain: SpaceDescriptor, codomain: SpaceDescriptor):
    """Matrix of ``X (x) I_r`` with the new factor as rightmost fibre factor."""
    x = np.asarray(matrix, dtype=complex)
    co, ci = _split(codomain)
    do, di = _split(domain)
    x4 = x.reshape(co, ci, do, di)
    out = np.einsum("ijkl,bc->ijbklc", x4, np.eye(r))
    return out.reshape(co * ci * r, do * di * r)
