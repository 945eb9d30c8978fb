"""Drury-Arveson embedding and the examples built on it.

``k_lam -> conj(delta(lam)) d_{J beta(lam)}`` embeds ``H(K)`` isometrically
into the Drury-Arveson space of ``B``; every computation here is Gram
arithmetic with ``D(eta, xi) = 1 / (1 - <eta, xi>)`` on finitely many
feature vectors.  ``J`` is entrywise conjugation in the fixed basis of ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, SearchFailed
from .mult import MultiplierData, is_contractive_multiplier, m_matrix
from .numlin import DEFAULT_TOL, Tolerances, complete_to_coisometry, opnorm
from .pick import PickDecomposition, b_matrix, decompose, is_normalized
from .realize import (Realization, gamma_map, gamma_values,
                      identity_residual, transfer_eval)
from .rkhs import make_kernel, onb_of_values

__all__ = [
    "EmbeddingData",
    "CounterexampleReport",
    "CommutationReport",
    "embedding_data",
    "embedding_check",
    "intertwining_check",
    "a_xi",
    "a_xi_commutation",
    "evaluate_candidate",
    "build_counterexample",
    "example52_beta",
    "example52_report",
]


def _da(x, y):
    """``D(x_i, y_j) = 1 / (1 - <x_i, y_j>)`` for feature columns."""
    return 1.0 / (1.0 - y.conj().T @ x).T


@dataclass(frozen=True, eq=False)
class EmbeddingData:
    pick: PickDecomposition
    beta_bar: np.ndarray
    da_gram: np.ndarray     # [i, j] = D(beta_bar_i, beta_bar_j)

    @property
    def weighted_gram(self) -> np.ndarray:
        d = self.pick.delta
        return np.outer(d, d.conj()) * self.da_gram


def embedding_data(p: PickDecomposition) -> EmbeddingData:
    bb = p.beta.conj()
    return EmbeddingData(p, bb, _da(bb, bb))


def embedding_check(p: PickDecomposition) -> float:
    """``max |K(lam_i, lam_j) - delta_i conj(delta_j) D(beta_bar_i, beta_bar_j)|``."""
    e = embedding_data(p)
    return float(np.max(np.abs(p.kernel.gram - e.weighted_gram)))


def intertwining_check(p: PickDecomposition, xi) -> float:
    """Residual of ``M_phi^* eps = eps M_{phi o beta_bar}^*`` with ``phi(eta) = <eta, xi>``.

    The right side uses the orthonormal-coordinate adjoint of the
    multiplier on ``H(K)``, pulled back to kernel-function coefficients;
    the left side uses ``M_phi^* d_eta = conj(phi(eta)) d_eta``.  The
    difference of the images is measured in the Drury-Arveson norm,
    maximised over the kernel functions ``k_{lam_j}``.
    """
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.size != p.dim_b:
        raise DimMismatch(f"xi has {xi.size} entries, B has dimension {p.dim_b}")
    k = p.kernel
    e = embedding_data(p)
    phi = xi.conj() @ e.beta_bar                    # phi(beta_bar(lam_i))
    m = m_matrix(MultiplierData(k, phi[:, None, None]))
    kcols = k.factor.conj().T                       # onb of k_{lam_j}
    images = k.factor @ (m.conj().T @ kcols)        # values of M^* k_j
    coeffs = np.linalg.solve(k.gram, images)        # in the basis k_{lam_i}
    diff = coeffs - np.diag(phi.conj())
    w = p.delta.conj()[:, None] * diff              # coefficients on d_{beta_bar_i}
    norms2 = np.einsum("ij,ik,kj->j", w.conj(), e.da_gram, w).real
    return float(np.sqrt(max(0.0, float(np.max(norms2)))))


def a_xi(a, xi, dim_x: int | None = None) -> np.ndarray:
    """``a_xi = (L_xi)^* a = (xi^* (x) I_X) a``."""
    a = np.asarray(a, dtype=complex)
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    dim_x = dim_x or a.shape[1]
    return np.kron(xi.conj()[None, :], np.eye(dim_x)) @ a


@dataclass(frozen=True)
class CommutationReport:
    max_commutator: float
    invariant: bool
    invariance_residual: float


def a_xi_commutation(r: Realization, xis) -> CommutationReport:
    """Largest ``||a_xi a_eta - a_eta a_xi||`` over pairs from ``xis``.

    Also reports whether ``a`` is ``(B^*(x)I)`` restricted to ``R_gamma``;
    only then must the commutators vanish.
    """
    mats = [a_xi(r.a, xi, r.dim_x) for xi in xis]
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = max(worst, opnorm(mats[i] @ mats[j] - mats[j] @ mats[i]))
    gm = gamma_map(r)
    p = r.pick
    lifted_gamma = _lift(p, gm.gamma_op, r.dim_x, r.dim_g)
    target = b_matrix(p, r.dim_g).conj().T @ gm.gamma_op
    resid = opnorm(lifted_gamma @ r.a - target)
    return CommutationReport(worst, resid <= p.tol.residual_tol, resid)


def _lift(p, c, dim_x, dim_g):
    from .rkhs import amp_left, plain
    return amp_left(c, p.dim_b, plain(dim_x), p.kernel.space(dim_g))


@dataclass(frozen=True, eq=False)
class CounterexampleReport:
    xi: np.ndarray
    f0_values: np.ndarray
    distance_to_span: float
    invariance_defect: float
    eigen_residual: float
    identity_residual: float
    max_commutator: float
    accepted: bool
    realization: Realization | None = field(default=None, repr=False)
    attempts: int = 1

    def to_dict(self) -> dict:
        from .jsonio import encode_array
        return {
            "xi": encode_array(self.xi),
            "xi_norm": float(np.linalg.norm(self.xi)),
            "f0_values": encode_array(self.f0_values),
            "distance_to_span": self.distance_to_span,
            "invariance_defect": self.invariance_defect,
            "eigen_residual": self.eigen_residual,
            "identity_residual": self.identity_residual,
            "max_commutator": self.max_commutator,
            "accepted": self.accepted,
            "attempts": self.attempts,
        }


def _distance_to_span(p: PickDecomposition, xi) -> float:
    bb = p.beta.conj()
    jxi = xi.conj()[:, None]
    gram = _da(bb, bb)
    h = _da(bb, jxi)[:, 0]             # <d_{J xi}, d_{beta_bar_i}>
    self_ = 1.0 / (1.0 - float(np.vdot(xi, xi).real))
    # gram[i, j] = <d_j, d_i>
    proj = np.vdot(h, np.linalg.solve(gram, h)).real
    return float(np.sqrt(max(0.0, self_ - proj)))


def evaluate_candidate(p: PickDecomposition, xi, floor: float = 1e-6) -> CounterexampleReport:
    """Build the one-dimensional realization for ``xi`` and measure everything.

    ``a = xi``, ``c = sqrt(1 - ||xi||^2)``, completed to a unitary.
    """
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.size != p.dim_b:
        raise DimMismatch(f"xi has {xi.size} entries, B has dimension {p.dim_b}")
    nrm = float(np.linalg.norm(xi))
    if nrm >= 1.0:
        raise ValueError(f"||xi|| must be < 1, got {nrm}")
    tol = p.tol
    c = np.sqrt(1.0 - nrm ** 2)
    column = np.concatenate([xi, [c]])[:, None]
    u, _ = complete_to_coisometry(column, tol)
    r = p.dim_b
    real = Realization(p, u[:r, :1], u[:r, 1:], u[r:, :1], u[r:, 1:])
    gm = gamma_map(real)
    f0 = gm.values[:, 0]
    ident = identity_residual(gm)

    # least squares: min_eta ||B^* f0 - eta (x) f0||, layout (point, B)
    u0 = gm.gamma_op[:, 0]
    target = b_matrix(p, 1).conj().T @ u0
    basis = np.kron(u0[:, None], np.eye(r))
    eta, *_ = np.linalg.lstsq(basis, target, rcond=None)
    defect = float(np.linalg.norm(basis @ eta - target))
    f0_norm = float(np.linalg.norm(u0))
    dist = _distance_to_span(p, xi)
    accepted = nrm > 0 and dist >= floor and defect >= floor
    comm = a_xi_commutation(real, list(np.eye(r)) + [xi]).max_commutator
    return CounterexampleReport(xi, f0, dist, defect, defect / max(f0_norm, 1e-300), ident,
                                comm, bool(accepted), real)


def build_counterexample(p: PickDecomposition, search_seed: int = 0, *, enlarge: bool = False,
                         xi_norm: float = 0.5, budget: int = 64,
                         floor: float = 1e-6) -> CounterexampleReport:
    """Search for ``xi`` with ``M_G^sharp = span{f0}`` not ``B^*``-invariant.

    Candidates have norm ``xi_norm`` and a random direction; with
    ``enlarge`` the space ``B`` gets one extra coordinate and candidates
    carry a component along it as well as inside the span of ``beta``
    (a component purely along the new coordinate gives a constant ``f0``
    and no counterexample).
    """
    if not is_normalized(p):
        from .errors import NotNormalized
        raise NotNormalized("counterexample search needs delta == 1")
    q = p.enlarged(1) if enlarge else p
    r0 = p.dim_b
    rng = np.random.default_rng([int(search_seed), 5])
    best = None
    for attempt in range(1, budget + 1):
        v = rng.standard_normal(q.dim_b) + 1j * rng.standard_normal(q.dim_b)
        if np.linalg.norm(v[:r0]) < 1e-3:
            continue
        xi = xi_norm * v / np.linalg.norm(v)
        rep = evaluate_candidate(q, xi, floor)
        if best is None or min(rep.distance_to_span, rep.invariance_defect) > \
                min(best.distance_to_span, best.invariance_defect):
            best = rep
        if rep.accepted:
            return CounterexampleReport(rep.xi, rep.f0_values, rep.distance_to_span,
                                        rep.invariance_defect, rep.eigen_residual,
                                        rep.identity_residual, rep.max_commutator, True,
                                        rep.realization, attempt)
    detail = "" if best is None else (f"; best candidate had distance "
                                      f"{best.distance_to_span:.3e}, defect "
                                      f"{best.invariance_defect:.3e}")
    raise SearchFailed(f"no admissible xi after {budget} candidates{detail}")


def example52_beta(points) -> np.ndarray:
    """``beta(lam) = (conj(lam) / sqrt 2, conj(lam)^2 / sqrt 2)`` as columns."""
    lam = np.asarray(points, dtype=complex).reshape(-1)
    return np.vstack([lam.conj(), lam.conj() ** 2]) / np.sqrt(2.0)


def example52_report(tol: Tolerances = DEFAULT_TOL, grid: int = 10_000) -> dict:
    """Two-point example: equal ``gamma`` from non-intertwined coordinates."""
    pts = [0.0, 0.5]
    k = make_kernel("example52", pts, tol=tol)
    p = decompose(k).with_beta(example52_beta(pts))
    a1 = np.array([[1 / 8], [0.0]], dtype=complex)
    a2 = np.array([[0.0], [1 / 4]], dtype=complex)
    c = np.ones((1, 1), dtype=complex)
    g1 = gamma_values(p, a1, c)[:, 0]
    g2 = gamma_values(p, a2, c)[:, 0]
    o1 = onb_of_values(k, g1, 1)
    o2 = onb_of_values(k, g2, 1)
    gram_gap = opnorm(o1 @ o1.conj().T - o2 @ o2.conj().T)

    theta = 2 * np.pi * np.arange(grid) / grid
    kappa = np.exp(1j * theta)
    sweep = np.linalg.norm(kappa[None, :] * (a1 - a2), axis=0)
    kappa_min = float(np.min(sweep))

    lam = np.asarray(pts)
    printed = np.vstack([1 / np.sqrt(2) / (1 - lam / 8), 1 / np.sqrt(2) / (1 - lam ** 2 / 4)])
    k_half = float(k.gram[1, 1].real)

    # a contractive realization of the first coordinate system: c = sqrt(1 - |a1|^2)
    col = np.vstack([a1, [[np.sqrt(1 - 1 / 64)]]])
    u, _ = complete_to_coisometry(col, tol)
    real = Realization(p, u[:2, :1], u[:2, 1:], u[2:, :1], u[2:, 1:])
    g_contractive = bool(is_contractive_multiplier(transfer_eval(real), tol))

    gamma_diff = float(np.max(np.abs(g1 - g2)))
    k_err = abs(k_half - 32 / 27) / (32 / 27)
    ok = (gamma_diff <= 1e-12 and gram_gap <= 1e-12 and k_err <= 1e-12
          and kappa_min >= 0.1)
    return {
        "pass": bool(ok),
        "kernel_half_half": k_half,
        "kernel_half_half_expected": 32 / 27,
        "kernel_relative_error": k_err,
        "embedding_residual": embedding_check(p),
        "gamma1": [complex(z) for z in g1],
        "gamma2": [complex(z) for z in g2],
        "gamma_equality_residual": gamma_diff,
        "gamma_gram_gap": gram_gap,
        "printed_closed_forms": [[complex(z) for z in row] for row in printed],
        "printed_forms_equal_on_sample": float(np.max(np.abs(printed[0] - printed[1]))),
        "kappa_min": kappa_min,
        "a_difference_norm": float(np.linalg.norm(a1 - a2)),
        "kappa_bound": 0.1,
        "kappa_grid": grid,
        "unit_c_column_norm_sq": float((np.linalg.norm(a1) ** 2 + 1)),
        "contractive_variant_ok": g_contractive,
        "tolerance": 1e-12,
    }
