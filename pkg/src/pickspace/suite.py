"""Seeded verification suite: every theorem check run over random cases.

Each section draws its cases from ``default_rng([seed, section, case])``
and reports per-case measurements plus the aggregated checks with the
thresholds they were compared to.
"""

from __future__ import annotations

import numpy as np

from .beurling import (InvariantSubspaceInput, construct_g, inner_from_closed,
                       projection_rank, verify_factorization)
from .embed import (build_counterexample, embedding_check,
                    example52_report, intertwining_check)
from .mult import MultiplierData, is_contractive_multiplier, m_matrix, random_multiplier, range_space
from .numlin import DEFAULT_TOL, Tolerances, opnorm
from .pick import (check_pick, check_pick_all_bases, decompose, delta_projection_check,
                   normalize)
from .realize import (b_star_restricted, complement_check, complementary_from_conditions,
                      complementary_general, gamma_map, gleason_check, identity_residual,
                      solve_gleason, tilde_b, transfer_eval, whole_space_check)
from .rkhs import amp_left, make_kernel, plain
from .sampling import (KERNEL_CHOICES, random_closed_coinvariant, random_closed_invariant,
                       random_kernel, random_pick, random_realization, random_xi)
from .subspace import (RangeSpace, complement_decompose, complementary, douglas_solve,
                       range_norm, same_range)

__all__ = ["run_suite", "SECTIONS"]

SECTIONS = {
    1: "pick verification",
    2: "delta projection identity",
    3: "beurling round trip",
    4: "inner corollary",
    5: "realization identity",
    6: "gleason identity and difference-quotient inequality",
    7: "complementary characterization round trip",
    8: "two-point example",
    9: "counterexample",
    10: "drury-arveson embedding",
    12: "range spaces and factorization",
}


def _rng(seed, section, case):
    return np.random.default_rng([int(seed), int(section), int(case)])


def _check(name, value, tol, cmp="le"):
    value = float(value)
    ok = value <= tol if cmp == "le" else value >= tol
    return {"name": name, "value": value, "tolerance": tol, "compare": cmp, "pass": bool(ok)}


def _flag(name, value):
    return {"name": name, "value": bool(value), "pass": bool(value)}


def _section(sid, checks, cases=None, **extra):
    out = {"id": sid, "name": SECTIONS[sid], "checks": checks,
           "pass": all(c["pass"] for c in checks)}
    if cases is not None:
        out["cases"] = sorted(cases, key=lambda c: c["case"])
    out.update(extra)
    return out


def _max(cases, key):
    vals = [c[key] for c in cases if c.get(key) is not None]
    return max(vals) if vals else 0.0


def _min(cases, key):
    vals = [c[key] for c in cases if c.get(key) is not None]
    return min(vals) if vals else 0.0


def _pick_sections(seed, tol, point_sets=5, n_xi=20):
    cases = []
    for fam_i, choice in enumerate(KERNEL_CHOICES[:3]):
        for s in range(point_sets):
            case = fam_i * point_sets + s
            rng = _rng(seed, 1, case)
            n = int(rng.integers(3, 7))
            k = random_kernel(rng, n, choice, include_origin=False, tol=tol)
            base = int(rng.integers(n))
            v = check_pick(k, base, tol)
            p = decompose(k, base, tol)
            xis = [random_xi(p.dim_b, rng) for _ in range(n_xi)]
            cases.append({
                "case": case, "family": choice[0], "n": n, "base": base,
                "min_eig": float(v.witness), "pick": bool(v),
                "delta_projection": delta_projection_check(p),
                "embedding": embedding_check(p),
                "intertwining": max(intertwining_check(p, xi) for xi in xis),
            })
    s1 = _section(1, [_check("min_eig", _min(cases, "min_eig"), -1e-10, "ge"),
                      _flag("all_pick", all(c["pick"] for c in cases))], cases)
    s2 = _section(2, [_check("delta_projection", _max(cases, "delta_projection"), 1e-10)])
    s10 = _section(10, [_check("embedding", _max(cases, "embedding"), 1e-12),
                        _check("intertwining", _max(cases, "intertwining"), 1e-10)],
                   xi_per_kernel=n_xi)
    return s1, s2, s10


def _beurling_section(seed, tol, count):
    cases = []
    for case in range(count):
        rng = _rng(seed, 3, case)
        p = random_pick(rng, int(rng.integers(3, 7)), include_origin=bool(case % 2), tol=tol)
        g = int(rng.integers(1, 3))
        f = random_multiplier(p.kernel, g, int(rng.integers(1, 3)), rng)
        res = construct_g(InvariantSubspaceInput.from_multiplier(p, f))
        cases.append({"case": case, "n": p.n, "dim_b": p.dim_b, "dim_g": g,
                      "residual": res.residual, "contractive": res.contractive,
                      "dim_g_prime": res.dim_g_prime})
    return _section(3, [_check("residual", _max(cases, "residual"), 1e-8),
                        _flag("contractive", all(c["contractive"] for c in cases))], cases)


def _inner_section(seed, tol, count):
    cases = []
    for case in range(count):
        rng = _rng(seed, 4, case)
        p = random_pick(rng, int(rng.integers(3, 7)), tol=tol)
        c, _ = random_closed_invariant(p, 2, rng, int(rng.integers(1, 3)))
        res = inner_from_closed(InvariantSubspaceInput(p, 2, c))
        proj = m_matrix(res.g) @ m_matrix(res.g).conj().T
        cases.append({"case": case, "dim_m": int(c.shape[1]),
                      "rank": projection_rank(proj, tol),
                      "idempotence": opnorm(proj @ proj - proj)})
    return _section(4, [_check("idempotence", _max(cases, "idempotence"), 1e-8),
                        _flag("rank_equals_dim", all(c["rank"] == c["dim_m"] for c in cases))],
                    cases)


def _realization_sections(seed, tol, count):
    cases = []
    whole = []
    for case in range(count):
        rng = _rng(seed, 5, case)
        p = random_pick(rng, int(rng.integers(3, 7)), tol=tol)
        x, g = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        r = random_realization(p, x, g, rng)
        gm = gamma_map(r)
        gval = transfer_eval(r)
        same, gap = complement_check(gm, gval)
        tb = tilde_b(gm)
        ident, slack = gleason_check(gm, tb)
        cases.append({"case": case, "n": p.n, "dim_b": p.dim_b, "dim_x": x, "dim_g": g,
                      "identity": identity_residual(gm, gval), "same_range": bool(same),
                      "gram_gap": gap, "gleason": ident, "slack": slack,
                      "relation_residual": tb.relation_residual})
        whole.append(max(whole_space_check(p, g)))
    s5 = _section(5, [_check("identity", _max(cases, "identity"), 1e-10),
                      _flag("same_range", all(c["same_range"] for c in cases))], cases)
    s6 = _section(6, [_check("gleason", _max(cases, "gleason"), 1e-10),
                      _check("slack", _min(cases, "slack"), -1e-10, "ge"),
                      _check("whole_space", max(whole) if whole else 0.0, 1e-10)])
    return s5, s6


def _recovery_residual(p, c, t, real, dim_g):
    """Compare the recovered tildeB with ``T`` as operators on ``N``."""
    gm = gamma_map(real)
    tb = tilde_b(gm)
    space = p.kernel.space(dim_g)
    lhs = amp_left(tb.c_op, p.dim_b, plain(tb.c_op.shape[1]), space) @ tb.op @ tb.c_op.conj().T
    rhs = amp_left(c, p.dim_b, plain(c.shape[1]), space) @ t @ c.conj().T
    return opnorm(lhs - rhs)


def _complement_section(seed, tol, count):
    cases = []
    for case in range(count):
        rng = _rng(seed, 7, case)
        kind = ("realization", "general", "isometric")[case % 3]
        n = int(rng.integers(3, 7))
        x, g = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        entry = {"case": case, "kind": kind, "n": n, "dim_g": g}
        if kind == "realization":
            p = random_pick(rng, n, tol=tol)
            gm = gamma_map(random_realization(p, x, g, rng))
            out = complementary_from_conditions(gm.range_space(), tilde_b(gm), p)
        elif kind == "general":
            p = random_pick(rng, n, include_origin=False, tol=tol)
            nk = normalize(p)
            pp = decompose(nk.kprime, p.base_index, tol)
            r = random_realization(pp, x, g, rng)
            rs = gamma_map(r.on(p)).range_space()
            out = complementary_general(rs, p, tilde_b(gamma_map(r)))
        else:
            g = 2
            entry["dim_g"] = g
            p = random_pick(rng, n, tol=tol)
            c = random_closed_coinvariant(p, g, rng)
            t, inv = b_star_restricted(p, c, g)
            rs = RangeSpace(p.kernel.space(g), c, tol, p.kernel)
            out = complementary_from_conditions(rs, t, p)
            entry["invariance_residual"] = inv
            entry["recovery"] = _recovery_residual(p, c, t, out.realization, g)
            entry["solved_vs_restricted"] = opnorm(solve_gleason(p, c, g) - t)
        entry.update({"same_range": out.same_range, "gram_gap": out.gram_gap,
                      "gleason": out.identity_residual, "slack": out.inequality_slack})
        cases.append(entry)
    return _section(7, [_flag("same_range", all(c["same_range"] for c in cases)),
                        _check("isometric_recovery", _max(cases, "recovery"), 1e-8),
                        _check("solved_vs_restricted", _max(cases, "solved_vs_restricted"),
                               1e-8)], cases)


def _example_section(tol):
    rep = example52_report(tol)
    checks = [_check("kernel_relative_error", rep["kernel_relative_error"], 1e-12),
              _check("gamma_equality", rep["gamma_equality_residual"], 1e-12),
              _check("gamma_gram_gap", rep["gamma_gram_gap"], 1e-12),
              _check("kappa_min", rep["kappa_min"], 0.1, "ge")]
    return _section(8, checks, report=rep)


def _counterexample_section(seed, tol):
    k = make_kernel("szego", [0.0, 0.5], tol=tol)
    p = decompose(k, 0, tol)
    rep = build_counterexample(p, seed, enlarge=True)
    checks = [_check("distance_to_span", rep.distance_to_span, 1e-6, "ge"),
              _check("invariance_defect", rep.invariance_defect, 1e-6, "ge"),
              _check("max_commutator", rep.max_commutator, 0.0)]
    return _section(9, checks, report=rep.to_dict())


def _coverage_section(seed, tol, count=10):
    """Range-space operations and factorization checks."""
    cases = []
    for case in range(count):
        rng = _rng(seed, 12, case)
        p = random_pick(rng, int(rng.integers(3, 6)), tol=tol)
        k = p.kernel
        f = random_multiplier(k, 2, 2, rng)
        gam = random_multiplier(k, 2, 1, rng)
        g1 = MultiplierData(k, np.einsum("iab,ibc->iac", f.values, gam.values))
        fact = verify_factorization(g1, f, gam, tol)
        rs_f, rs_g1 = range_space(f), range_space(g1)
        # M_{F Gamma} sits contractively inside M_F
        incl = douglas_solve(np.eye(rs_f.dim), rs_g1, rs_f)
        x = rs_f.c_op @ (rng.standard_normal(rs_f.c_op.shape[1]) + 0j)
        dec = complement_decompose(rs_f, x)
        comp = complementary(rs_f)
        same, _ = same_range(complementary(comp), rs_f)
        cases.append({
            "case": case,
            "factorization": float(fact.witness), "factorization_ok": bool(fact),
            "contractive": bool(is_contractive_multiplier(gam, tol)),
            "douglas_min_eig": incl.min_eig, "douglas_residual": incl.factor_residual,
            "douglas_norm": incl.d_norm,
            "pythagoras": dec.pythagoras_residual,
            "range_norm_bound": float(range_norm(rs_f, x) - np.linalg.norm(x)),
            "double_complement": bool(same),
            "all_bases_consistent": not check_pick_all_bases(k, tol)[1],
        })
    checks = [_flag("factorization", all(c["factorization_ok"] for c in cases)),
              _check("douglas_residual", _max(cases, "douglas_residual"), 1e-8),
              _check("douglas_norm", _max(cases, "douglas_norm"), 1.0 + 1e-8),
              _check("pythagoras", _max(cases, "pythagoras"), 1e-8),
              _check("range_norm_minus_norm", _min(cases, "range_norm_bound"), -1e-8, "ge"),
              _flag("double_complement", all(c["double_complement"] for c in cases)),
              _flag("all_bases_consistent", all(c["all_bases_consistent"] for c in cases))]
    return _section(12, checks, cases)


def run_suite(seed: int = 0, cases: int = 200, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Run every section; ``cases`` scales the randomized sections
    (``cases`` Beurling and realization cases, a quarter as many inner
    cases, half as many complementary round trips)."""
    cases = max(1, int(cases))
    s1, s2, s10 = _pick_sections(seed, tol)
    s5, s6 = _realization_sections(seed, tol, cases)
    sections = [s1, s2,
                _beurling_section(seed, tol, cases),
                _inner_section(seed, tol, max(1, cases // 4)),
                s5, s6,
                _complement_section(seed, tol, max(1, cases // 2)),
                _example_section(tol),
                _counterexample_section(seed, tol),
                s10,
                _coverage_section(seed, tol)]
    return {
        "schema": 1,
        "seed": int(seed),
        "cases": cases,
        "tolerances": {"psd": tol.psd_tol, "rank": tol.rank_tol, "residual": tol.residual_tol},
        "sections": sections,
        "pass": all(s["pass"] for s in sections),
    }
