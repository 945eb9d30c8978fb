"""Command-line front end.

Every command prints a JSON report (``"schema": 1``) and exits with 0 when
all checks pass, 1 when a check fails and 2 on input errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .beurling import (InvariantSubspaceInput, check_b_invariance, closed_range, construct_g,
                       inner_from_closed, verify_factorization)
from .embed import (a_xi_commutation, build_counterexample, embedding_check, example52_report,
                    intertwining_check)
from .errors import (ConditionsViolated, NotInRange, NotInvariant, NotPick, PickSpaceError,
                     RangeInclusionFails, SearchFailed)
from .jsonio import decode_array, dumps, encode_array, load_json
from .mult import is_contractive_multiplier, m_matrix, multiplier_from_spec
from .numlin import DEFAULT_TOL, Tolerances, opnorm
from .pick import (check_pick, check_pick_all_bases, decompose, decomposition_report,
                   delta_projection_check, is_normalized, normalize)
from .realize import (complement_check, complementary_from_conditions, complementary_general,
                      gamma_map, gleason_check, identity_residual, realization_from_spec,
                      tilde_b, transfer_eval, whole_space_check)
from .rkhs import kernel_from_spec, make_kernel
from .suite import run_suite

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# errors that mean "the mathematical check failed" rather than "bad input"
CHECK_FAILURES = (NotPick, NotInvariant, ConditionsViolated, SearchFailed,
                  RangeInclusionFails, NotInRange)


class InputError(Exception):
    pass


def _parse_complex(tok: str) -> complex:
    t = tok.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise InputError(f"cannot parse complex number {tok!r}") from None


def _parse_vector(tok: str) -> np.ndarray:
    return np.array([_parse_complex(t) for t in tok.split(",") if t], dtype=complex)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PICKSPACE_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"PICKSPACE_SEED must be an integer, got {env!r}") from None
    return 0


def _tolerances(args) -> Tolerances:
    kw = {}
    for flag, name in (("tol_psd", "psd_tol"), ("tol_rank", "rank_tol"),
                       ("tol_residual", "residual_tol")):
        v = getattr(args, flag, None)
        if v is not None:
            kw[name] = v
    try:
        return DEFAULT_TOL.replace(**kw) if kw else DEFAULT_TOL
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _kernel(args, tol):
    """Kernel from ``--kernel file.json`` or ``--family/--points/--coeffs``."""
    base = args.base
    if args.kernel:
        spec = load_json(args.kernel)
        if base is None:
            base = int(spec.get("base_point", 0))
        k = kernel_from_spec(spec, tol)
        return k, base
    if not args.family:
        raise InputError("give --kernel FILE or --family with --points")
    if not args.points:
        raise InputError(f"--family {args.family} needs --points")
    pts = [_parse_vector(t) for t in args.points]
    pts = [p[0] if p.size == 1 else p for p in pts]
    k = make_kernel(args.family, pts, coeffs=args.coeffs, tol=tol)
    return k, base or 0


def _pick(args, tol):
    k, base = _kernel(args, tol)
    return decompose(k, base, tol)


def _realization(args, p):
    if not args.realization:
        raise InputError("this command needs --realization FILE")
    spec = load_json(args.realization)
    if "beta" in spec:
        p = p.with_beta(decode_array(spec["beta"], ndim=2))
    return realization_from_spec(spec, p)


def _multiplier(path, k):
    if not path:
        raise InputError("this command needs a multiplier file")
    return multiplier_from_spec(load_json(path), k)


def _tol_dict(tol):
    return {"psd": tol.psd_tol, "rank": tol.rank_tol, "residual": tol.residual_tol}


# -- commands -------------------------------------------------------------

def cmd_pick_check(args, tol):
    k, base = _kernel(args, tol)
    v = check_pick(k, base, tol)
    rep = {"pass": bool(v), "base": base, "min_eig": float(v.witness),
           "psd_tolerance": tol.psd_tol, "detail": v.detail}
    if args.all_bases:
        verdicts, warning = check_pick_all_bases(k, tol)
        rep["all_bases"] = [{"base": b, "pass": bool(x), "min_eig": float(x.witness)}
                            for b, x in enumerate(verdicts)]
        rep["warning"] = warning or None
        rep["pass"] = rep["pass"] and all(bool(x) for x in verdicts)
    return rep


def cmd_pick_decompose(args, tol):
    p = _pick(args, tol)
    res = delta_projection_check(p)
    rep = decomposition_report(p)
    rep.update({"delta_projection_residual": res, "residual_tolerance": tol.residual_tol,
                "embedding_residual": embedding_check(p),
                "pass": res <= tol.residual_tol})
    return rep


def cmd_mult_test(args, tol):
    k, _ = _kernel(args, tol)
    g = _multiplier(args.multiplier, k)
    v = is_contractive_multiplier(g, tol)
    return {"pass": bool(v), "min_eig": float(v.witness), "norm": opnorm(m_matrix(g)),
            "psd_tolerance": tol.psd_tol, "detail": v.detail}


def _subspace(args, p):
    if args.subspace:
        spec = load_json(args.subspace)
        c = decode_array(spec["c"], ndim=2)
        return InvariantSubspaceInput(p, int(spec.get("coeff_dim", 1)), c)
    f = _multiplier(args.multiplier, p.kernel)
    if args.closed:
        return InvariantSubspaceInput(p, f.dim_out, closed_range(f, p.tol))
    return InvariantSubspaceInput.from_multiplier(p, f)


def cmd_beurling_invariance(args, tol):
    inp = _subspace(args, _pick(args, tol))
    v = check_b_invariance(inp)
    return {"pass": bool(v), "min_eig": float(v.witness), "psd_tolerance": tol.psd_tol}


def _g_report(g):
    return {"dim_out": g.dim_out, "dim_in": g.dim_in, "values": encode_array(g.values)}


def cmd_beurling_construct(args, tol):
    res = construct_g(_subspace(args, _pick(args, tol)))
    return {"pass": res.residual <= tol.residual_tol and res.contractive,
            "residual": res.residual, "residual_tolerance": tol.residual_tol,
            "min_eig": res.min_eig, "contractive": res.contractive,
            "dim_g_prime": res.dim_g_prime, "degenerate_points": list(res.degenerate_points),
            "g": _g_report(res.g)}


def cmd_beurling_inner(args, tol):
    args.closed = True
    res = inner_from_closed(_subspace(args, _pick(args, tol)))
    return {"pass": bool(res.inner) and res.residual <= tol.residual_tol,
            "inner": res.inner, "residual": res.residual,
            "residual_tolerance": tol.residual_tol, "dim_g_prime": res.dim_g_prime,
            "g": _g_report(res.g)}


def cmd_beurling_verify_factor(args, tol):
    k, _ = _kernel(args, tol)
    g1, g2, gam = (_multiplier(path, k) for path in (args.g1, args.g2, args.gamma))
    v = verify_factorization(g1, g2, gam, tol)
    return {"pass": bool(v), "residual": float(v.witness),
            "residual_tolerance": tol.residual_tol, "detail": v.detail}


def cmd_realize_transfer(args, tol):
    r = _realization(args, _pick(args, tol))
    g, conds = transfer_eval(r, with_conditioning=True)
    return {"pass": True, "coisometry_residual": r.coisometry_residual,
            "resolvent_condition": conds, "g": _g_report(g)}


def cmd_realize_gamma(args, tol):
    r = _realization(args, _pick(args, tol))
    gm = gamma_map(r)
    g = transfer_eval(r)
    ident = identity_residual(gm, g)
    same, gap = complement_check(gm, g)
    return {"pass": ident <= tol.residual_tol and bool(same),
            "identity_residual": ident, "same_range": bool(same), "gram_gap": gap,
            "residual_tolerance": tol.residual_tol, "gamma_values": encode_array(gm.values)}


def cmd_realize_tilde_b(args, tol):
    gm = gamma_map(_realization(args, _pick(args, tol)))
    tb = tilde_b(gm)
    return {"pass": True, "tilde_b": encode_array(tb.op), "norm": tb.norm,
            "relation_residual": tb.relation_residual, "dim_n": int(tb.c_op.shape[1])}


def cmd_realize_gleason(args, tol):
    p = _pick(args, tol)
    gm = gamma_map(_realization(args, p))
    ident, slack = gleason_check(gm)
    whole = whole_space_check(p, gm.realization.dim_g)
    ok = ident <= tol.residual_tol and slack >= -tol.residual_tol and \
        max(whole) <= tol.residual_tol
    return {"pass": ok, "identity_residual": ident, "inequality_slack": slack,
            "whole_space_gleason": whole[0], "whole_space_quotients": whole[1],
            "residual_tolerance": tol.residual_tol}


def _complement_report(out, tol):
    return {"pass": out.same_range, "same_range": out.same_range, "gram_gap": out.gram_gap,
            "identity_residual": out.identity_residual,
            "inequality_slack": out.inequality_slack, "gamma_residual": out.gamma_residual,
            "residual_tolerance": tol.residual_tol, "g": _g_report(out.g)}


def cmd_realize_complement(args, tol):
    gm = gamma_map(_realization(args, _pick(args, tol)))
    out = complementary_from_conditions(gm.range_space(), tilde_b(gm), gm.pick)
    return _complement_report(out, tol)


def cmd_realize_complement_general(args, tol):
    """The realization is read over the normalized kernel ``K'``."""
    p = _pick(args, tol)
    pp = decompose(normalize(p).kprime, p.base_index, tol)
    r = _realization(args, pp)
    rs = gamma_map(r.on(p)).range_space()
    out = complementary_general(rs, p, tilde_b(gamma_map(r)))
    rep = _complement_report(out, tol)
    rep["normalized_input"] = is_normalized(p)
    return rep


def cmd_embed_check(args, tol):
    res = embedding_check(_pick(args, tol))
    return {"pass": res <= tol.residual_tol, "residual": res,
            "residual_tolerance": tol.residual_tol}


def _xis(args, dim):
    if not args.xi:
        return [np.eye(dim)[i] for i in range(dim)]
    xis = [_parse_vector(t) for t in args.xi]
    for x in xis:
        if x.size != dim:
            raise InputError(f"xi {x} has {x.size} entries, B has dimension {dim}")
    return xis


def cmd_embed_intertwine(args, tol):
    p = _pick(args, tol)
    res = [intertwining_check(p, xi) for xi in _xis(args, p.dim_b)]
    return {"pass": max(res) <= tol.residual_tol, "residuals": res,
            "residual_tolerance": tol.residual_tol}


def cmd_embed_commutators(args, tol):
    r = _realization(args, _pick(args, tol))
    rep = a_xi_commutation(r, _xis(args, r.pick.dim_b))
    ok = rep.max_commutator <= tol.residual_tol if rep.invariant else True
    return {"pass": ok, "max_commutator": rep.max_commutator, "invariant": rep.invariant,
            "invariance_residual": rep.invariance_residual,
            "asserted": rep.invariant, "residual_tolerance": tol.residual_tol}


def cmd_embed_counterexample(args, tol, seed):
    if args.kernel or args.family:
        p = _pick(args, tol)
    else:
        p = decompose(make_kernel("szego", [0.0, 0.5], tol=tol), 0, tol)
    rep = build_counterexample(p, seed, enlarge=args.enlarge, floor=args.floor)
    out = rep.to_dict()
    out["pass"] = bool(rep.accepted) and rep.max_commutator <= tol.residual_tol
    out["floor"] = args.floor
    out["seed"] = seed
    return out


def cmd_embed_example52(args, tol):
    return example52_report(tol)


def cmd_suite_run(args, tol, seed):
    return run_suite(seed, args.cases, tol)


# -- parser ---------------------------------------------------------------

def _common(parser, kernel=True):
    g = parser.add_argument_group("tolerances")
    g.add_argument("--tol-psd", type=float, help="PSD tolerance (default 1e-10)")
    g.add_argument("--tol-rank", type=float, help="rank cutoff (default 1e-10)")
    g.add_argument("--tol-residual", type=float, help="residual tolerance (default 1e-8)")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--seed", type=int, help="random seed (falls back to PICKSPACE_SEED)")
    if kernel:
        k = parser.add_argument_group("kernel")
        k.add_argument("--kernel", help="JSON kernel specification")
        k.add_argument("--family", choices=("szego", "drury_arveson", "power_series",
                                            "example52"))
        k.add_argument("--points", nargs="+", metavar="Z",
                       help="points; complex like 0.1+0.2j, vectors comma-separated")
        k.add_argument("--coeffs", nargs="+", type=float, help="power_series coefficients")
        k.add_argument("--base", type=int, help="base point index (default 0)")


COMMANDS = {
    ("pick", "check"): cmd_pick_check,
    ("pick", "decompose"): cmd_pick_decompose,
    ("mult", "test"): cmd_mult_test,
    ("beurling", "invariance"): cmd_beurling_invariance,
    ("beurling", "construct"): cmd_beurling_construct,
    ("beurling", "inner"): cmd_beurling_inner,
    ("beurling", "verify-factor"): cmd_beurling_verify_factor,
    ("realize", "transfer"): cmd_realize_transfer,
    ("realize", "gamma"): cmd_realize_gamma,
    ("realize", "tilde-b"): cmd_realize_tilde_b,
    ("realize", "gleason"): cmd_realize_gleason,
    ("realize", "complement"): cmd_realize_complement,
    ("realize", "complement-general"): cmd_realize_complement_general,
    ("embed", "check"): cmd_embed_check,
    ("embed", "intertwine"): cmd_embed_intertwine,
    ("embed", "commutators"): cmd_embed_commutators,
    ("embed", "counterexample"): cmd_embed_counterexample,
    ("embed", "example52"): cmd_embed_example52,
    ("suite", "run"): cmd_suite_run,
}
SEEDED = {cmd_embed_counterexample, cmd_suite_run}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pickspace",
                                     description="Finite-sample checks for complete Pick spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True, metavar="GROUP")
    subs = {}
    for group, action in COMMANDS:
        if group not in subs:
            gp = groups.add_parser(group, help=f"{group} commands")
            subs[group] = gp.add_subparsers(dest="action", required=True, metavar="ACTION")
        sp = subs[group].add_parser(action, help=(COMMANDS[group, action].__doc__ or "").split(
            "\n")[0] or None)
        _common(sp, kernel=group not in ("suite",) and action != "example52")
        if group == "pick" and action == "check":
            sp.add_argument("--all-bases", action="store_true",
                            help="repeat the test at every base point")
        if group in ("mult", "beurling"):
            sp.add_argument("--multiplier", help="multiplier JSON file")
        if group == "beurling":
            sp.add_argument("--subspace", help='JSON {"coeff_dim", "c"} (orthonormal coordinates)')
            sp.add_argument("--closed", action="store_true",
                            help="use the closed range of the multiplier")
            if action == "verify-factor":
                for name in ("--g1", "--g2", "--gamma"):
                    sp.add_argument(name, required=True, help="multiplier JSON file")
        if group in ("realize", "embed") and action in (
                "transfer", "gamma", "tilde-b", "gleason", "complement",
                "complement-general", "commutators"):
            sp.add_argument("--realization", help='JSON {"dim_x", "a", "b", "c", "d"}')
        if action in ("intertwine", "commutators"):
            sp.add_argument("--xi", nargs="+", help="B-vectors, comma-separated entries")
        if action == "counterexample":
            sp.add_argument("--enlarge", action="store_true",
                            help="search in B enlarged by one coordinate")
            sp.add_argument("--floor", type=float, default=1e-6,
                            help="positivity floor for distance and defect")
        if group == "suite":
            sp.add_argument("--cases", type=int, default=200,
                            help="number of cases for the randomized sections")
    return parser


def _emit(report, args):
    text = dumps(report)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _protect_negatives(argv):
    # argparse treats "-0.3,0.2" or "-0.5j" as an option; a leading space avoids that
    return [" " + a if _NEGATIVE_VALUE.match(a) else a for a in argv]


def run(argv=None) -> int:
    parser = build_parser()
    argv = _protect_negatives(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_PASS
    fn = COMMANDS[args.group, args.action]
    report = {"schema": 1, "command": f"{args.group} {args.action}",
              "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}
    try:
        tol = _tolerances(args)
        report["tolerances"] = _tol_dict(tol)
        if fn in SEEDED:
            body = fn(args, tol, _resolve_seed(args))
        else:
            body = fn(args, tol)
        report.update(body)
        code = EXIT_PASS if report.get("pass") else EXIT_FAIL
    except CHECK_FAILURES as exc:
        report.update({"pass": False, "error": type(exc).__name__, "message": str(exc)})
        code = EXIT_FAIL
    except (InputError, PickSpaceError, ValueError, KeyError, TypeError, OSError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        print(f"pickspace: error: {msg}", file=sys.stderr)
        report.update({"pass": False, "error": type(exc).__name__, "message": msg})
        code = EXIT_INPUT
    _emit(report, args)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
