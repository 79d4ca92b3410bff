"""Command-line entry point: ``valgroups <command> <action> [flags]``.

Every command reads one JSON document (``--config FILE``, or standard input
when the flag is absent or ``-``), prints a short human summary and, with
``--out FILE``, writes a JSON (or DOT) artifact.  Exit status is 0 on
success, 1 when a checked property fails and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import serialize as ser
from .amalgam import amalgamate, amalgamate_approx, amalgamate_mixed
from .errors import (
    AdmissibilityError,
    AxiomViolation,
    PostconditionError,
    PreconditionError,
    SchemaError,
    ValuedGroupError,
)
from .extension import (
    check_trvN,
    extend_onegen,
    extend_semivalue_modulus,
    extend_value_grid,
    find_realizer,
    midpoint_extend,
)
from .fraisse import (
    build_chain,
    chain_from_json,
    chain_json_text,
    chain_to_dot,
    enumerate_catalog,
    stage_satisfaction,
    verify_embeddings,
    verify_ledger,
    verify_links,
)
from .free import free_group, induced_hom, lipschitz_constant, min_matching, pd_matching, standard_generators, word_metric
from .generators import fresh_seed
from .groups import GroupHom, count_homs, enumerate_homs, quotient
from .pv import minimal_L, norm_q, norming_failures
from .rational import INF, format_rational
from .values import CostFunction, cap_value, complete_cost, isometric_isomorphic, validate_value

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class PropertyFailure(Exception):
    """A checked property does not hold; carries the artifact to report."""

    def __init__(self, message: str, artifact=None):
        super().__init__(message)
        self.artifact = artifact


# -- input helpers -------------------------------------------------------------


def _read_config(args) -> dict:
    path = getattr(args, "config", None)
    if path in (None, "-"):
        return ser.loads(sys.stdin.read(), "<stdin>")
    return ser.load_file(path)


def _opt_int(obj: dict, key: str, path: str = "$"):
    v = obj.get(key)
    if v is None:
        return None
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"{path}.{key}", "expected an integer")
    return v


def _opt_rational(obj: dict, key: str, path: str = "$"):
    v = obj.get(key)
    return None if v is None else ser.rational_from_json(v, f"{path}.{key}")


def _value(obj: dict, key: str):
    return ser.valued_group_from_json(ser._need(obj, key, "$"), f"$.{key}")


def _pairs(src, dst, obj, path: str) -> dict:
    """A map given as ``[[x, y], ...]`` from group ``src`` to ``dst``."""
    if not isinstance(obj, list):
        raise SchemaError(path, "maps are lists of [x, y] pairs")
    out = {}
    for i, pair in enumerate(obj):
        p = f"{path}[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(p, "expected [x, y]")
        out[ser.element_from_json(src, pair[0], f"{p}[0]")] = ser.element_from_json(dst, pair[1], f"{p}[1]")
    return out


def _map(src, dst, obj, path: str) -> dict:
    """A map given either as pairs or as ``{"images": [...]}`` of unit vectors."""
    if isinstance(obj, dict):
        ims = ser._need(obj, "images", path, list)
        if len(ims) != src.rank:
            raise SchemaError(f"{path}.images", f"expected {src.rank} images")
        images = [ser.element_from_json(dst, v, f"{path}.images[{i}]") for i, v in enumerate(ims)]
        try:
            return dict(GroupHom.from_images(src, dst, images).mapping)
        except ValuedGroupError as exc:
            raise SchemaError(f"{path}.images", str(exc)) from exc
    return _pairs(src, dst, obj, path)


def _fmt(x) -> str:
    return format_rational(x) if x != INF else "inf"


# -- group ---------------------------------------------------------------------


def cmd_group(args, cfg):
    G = ser.group_from_json(cfg.get("group", cfg), "$.group" if "group" in cfg else "$")
    if args.action == "validate":
        out = {"group": ser.group_to_json(G), "order": G.order, "exponent": G.exponent, "invariant_factors": list(G.invariant_factors())}
        return f"order {G.order}, exponent {G.exponent}, invariant factors {list(G.invariant_factors())}", out
    if args.action == "quotient":
        K = ser.subgroup_from_json(G, ser._need(cfg, "subgroup", "$"), "$.subgroup")
        Q, pi = quotient(G, K)
        if pi.kernel().order != K.order or not pi.is_surjective():
            raise PostconditionError("projection kernel or image is wrong")
        out = {"quotient": ser.group_to_json(Q), "projection": ser.hom_to_json(pi)}
        return f"G/K has factors {list(Q.factors)} (order {Q.order})", out
    target = ser.group_from_json(ser._need(cfg, "target", "$"), "$.target")
    limit = _opt_int(cfg, "list") or 0
    n = count_homs(G, target)
    out = {"count": n}
    if limit:
        out["homs"] = [h.generator_images() for _, h in zip(range(limit), enumerate_homs(G, target))]
        out["homs"] = [[list(g) for g in ims] for ims in out["homs"]]
    return f"{n} homomorphisms", out


# -- value ---------------------------------------------------------------------


def cmd_value(args, cfg):
    if args.action == "validate":
        raw = ser.valued_group_from_json(cfg, validate=False)
        N = _opt_int(cfg, "N")
        try:
            v = validate_value(raw.group, raw.table, raw.cap, N)
        except AxiomViolation as exc:
            raise PropertyFailure(str(exc), {"axiom": exc.axiom, "witness": _jsonable(exc.witness)}) from exc
        return f"valid value on order {v.group.order}, diameter {_fmt(v.diameter())}", ser.valued_group_to_json(v)
    if args.action == "complete":
        G = ser.group_from_json(ser._need(cfg, "group", "$"), "$.group")
        costs = ser.table_map_from_json(G, ser._need(cfg, "costs", "$", list), "$.costs")
        s = complete_cost(CostFunction.from_mapping(G, costs))
        out = {"group": ser.group_to_json(G), "values": [_fmt(t) for t in s.table]}
        return f"completion: sup {_fmt(s.sup())}, value {s.is_value()}", out
    if args.action == "cap":
        v = _value(cfg, "value")
        r = ser.rational_from_json(cfg.get("r", "1/1"), "$.r")
        c = cap_value(v, r)
        out = {"group": ser.group_to_json(v.group), "values": [_fmt(t) for t in c.table], "cap": _fmt(r)}
        return f"capped at {_fmt(r)}", out
    a, b = _value(cfg, "a"), _value(cfg, "b")
    iso = isometric_isomorphic(a, b)
    if iso is None:
        raise PropertyFailure("not isometrically isomorphic", {"isomorphic": False})
    return "isometrically isomorphic", {"isomorphic": True, "iso": ser.hom_to_json(iso)}


def _jsonable(w):
    if isinstance(w, Fraction):
        return format_rational(w)
    if isinstance(w, (tuple, list)):
        return [_jsonable(x) for x in w]
    if isinstance(w, (int, str)) or w is None:
        return w
    return repr(w)


# -- katetov -------------------------------------------------------------------


def _ext_json(e) -> dict:
    return {
        "result": ser.valued_group_to_json(e.result),
        "embedding": ser.hom_to_json(e.embedding),
        "witness": list(e.witness),
        "m": e.m,
        "M": _fmt(e.M),
        "c": _fmt(e.c),
    }


def cmd_katetov(args, cfg):
    G = _value(cfg, "value")
    N = _opt_int(cfg, "N")
    r = _opt_rational(cfg, "r")
    if args.action == "midpoint":
        x = ser.element_from_json(G.group, ser._need(cfg, "x", "$"), "$.x")
        y = ser.element_from_json(G.group, ser._need(cfg, "y", "$"), "$.y")
        e = midpoint_extend(G, x, y, N, r)
        return f"midpoint adjoined, order {e.result.group.order}", _ext_json(e)
    f = ser.katetov_from_json(G, ser._need(cfg, "f", "$"), "$.f")
    if args.action == "check":
        N = G.exponent if N is None else N
        ok, wit = check_trvN(f, N) if N > 1 else (True, None)
        if not ok:
            raise PropertyFailure(f"exponent-{N} condition fails at {list(wit)}", {"ok": False, "witness": [list(a) for a in wit]})
        return f"exponent-{N} condition holds on {len(f.domain)} points", {"ok": True}
    if args.action == "realize":
        b = find_realizer(G, f)
        if b is None:
            raise PropertyFailure("no realizing point in the group", {"realizer": None})
        return f"realized by {list(b)}", {"realizer": list(b)}
    e = extend_onegen(G, f, N, r)
    return f"extension of order {e.result.group.order} (m = {e.m})", _ext_json(e)


# -- valext --------------------------------------------------------------------


def cmd_valext(args, cfg):
    D = _value(cfg, "value")
    K = ser.subgroup_from_json(D.group, cfg.get("subgroup", {"generators": []}), "$.subgroup")
    r = _opt_rational(cfg, "r")
    if args.action == "grid":
        m = _opt_int(cfg, "log2_denominator")
        if m is None:
            raise SchemaError("$.log2_denominator", "missing")
        eps = ser.rational_from_json(ser._need(cfg, "eps", "$"), "$.eps")
        out = extend_value_grid(D, K, m, eps, r)
        return f"grid value with denominator 2^{m}", ser.valued_group_to_json(out)
    lam0 = ser.table_map_from_json(D.group, ser._need(cfg, "lam0", "$", list), "$.lam0")
    omega = ser.pl_from_json(ser._need(cfg, "omega", "$"), "$.omega", modulus=True)
    rho = ser.pl_from_json(cfg["rho"], "$.rho", modulus=True) if "rho" in cfg else None
    tau = ser.pl_from_json(cfg["tau"], "$.tau", modulus=True) if "tau" in cfg else None
    s = extend_semivalue_modulus(D, K, lam0, omega, rho, tau, r)
    out = {"group": ser.group_to_json(D.group), "values": [_fmt(t) for t in s.table]}
    return f"extended semivalue, {len(s.zeros())} zeros", out


# -- amalgamate ----------------------------------------------------------------


def _amalgam_json(res) -> dict:
    diag = {k: _jsonable(v) for k, v in res.diagnostics.items()}
    return {
        "result": ser.valued_group_to_json(res.result),
        "psi1": ser.hom_to_json(res.psi1),
        "psi2": ser.hom_to_json(res.psi2),
        "diagnostics": diag,
    }


def cmd_amalgamate(args, cfg):
    N = _opt_int(cfg, "N")
    r = _opt_rational(cfg, "r")
    action = args.action or "a1"
    D1, D2 = _value(cfg, "D1"), _value(cfg, "D2")
    G1, G2 = D1.group, D2.group
    if action == "a1":
        D0 = _value(cfg, "D0")
        phi1 = _map(D0.group, G1, ser._need(cfg, "phi1", "$"), "$.phi1")
        phi2 = _map(D0.group, G2, ser._need(cfg, "phi2", "$"), "$.phi2")
        res = amalgamate(D0, D1, D2, phi1, phi2, r, N)
        return f"amalgam of order {res.result.group.order}", _amalgam_json(res)
    eps = ser.rational_from_json(ser._need(cfg, "eps", "$"), "$.eps")
    if action == "a2":
        K = ser.subgroup_from_json(G1, ser._need(cfg, "D0", "$"), "$.D0")
        u = _pairs(G1, G2, ser._need(cfg, "u", "$"), "$.u")
        v = _pairs(G1, G2, ser._need(cfg, "v", "$"), "$.v")
        res = amalgamate_approx(D1, K, D2, u, v, eps, r, N)
        bound = (1 + D1.diameter()) * eps
        sup = res.diagnostics.get("sup_distance")
        summary = f"approximate amalgam of order {res.result.group.order}, sup distance {_fmt(sup)} <= {_fmt(bound)}"
        if sup is not None and sup > bound:
            raise PropertyFailure(summary, _amalgam_json(res))
        return summary, _amalgam_json(res)
    E1 = ser.subgroup_from_json(G1, ser._need(cfg, "E1", "$"), "$.E1")
    E2 = ser.subgroup_from_json(G1, ser._need(cfg, "E2", "$"), "$.E2")
    phi1 = _pairs(G1, G2, ser._need(cfg, "phi1", "$"), "$.phi1")
    phi2 = _pairs(G1, G2, ser._need(cfg, "phi2", "$"), "$.phi2")
    res = amalgamate_mixed(D1, E1, E2, D2, phi1, phi2, eps, r, N)
    sup = res.diagnostics.get("sup_distance")
    return f"mixed amalgam of order {res.result.group.order}, sup distance {_fmt(sup)}", _amalgam_json(res)


# -- free ----------------------------------------------------------------------


def cmd_free(args, cfg):
    X = ser.metric_space_from_json(ser._need(cfg, "space", "$"), "$.space")
    N = _opt_int(cfg, "N")
    N = 2 if N is None else N
    r = _opt_rational(cfg, "r")
    if args.action == "matching":
        labels = cfg.get("points", list(X.points))
        if len(labels) % 2:
            raise SchemaError("$.points", "an even number of points is needed")
        w = min_matching(X, labels)
        return f"minimum matching weight {_fmt(w)}", {"weight": _fmt(w)}
    F = free_group(X, N, INF if r is None else r)
    if args.action == "build":
        return f"Z_{N}[X] of order {F.carrier.order}", {"N": N, "value": ser.valued_group_to_json(F.value)}
    if args.action == "pd":
        coeffs = ser._need(cfg, "coeffs", "$", list)
        try:
            x = F.element(coeffs)
        except PreconditionError as exc:
            raise SchemaError("$.coeffs", str(exc)) from exc
        out = {"element": list(x), "pd": _fmt(F(x))}
        if N == 2:
            m = pd_matching(F, x)
            out["matching"] = _fmt(m)
            if m != F(x):
                raise PropertyFailure(f"p_d = {_fmt(F(x))} but matching gives {_fmt(m)}", out)
        return f"p_d = {_fmt(F(x))}", out
    target = _value(cfg, "target")
    raw = ser._need(cfg, "u", "$", dict)
    u = {}
    for label, el in raw.items():
        key = label
        if key not in X.points:
            try:
                key = int(label)
            except ValueError:
                pass
        if key not in X.points:
            raise SchemaError(f"$.u[{label!r}]", "not a point of the space")
        u[key] = ser.element_from_json(target.group, el, f"$.u[{label!r}]")
    L = lipschitz_constant(X, u, target)
    h = induced_hom(u, F, target)
    return f"induced hom, Lipschitz constant {_fmt(L)}", {"lipschitz": _fmt(L), "hom": ser.hom_to_json(h)}


# -- wordmetric ----------------------------------------------------------------


def cmd_wordmetric(args, cfg):
    N = args.N
    if N is None:
        N = _opt_int(cfg or {}, "N")
    if N is None or N < 2:
        raise PreconditionError("--N must be at least 2")
    F = standard_generators(N)
    v = word_metric(F)
    G = F.group
    total = G.sum(tuple(1 if i == j else 0 for i in range(N)) for j in range(N))
    val = v(total)
    out = {"N": N, "norm_sum": _fmt(val), "order": G.order}
    if val != N - 1:
        raise PropertyFailure(f"||sum e_j||_F = {_fmt(val)}, expected {N - 1}", out)
    return f"||sum e_j||_F = {val}", out


# -- chain ---------------------------------------------------------------------


def _chain_from_config(cfg: dict):
    path = "$"
    m = _opt_int(cfg, "grid_denominator_log2", path)
    N = _opt_int(cfg, "N", path)
    if m is None or N is None:
        raise SchemaError(path, "grid_denominator_log2 and N are required")
    cap = ser.rational_from_json(cfg.get("cap", "1"), f"{path}.cap")
    max_order = _opt_int(cfg, "max_order", path) or 4
    rounds = _opt_int(cfg, "rounds", path) or 1
    bound = _opt_rational(cfg, "value_bound", path)
    cat = enumerate_catalog(m, N, cap, max_order, bound)
    return build_chain(cat, rounds)


def cmd_chain(args, cfg):
    if args.action == "build":
        chain = _chain_from_config(cfg)
        summary = (
            f"{len(chain.catalog)} catalog entries, {len(chain.stages)} stages, "
            f"final order {chain.final.group.order}, {len(chain.unsatisfied)} unsatisfied"
        )
        if args.format == "dot":
            return summary, chain_to_dot(chain)
        return summary, chain_json_text(chain)
    chain = chain_from_json(cfg)
    if args.action == "export":
        if args.format == "dot":
            return f"{len(chain.stages)} stages", chain_to_dot(chain)
        return f"{len(chain.stages)} stages", chain_json_text(chain)
    led = verify_ledger(chain)
    emb = verify_embeddings(chain.final, chain.catalog)
    bad_links = verify_links(chain)
    sat = stage_satisfaction(chain)
    monotone = all(a <= b for a, b in zip(sat, sat[1:]))
    report = {
        "ledger": {"satisfied": led.satisfied, "total": led.total, "ratio": _fmt(Fraction(led.ratio))},
        "embeddings": {"satisfied": emb.satisfied, "total": emb.total, "ratio": _fmt(Fraction(emb.ratio))},
        "links_ok": not bad_links,
        "stage_satisfaction": sat,
        "monotone": monotone,
    }
    summary = (
        f"ledger {led.satisfied}/{led.total} ({float(100 * led.ratio):.0f}%), "
        f"embeddings {emb.satisfied}/{emb.total}, links {'ok' if not bad_links else 'BROKEN'}"
    )
    if led.ratio != 1 or emb.ratio != 1 or bad_links or not monotone:
        raise PropertyFailure(summary, report)
    return summary, report


# -- pv ------------------------------------------------------------------------


def cmd_pv(args, cfg):
    if args.action == "norm":
        u = ser.step_function_from_json(ser._need(cfg, "step", "$"), "$.step")
        n = norm_q(u)
        out = {"norm": _fmt(n)}
        if "t" in cfg:
            t = ser.rational_from_json(cfg["t"], "$.t")
            nt = norm_q(u.act(t))
            out["t"] = _fmt(t)
            out["norm_t"] = _fmt(nt)
            if nt != t * n:
                raise PropertyFailure(f"||t*u|| = {_fmt(nt)} differs from t||u|| = {_fmt(t * n)}", out)
        return f"||u||_q = {_fmt(n)}", out
    kappa = ser.pl_from_json(ser._need(cfg, "kappa", "$"), "$.kappa")
    L = _opt_rational(cfg, "L")
    fails = norming_failures(kappa, L)
    L_used = L if L is not None else minimal_L(kappa)
    out = {"L": _fmt(L_used), "failures": {k: _jsonable(v) for k, v in fails.items()}}
    if fails:
        raise PropertyFailure(f"norming axioms fail: {', '.join(sorted(fails))}", out)
    return f"norming function with L = {_fmt(L_used)}", out


# -- suite ---------------------------------------------------------------------


def cmd_suite(args, cfg):
    from .suites import SUITES, run_suite

    names = list(SUITES) if args.name == "all" else [args.name]
    for n in names:
        if n not in SUITES:
            raise SchemaError("suite", f"unknown suite {n!r}; choose from {', '.join(SUITES)} or all")
    results = [run_suite(n, args.seed) for n in names]
    lines = "\n".join(r.line() for r in results)
    out = {"seed": args.seed, "results": [{"name": n, "passed": r.passed, "summary": r.summary} for n, r in zip(names, results)]}
    if not all(r.passed for r in results):
        raise PropertyFailure(lines, out)
    return lines, out


# -- parser --------------------------------------------------------------------

COMMANDS = {
    "group": (cmd_group, ["validate", "quotient", "homs"]),
    "value": (cmd_value, ["validate", "complete", "cap", "iso"]),
    "katetov": (cmd_katetov, ["check", "extend", "realize", "midpoint"]),
    "valext": (cmd_valext, ["grid", "modulus"]),
    "amalgamate": (cmd_amalgamate, ["a1", "a2", "a3"]),
    "free": (cmd_free, ["build", "pd", "matching", "induce"]),
    "chain": (cmd_chain, ["build", "verify", "export"]),
    "pv": (cmd_pv, ["norm", "check"]),
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="input JSON file ('-' or absent: standard input)")
    p.add_argument("--out", help="write the artifact here")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--seed", type=int, help="master seed for randomized runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valgroups", description="Exact computations with finite valued Abelian groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, actions) in COMMANDS.items():
        p = sub.add_parser(name)
        if name == "amalgamate":
            p.add_argument("action", nargs="?", choices=actions, default="a1")
        else:
            p.add_argument("action", choices=actions)
        if name == "chain":
            p.add_argument("input", nargs="?", help="chain JSON for verify/export (alias of --config)")
        _common(p)
    p = sub.add_parser("wordmetric")
    p.add_argument("--N", type=int)
    _common(p)
    p = sub.add_parser("suite")
    p.add_argument("name", help="suite name or 'all'")
    _common(p)
    return parser


def _emit(args, artifact) -> None:
    if args.out is None or artifact is None:
        return
    text = artifact if isinstance(artifact, str) else ser.dumps(artifact)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "suite" and args.seed is None:
        args.seed = fresh_seed()
        print(f"seed: {args.seed}")
    try:
        if args.command == "wordmetric":
            handler, cfg = cmd_wordmetric, (_read_config(args) if args.config else None)
        elif args.command == "suite":
            handler, cfg = cmd_suite, None
        else:
            if args.command == "chain" and args.input and not args.config:
                args.config = args.input
            handler, cfg = COMMANDS[args.command][0], _read_config(args)
            if not isinstance(cfg, dict):
                raise SchemaError("$", "expected an object")
        summary, artifact = handler(args, cfg)
    except PropertyFailure as exc:
        print(f"FAIL: {exc}")
        _emit(args, exc.artifact)
        return EXIT_FAIL
    except PostconditionError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SchemaError, PreconditionError, AdmissibilityError, AxiomViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValuedGroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(summary)
    _emit(args, artifact)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
