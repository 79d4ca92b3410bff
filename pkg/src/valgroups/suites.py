"""Named property suites.

Each suite draws its instances from :func:`valgroups.generators.stream`, runs
the operation under test, re-checks the outcome (often through a second,
independent computation) and returns a :class:`SuiteResult`.
"""

from __future__ import annotations

import hashlib
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import generators as gen
from .amalgam import amalgamate, amalgamate_approx, amalgamate_mixed
from .extension import KatetovMap, check_trvN, extend_onegen, extend_semivalue_modulus, find_realizer
from .fraisse import (
    build_chain,
    chain_json_text,
    enumerate_catalog,
    group_shapes,
    verify_embeddings,
    verify_ledger,
)
from .free import FiniteMetricSpace, free_group, free_inclusion, pd_matching, standard_generators, word_metric
from .groups import FiniteAbelianGroup, all_subgroups
from .oracles import amalgam_fiber_value, completion_by_relaxation, trvN_by_tuples
from .piecewise import build_ort_triple, check_ort, identity, nabla
from .pv import StepFunction, check_kappa_norm, corrupted_norm, norming_validate
from .rational import INF, is_on_grid
from .values import ValuedGroup, complete_cost, validate_semivalue, validate_value

DEFAULT_SEED = 20240607
HALF = Fraction(1, 2)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    summary: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: {self.summary} ({self.seconds:.1f}s)"


def _timed(fn):
    def run(seed: int = DEFAULT_SEED, **kw) -> SuiteResult:
        t0 = time.perf_counter()
        res = fn(seed, **kw)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _e(k: int, j: int) -> tuple:
    return tuple(1 if i == j else 0 for i in range(k))


# -- 1 -------------------------------------------------------------------------


@_timed
def word_metric_norms(seed: int) -> SuiteResult:
    """Word-metric numbers on ``Z_N^N`` for ``N = 3, 4, 5``."""
    fails = []
    for N in (3, 4, 5):
        F = standard_generators(N)
        v = word_metric(F)
        G = F.group
        for j, k in itertools.permutations(range(N), 2):
            if v(G.sub(_e(N, j), _e(N, k))) != 1:
                fails.append(("e_j - e_k", N, j, k))
        if v(G.sum(_e(N, j) for j in range(N))) != N - 1:
            fails.append(("sum e_j", N))
        for comp in itertools.product(range(N + 1), repeat=N):
            if sum(comp) != N:
                continue
            x = tuple(c % N for c in comp)
            if v(x) > N - max(comp):
                fails.append(("composition", N, comp))
    return SuiteResult("word_metric_norms", not fails, f"{len(fails)} violations over N=3,4,5", failures=fails)


# -- 2 -------------------------------------------------------------------------


def constant_sphere_map(N: int) -> KatetovMap:
    F = standard_generators(N)
    v = word_metric(F)
    c = max(HALF, 1 - Fraction(2, N))
    return KatetovMap(v, {_e(N, j): c for j in range(N)})


def order3_map() -> KatetovMap:
    G = FiniteAbelianGroup([3])
    q = ValuedGroup(G, (Fraction(0), Fraction(1), Fraction(1)), INF, 3)
    return KatetovMap(q, {(0,): Fraction(3, 2), (1,): HALF, (2,): HALF})


@_timed
def katetov_counterexamples(seed: int) -> SuiteResult:
    """The constant sphere maps and the order-3 map fail the exponent condition."""
    fails, wits = [], {}
    for N in (3, 4, 5):
        f = constant_sphere_map(N)
        ok, w = check_trvN(f, N)
        ok2, _ = trvN_by_tuples(f, N)
        wits[f"const N={N}"] = w
        if ok or ok2:
            fails.append(N)
    f = order3_map()
    ok, w = check_trvN(f, 3)
    ok2, _ = trvN_by_tuples(f, 3)
    wits["order3"] = w
    if ok or ok2 or w is None or find_realizer(f.base, f) is not None:
        fails.append("order3")
    return SuiteResult("katetov_counterexamples", not fails, f"witnesses {wits}", details=wits, failures=fails)


# -- 3 -------------------------------------------------------------------------


@_timed
def one_point_extensions(seed: int, count: int = 200, log2_den: int = 3) -> SuiteResult:
    """One-generator extensions on random grid-valued groups."""
    rng = gen.stream(seed, "extension")
    fails = []
    combos = [(N, r) for N in (2, 3, 4, 0) for r in (Fraction(1), INF)]
    for i in range(count):
        N, r = combos[i % len(combos)]
        G = gen.random_shape(rng, 16, N)
        D = gen.random_value(rng, G, log2_den, r, N)
        f = gen.random_katetov(rng, D, rng.randint(1, min(3, G.order)), log2_den, r, N)
        try:
            ext = extend_onegen(D, f, N, r)
        except Exception as exc:  # pragma: no cover - reported, not hidden
            fails.append((i, "raised", repr(exc)))
            continue
        R = ext.result
        big = R.group
        k = G.rank
        try:
            validate_value(big, R.table, r, N)
        except Exception as exc:  # pragma: no cover
            fails.append((i, "value", repr(exc)))
        if any(R(x + (0,)) != D(x) for x in G.elements):
            fails.append((i, "restriction"))
        if any(R(big.sub(a + (0,), ext.witness)) != v for a, v in f.f.items()):
            fails.append((i, "distances"))
        if N and not big.has_exponent(N):
            fails.append((i, "exponent"))
        if r == 1 and max(R.table) > 1:
            fails.append((i, "cap"))
        if not all(is_on_grid(t, log2_den) for t in R.table):
            fails.append((i, "grid"))
        if len(big.factors) and big.rank != k + 1:
            fails.append((i, "shape"))
    return SuiteResult("one_point_extensions", not fails, f"{count - len({f[0] for f in fails})}/{count} instances exact", failures=fails)


# -- 4, 5, 6 --------------------------------------------------------------------


@_timed
def matching_closed_form(seed: int, count: int = 100) -> SuiteResult:
    """For ``N = 2`` the free value is a minimum perfect matching."""
    rng = gen.stream(seed, "matching")
    fails = []
    checked = 0
    for i in range(count):
        X = gen.random_metric_space(rng, rng.randint(2, 6))
        fvg = free_group(X, 2)
        for x in fvg.carrier.elements:
            if x == fvg.carrier.zero:
                continue
            checked += 1
            if pd_matching(fvg, x) != fvg(x):
                fails.append((i, x))
    return SuiteResult("matching_closed_form", not fails, f"{checked} elements on {count} spaces, {len(fails)} mismatches", failures=fails)


@_timed
def point_isometry(seed: int, count: int = 50) -> SuiteResult:
    """``p_d(x^ - y^) = d(x, y)`` for ``N = 2, 3, 4``."""
    rng = gen.stream(seed, "pd-d")
    fails = []
    for N in (2, 3, 4):
        for i in range(count):
            X = gen.random_metric_space(rng, rng.randint(2, 4))
            fvg = free_group(X, N)
            for a, b in itertools.product(X.points, repeat=2):
                if fvg(fvg.hat_diff(a, b)) != X.dist(a, b):
                    fails.append((N, i, a, b))
    return SuiteResult("point_isometry", not fails, f"{3 * count} spaces, {len(fails)} mismatches", failures=fails)


def odd_instance() -> tuple:
    """Four points: ``0`` at distance 1/2 from each of ``1, 2, 3``, which are
    pairwise at distance 1."""
    pairs = {(0, j): HALF for j in (1, 2, 3)}
    pairs.update({(1, 2): Fraction(1), (1, 3): Fraction(1), (2, 3): Fraction(1)})
    X = FiniteMetricSpace.from_pairs((0, 1, 2, 3), pairs)
    A = X.subspace((1, 2, 3))
    return X, A


@_timed
def odd_example(seed: int) -> SuiteResult:
    """Inclusion of free groups that is not isometric when ``N = 3``."""
    X, A = odd_instance()
    big, small = free_group(X, 3), free_group(A, 3)
    f_small = small.element({1: 1, 2: 1, 3: 1})
    f_big = big.element({1: 1, 2: 1, 3: 1})
    inc = free_inclusion(small, big)
    vals = {"small": small(f_small), "big": big(f_big)}
    ok = vals == {"small": 2, "big": Fraction(3, 2)} and inc(f_small) == f_big
    return SuiteResult("odd_example", ok, f"value {vals['small']} in Z3[A], {vals['big']} in Z3[X]", details=vals)


# -- 7 -------------------------------------------------------------------------


def _extra_for(rng, N: int, room: int) -> tuple:
    opts = [s for s in group_shapes(room, N) if s]
    return rng.choice(opts) if opts else ()


@_timed
def amalgamation(seed: int, n1: int = 200, n2: int = 50, n3: int = 50, log2_den: int = 3) -> SuiteResult:
    """Exact, approximate and mixed amalgams on random instances."""
    rng = gen.stream(seed, "amalgam")
    fails = []
    for i in range(n1):
        N = rng.choice((2, 3, 4, 0))
        r = rng.choice((Fraction(1), INF))
        G0 = gen.random_shape(rng, 4, N)
        D0 = gen.random_value(rng, G0, log2_den, r, N)
        room = 16 // G0.order
        D1, i1 = gen.embed_with_room(rng, D0, _extra_for(rng, N, room), log2_den, r, N)
        D2, i2 = gen.embed_with_room(rng, D0, _extra_for(rng, N, room), log2_den, r, N)
        autos = gen.isometric_automorphisms(D0, 200)
        sigma = rng.choice(autos)
        phi2 = {x: i2(sigma(x)) for x in G0.elements}
        try:
            res = amalgamate(D0, D1, D2, i1, phi2, r, N)
        except Exception as exc:  # pragma: no cover
            fails.append(("A1", i, repr(exc)))
            continue
        R, p1, p2 = res.result, res.psi1, res.psi2
        if any(R(p1(x)) != D1(x) for x in D1.group.elements) or any(R(p2(x)) != D2(x) for x in D2.group.elements):
            fails.append(("A1", i, "isometry"))
        if any(p1(i1(x)) != p2(phi2[x]) for x in G0.elements):
            fails.append(("A1", i, "square"))
        if (N and not R.group.has_exponent(N)) or (r == 1 and max(R.table) > 1):
            fails.append(("A1", i, "class"))
        if not all(is_on_grid(t, log2_den) for t in R.table):
            fails.append(("A1", i, "grid"))
        # fiber oracle on a sample of pairs
        m1 = i1.mapping
        for _ in range(8):
            x1 = rng.choice(D1.group.elements)
            x2 = rng.choice(D2.group.elements)
            want = amalgam_fiber_value(D1, D2, m1, phi2, G0.elements, x1, D2.group.neg(x2))
            want = min(want, r)
            got = R(R.group.sub(p1(x1), p2(x2)))
            if got != want:
                fails.append(("A1", i, "fiber", x1, x2, got, want))
    bounds = []
    for i in range(n2):
        N = rng.choice((2, 3, 4, 0))
        r = rng.choice((Fraction(1), INF))
        G1 = gen.random_shape(rng, 8, N)
        D1 = gen.random_value(rng, G1, log2_den, r, N)
        K = gen.random_subgroup(rng, G1)
        eps = Fraction(rng.randint(1, 4), 8)
        D2a = gen.perturb_value(rng, D1, K, eps, log2_den)
        D2, inc = gen.embed_with_room(rng, D2a, _extra_for(rng, N, 16 // G1.order), log2_den, r, N)
        u = {x: inc(x) for x in K.elements}
        v = inc.mapping
        try:
            res = amalgamate_approx(D1, K, D2, u, v, eps, r, N)
        except Exception as exc:  # pragma: no cover
            fails.append(("A2", i, repr(exc)))
            continue
        d = res.diagnostics
        bound = (1 + D1.diameter()) * eps
        bounds.append((d["sup_distance"], bound))
        if d["sup_distance"] > bound:
            fails.append(("A2", i, "bound"))
        R, w1, w2 = res.result, res.psi1, res.psi2
        if any(R(w1(x)) != D1(x) for x in G1.elements) or any(R(w2(x)) != D2(x) for x in D2.group.elements):
            fails.append(("A2", i, "isometry"))
        if any(w1(x) != w2(u[x]) for x in K.elements):
            fails.append(("A2", i, "agreement"))
    for i in range(n3):
        N = rng.choice((2, 3, 4, 0))
        r = rng.choice((Fraction(1), INF))
        G1 = gen.random_shape(rng, 8, N)
        D1 = gen.random_value(rng, G1, log2_den, r, N)
        D2, inc = gen.embed_with_room(rng, D1, _extra_for(rng, N, 16 // G1.order), log2_den, r, N)
        E1, E2 = gen.random_subgroup(rng, G1), gen.random_subgroup(rng, G1)
        sigma = rng.choice(gen.isometric_automorphisms(D1, 200))
        phi1 = {x: inc(x) for x in E1.elements}
        phi2 = {x: inc(sigma(x)) for x in E2.elements}
        H2 = D2.group
        defect = max(
            abs(D2(H2.sub(phi1[a], phi2[b])) - D1(G1.sub(a, b))) for a in E1.elements for b in E2.elements
        )
        eps = max(defect, Fraction(1, 8))
        try:
            res = amalgamate_mixed(D1, E1, E2, D2, phi1, phi2, eps, r, N)
        except Exception as exc:  # pragma: no cover
            fails.append(("A3", i, repr(exc)))
            continue
        R, p1, p2 = res.result, res.psi1, res.psi2
        if any(p2(phi1[x]) != p1(x) for x in E1.elements):
            fails.append(("A3", i, "exact part"))
        if res.diagnostics["sup_distance"] > eps:
            fails.append(("A3", i, "bound"))
        if any(R(p1(x)) != D1(x) for x in G1.elements) or any(R(p2(x)) != D2(x) for x in H2.elements):
            fails.append(("A3", i, "isometry"))
    worst = max((Fraction(a) / b for a, b in bounds if b), default=Fraction(0))
    summary = f"A1 {n1}, A2 {n2} (worst sup/bound {worst}), A3 {n3}; {len(fails)} failures"
    return SuiteResult("amalgamation", not fails, summary, details={"a2_bounds": bounds}, failures=fails)


# -- 8 -------------------------------------------------------------------------


@_timed
def completion_oracle(seed: int, per_group: int = 100, max_order: int = 8) -> SuiteResult:
    """Shortest-path completion against bounded-length relaxation."""
    rng = gen.stream(seed, "completion")
    fails = []
    shapes = group_shapes(max_order, 0)
    for shape in shapes:
        G = FiniteAbelianGroup(shape)
        for i in range(per_group):
            c = gen.random_cost(rng, G)
            if complete_cost(c).table != completion_by_relaxation(c):
                fails.append((shape, i))
    return SuiteResult("completion_oracle", not fails, f"{len(shapes)} groups x {per_group} costs, {len(fails)} mismatches", failures=fails)


# -- 9 -------------------------------------------------------------------------

CHAIN_CONFIG = {"grid_denominator_log2": 2, "cap": "1", "N": 2, "max_order": 4, "rounds": 1}


def run_chain(config: dict = CHAIN_CONFIG):
    from .rational import parse_rational

    cat = enumerate_catalog(config["grid_denominator_log2"], config["N"], parse_rational(config["cap"]), config["max_order"])
    return build_chain(cat, config["rounds"])


@_timed
def fraisse_truncation(seed: int, config: dict = CHAIN_CONFIG) -> SuiteResult:
    """Drained chain: ledger and embedding tasks all hold; output is stable."""
    chain = run_chain(config)
    led = verify_ledger(chain)
    emb = verify_embeddings(chain.final, chain.catalog)
    text = chain_json_text(chain)
    again = chain_json_text(run_chain(config))
    digest = hashlib.sha256(text.encode()).hexdigest()
    ok = chain.complete and led.ratio == 1 and emb.ratio == 1 and text == again and led.total > 0
    summary = (
        f"{len(chain.catalog)} entries, final order {chain.final.group.order}, "
        f"ledger {led.satisfied}/{led.total}, embeddings {emb.satisfied}/{emb.total}, sha256 {digest[:12]}"
    )
    return SuiteResult("fraisse_truncation", ok, summary, details={"sha256": digest, "order": chain.final.group.order})


# -- 10 ------------------------------------------------------------------------


@_timed
def modulus_extension(seed: int, count: int = 100, log2_den: int = 2) -> SuiteResult:
    """Value extension below ``omega o lam`` with the lower-bound triple."""
    rng = gen.stream(seed, "modulus")
    fails = []
    for i in range(count):
        r = rng.choice((Fraction(1), INF))
        G = gen.random_shape(rng, 8, 0)
        D = gen.random_value(rng, G, 3, r, 0)
        D0 = gen.random_subgroup(rng, G)
        Z0 = rng.choice([K for K in all_subgroups(G) if set(K.elements) <= set(D0.elements)])
        w, rho, tau = build_ort_triple(
            gen.random_modulus(rng, log2_den), gen.random_modulus(rng, log2_den), gen.random_modulus(rng, log2_den), r
        )
        if not check_ort(w, rho, tau, r):
            fails.append((i, "ort"))
            continue

        def dist(x, zs):
            return min(D(G.sub(x, z)) for z in zs)

        lam0 = {h: w(dist(h, Z0.elements)) for h in D0.elements}
        try:
            out = extend_semivalue_modulus(D, D0, lam0, w, rho, tau, r)
        except Exception as exc:  # pragma: no cover
            fails.append((i, repr(exc)))
            continue
        try:
            validate_semivalue(G, out.table)
        except Exception:
            fails.append((i, "semivalue"))
        zeros = [h for h, v in lam0.items() if v == 0]
        capped = r != INF and max(lam0.values()) <= r
        for x, v in zip(G.elements, out.table):
            if v > w(D(x)) or (x in lam0 and v != lam0[x]):
                fails.append((i, "a", x))
            if (v == 0) != (x in zeros):
                fails.append((i, "b", x))
            if capped and v > r:
                fails.append((i, "c", x))
            if tau(dist(x, zeros)) > rho(v):
                fails.append((i, "e", x))
    return SuiteResult("modulus_extension", not fails, f"{count} instances, {len(fails)} violations", failures=fails)


# -- 11 ------------------------------------------------------------------------


def random_step_function(rng, H: ValuedGroup, pieces: int = 4) -> StepFunction:
    t = Fraction(0)
    out = []
    for _ in range(pieces):
        t += Fraction(rng.randint(1, 12), rng.choice((1, 2, 3, 4)))
        out.append((t, rng.choice(H.group.elements)))
    return StepFunction(H, tuple(out))


@_timed
def step_functions(seed: int, count: int = 100) -> SuiteResult:
    """Homogeneity, Lipschitz generators, norming functions, negative control."""
    rng = gen.stream(seed, "pv")
    fails = []
    for i in range(count):
        G = gen.random_shape(rng, 8, 0, min_order=2)
        H = gen.random_value(rng, G, 3, rng.choice((Fraction(1), INF)), 0)
        u = random_step_function(rng, H, rng.randint(1, 5))
        t = Fraction(rng.randint(0, 20), rng.randint(1, 6))
        s = Fraction(rng.randint(0, 20), rng.randint(1, 6))
        if u.act(t).norm() != t * u.norm():
            fails.append((i, "homogeneity"))
        h = rng.choice(G.elements)
        hh = StepFunction.hat(H, h)
        if (hh.act(t) - hh.act(s)).norm() != abs(t - s) * H(h):
            fails.append((i, "lipschitz"))
    certs = {}
    for name, k in (("nabla", nabla()), ("id", identity())):
        try:
            certs[name] = norming_validate(k)
        except Exception as exc:
            fails.append(("norming", name, repr(exc)))
    G = FiniteAbelianGroup([2])
    H = ValuedGroup(G, (Fraction(0), Fraction(1)), 1, 2)
    g = (1,)
    samples = [StepFunction.hat(H, g), StepFunction.hat(H, g).act(3)]
    ts = [HALF, 1, 2, 10]
    honest = check_kappa_norm(samples, nabla(), ts)
    bad = check_kappa_norm(samples, nabla(), ts, corrupted_norm(H, g))
    if not honest.ok or not honest.homogeneous:
        fails.append(("honest control",))
    if bad.ok:
        fails.append(("corrupted control not caught",))
    summary = f"{count} step functions; nabla/id certified: {sorted(certs)}; corrupted control violations: {len(bad.violations)}"
    return SuiteResult("step_functions", not fails, summary, failures=fails)


# -- 12 ------------------------------------------------------------------------


@_timed
def three_point_exponent4(seed: int, count: int = 500) -> SuiteResult:
    """Three-point inner Katetov maps on exponent-4 groups satisfy the N=4 condition.

    This is an empirical check; failures are listed for manual review.
    """
    rng = gen.stream(seed, "three-point")
    fails = []
    for i in range(count):
        G = gen.random_shape(rng, 16, 4, min_order=3)
        r = rng.choice((Fraction(1), INF))
        D = gen.random_value(rng, G, 3, r, 4)
        f = gen.random_katetov(rng, D, 3, 3, r, None, positive=False, bound=D.diameter())
        ok, w = check_trvN(f, 4)
        if not ok:
            fails.append({"group": G.factors, "values": D.table, "f": f.f, "witness": w})
    return SuiteResult("three_point_exponent4", not fails, f"{count - len(fails)}/{count} maps satisfy the condition", failures=fails)


SUITES = {
    "word-metric": word_metric_norms,
    "katetov": katetov_counterexamples,
    "extension": one_point_extensions,
    "matching": matching_closed_form,
    "point-isometry": point_isometry,
    "odd-inclusion": odd_example,
    "amalgam": amalgamation,
    "completion": completion_oracle,
    "fraisse": fraisse_truncation,
    "modulus": modulus_extension,
    "step-functions": step_functions,
    "three-point": three_point_exponent4,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed)


__all__ = ["DEFAULT_SEED", "SUITES", "SuiteResult", "run_suite"]
