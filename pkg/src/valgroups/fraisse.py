"""Finite-depth approximation of the universal grid-valued group.

A :class:`Catalog` lists the finite grid-valued groups of bounded order up
to isometric isomorphism.  :func:`build_chain` grows a group by repeated
amalgamation until every scheduled extension task is satisfied, and
:func:`verify_extension_property` re-checks tasks against a final group.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .amalgam import amalgamate
from .errors import BudgetError, PreconditionError
from .groups import (
    FiniteAbelianGroup,
    GroupHom,
    Subgroup,
    all_subgroups,
    automorphisms,
    subgroup_from_elements,
)
from .rational import INF, as_rational, format_rational
from .values import ValuedGroup, canonical_table, find_isometric_hom, validate_value


# -- catalog -----------------------------------------------------------------


def group_shapes(max_order: int, N: int = 0) -> list:
    """Invariant-factor lists ``d_1 | d_2 | ...`` (all ``>= 2``) of order
    ``<= max_order``, each ``d_i`` dividing ``N`` when ``N != 0``."""
    out = [()]

    def extend(prefix, order):
        last = prefix[-1] if prefix else 1
        d = max(last, 2)
        while order * d <= max_order:
            if N == 0 or N % d == 0:
                shape = prefix + (d,)
                out.append(shape)
                extend(shape, order * d)
            d += last

    extend((), 1)
    return sorted(out, key=lambda s: (math.prod(s), s))


def _grid_values(log2_denominator: int, top: Fraction) -> list:
    step = Fraction(1, 2**log2_denominator)
    return [step * k for k in range(1, int(top / step) + 1)]


def grid_values_on(G: FiniteAbelianGroup, values: list) -> Iterator[tuple]:
    """All values on ``G`` with nonzero entries from ``values``.

    Pairs ``{x, -x}`` are assigned in index order; each new pair is checked
    against every triangle ``x, y, x + y`` whose three entries are known.
    """
    n = G.order
    neg = [int(i) for i in G.neg_indices]
    add = G.sum_indices(slice(0, n)).tolist()
    reps = [i for i in range(1, n) if neg[i] >= i]
    table: list = [None] * n
    table[0] = Fraction(0)

    def ok(i):
        for x in (i, neg[i]):
            tx = table[x]
            for y in range(n):
                ty = table[y]
                if ty is None:
                    continue
                tz = table[add[x][y]]
                if tz is None:
                    continue
                if tz > tx + ty or tx > tz + ty or ty > tz + tx:
                    return False
        return True

    def rec(pos):
        if pos == len(reps):
            yield tuple(table)
            return
        i = reps[pos]
        for v in values:
            table[i] = table[neg[i]] = v
            if ok(i):
                yield from rec(pos + 1)
        table[i] = table[neg[i]] = None

    yield from rec(0)


@dataclass
class Catalog:
    log2_denominator: int
    N: int
    cap: object
    max_order: int
    value_bound: Fraction | None
    entries: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def counts_by_order(self) -> dict:
        out: dict = {}
        for e in self.entries:
            out[e.group.order] = out.get(e.group.order, 0) + 1
        return out


def enumerate_catalog(
    log2_denominator: int,
    N: int,
    r,
    max_order: int = 4,
    value_bound=None,
    budget: int = 10**6,
) -> Catalog:
    """One representative per isometric-isomorphism class of grid-valued
    groups of order ``<= max_order`` in the class ``(r, N)``.

    Representatives carry the least value table over automorphisms.  With
    ``r = inf`` the grid is unbounded, so ``value_bound`` is required.
    """
    r = as_rational(r)
    if r == INF:
        if value_bound is None:
            raise PreconditionError("an unbounded class needs value_bound to make the grid finite")
        top = as_rational(value_bound)
    else:
        top = Fraction(1) if value_bound is None else min(as_rational(value_bound), Fraction(1))
    values = _grid_values(log2_denominator, top)
    cat = Catalog(log2_denominator, N, r, max_order, None if value_bound is None else as_rational(value_bound))
    seen = 0
    for shape in group_shapes(max_order, N):
        G = FiniteAbelianGroup(shape)
        autos = automorphisms(G)
        canon = set()
        for table in grid_values_on(G, values):
            seen += 1
            if seen > budget:
                raise BudgetError(f"catalog enumeration exceeded {budget} tables", cat)
            key = canonical_table(ValuedGroup(G, table, r, N), autos)
            canon.add(key)
        for key in sorted(canon):
            cat.entries.append(validate_value(G, key, r, N))
    return cat


# -- chain ---------------------------------------------------------------------


@dataclass(frozen=True)
class Task:
    """Extend ``phi: K -> G_stage`` (``K <= catalog[h]``) to ``catalog[h]``."""

    h: int
    K: tuple  # sorted elements of K inside H
    phi: tuple  # images of K's elements (same order), in G_stage
    stage: int

    def key(self):
        return (self.h, self.K, self.phi, self.stage)


@dataclass
class LedgerEntry:
    task: Task
    satisfied_at: int
    psi: tuple  # images of H.elements in G_{satisfied_at}
    amalgamated: bool


@dataclass
class Chain:
    catalog: Catalog
    stages: list
    links: list  # links[i]: GroupHom stages[i] -> stages[i+1]
    ledger: list
    unsatisfied: list = field(default_factory=list)
    complete: bool = True

    @property
    def final(self) -> ValuedGroup:
        return self.stages[-1]

    def carry(self, x, start: int, end: int | None = None):
        """Image of ``x`` in stage ``end`` (default: final) under the links."""
        end = len(self.stages) - 1 if end is None else end
        for i in range(start, end):
            x = self.links[i](x)
        return x

    def link_to(self, start: int, end: int | None = None) -> GroupHom:
        src = self.stages[start].group
        end = len(self.stages) - 1 if end is None else end
        return GroupHom(src, self.stages[end].group, {x: self.carry(x, start, end) for x in src.elements})


def _isometric_autos(H: ValuedGroup, autos) -> list:
    return [a for a in autos if all(H(a(x)) == H(x) for x in H.group.elements)]


def _task_key(task: Task, H: ValuedGroup, iso_autos) -> tuple:
    """Canonical key of a task up to isometric automorphisms of ``H``."""
    best = None
    phi = dict(zip(task.K, task.phi))
    for a in iso_autos:
        moved = sorted((a(k), phi[k]) for k in task.K)
        key = (tuple(m[0] for m in moved), tuple(m[1] for m in moved))
        if best is None or key < best:
            best = key
    return (task.h,) + best


def _extension(H: ValuedGroup, G: ValuedGroup, fixed: dict):
    return find_isometric_hom(H, G, fixed=fixed, injective=True)


def _largest_partial(H: ValuedGroup, G: ValuedGroup, K: Subgroup, phi: dict, subgroups: list):
    """Largest ``K' >= K`` with an isometric ``phi' : K' -> G`` extending ``phi``."""
    best = (K, phi)
    for S in sorted(subgroups, key=lambda S: (-S.order, S.elements)):
        if S.order <= K.order:
            break
        if not set(K.elements) <= set(S.elements):
            continue
        C, emb = S.canonical()
        sub = ValuedGroup(C, tuple(H(emb(x)) for x in C.elements), H.cap, H.exponent)
        inv = {emb(x): x for x in C.elements}
        fixed = {inv[k]: v for k, v in phi.items()}
        hom = find_isometric_hom(sub, G, fixed=fixed, injective=True)
        if hom is not None:
            return S, {emb(x): hom(x) for x in C.elements}
    return best


def _round_tasks(catalog: Catalog, G: ValuedGroup, stage: int, first: bool, limit: int) -> list:
    """Tasks generated against ``G``: trivial ``K`` in the first round,
    nontrivial ``K`` with every isometric ``phi: K -> G`` afterwards."""
    tasks = []
    for h, H in enumerate(catalog.entries):
        HG = H.group
        if first:
            tasks.append(Task(h, (HG.zero,), (G.group.zero,), stage))
            continue
        iso = _isometric_autos(H, automorphisms(HG))
        seen = set()
        for K in all_subgroups(HG):
            if K.order == 1:
                continue
            C, emb = K.canonical()
            sub = ValuedGroup(C, tuple(H(emb(x)) for x in C.elements), H.cap, H.exponent)
            for hom in _all_isometric(sub, G):
                t = Task(h, K.elements, tuple(hom(x) for x in _pre(emb, K.elements)), stage)
                key = _task_key(t, H, iso)
                if key in seen:
                    continue
                seen.add(key)
                tasks.append(t)
                if len(tasks) > limit:
                    raise BudgetError(f"more than {limit} tasks against stage {stage}", tasks)
    return tasks


def _pre(emb: GroupHom, elements) -> list:
    inv = {emb(x): x for x in emb.source.elements}
    return [inv[k] for k in elements]


def _all_isometric(H: ValuedGroup, G: ValuedGroup) -> Iterator[GroupHom]:
    """Every injective isometric homomorphism ``H -> G``."""
    HG, GG = H.group, G.group
    cands = []
    for i, n in enumerate(HG.factors):
        u = tuple(1 if j == i else 0 for j in range(HG.rank))
        cands.append([g for g, v in zip(GG.elements, G.table) if v == H(u) and GG.mul(n, g) == GG.zero])
    for images in itertools.product(*cands):
        mapping = {}
        ok = True
        for x in HG.elements:
            acc = GG.zero
            for c, g in zip(x, images):
                if c:
                    acc = GG.add(acc, GG.mul(c, g))
            if G(acc) != H(x):
                ok = False
                break
            mapping[x] = acc
        if ok and len(set(mapping.values())) == len(mapping):
            yield GroupHom(HG, GG, mapping)


def build_chain(catalog: Catalog, rounds: int = 1, max_tasks: int = 10**5, max_order: int = 2**16) -> Chain:
    """Grow ``G_0 = {0}`` until every task of the first ``rounds`` rounds holds.

    Round 0 asks for an isometric copy of every catalog entry; round ``k``
    asks to extend every isometric ``phi: K -> G`` (``K`` a nontrivial
    subgroup of an entry, ``G`` the group at the start of the round).  Tasks
    are processed first-in first-out.  An unsatisfied task is solved by
    amalgamating the current group with ``H`` over the largest subgroup of
    ``H`` on which ``phi`` extends isometrically.
    """
    r, N = catalog.cap, catalog.N
    T = FiniteAbelianGroup.trivial()
    G0 = ValuedGroup(T, (Fraction(0),), r, N)
    chain = Chain(catalog, [G0], [], [])
    subgroup_cache = {h: all_subgroups(H.group) for h, H in enumerate(catalog.entries)}
    for rnd in range(rounds):
        stage = len(chain.stages) - 1
        try:
            tasks = _round_tasks(catalog, chain.final, stage, rnd == 0, max_tasks)
        except BudgetError as exc:
            chain.unsatisfied.extend(exc.partial)
            chain.complete = False
            return chain
        queue = deque(tasks)
        while queue:
            task = queue.popleft()
            H = catalog.entries[task.h]
            HG = H.group
            cur = len(chain.stages) - 1
            G = chain.final
            phi = {k: chain.carry(v, task.stage, cur) for k, v in zip(task.K, task.phi)}
            psi = _extension(H, G, phi)
            if psi is not None:
                chain.ledger.append(LedgerEntry(task, cur, tuple(psi(x) for x in HG.elements), False))
                continue
            K = subgroup_from_elements(HG, task.K)
            Kp, phip = _largest_partial(H, G, K, phi, subgroup_cache[task.h])
            C, emb = Kp.canonical()
            D0 = ValuedGroup(C, tuple(H(emb(x)) for x in C.elements), r, N)
            phi1 = GroupHom(C, G.group, {x: phip[emb(x)] for x in C.elements})
            phi2 = GroupHom(C, HG, {x: emb(x) for x in C.elements})
            if G.group.order * HG.order // C.order > max_order:
                chain.unsatisfied.append(task)
                chain.unsatisfied.extend(queue)
                chain.complete = False
                return chain
            res = amalgamate(D0, G, H, phi1, phi2, r, N)
            chain.stages.append(res.result)
            chain.links.append(res.psi1)
            nxt = len(chain.stages) - 1
            chain.ledger.append(LedgerEntry(task, nxt, tuple(res.psi2(x) for x in HG.elements), True))
    return chain


# -- verification --------------------------------------------------------------


@dataclass
class ExtensionReport:
    satisfied: int = 0
    unsatisfied: int = 0
    complete: bool = True
    failures: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.satisfied + self.unsatisfied

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.satisfied, self.total) if self.total else Fraction(1)


def verify_ledger(chain: Chain) -> ExtensionReport:
    """Re-check every ledger entry: the recorded ``psi`` carried to the final
    group must be isometric and extend the task's ``phi``; independently a
    fresh extension search must succeed in the final group."""
    rep = ExtensionReport()
    G = chain.final
    last = len(chain.stages) - 1
    for entry in chain.ledger:
        t = entry.task
        H = chain.catalog.entries[t.h]
        psi = {x: chain.carry(y, entry.satisfied_at, last) for x, y in zip(H.group.elements, entry.psi)}
        phi = {k: chain.carry(v, t.stage, last) for k, v in zip(t.K, t.phi)}
        hom = GroupHom(H.group, G.group, psi)
        good = (
            hom.is_additive()
            and all(G(psi[x]) == H(x) for x in psi)
            and all(psi[k] == v for k, v in phi.items())
            and _extension(H, G, phi) is not None
        )
        if good:
            rep.satisfied += 1
        else:
            rep.unsatisfied += 1
            rep.failures.append(t)
    return rep


def verify_embeddings(G: ValuedGroup, catalog: Catalog) -> ExtensionReport:
    """Does every catalog entry embed isometrically into ``G``?"""
    rep = ExtensionReport()
    for h, H in enumerate(catalog.entries):
        if _extension(H, G, {H.group.zero: G.group.zero}) is not None:
            rep.satisfied += 1
        else:
            rep.unsatisfied += 1
            rep.failures.append(h)
    return rep


def verify_extension_property(G: ValuedGroup, catalog: Catalog, hom_budget: int = 10**5) -> ExtensionReport:
    """For every entry ``H``, subgroup ``K`` and isometric ``phi: K -> G``,
    search an isometric ``psi: H -> G`` extending ``phi``."""
    rep = ExtensionReport()
    checked = 0
    for h, H in enumerate(catalog.entries):
        HG = H.group
        for K in all_subgroups(HG):
            C, emb = K.canonical()
            sub = ValuedGroup(C, tuple(H(emb(x)) for x in C.elements), H.cap, H.exponent)
            for hom in _all_isometric(sub, G):
                checked += 1
                if checked > hom_budget:
                    rep.complete = False
                    return rep
                phi = {emb(x): hom(x) for x in C.elements}
                if _extension(H, G, phi) is not None:
                    rep.satisfied += 1
                else:
                    rep.unsatisfied += 1
                    rep.failures.append((h, K.elements, tuple(sorted(phi.items()))))
    return rep


# -- export --------------------------------------------------------------------


def _valued_json(v: ValuedGroup) -> dict:
    from .serialize import valued_group_to_json

    return valued_group_to_json(v)


def chain_to_json(chain: Chain) -> dict:
    from .serialize import hom_to_json

    cat = chain.catalog
    return {
        "config": {
            "grid_denominator_log2": cat.log2_denominator,
            "cap": format_rational(cat.cap) if cat.cap != INF else "inf",
            "N": cat.N,
            "max_order": cat.max_order,
        },
        "catalog": [_valued_json(e) for e in cat.entries],
        "stages": [_valued_json(s) for s in chain.stages],
        "links": [hom_to_json(l) for l in chain.links],
        "ledger": [
            {
                "entry": e.task.h,
                "K": [list(k) for k in e.task.K],
                "phi": [list(v) for v in e.task.phi],
                "stage": e.task.stage,
                "satisfied_at": e.satisfied_at,
                "psi": [list(y) for y in e.psi],
                "amalgamated": e.amalgamated,
            }
            for e in chain.ledger
        ],
        "unsatisfied": [
            {"entry": t.h, "K": [list(k) for k in t.K], "phi": [list(v) for v in t.phi], "stage": t.stage}
            for t in chain.unsatisfied
        ],
        "complete": chain.complete,
    }


def chain_from_json(obj: dict) -> Chain:
    """Inverse of :func:`chain_to_json`; stages are re-validated."""
    from .errors import SchemaError
    from .serialize import hom_from_json, rational_from_json, valued_group_from_json

    cfg = obj.get("config")
    if not isinstance(cfg, dict):
        raise SchemaError("$.config", "missing chain configuration")
    try:
        cap = rational_from_json(cfg["cap"], "$.config.cap")
        cat = Catalog(cfg["grid_denominator_log2"], cfg["N"], cap, cfg["max_order"], None)
    except KeyError as exc:
        raise SchemaError(f"$.config.{exc.args[0]}", "missing") from exc
    cat.entries = [valued_group_from_json(e, f"$.catalog[{i}]") for i, e in enumerate(obj.get("catalog", []))]
    stages = [valued_group_from_json(e, f"$.stages[{i}]") for i, e in enumerate(obj.get("stages", []))]
    if not stages:
        raise SchemaError("$.stages", "a chain has at least one stage")
    links = [hom_from_json(h, f"$.links[{i}]") for i, h in enumerate(obj.get("links", []))]
    if len(links) != len(stages) - 1:
        raise SchemaError("$.links", "need one link per consecutive pair of stages")
    links = [GroupHom(stages[i].group, stages[i + 1].group, l.mapping) for i, l in enumerate(links)]

    def task_of(e, path):
        try:
            return Task(e["entry"], tuple(tuple(k) for k in e["K"]), tuple(tuple(v) for v in e["phi"]), e["stage"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(path, "malformed task") from exc

    ledger = []
    for i, e in enumerate(obj.get("ledger", [])):
        t = task_of(e, f"$.ledger[{i}]")
        ledger.append(LedgerEntry(t, e["satisfied_at"], tuple(tuple(y) for y in e["psi"]), bool(e["amalgamated"])))
    unsat = [task_of(e, f"$.unsatisfied[{i}]") for i, e in enumerate(obj.get("unsatisfied", []))]
    return Chain(cat, stages, links, ledger, unsat, bool(obj.get("complete", not unsat)))


def verify_links(chain: Chain) -> list:
    """Indices of links that are not isometric homomorphisms."""
    bad = []
    for i, l in enumerate(chain.links):
        A, B = chain.stages[i], chain.stages[i + 1]
        if not l.is_additive() or any(B(l(x)) != A(x) for x in A.group.elements):
            bad.append(i)
    return bad


def stage_satisfaction(chain: Chain, tasks: list | None = None) -> list:
    """Per stage, how many of ``tasks`` (default: the ledger's) already hold
    there; a task posed at stage ``s`` counts as unsatisfied before ``s``."""
    tasks = [e.task for e in chain.ledger] if tasks is None else tasks
    out = []
    for j, G in enumerate(chain.stages):
        n = 0
        for t in tasks:
            if t.stage > j:
                continue
            H = chain.catalog.entries[t.h]
            phi = {k: chain.carry(v, t.stage, j) for k, v in zip(t.K, t.phi)}
            n += _extension(H, G, phi) is not None
        out.append(n)
    return out


def chain_to_dot(chain: Chain) -> str:
    lines = ["digraph chain {", "  rankdir=LR;"]
    for i, s in enumerate(chain.stages):
        fac = "x".join(f"Z{n}" for n in s.group.factors) or "0"
        lines.append(f'  G{i} [label="G{i}\\n{fac}\\n|G|={s.group.order}"];')
    for i in range(len(chain.links)):
        lines.append(f"  G{i} -> G{i + 1};")
    for j, e in enumerate(chain.ledger):
        if e.amalgamated:
            lines.append(f'  H{j} [shape=box,label="H{e.task.h}"];')
            lines.append(f"  H{j} -> G{e.satisfied_at} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def chain_json_text(chain: Chain) -> str:
    return json.dumps(chain_to_json(chain), sort_keys=True, indent=1) + "\n"


__all__ = [
    "Catalog",
    "Chain",
    "ExtensionReport",
    "LedgerEntry",
    "Task",
    "build_chain",
    "chain_json_text",
    "chain_to_dot",
    "chain_from_json",
    "chain_to_json",
    "enumerate_catalog",
    "group_shapes",
    "grid_values_on",
    "verify_embeddings",
    "verify_extension_property",
    "stage_satisfaction",
    "verify_ledger",
    "verify_links",
]
