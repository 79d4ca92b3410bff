import hashlib
import re
from collections import Counter
from fractions import Fraction as F

import pytest

from valgroups.fraisse import (
    Catalog,
    build_chain,
    chain_from_json,
    chain_json_text,
    chain_to_dot,
    chain_to_json,
    enumerate_catalog,
    group_shapes,
    stage_satisfaction,
    verify_embeddings,
    verify_extension_property,
    verify_ledger,
    verify_links,
)
from valgroups.groups import FiniteAbelianGroup
from valgroups.rational import INF
from valgroups.values import canonical_table, isometric_isomorphic, validate_value

GOLDEN_QUARTER_SHA = "7cbe65c25a3a0edbd10c357ba53fc43492f409241634dd610375e2d7502b3ab3"
GOLDEN_HALF_SHA = "6f1b24e1b9b997cd3331fbf4800e80cb049bc182faa99775be63e2feae0f5a46"


@pytest.fixture(scope="module")
def half_chain():
    return build_chain(enumerate_catalog(1, 2, F(1), 2))


@pytest.fixture(scope="module")
def quarter_chain():
    return build_chain(enumerate_catalog(2, 2, F(1), 4))


def test_group_shapes():
    assert group_shapes(4, 2) == [(), (2,), (2, 2)]
    assert sorted(group_shapes(8)) == sorted([(), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2)])


def test_catalog_sizes():
    assert len(enumerate_catalog(1, 2, F(1), 1)) == 1
    small = enumerate_catalog(1, 2, F(1), 2)
    assert len(small) == 3
    assert sorted(tuple(e.table) for e in small.entries) == [(0,), (0, F(1, 2)), (0, 1)]
    assert len(enumerate_catalog(1, 2, F(1), 4)) == 7
    big = enumerate_catalog(2, 2, F(1), 4)
    assert len(big) == 22
    assert big.counts_by_order() == {1: 1, 2: 4, 4: 17}


def test_catalog_entries_distinct_up_to_isometry():
    cat = enumerate_catalog(2, 2, F(1), 4)
    keys = {(e.group.factors, canonical_table(e)) for e in cat.entries}
    assert len(keys) == len(cat)
    for i, a in enumerate(cat.entries):
        for b in cat.entries[i + 1 :]:
            assert isometric_isomorphic(a, b) is None


def test_unbounded_catalog_needs_bound():
    with pytest.raises(Exception):
        enumerate_catalog(1, 3, INF, 3)
    assert len(enumerate_catalog(1, 3, INF, 3, value_bound=F(1))) == 3


def _catalog(*entries):
    return Catalog(1, 2, F(1), 2, None, list(entries))


def test_single_amalgamation():
    triv = validate_value(FiniteAbelianGroup([]), [0], 1, 2)
    one = validate_value(FiniteAbelianGroup([2]), [0, 1], 1, 2)
    chain = build_chain(_catalog(triv, one))
    assert 1 in chain.final.table
    assert chain.complete


def test_trivial_catalog_stays_trivial():
    triv = validate_value(FiniteAbelianGroup([]), [0], 1, 2)
    chain = build_chain(_catalog(triv))
    assert chain.final.group.order == 1


def test_trivial_group_fails_extension():
    triv = validate_value(FiniteAbelianGroup([]), [0], 1, 2)
    one = validate_value(FiniteAbelianGroup([2]), [0, 1], 1, 2)
    rep = verify_extension_property(triv, _catalog(triv, one))
    assert rep.unsatisfied > 0 and not rep.complete or rep.failures


def test_half_chain_golden(half_chain):
    G = half_chain.final
    assert G.group.factors == (2, 2)
    assert sorted(Counter(G.table).items()) == [(0, 1), (F(1, 2), 1), (1, 2)]
    assert half_chain.complete and not half_chain.unsatisfied
    assert verify_ledger(half_chain).ratio == 1
    assert verify_embeddings(G, half_chain.catalog).ratio == 1
    full = verify_extension_property(G, half_chain.catalog)
    assert full.unsatisfied == 0
    assert hashlib.sha256(chain_json_text(half_chain).encode()).hexdigest() == GOLDEN_HALF_SHA


def test_quarter_chain_golden(quarter_chain):
    G = quarter_chain.final
    assert G.group.order == 128
    assert sorted(Counter(G.table).items()) == [(0, 1), (F(1, 4), 4), (F(1, 2), 6), (F(3, 4), 12), (1, 105)]
    led = verify_ledger(quarter_chain)
    assert (led.satisfied, led.total) == (22, 22)
    emb = verify_embeddings(G, quarter_chain.catalog)
    assert emb.ratio == 1
    assert hashlib.sha256(chain_json_text(quarter_chain).encode()).hexdigest() == GOLDEN_QUARTER_SHA


def test_chain_is_deterministic(quarter_chain):
    again = build_chain(enumerate_catalog(2, 2, F(1), 4))
    assert chain_json_text(again) == chain_json_text(quarter_chain)


def test_links_and_monotone_satisfaction(quarter_chain):
    assert verify_links(quarter_chain) == []
    sat = stage_satisfaction(quarter_chain)
    assert sat == sorted(sat)
    assert sat[-1] == len(quarter_chain.catalog)


def test_json_round_trip(quarter_chain):
    text = chain_json_text(quarter_chain)
    back = chain_from_json(chain_to_json(quarter_chain))
    assert chain_json_text(back) == text
    assert verify_ledger(back).ratio == 1


def test_dot_export(half_chain):
    dot = chain_to_dot(half_chain)
    assert dot.startswith("digraph chain {") and dot.rstrip().endswith("}")
    links = re.findall(r"^\s*G\d+ -> G\d+", dot, re.M)
    assert len(links) == len(half_chain.stages) - 1


def test_every_stage_is_a_grid_value(quarter_chain):
    from valgroups.rational import is_on_grid

    for G in quarter_chain.stages:
        validate_value(G.group, G.table, 1, 2)
        assert all(is_on_grid(t, 2) for t in G.table)
