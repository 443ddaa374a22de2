from __future__ import annotations

import itertools

import pytest

from ringelhall.catalog import get_catalog
from ringelhall.hallnum import orbit_dim
from ringelhall.orders import (
    FALSE,
    TRUE,
    ext_degenerations,
    ext_order_leq,
    ext_reachable,
    hom_order_leq,
    order_coherence,
)
from ringelhall.quiver import builtin


def test_a2_examples():
    cat = get_catalog(builtin("A2"), 2)
    P1, S = cat.parse("P(1)"), cat.parse("S1+S2")
    assert ext_order_leq(P1, P1) == TRUE
    assert ext_order_leq(S, P1) == TRUE
    assert ext_order_leq(P1, S) == FALSE
    assert hom_order_leq(P1, P1)
    assert hom_order_leq(S, P1)
    assert not hom_order_leq(P1, S)


@pytest.mark.parametrize("q", [2, 3])
def test_kronecker_regular(q):
    cat = get_catalog(builtin("K"), q).ensure(2)
    S = cat.parse("S1+S2")
    for x in cat.indecomposables(2):
        if x.dims == (1, 1):
            R = cat.of(x.label)
            assert ext_order_leq(S, R) == TRUE
            assert hom_order_leq(S, R)
            assert ext_order_leq(R, S) == FALSE


def test_dimension_mismatch():
    cat = get_catalog(builtin("A2"), 2)
    with pytest.raises(ValueError):
        ext_order_leq(cat.parse("S1"), cat.parse("S2"))
    with pytest.raises(ValueError):
        hom_order_leq(cat.parse("S1"), cat.parse("S2"))


@pytest.mark.parametrize("name,q,bound", [("A3", 2, 4), ("K", 2, 4), ("A~2,1", 2, 4), ("A~2,1", 3, 3)])
def test_degenerations_grow_endomorphisms(name, q, bound):
    # a non-split sequence 0 -> U -> M -> V -> 0 gives dim End(U + V) > dim End M
    cat = get_catalog(builtin(name), q).ensure(bound)
    for g in itertools.product(range(bound + 1), repeat=cat.quiver.n):
        if 0 < sum(g) <= bound:
            for M in cat.classes(g):
                for N in ext_degenerations(M):
                    assert N.dims == M.dims
                    assert orbit_dim(N) < orbit_dim(M)
                    assert hom_order_leq(N, M)


def test_reachable_saturates():
    cat = get_catalog(builtin("A3"), 2)
    M = cat.parse("P(1)")
    seen, saturated = ext_reachable(M, 8)
    assert saturated
    # the semisimple module is the unique minimum
    assert cat.parse("S1+S2+S3") in seen


@pytest.mark.parametrize("name,q,t", [("A3", 2, 4), ("K", 2, 4), ("A~2,1", 2, 4)])
def test_coherence_small(name, q, t):
    rep = order_coherence(get_catalog(builtin(name), q), t)
    assert rep.ok and rep.pairs > 0
    assert not rep.unresolved
