from __future__ import annotations

import itertools

import numpy as np
import pytest

from ringelhall.catalog import Homog, TubeMod, get_catalog
from ringelhall.hallalg import get_algebra
from ringelhall.hallnum import hall_number
from ringelhall.pbw import PBW, KroneckerFunctor, partitions
from ringelhall.quiver import builtin, kronecker, tame_data


@pytest.fixture(scope="module")
def a21():
    cat = get_catalog(builtin("A~2,1"), 2).ensure(6)
    return PBW(cat)


def test_partitions():
    assert list(partitions(0)) == [()]
    assert sorted(partitions(4)) == sorted([(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])
    # partition numbers
    assert [sum(1 for _ in partitions(n)) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


# ---------------------------------------------------------------------------
# the functor


@pytest.mark.parametrize("name,q", [("A~2,1", 2), ("A~2,1", 3), ("D~4", 2), ("K", 3)])
def test_functor_on_projectives(name, q):
    cat = get_catalog(builtin(name), q).ensure(2 * sum(tame_data(builtin(name)).delta) + 2)
    F = KroneckerFunctor(cat)
    K = get_catalog(kronecker(), q)
    assert F.embed_kronecker(K.parse("P(2)")) == F.P
    assert F.embed_kronecker(K.parse("P(1)")) == F.L
    emb = cat.embedding()
    assert cat.hom_dim(F.P, F.L) == 2 and cat.ext_dim(F.P, F.L) == 0
    assert F.L.dims == tuple(a + b for a, b in zip(tame_data(cat.quiver).delta, F.P.dims))
    assert len(emb.hom_basis) == 2


@pytest.mark.parametrize("name,q", [("A~2,1", 2), ("A~2,1", 3), ("D~4", 3)])
def test_regular_simples_land_on_delta(name, q):
    Q = builtin(name)
    cat = get_catalog(Q, q).ensure(2 * sum(tame_data(Q).delta))
    F = KroneckerFunctor(cat)
    for a, b in itertools.product(range(q), repeat=2):
        if a == b == 0:
            continue
        img = F.embed_rep(np.array([[a]]), np.array([[b]]))
        assert img.dims == tame_data(Q).delta
        assert all(isinstance(lab, (TubeMod, Homog)) for lab, _ in img.parts)


@pytest.mark.parametrize("name,q", [("A~2,1", 2), ("A~2,1", 3)])
def test_functor_preserves_hom_and_ext(name, q):
    Q = builtin(name)
    cat = get_catalog(Q, q).ensure(3 * sum(tame_data(Q).delta))
    F = KroneckerFunctor(cat)
    K = get_catalog(kronecker(), q).ensure(3)
    kinds = [K.of(x.label) for x in K.indecomposables(3)]
    for X, Y in itertools.product(kinds, repeat=2):
        FX, FY = F.embed_kronecker(X), F.embed_kronecker(Y)
        assert cat.hom_dim(FX, FY) == K.hom_dim(X, Y)
        assert cat.ext_dim(FX, FY) == K.ext_dim(X, Y)


def test_exactness_spot_check():
    # 0 -> P_K(2) -> P_K(1) -> R -> 0 maps to a non-split sequence 0 -> P -> L -> F(R) -> 0
    q = 2
    cat = get_catalog(builtin("A~2,1"), q).ensure(6)
    F = KroneckerFunctor(cat)
    K = get_catalog(kronecker(), q).ensure(2)
    for x in K.indecomposables(2):
        if x.dims == (1, 1):
            R = K.of(x.label)
            assert hall_number(R, K.parse("P(2)"), K.parse("P(1)")).value > 0
            assert hall_number(F.embed_kronecker(R), F.P, F.L).value > 0


# ---------------------------------------------------------------------------
# E_{n delta}


def test_kronecker_e_delta():
    for q in (2, 3):
        cat = get_catalog(kronecker(), q).ensure(4)
        pbw = PBW(cat)
        parts = pbw.e_delta_parts(1)
        alg = pbw.alg
        assert parts.e1.is_zero()
        assert parts.e2.is_zero()
        assert len(parts.e3.terms) == q + 1
        for (mu, M), c in parts.e3.terms.items():
            assert M.dims == (1, 1) and c == alg.v(-2)


def test_e2_vanishes_at_one(a21):
    assert a21.e_delta_parts(1).e2.is_zero()


def test_a21_e_delta_terms(a21):
    # oracle: embed every regular Kronecker module of dimension (1, 1) directly
    tube, homog = set(), set()
    for a, b in itertools.product(range(2), repeat=2):
        if a == b == 0:
            continue
        img = a21.functor.embed_rep(np.array([[a]]), np.array([[b]]))
        (tube if all(isinstance(l, TubeMod) for l, _ in img.parts) else homog).add(img)
    parts = a21.e_delta_parts(1)
    assert {M for _, M in parts.e1.terms} == tube
    assert {M for _, M in parts.e3.terms} == homog
    assert len(tube) == 1 and len(homog) == 2
    w = a21.alg.v(-3)
    assert all(c == w for c in parts.e1.terms.values())


def test_a21_e_delta_two(a21):
    parts = a21.e_delta_parts(2)
    assert (len(parts.e1.terms), len(parts.e2.terms), len(parts.e3.terms)) == (2, 2, 6)
    for x in (parts.e1, parts.e2, parts.e3):
        assert x.degree() == (2, 2, 2)


def test_e_delta_in_composition_algebra(a21):
    alg = a21.alg
    delta = a21.delta
    span = alg.graded_span(alg.composition_generators(), delta)
    assert alg.in_span(a21.e_delta(1), span.elements)


def test_e_parts_in_singular_algebra(a21):
    alg = a21.alg
    for n in (1, 2):
        gamma = tuple(n * d for d in a21.delta)
        spans = a21.singular_spans(gamma)
        Hs = spans[gamma]
        parts = a21.e_delta_parts(n)
        assert alg.in_span(parts.e1, Hs)
        assert alg.in_span(parts.e3, Hs)


def test_lemma412_small(a21):
    assert a21.lemma412_check(1, 1) == {"a": True, "b": True, "c": True}
    assert a21.lemma412_check(1, 2) == {"a": True, "b": True, "c": True}


def test_e_w3_order_independent(a21):
    alg = a21.alg
    assert a21.e_w3((2, 1)) == a21.e_w3((1, 2))
    assert a21.e_w3(()) == alg.one()


# ---------------------------------------------------------------------------
# the basis B


def test_basis_at_simple(a21):
    cat = a21.catalog
    for i in range(cat.quiver.n):
        B = a21.pbw_basis(cat.quiver.unit(i))
        assert len(B) == 1
        S = B[0]
        assert S.value == a21.alg.angle(S.P if not S.P.is_zero else (S.M if not S.M.is_zero else S.I))
        assert S.value.degree() == cat.quiver.unit(i)


def test_basis_at_delta(a21):
    rep = a21.pbw_rank_check(a21.delta)
    assert rep["ok"], rep
    assert rep["size"] == rep["rank_Hs"]


def test_basis_labels(a21):
    for b in a21.pbw_basis((1, 1, 0)):
        assert b.label().count("|") == 3
        assert b.value.degree() == (1, 1, 0)


def test_lemma411(a21):
    cat = a21.catalog
    homs = [cat.of(Homog(p, 1)) for p in cat.homogeneous_points()]
    tubes = [cat.of(x.label) for x in cat.indecomposables(3) if isinstance(x.label, TubeMod)]
    for M in homs:
        for N in tubes + [h for h in homs if h != M]:
            assert a21.lemma411_check(M, N)
            assert a21.alg.multiply(a21.alg.u(M), a21.alg.u(N)) == a21.alg.u(M + N)


def test_kronecker_basis_rank():
    cat = get_catalog(kronecker(), 2).ensure(4)
    pbw = PBW(cat)
    for gamma in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        assert pbw.pbw_rank_check(gamma)["ok"]


def test_needs_tame():
    with pytest.raises(ValueError):
        KroneckerFunctor(get_catalog(builtin("A3"), 2))


def test_algebra_shared(a21):
    assert a21.alg is get_algebra(a21.catalog)
