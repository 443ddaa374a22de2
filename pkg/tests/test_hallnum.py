from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringelhall import rep as R
from ringelhall.catalog import Homog, Preproj, TubeMod, classify, get_catalog
from ringelhall.field import rank, rref
from ringelhall.hallnum import (
    BudgetExceeded,
    HallCalculator,
    ext_set,
    filtration_number,
    get_calculator,
    hall_number,
    hall_number_riedtmann,
    hall_number_via_sequences,
    orbit_dim,
    split_regular_factor,
)
from ringelhall.orders import extension_set_codim, orbit_closure
from ringelhall.quiver import builtin, dim_add, euler_form


def _classes_up_to(cat, bound):
    Q = cat.quiver
    out = []
    for g in itertools.product(range(bound + 1), repeat=Q.n):
        if 0 < sum(g) <= bound:
            out.extend(cat.classes(g))
    return out


def _subspaces(F, n, k):
    """Every k-dimensional subspace of F^n as an rref row basis, found by brute force."""
    seen = {}
    for vals in itertools.product(range(F.q), repeat=n * k):
        A = np.array(vals, dtype=np.int64).reshape(k, n)
        if k == 0 or rank(F, A) == k:
            Rr, _ = rref(F, A)
            seen[Rr.tobytes()] = Rr[:k]
    return list(seen.values())


def _brute_products(M, N):
    """Counter L -> g_{MN}^L by testing every graded subspace of every witness L."""
    cat = M.catalog
    F, Q = cat.field, cat.quiver
    dims = dim_add(M.dims, N.dims)
    out = {}
    for L in cat.classes(dims):
        W = L.witness
        count = 0
        for bases in itertools.product(*[_subspaces(F, W.dims[i], N.dims[i]) for i in range(Q.n)]):
            stable = True
            for k, a in enumerate(Q.arrows):
                img = F.matmul(bases[a.source], W.maps[k].T) if bases[a.source].size else bases[a.source]
                if img.size and rank(F, np.vstack([bases[a.target], img])) != N.dims[a.target]:
                    stable = False
                    break
            if not stable:
                continue
            sub, quo = R.restrict_to_submodule(W, list(bases))
            if classify(sub) == N and classify(quo) == M:
                count += 1
        if count:
            out[L] = count
    return out


# ---------------------------------------------------------------------------
# small closed forms


@pytest.mark.parametrize("q", [2, 3, 5])
def test_one_vertex(q):
    cat = get_catalog(builtin("A1"), q)
    S = cat.parse("S1")
    assert hall_number(S, S, 2 * S).value == q + 1
    assert hall_number_via_sequences(S, S, 2 * S).value == q + 1
    assert hall_number_riedtmann(S, S, 2 * S).value == q + 1
    assert filtration_number([S, S], 2 * S).value == q + 1
    assert filtration_number([S, S, S], 3 * S).value == (q * q + q + 1) * (q + 1)
    assert filtration_number([S], S).value == 1
    assert filtration_number([2 * S], S + S).value == 1


def test_a2_examples():
    cat = get_catalog(builtin("A2"), 2)
    S1, S2, P1 = cat.parse("S1"), cat.parse("S2"), cat.parse("P(1)")
    assert hall_number(S1, S2, P1).value == 1
    assert hall_number_via_sequences(S1, S2, P1).value == 1
    assert hall_number(S2, S1, P1).value == 0
    assert hall_number(S1, S2, S1 + S2).value == 1
    # grading
    assert hall_number(S1, S1, P1).value == 0
    es = ext_set(S1, S2)
    assert set(es.members) == {S1 + S2, P1}
    assert es.orbit_dims[P1] == 1 and es.orbit_dims[S1 + S2] == 0
    zero = cat.zero()
    assert set(ext_set(zero, zero).members) == {zero}


def test_split_only_riedtmann():
    # Ext(M, N) = 0 leaves only the split middle term
    cat = get_catalog(builtin("A2"), 3)
    M, N = cat.parse("S2"), cat.parse("S1")
    assert cat.ext_dim(M, N) == 0
    L = M + N
    expected = Fraction(cat.aut_order(L), cat.aut_order(M) * cat.aut_order(N) * 3 ** cat.hom_dim(M, N))
    assert hall_number_riedtmann(M, N, L).value == expected


def test_split_sequence_nonzero():
    cat = get_catalog(builtin("A~2,1"), 2).ensure(4)
    for M, N in itertools.product(_classes_up_to(cat, 2), repeat=2):
        assert hall_number(M, N, M + N).value >= 1


@pytest.mark.parametrize("name,q,bound", [("A2", 2, 3), ("K", 2, 3), ("A~2,1", 2, 3), ("A3", 3, 2)])
def test_products_against_brute_force(name, q, bound):
    cat = get_catalog(builtin(name), q).ensure(bound)
    calc = get_calculator(cat)
    cls = _classes_up_to(cat, bound)
    for M, N in itertools.product(cls, repeat=2):
        if M.total + N.total > bound:
            continue
        brute = _brute_products(M, N)
        assert calc.products(M, N, method="submodule") == brute
        assert calc.products(M, N, method="riedtmann") == brute


@given(st.sampled_from([("A3", 2), ("K", 3), ("A~2,1", 2), ("A~2,1", 3)]), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_methods_agree(case, seed):
    name, q = case
    cat = get_catalog(builtin(name), q).ensure(4)
    rng = np.random.default_rng(seed)
    cls = _classes_up_to(cat, 2)
    M, N = (cls[int(i)] for i in rng.integers(0, len(cls), size=2))
    for L in cat.classes(dim_add(M.dims, N.dims)):
        a = hall_number(M, N, L).value
        assert hall_number_via_sequences(M, N, L).value == a
        assert hall_number_riedtmann(M, N, L).value == a


@given(st.sampled_from([("A3", 2), ("K", 3), ("A~2,1", 2), ("D~4", 2)]), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_exact_pairs_free_action(case, seed):
    # |W(N, M; L)| = g |Aut M| |Aut N| exactly when Aut N x Aut M acts freely
    name, q = case
    cat = get_catalog(builtin(name), q).ensure(4)
    calc = get_calculator(cat)
    rng = np.random.default_rng(seed)
    cls = _classes_up_to(cat, 2)
    M, N = (cls[int(i)] for i in rng.integers(0, len(cls), size=2))
    for L in cat.classes(dim_add(M.dims, N.dims)):
        g = hall_number(M, N, L).value
        assert calc.exact_pair_count(M, N, L) == g * cat.aut_order(M) * cat.aut_order(N)


# ---------------------------------------------------------------------------
# identities


@given(st.sampled_from([("A3", 2), ("K", 2), ("A~2,1", 2), ("A~2,1", 3), ("D~4", 2)]), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_mass_conservation(case, seed):
    name, q = case
    cat = get_catalog(builtin(name), q).ensure(4)
    rng = np.random.default_rng(seed)
    cls = _classes_up_to(cat, 2)
    M, N = (cls[int(i)] for i in rng.integers(0, len(cls), size=2))
    calc = get_calculator(cat)
    total = Fraction(0)
    for L, g in calc.products(M, N, method="submodule").items():
        total += Fraction(g * cat.aut_order(M) * cat.aut_order(N) * q ** cat.hom_dim(M, N), cat.aut_order(L))
    assert total == q ** cat.ext_dim(M, N)
    assert sum(calc.extension_table(M, N).values()) == q ** cat.ext_dim(M, N)


@given(st.sampled_from([("A3", 2), ("K", 2), ("A~2,1", 2)]), st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_associativity(case, seed):
    name, q = case
    cat = get_catalog(builtin(name), q).ensure(5)
    calc = get_calculator(cat)
    rng = np.random.default_rng(seed)
    cls = [c for c in _classes_up_to(cat, 2) if c.total <= 2]
    A, B, C = (cls[int(i)] for i in rng.integers(0, len(cls), size=3))
    left, right = Counter(), Counter()
    for X, g in calc.products(A, B).items():
        for L, h in calc.products(X, C).items():
            left[L] += g * h
    for Y, g in calc.products(B, C).items():
        for L, h in calc.products(A, Y).items():
            right[L] += g * h
    assert left == right


def _lemma711_instances(cat, count, rng):
    inds = cat.indecomposables(3)
    pre = [cat.of(x.label) for x in inds if isinstance(x.label, Preproj)]
    reg = [cat.of(x.label) for x in inds if isinstance(x.label, (TubeMod, Homog))]
    small = _classes_up_to(cat, 2)
    calc = get_calculator(cat)
    out = []
    while len(out) < count:
        N = pre[int(rng.integers(len(pre)))]
        M2 = reg[int(rng.integers(len(reg)))]
        M1 = small[int(rng.integers(len(small)))]
        if cat.hom_dim(M2, M1):
            continue
        prods = list(calc.products(M1, N))
        others = cat.classes(dim_add(M1.dims, N.dims))
        M = prods[int(rng.integers(len(prods)))] if rng.random() < 0.8 else others[int(rng.integers(len(others)))]
        out.append((M, M1, M2, N))
    return out


@pytest.mark.parametrize("name,q", [("A~2,1", 2), ("A~2,1", 3), ("D~4", 2)])
def test_lemma711(name, q):
    cat = get_catalog(builtin(name), q).ensure(6)
    rng = np.random.default_rng(7)
    for M, M1, M2, N in _lemma711_instances(cat, 8, rng):
        lhs, rhs = split_regular_factor(M, M1, M2, N)
        assert lhs == rhs, (str(M), str(M1), str(M2), str(N))


# ---------------------------------------------------------------------------
# extension sets


def test_orbit_dim_examples():
    cat = get_catalog(builtin("A2"), 2)
    assert orbit_dim(cat.parse("P(1)")) == 1
    assert orbit_dim(cat.parse("S1+S2")) == 0
    cat = get_catalog(builtin("K"), 2).ensure(2)
    # a regular brick of dimension (1, 1) has a one-dimensional stabiliser in GL_1 x GL_1
    assert orbit_dim(cat.parse("H[0,1]")) == 1


def test_extension_set_a2():
    cat = get_catalog(builtin("A2"), 2)
    r = extension_set_codim(cat.parse("S1"), cat.parse("S2"))
    assert r["codim"] == 0 and r["ok"]


@pytest.mark.parametrize("name,q", [("A2", 2), ("A3", 2), ("A2", 3)])
def test_lemma511_range(name, q):
    cat = get_catalog(builtin(name), q)
    cls = _classes_up_to(cat, 2)
    for M, N in itertools.product(cls, repeat=2):
        if M.total + N.total <= 4:
            assert extension_set_codim(M, N)["ok"]


def test_orbit_closure_a2():
    cat = get_catalog(builtin("A2"), 2)
    assert orbit_closure(cat.parse("P(1)")) == {cat.parse("P(1)"), cat.parse("S1+S2")}


def test_budget():
    cat = get_catalog(builtin("A~2,1"), 2).ensure(4)
    calc = HallCalculator(cat, budget=2)
    M = cat.parse("P(1)")
    with pytest.raises(BudgetExceeded):
        calc.products(M, M, method="submodule")


def test_euler_form_matches_catalog():
    cat = get_catalog(builtin("A~2,1"), 2).ensure(3)
    cls = _classes_up_to(cat, 3)
    for M, N in itertools.product(cls[:20], repeat=2):
        assert cat.hom_dim(M, N) - cat.ext_dim(M, N) == euler_form(cat.quiver, M.dims, N.dims)
