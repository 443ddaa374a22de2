"""Acceptance suite: one group of tests per criterion, all comparisons exact.

The conftest prints one CRITERION line per group at the end of the run.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from ringelhall import rep as R
from ringelhall.catalog import Homog, Preinj, Preproj, TubeMod, get_catalog
from ringelhall.hallalg import classes_up_to, get_algebra, hopf_suite, serre_suite
from ringelhall.hallnum import get_calculator, split_regular_factor
from ringelhall.hallpoly import fit_hall_polynomial, hall_count_at, load_triples
from ringelhall.orders import order_coherence
from ringelhall.pbw import PBW
from ringelhall.quiver import BUILTIN_NAMES, builtin, dim_add, euler_form, is_tame, subvectors, tame_data

SUITE = Path(__file__).parent / "data" / "hallpoly_suite.json"
TAME = [n for n in BUILTIN_NAMES if is_tame(builtin(n))] + ["A~3,2", "A~3,1", "D~5", "D~6"]


def crit(n):
    return pytest.mark.criterion(n)


@pytest.fixture(scope="module")
def a21_pbw():
    return PBW(get_catalog(builtin("A~2,1"), 2))


# ---------------------------------------------------------------------------
# 1. three routes to g


@crit(1)
@pytest.mark.parametrize("name", ["A2", "A3", "K", "A~2,1"])
@pytest.mark.parametrize("q", [2, 3])
def test_c1_hall_methods_agree(name, q):
    cat = get_catalog(builtin(name), q).ensure(5)
    calc = get_calculator(cat)
    cls = classes_up_to(cat, 4)
    checked = 0
    for M, N in itertools.product(cls, repeat=2):
        if M.total + N.total > 5:
            continue
        for L in cat.classes(dim_add(M.dims, N.dims)):
            a = calc.hall_number(M, N, L).value
            b = calc.hall_number_via_sequences(M, N, L).value
            c = calc.hall_number_riedtmann(M, N, L).value
            assert a == b == c, (str(M), str(N), str(L), a, b, c)
            checked += 1
    assert checked > 0


# ---------------------------------------------------------------------------
# 2. the D~4 family


@crit(2)
@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("q", [2, 3])
def test_c2_d4_family(m, q):
    cat = get_catalog(builtin("D~4"), q).ensure(8)
    calc = get_calculator(cat)
    E1, S = cat.parse("T1[1,1]"), cat.parse("S3")
    M = m * E1
    L = cat.parse("P(1) + P(4)") + (m - 1) * E1
    expected = q ** (m - 1) * (q - 1)
    assert calc.hall_number(M, S, L).value == expected
    assert calc.hall_number_riedtmann(M, S, L).value == expected


# ---------------------------------------------------------------------------
# 3. Serre relations


@crit(3)
@pytest.mark.parametrize("name", ["A2", "A3", "K", "A~2,1", "D~4"])
@pytest.mark.parametrize("q", [2, 3])
def test_c3_serre(name, q):
    rep = serre_suite(get_algebra(get_catalog(builtin(name), q)))
    assert rep["ok"], rep


# ---------------------------------------------------------------------------
# 4. Hopf suite


@crit(4)
@pytest.mark.parametrize("name", ["A2", "K"])
def test_c4_hopf(name):
    cat = get_catalog(builtin(name), 2).ensure(3)
    rep = hopf_suite(get_algebra(cat), max_total=3)
    assert rep["ok"], rep


# ---------------------------------------------------------------------------
# 5. L_delta


def _c5_cases():
    for name, ell in (("A~2,1", 1), ("D~4", 3)):
        for q in (2, 3):
            marks = [pytest.mark.criterion(5)]
            if (name, q) == ("D~4", 2):
                # F_2 has no non-exceptional rational point on D~4, so H^s_delta is one dimension short
                marks.append(pytest.mark.xfail(strict=True, reason="dim L_delta = 2 over F_2 for D~4"))
            yield pytest.param(name, q, ell, marks=marks, id=f"{name}-q{q}")


@pytest.mark.parametrize("name,q,ell", list(_c5_cases()))
def test_c5_l_delta(name, q, ell):
    L = get_algebra(get_catalog(builtin(name), q)).l_delta(1)
    assert L.direct_sum_holds()
    assert L.dim == ell


# ---------------------------------------------------------------------------
# 6. centrality


@crit(6)
def test_c6_centrality():
    cat = get_catalog(builtin("A~2,1"), 2)
    alg = get_algebra(cat)
    L = alg.l_delta(1)
    assert L.dim == 1
    gens = alg.singular_generators(tuple(2 * d for d in cat.tame.delta))
    for x in L.basis:
        for g in gens:
            assert alg.commutator(x, g).is_zero(), g


# ---------------------------------------------------------------------------
# 7. and 8. the PBW layer


@crit(7)
@pytest.mark.parametrize("n,n2", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_c7_lemma412(a21_pbw, n, n2):
    assert a21_pbw.lemma412_check(n, n2) == {"a": True, "b": True, "c": True}


@crit(8)
def test_c8_pbw_basis(a21_pbw):
    top = tuple(2 * d for d in a21_pbw.delta)
    spans = a21_pbw.singular_spans(top)
    bad = []
    for g in sorted(subvectors(top), key=lambda g: (sum(g), g)):
        if any(g):
            r = a21_pbw.pbw_rank_check(g, spans)
            if not r["ok"]:
                bad.append(r)
    assert not bad


# ---------------------------------------------------------------------------
# 9. Hall polynomials


@crit(9)
@pytest.mark.parametrize("t", load_triples(str(SUITE)), ids=str)
def test_c9_hall_polynomials(t):
    fit = fit_hall_polynomial(t)
    assert fit.status == "verified", fit.to_json()
    assert len(fit.verification) == 2
    assert fit.exponent_constant
    for q in fit.samples:
        if t.slots:
            X = t.instantiate(q)
            Y = t.instantiate(q, reverse=True)
            calc = get_calculator(X[0].catalog)
            assert calc.hall_number(*X).value == calc.hall_number(*Y).value
        assert hall_count_at(t, q).value == fit(q)


# ---------------------------------------------------------------------------
# 10. structural invariants


@crit(10)
@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_c10_euler_identity(name):
    # Ext evaluated as dim Hom(N, tau M), independently of the Euler form
    cat = get_catalog(builtin(name), 2).ensure(4)
    cls = classes_up_to(cat, 4)
    rng = np.random.default_rng(10)
    for _ in range(200):
        M, N = (cls[int(i)] for i in rng.integers(0, len(cls), size=2))
        wM, wN = M.witness, N.witness
        ext = R.hom_dim(wN, R.ar_translate(wM, +1))
        assert R.hom_dim(wM, wN) - ext == euler_form(cat.quiver, M.dims, N.dims)
        assert len(R.ext_data(wM, wN)) == ext


@crit(10)
@pytest.mark.parametrize("name", TAME)
def test_c10_tame_lemmas(name):
    Q = builtin(name)
    td = tame_data(Q)
    # tube count and ranks
    assert len(td.periods) <= 3
    assert sum(r - 1 for r in td.periods) == Q.n - 2
    cat = get_catalog(Q, 2).ensure(max(4, sum(td.delta)))
    inds = cat.indecomposables(max(4, sum(td.delta)))
    P = [x.rep for x in inds if isinstance(x.label, Preproj)]
    I = [x.rep for x in inds if isinstance(x.label, Preinj)]
    Rg = [x for x in inds if isinstance(x.label, (TubeMod, Homog))]
    assert Rg
    for a, b in itertools.chain(itertools.product([x.rep for x in Rg], P), itertools.product(I, [x.rep for x in Rg]), itertools.product(I, P)):
        assert R.hom_dim(a, b) == 0
    for a, b in itertools.chain(itertools.product(P, [x.rep for x in Rg]), itertools.product([x.rep for x in Rg], I), itertools.product(P, I)):
        assert R.ext_dim(a, b) == 0 and R.hom_dim(b, R.ar_translate(a, +1)) == 0

    def tube(lab):
        return ("T", lab.tube) if isinstance(lab, TubeMod) else ("H", lab.point)

    for a, b in itertools.product(Rg, repeat=2):
        if tube(a.label) != tube(b.label):
            assert R.hom_dim(a.rep, b.rep) == 0
            assert R.hom_dim(b.rep, R.ar_translate(a.rep, +1)) == 0


@crit(10)
def test_c10_mass_conservation():
    rng = np.random.default_rng(11)
    cases = [("A3", 2), ("K", 2), ("A~2,1", 2), ("A~2,1", 3), ("D~4", 2)]
    for k in range(100):
        name, q = cases[k % len(cases)]
        cat = get_catalog(builtin(name), q).ensure(4)
        calc = get_calculator(cat)
        cls = classes_up_to(cat, 2)
        M, N = (cls[int(i)] for i in rng.integers(0, len(cls), size=2))
        total = Fraction(0)
        for L, g in calc.products(M, N, method="submodule").items():
            total += Fraction(g * cat.aut_order(M) * cat.aut_order(N) * q ** cat.hom_dim(M, N), cat.aut_order(L))
        assert total == q ** cat.ext_dim(M, N)
        assert sum(calc.extension_table(M, N).values()) == q ** cat.ext_dim(M, N)


def _split_regular_instances(cat, count, rng):
    # N preprojective, M2 regular indecomposable with Hom(M2, M1) = 0
    inds = cat.indecomposables(3)
    pre = [cat.of(x.label) for x in inds if isinstance(x.label, Preproj)]
    reg = [cat.of(x.label) for x in inds if isinstance(x.label, (TubeMod, Homog))]
    small = classes_up_to(cat, 2)
    calc = get_calculator(cat)
    out = []
    while len(out) < count:
        N = pre[int(rng.integers(len(pre)))]
        M2 = reg[int(rng.integers(len(reg)))]
        M1 = small[int(rng.integers(len(small)))]
        if cat.hom_dim(M2, M1):
            continue
        prods = list(calc.products(M1, N))
        M = prods[int(rng.integers(len(prods)))]
        out.append((M, M1, M2, N))
    return out


@crit(10)
def test_c10_split_regular_factor():
    rng = np.random.default_rng(12)
    cases = [("A~2,1", 2, 7), ("A~2,1", 3, 7), ("D~4", 2, 6)]
    seen = 0
    for name, q, count in cases:
        cat = get_catalog(builtin(name), q).ensure(6)
        for M, M1, M2, N in _split_regular_instances(cat, count, rng):
            lhs, rhs = split_regular_factor(M, M1, M2, N)
            assert lhs == rhs, (str(M), str(M1), str(M2), str(N))
            seen += 1
    assert seen == 20


# ---------------------------------------------------------------------------
# 11. order coherence


@crit(11)
def test_c11_order_coherence():
    rep = order_coherence(get_catalog(builtin("A~2,1"), 2), 5)
    assert rep.pairs > 0 and rep.ext_true > 0
    assert rep.counterexamples == []
