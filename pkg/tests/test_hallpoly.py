from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from ringelhall.catalog import get_catalog
from ringelhall.hallpoly import (
    DecompClass,
    HallPolynomialFitter,
    SlotError,
    Triple,
    crosscheck_structure_constant,
    exponent_d,
    fit_hall_polynomial,
    hall_count_at,
    interpolate,
    load_triples,
    structure_constant,
)
from ringelhall.coeff import LaurentCoeff
from ringelhall.quiver import builtin

SUITE = Path(__file__).parent / "data" / "hallpoly_suite.json"


def test_instantiate_examples():
    Q = builtin("A~2,1")
    assert DecompClass.parse(Q, "P(2)").instantiate(3) == get_catalog(Q, 3).parse("P(2)")
    assert DecompClass.parse(Q, "0").instantiate(2).is_zero
    K = builtin("K")
    M = DecompClass.parse(K, "H[x1,1]").instantiate(2)
    assert M.dims == (1, 1) and len(M.parts) == 1


def test_class_string_roundtrip():
    Q = builtin("A~2,1")
    c = DecompClass.parse(Q, "P(3) + T1[2,2] + H[x1,(2,1)] + H[x2,1] + I(1)")
    assert DecompClass.parse(Q, str(c)) == c
    assert c.slots == ("x1", "x2")
    M = c.instantiate(3)
    assert DecompClass.from_class(M) == c


@pytest.mark.parametrize("q,expected", [(2, 3), (3, 4), (5, 6)])
def test_one_vertex_counts(q, expected):
    t = Triple.parse("A1", "S1", "S1", "2*S1")
    assert hall_count_at(t, q).value == expected


def test_dimension_mismatch():
    t = Triple.parse("A2", "S1", "S1", "P(1)")
    assert hall_count_at(t, 2).value == 0


def test_d_tilde_family():
    t = Triple.parse("D~4", "2*T1[1,1]", "S3", "P(1) + P(4) + T1[1,1]")
    assert hall_count_at(t, 2).value == 2


def test_interpolate():
    assert interpolate({2: 3, 3: 4, 5: 6}) == [1, 1]
    assert interpolate({2: 0, 3: 0}) == []
    assert interpolate({1: 1, 2: 4, 3: 9}) == [0, 0, 1]
    assert interpolate({0: Fraction(1, 2), 1: Fraction(3, 2)}) == [Fraction(1, 2), 1]


def test_fit_one_vertex():
    fit = fit_hall_polynomial(Triple.parse("A1", "S1", "S1", "2*S1"))
    assert fit.coefficients == [1, 1]
    assert fit.status == "verified"
    assert fit.verification[17] == (18, 18)
    assert fit.exponent_constant


def test_fit_constant_and_zero():
    fit = fit_hall_polynomial(Triple.parse("A2", "S1", "S2", "P(1)"))
    assert fit.coefficients == [1] and fit.status == "verified"
    zero = fit_hall_polynomial(Triple.parse("A2", "S2", "S1", "P(1)"))
    assert zero.coefficients == [] and zero.status == "verified"
    assert zero.degree == -1 and fit.degree == 0


def test_fit_tube_triple():
    t = Triple.parse("A~2,1", "T1[1,1]", "T1[2,1]", "T1[2,2]")
    fit = fit_hall_polynomial(t, sample_primes=(2, 3, 5), verify_primes=(7,))
    assert fit.coefficients == [1] and fit.status == "verified"


def test_slot_independence_and_points():
    t = Triple.parse("A~2,1", "H[x1,1]", "H[x2,1]", "H[x1,1] + H[x2,1]")
    for q in (2, 3, 4):
        assert hall_count_at(t, q).value == 1
    X1, X2, X3 = t.instantiate(3)
    Y1, Y2, Y3 = t.instantiate(3, reverse=True)
    assert X1 != Y1


def test_slot_error():
    t = Triple.parse("A~2,1", "H[x1,1]", "H[x2,1] + H[x3,1]", "H[x1,1] + H[x2,1] + H[x3,1]")
    # F_2 has two non-exceptional rational points
    with pytest.raises(SlotError):
        t.instantiate(2)
    assert not t.instantiable(2)
    assert t.instantiable(3)
    d4 = Triple.parse("D~4", "H[x1,1]", "P(3)", "H[x1,1] + P(3)")
    assert not d4.instantiable(2)


def test_exponent_constant_across_fields():
    t = Triple.parse("A~2,1", "H[x1,1]", "H[x1,1]", "H[x1,(1,1)]")
    assert len({exponent_d(t, q) for q in (2, 3, 5)}) == 1


def test_structure_constant_crosscheck():
    t = Triple.parse("A~2,1", "H[x1,1]", "H[x1,1]", "H[x1,(1,1)]")
    fit = fit_hall_polynomial(t, sample_primes=(2, 3, 5, 7), verify_primes=(11,))
    assert fit.coefficients == [1, 1]
    gen = structure_constant(fit, t)
    assert gen.is_generic
    # <delta, delta> = 0, so the constant is v^0 (1 + v^2)
    assert gen == LaurentCoeff.generic({0: 1, 2: 1})
    for q in (3, 5):
        assert crosscheck_structure_constant(fit, t, q)


def test_json():
    t = Triple.parse("A~2,1", "I(1)", "P(2)", "H[x1,1]")
    assert Triple.from_json(json.loads(json.dumps(t.to_json()))) == t
    fit = fit_hall_polynomial(Triple.parse("A1", "S1", "S1", "2*S1"), sample_primes=(2, 3, 5), verify_primes=(7,))
    data = json.loads(json.dumps(fit.to_json()))
    assert data["status"] == "verified"
    assert [Fraction(c) for c in data["coefficients"]] == [1, 1]


def test_suite_file_parses():
    ts = load_triples(str(SUITE))
    assert len(ts) >= 10
    kinds = set()
    for t in ts:
        for c in (t.X1, t.X2, t.X3):
            kinds.update(k for k in ("preproj", "tubes", "homog", "preinj") if getattr(c, k))
    assert kinds == {"preproj", "tubes", "homog", "preinj"}
    assert {t.quiver.name for t in ts} == {"A~2,1", "D~4"}


def test_fitter_wrapper():
    est = HallPolynomialFitter(sample_primes=(2, 3, 5), verify_primes=(7,))
    assert est.get_params() == {"sample_primes": (2, 3, 5), "verify_primes": (7,)}
    with pytest.raises(RuntimeError):
        est.predict([2])
    est.fit(Triple.parse("A1", "S1", "S1", "2*S1"))
    assert est.predict([2, 4, 9]) == [3, 5, 10]


def test_values_nonnegative():
    t = Triple.parse("D~4", "2*T1[1,1]", "S3", "P(1) + P(4) + T1[1,1]")
    short = fit_hall_polynomial(t, sample_primes=(2, 3, 5), verify_primes=(7,))
    # three samples of a quadratic never give two agreeing fits
    assert short.status == "insufficient-samples"
    fit = fit_hall_polynomial(t, sample_primes=(2, 3, 5, 7), verify_primes=(11,))
    assert fit.status == "verified"
    assert fit.coefficients == [0, -1, 1]
    assert all(fit(q) >= 0 for q in (2, 3, 4, 5, 7, 8, 9))
