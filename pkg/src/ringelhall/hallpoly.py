"""Field-independent module classes and Hall polynomials fitted by exact interpolation in x = q."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .catalog import Homog, ModuleClass, Preinj, Preproj, TubeMod, get_catalog
from .coeff import LaurentCoeff
from .hallnum import HallCount, get_calculator
from .quiver import Quiver, euler_form, load_quiver

DEFAULT_SAMPLES = (2, 3, 5, 7, 11, 13)
DEFAULT_VERIFY = (17, 19)

_X = sympy.Symbol("x")


class SlotError(ValueError):
    """Not enough degree-1 homogeneous points for the requested slots."""


class SlotDependence(AssertionError):
    """A Hall number changed when the slots were moved to other points."""


@dataclass(frozen=True)
class DecompClass:
    """A module class described without reference to the field.

    Preprojective and preinjective summands are (vertex, shift) pairs, tube summands
    (tube, socle, length) triples and homogeneous summands (slot, partition) pairs.
    Distinct slots stand for distinct degree-1 points outside the exceptional ones.
    """

    quiver: Quiver
    preproj: tuple = ()
    tubes: tuple = ()
    homog: tuple = ()
    preinj: tuple = ()

    @property
    def slots(self) -> tuple[str, ...]:
        return tuple(sorted({s for s, _ in self.homog}))

    @classmethod
    def from_class(cls, M: ModuleClass, slot_of: dict | None = None) -> "DecompClass":
        """Forget the field of a concrete class; homogeneous points become slots."""
        slot_of = {} if slot_of is None else slot_of
        pp, tb, pi, hom = [], [], [], {}
        for lab, m in M.parts:
            if isinstance(lab, Preproj):
                pp += [(lab.vertex, lab.shift)] * m
            elif isinstance(lab, Preinj):
                pi += [(lab.vertex, lab.shift)] * m
            elif isinstance(lab, TubeMod):
                tb += [(lab.tube, lab.socle, lab.length)] * m
            else:
                if lab.point.degree != 1:
                    raise SlotError("homogeneous summands at higher-degree points are outside the slot model")
                s = slot_of.setdefault(lab.point, f"x{len(slot_of) + 1}")
                hom.setdefault(s, []).extend([lab.length] * m)
        homog = tuple(sorted((s, tuple(sorted(p, reverse=True))) for s, p in hom.items()))
        return cls(M.catalog.quiver, tuple(sorted(pp)), tuple(sorted(tb)), homog, tuple(sorted(pi)))

    @classmethod
    def parse(cls, quiver: Quiver, text: str) -> "DecompClass":
        """Class strings in the catalog grammar, with ``H[x1,(2,1)]`` (or ``H[x1,2]``) for a
        homogeneous slot carrying a partition."""
        hom: dict = {}
        rest = []
        for term in _terms(text):
            m = re.fullmatch(r"(?:(\d+)\s*\*\s*)?H\[\s*(x\d+)\s*,\s*(\(?[\d,\s]+\)?)\s*\]", term)
            if m:
                mult = int(m.group(1) or 1)
                parts = [int(p) for p in m.group(3).strip("()").split(",") if p.strip()]
                hom.setdefault(m.group(2), []).extend(parts * mult)
            else:
                rest.append(term)
        base = cls.from_class(get_catalog(quiver, 2).parse(" + ".join(rest) or "0"))
        if base.homog:
            raise ValueError("homogeneous summands must be written with slots x1, x2, ...")
        homog = tuple(sorted((s, tuple(sorted(p, reverse=True))) for s, p in hom.items()))
        return cls(quiver, base.preproj, base.tubes, homog, base.preinj)

    def instantiate(self, q: int, points: dict | None = None) -> ModuleClass:
        """The concrete class over F_q, with slot -> point taken from ``points`` (default:
        the first homogeneous degree-1 points in order)."""
        cat = get_catalog(self.quiver, q)
        if points is None:
            points = assign_slots(self.slots, q, self.quiver)
        parts = [(Preproj(v, s), 1) for v, s in self.preproj]
        parts += [(Preinj(v, s), 1) for v, s in self.preinj]
        parts += [(TubeMod(t, j, m), 1) for t, j, m in self.tubes]
        for s, lam in self.homog:
            parts += [(Homog(points[s], m), 1) for m in lam]
        total = 0
        for lab, _ in parts:
            d = cat._label_total(lab)
            total += d if d is not None else 0
        cat.ensure(max(total, 1))
        return cat.module(parts)

    def __str__(self) -> str:
        Q = self.quiver
        out = []
        for v, s in self.preproj:
            out.append(f"P({Q.label(v)})" if s == 0 else f"tau^-{s} P({Q.label(v)})")
        for t, j, m in self.tubes:
            out.append(f"T{t + 1}[{j + 1},{m}]")
        for s, lam in self.homog:
            out.append(f"H[{s},({','.join(str(p) for p in lam)})]")
        for v, s in self.preinj:
            out.append(f"I({Q.label(v)})" if s == 0 else f"tau^{s} I({Q.label(v)})")
        return " + ".join(out) if out else "0"


def _terms(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "+" and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return [t for t in out if t and t != "0"]


def available_points(q: int, quiver: Quiver) -> list:
    cat = get_catalog(quiver, q)
    if cat.tame is None:
        return []
    return sorted(cat.homogeneous_points(1), key=lambda p: p.sort_key())


def assign_slots(slots: Sequence[str], q: int, quiver: Quiver, reverse: bool = False) -> dict:
    pts = available_points(q, quiver) if slots else []
    if len(pts) < len(slots):
        raise SlotError(f"{len(slots)} homogeneous slots need as many non-exceptional rational points; F_{q} has {len(pts)}")
    if reverse:
        pts = pts[::-1]
    return dict(zip(sorted(slots), pts))


def instantiable(classes: Iterable[DecompClass], q: int) -> bool:
    slots = set()
    quiver = None
    for c in classes:
        slots.update(c.slots)
        quiver = c.quiver
    return not slots or len(available_points(q, quiver)) >= len(slots)


@dataclass(frozen=True)
class Triple:
    X1: DecompClass
    X2: DecompClass
    X3: DecompClass

    @property
    def quiver(self) -> Quiver:
        return self.X1.quiver

    @property
    def slots(self) -> tuple:
        return tuple(sorted(set(self.X1.slots) | set(self.X2.slots) | set(self.X3.slots)))

    def instantiate(self, q: int, reverse: bool = False) -> tuple[ModuleClass, ModuleClass, ModuleClass]:
        pts = assign_slots(self.slots, q, self.quiver, reverse)
        return self.X1.instantiate(q, pts), self.X2.instantiate(q, pts), self.X3.instantiate(q, pts)

    def instantiable(self, q: int) -> bool:
        return instantiable([self.X1, self.X2, self.X3], q)

    def to_json(self) -> dict:
        return {"quiver": self.quiver.name or self.quiver.describe(), "X1": str(self.X1), "X2": str(self.X2), "X3": str(self.X3)}

    @classmethod
    def from_json(cls, data: dict) -> "Triple":
        Q = load_quiver(data["quiver"])
        return cls(*(DecompClass.parse(Q, data[k]) for k in ("X1", "X2", "X3")))

    @classmethod
    def parse(cls, quiver: Quiver | str, x1: str, x2: str, x3: str) -> "Triple":
        Q = load_quiver(quiver) if isinstance(quiver, str) else quiver
        return cls(DecompClass.parse(Q, x1), DecompClass.parse(Q, x2), DecompClass.parse(Q, x3))

    def __str__(self) -> str:
        return f"g[{self.X1}, {self.X2} ; {self.X3}]"


def load_triples(path: str) -> list[Triple]:
    with open(path) as fh:
        data = json.load(fh)
    items = data if isinstance(data, list) else data.get("triples", [data])
    return [Triple.from_json(t) for t in items]


def hall_count_at(t: Triple, q: int, check_slots: bool = True) -> HallCount:
    """g_{X1 X2}^{X3} over F_q by submodule enumeration.  With homogeneous slots the count is
    repeated under the reversed point assignment and the two must agree."""
    X1, X2, X3 = t.instantiate(q)
    calc = get_calculator(X1.catalog)
    g = calc.hall_number(X1, X2, X3)
    if check_slots and t.slots:
        alt = t.instantiate(q, reverse=True)
        if alt != (X1, X2, X3):
            g2 = calc.hall_number(*alt)
            if g2.value != g.value:
                raise SlotDependence(f"{t} at q={q}: {g.value} vs {g2.value} after moving the slots")
    return g


def exponent_d(t: Triple, q: int) -> int:
    """dim End X3 - dim End X1 - dim End X2 - <dim X1, dim X2>."""
    X1, X2, X3 = t.instantiate(q)
    cat = X1.catalog
    return cat.end_dim(X3) - cat.end_dim(X1) - cat.end_dim(X2) - euler_form(cat.quiver, X1.dims, X2.dims)


@dataclass
class FittedPolynomial:
    coefficients: list  # Fractions, constant term first
    samples: dict  # q -> value used for interpolation
    verification: dict  # q -> (recount, predicted)
    status: str  # verified | refuted | insufficient-samples
    exponents: dict = field(default_factory=dict)  # q -> d(q)

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coefficients) if c]
        return nz[-1] if nz else -1

    @property
    def exponent_constant(self) -> bool:
        return len(set(self.exponents.values())) <= 1

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def expr(self):
        return sum(sympy.Rational(c.numerator, c.denominator) * _X**i for i, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        return str(sympy.expand(self.expr())) if self.coefficients else "0"

    def to_json(self) -> dict:
        return {
            "polynomial": str(self),
            "coefficients": [_frac(c) for c in self.coefficients],
            "samples": {str(q): str(v) for q, v in self.samples.items()},
            "verification": {str(q): {"recount": str(a), "predicted": _frac(b)} for q, (a, b) in self.verification.items()},
            "status": self.status,
            "exponent_d": {str(q): str(d) for q, d in self.exponents.items()},
            "exponent_constant": self.exponent_constant,
        }


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def interpolate(points: dict) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial through {x: y}."""
    if not points:
        return []
    poly = sympy.Poly(sympy.interpolate([(x, y) for x, y in sorted(points.items())], _X), _X, domain=sympy.QQ)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def fit_hall_polynomial(
    t: Triple,
    sample_primes: Sequence[int] = DEFAULT_SAMPLES,
    verify_primes: Sequence[int] = DEFAULT_VERIFY,
    min_samples: int = 2,
) -> FittedPolynomial:
    """Interpolate g(q) through growing sample sets until two consecutive fits agree, then
    compare the fit with recounts at the verification primes."""
    usable = [q for q in sample_primes if t.instantiable(q)]
    if len(usable) < min_samples:
        raise ValueError(f"{t}: fewer than {min_samples} instantiable sample fields")
    values: dict = {}
    exps: dict = {}
    prev = None
    stable = False
    for q in usable:
        values[q] = hall_count_at(t, q).value
        exps[q] = exponent_d(t, q)
        if len(values) < min_samples:
            continue
        cur = interpolate(values)
        if prev is not None and cur == prev:
            stable = True
            break
        prev = cur
    coeffs = interpolate(values)
    fit = FittedPolynomial(coeffs, dict(values), {}, "insufficient-samples", exps)
    if not stable:
        return fit
    ok = True
    for q in verify_primes:
        if not t.instantiable(q):
            continue
        g = hall_count_at(t, q).value
        fit.exponents[q] = exponent_d(t, q)
        pred = fit(q)
        fit.verification[q] = (g, pred)
        ok &= pred == g
    fit.status = "verified" if ok and fit.verification else ("refuted" if not ok else "insufficient-samples")
    return fit


def structure_constant(fit: FittedPolynomial, t: Triple, q: int | None = None) -> LaurentCoeff:
    """v^<dim X1, dim X2> phi(v^2): the coefficient of u_X3 in u_X1 * u_X2, generic in v
    when q is None."""
    e = euler_form(t.quiver, _dims(t.X1), _dims(t.X2))
    terms = {}
    for i, c in enumerate(fit.coefficients):
        if c:
            terms[e + 2 * i] = terms.get(e + 2 * i, Fraction(0)) + c
    gen = LaurentCoeff.generic(terms)
    return gen if q is None else gen.specialize(q)


def _dims(c: DecompClass) -> tuple:
    Q = c.quiver
    cat = get_catalog(Q, 2)
    d = [0] * Q.n
    labs = [Preproj(v, s) for v, s in c.preproj] + [Preinj(v, s) for v, s in c.preinj]
    labs += [TubeMod(t, j, m) for t, j, m in c.tubes]
    for lab in labs:
        for i, x in enumerate(cat.indec(lab).dims):
            d[i] += x
    delta = cat.tame.delta if c.homog else None
    for _, lam in c.homog:
        for i, x in enumerate(delta):
            d[i] += x * sum(lam)
    return tuple(d)


def crosscheck_structure_constant(fit: FittedPolynomial, t: Triple, q: int) -> bool:
    """The generic structure constant specialized at q against the Hall algebra product."""
    from .hallalg import get_algebra

    X1, X2, X3 = t.instantiate(q)
    alg = get_algebra(X1.catalog)
    got = alg.hall_product(X1, X2).get(X3, alg.coeff(0))
    return got == structure_constant(fit, t, q)


class HallPolynomialFitter:
    """Estimator-style wrapper around fit_hall_polynomial."""

    def __init__(self, sample_primes: Sequence[int] = DEFAULT_SAMPLES, verify_primes: Sequence[int] = DEFAULT_VERIFY):
        self.sample_primes = tuple(sample_primes)
        self.verify_primes = tuple(verify_primes)
        self.fit_: FittedPolynomial | None = None

    def get_params(self) -> dict:
        return {"sample_primes": self.sample_primes, "verify_primes": self.verify_primes}

    def fit(self, t: Triple) -> "HallPolynomialFitter":
        self.fit_ = fit_hall_polynomial(t, self.sample_primes, self.verify_primes)
        return self

    def predict(self, qs: Sequence[int]) -> list[Fraction]:
        if self.fit_ is None:
            raise RuntimeError("fit() has not been called")
        return [self.fit_(q) for q in qs]
