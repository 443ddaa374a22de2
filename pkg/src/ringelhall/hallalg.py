"""The twisted Hall algebra with torus words: products, coproduct, antipode, Green's pairing,
divided powers, graded spans and the orthogonal spaces L_{n delta}.

Elements are finite sums of K_mu u_[M] (torus word on the left) with fixed-q
coefficients a + b sqrt(q).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .catalog import Catalog, ModuleClass, TubeMod
from .coeff import LaurentCoeff, independent_rows, matrix_rank, quantum_factorial, right_nullspace
from .hallnum import HallCalculator, get_calculator
from .quiver import dim_add, dim_leq, dim_sub, euler_form, symmetric_form, subvectors

Torus = tuple  # integer vector over the vertices

MAX_HOPF_TOTAL = 6


class DegeneratePairing(ArithmeticError):
    """The Green pairing is degenerate where non-degeneracy is required."""


@dataclass
class Conventions:
    """Readings of symbols the construction leaves open.

    v_alpha: "total" gives |V_alpha| = q^(sum alpha_i); "one" gives |V_alpha| = 1.
    angle_dim: "total" reads dim M in <M> as the total dimension.
    torus: "symmetric" uses K_mu u_a = v^{(mu, a)} u_a K_mu; "euler" uses <mu, a>.
    """

    v_alpha: str = "total"
    angle_dim: str = "total"
    torus: str = "symmetric"


class HallElement:
    """A finite combination of K_mu u_[M]."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "HallAlgebra", terms: dict | None = None):
        self.alg = alg
        self.terms: dict = {}
        for k, c in (terms or {}).items():
            if not c.is_zero():
                self.terms[k] = c

    def __add__(self, other: "HallElement") -> "HallElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return HallElement(self.alg, out)

    def __neg__(self) -> "HallElement":
        return HallElement(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "HallElement") -> "HallElement":
        return self + (-other)

    def scale(self, c) -> "HallElement":
        c = self.alg.coeff(c)
        return HallElement(self.alg, {k: x * c for k, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return self.alg.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HallElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {M.dims for (_, M) in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        d = self.degrees()
        if len(d) != 1:
            raise ValueError("element is not homogeneous")
        return next(iter(d))

    def coefficient(self, M: ModuleClass, mu: Torus | None = None) -> LaurentCoeff:
        mu = mu if mu is not None else self.alg.zero_torus
        return self.terms.get((tuple(mu), M), self.alg.coeff(0))

    def to_json(self) -> list:
        out = []
        for (mu, M), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1].sort_key(), kv[0][0])):
            out.append({"torus": list(mu), "module": str(M), "coeff": c.to_json()})
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (mu, M), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1].sort_key(), kv[0][0])):
            k = "" if not any(mu) else f"K{list(mu)} "
            parts.append(f"({c}) {k}u[{M}]")
        return " + ".join(parts)

    __repr__ = __str__


class TensorElement:
    """A finite combination of (K_mu u_A) (x) (K_nu u_B)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "HallAlgebra", terms: dict | None = None):
        self.alg = alg
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElement(self.alg, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + TensorElement(self.alg, {k: -c for k, c in other.terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        alg = self.alg
        out: dict = {}
        for (l1, r1), c1 in self.terms.items():
            for (l2, r2), c2 in other.terms.items():
                left = alg._basis_product(l1, l2)
                right = alg._basis_product(r1, r2)
                c = c1 * c2
                for kl, cl in left.items():
                    for kr, cr in right.items():
                        key = (kl, kr)
                        val = c * cl * cr
                        out[key] = out[key] + val if key in out else val
        return TensorElement(alg, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return not (self - other).terms

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        out = []
        for ((m1, A), (m2, B)), c in sorted(self.terms.items(), key=lambda kv: (_key_sort(kv[0][0]), _key_sort(kv[0][1]))):
            out.append({"left": {"torus": list(m1), "module": str(A)}, "right": {"torus": list(m2), "module": str(B)}, "coeff": c.to_json()})
        return out

    def counit_left(self) -> HallElement:
        """(eps (x) 1) applied to the tensor."""
        out = self.alg.zero()
        for ((m1, A), (m2, B)), c in self.terms.items():
            if A.is_zero:
                out = out + HallElement(self.alg, {(m2, B): c})
        return out

    def counit_right(self) -> HallElement:
        out = self.alg.zero()
        for ((m1, A), (m2, B)), c in self.terms.items():
            if B.is_zero:
                out = out + HallElement(self.alg, {(m1, A): c})
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ((m1, A), (m2, B)), c in sorted(self.terms.items(), key=lambda kv: (_key_sort(kv[0][0]), _key_sort(kv[0][1]))):
            kl = f"K{list(m1)} " if any(m1) else ""
            kr = f"K{list(m2)} " if any(m2) else ""
            parts.append(f"({c}) {kl}u[{A}] (x) {kr}u[{B}]")
        return " + ".join(parts)


@dataclass
class GradedSubspace:
    degree: tuple
    elements: list
    rank: int
    columns: list = field(default_factory=list)


class HallAlgebra:
    """The positive half with torus words over one catalog (quiver and q)."""

    def __init__(self, catalog: Catalog, conventions: Conventions | None = None, calculator: HallCalculator | None = None):
        self.catalog = catalog
        self.quiver = catalog.quiver
        self.q = catalog.q
        self.conv = conventions or Conventions()
        self.calc = calculator or get_calculator(catalog)
        self.zero_torus = tuple([0] * self.quiver.n)
        self._prod_cache: dict = {}
        self._split_cache: dict = {}
        self._antipode_cache: dict = {}
        self._antipode_rec_cache: dict = {}

    # -- scalars --------------------------------------------------------------

    def coeff(self, c) -> LaurentCoeff:
        if isinstance(c, LaurentCoeff):
            return c
        return LaurentCoeff.const(Fraction(c), self.q)

    def v(self, k: int, c=1) -> LaurentCoeff:
        return LaurentCoeff.v_pow(k, self.q, Fraction(c))

    def _torus_pair(self, mu: Sequence[int], a: Sequence[int]) -> int:
        if self.conv.torus == "euler":
            return euler_form(self.quiver, mu, a)
        return symmetric_form(self.quiver, mu, a)

    # -- elements -------------------------------------------------------------

    def element(self, terms: dict) -> HallElement:
        return HallElement(self, terms)

    def zero(self) -> HallElement:
        return HallElement(self)

    def one(self) -> HallElement:
        return self.u(self.catalog.zero())

    def u(self, M: ModuleClass | str, c=1, mu: Torus | None = None) -> HallElement:
        if isinstance(M, str):
            M = self.catalog.parse(M)
        mu = tuple(mu) if mu is not None else self.zero_torus
        return HallElement(self, {(mu, M): self.coeff(c)})

    def simple(self, i) -> HallElement:
        """u_i for a vertex label i."""
        from .rep import simple_rep

        idx = self.quiver.index(i)
        return self.u(self.catalog.classify(simple_rep(self.quiver, self.catalog.field, idx)))

    def K(self, mu: Sequence[int]) -> HallElement:
        return self.u(self.catalog.zero(), 1, tuple(mu))

    def _angle_exp(self, M: ModuleClass) -> int:
        dim = sum(M.dims) if self.conv.angle_dim == "total" else sum(M.dims)
        return -dim + self.catalog.end_dim(M)

    def angle(self, M: ModuleClass | str) -> HallElement:
        """<M> = v^(-dim M + dim End M) u_[M]."""
        if isinstance(M, str):
            M = self.catalog.parse(M)
        return self.u(M, self.v(self._angle_exp(M)))

    def to_angle(self, x: HallElement) -> dict:
        """Coefficients of x in the <M> basis."""
        return {k: c * self.v(-self._angle_exp(k[1])) for k, c in x.terms.items()}

    def from_angle(self, coeffs: dict) -> HallElement:
        return HallElement(self, {k: c * self.v(self._angle_exp(k[1])) for k, c in coeffs.items()})

    # -- multiplication -------------------------------------------------------

    def hall_product(self, A: ModuleClass, B: ModuleClass) -> dict:
        """u_A * u_B as {L: coefficient}: v^<A,B> sum_L g_{AB}^L u_L."""
        key = (A, B)
        out = self._prod_cache.get(key)
        if out is None:
            if A.is_zero or B.is_zero:
                out = {A + B: self.coeff(1)}
            else:
                tw = self.v(euler_form(self.quiver, A.dims, B.dims))
                out = {L: tw * g for L, g in self.calc.products(A, B).items()}
            self._prod_cache[key] = out
        return out

    def _basis_product(self, x: tuple, y: tuple) -> dict:
        """(K_mu u_A)(K_nu u_B) = v^{-(nu, A)} K_{mu+nu} u_A u_B."""
        (mu, A), (nu, B) = x, y
        tw = self.v(-self._torus_pair(nu, A.dims))
        s = tuple(a + b for a, b in zip(mu, nu))
        return {(s, L): tw * c for L, c in self.hall_product(A, B).items()}

    def multiply(self, a: HallElement, b: HallElement) -> HallElement:
        out: dict = {}
        for kx, cx in a.terms.items():
            for ky, cy in b.terms.items():
                c = cx * cy
                for k, cz in self._basis_product(kx, ky).items():
                    val = c * cz
                    out[k] = out[k] + val if k in out else val
        return HallElement(self, out)

    def power(self, x: HallElement, p: int) -> HallElement:
        out = self.one()
        for _ in range(p):
            out = self.multiply(out, x)
        return out

    def divided_power(self, x: HallElement, p: int) -> HallElement:
        """x^(p) = x^p / [p]!."""
        return self.power(x, p).scale(quantum_factorial(p, self.q).inverse())

    # -- relations --------------------------------------------------------------

    def serre_check(self, i, j, gens: dict | None = None) -> HallElement:
        """sum_{p+p'=1-a_ij} (-1)^p x_i^(p) x_j x_i^(p'); zero when the relation holds."""
        Q = self.quiver
        gens = gens or {}
        xi = gens.get(i) or self.simple(i)
        xj = gens.get(j) or self.simple(j)
        ii, jj = Q.index(i), Q.index(j)
        aij = symmetric_form(Q, Q.unit(ii), Q.unit(jj))
        n = 1 - aij
        total = self.zero()
        for p in range(n + 1):
            term = self.multiply(self.multiply(self.divided_power(xi, p), xj), self.divided_power(xi, n - p))
            total = total + (term if p % 2 == 0 else -term)
        return total

    def commutator(self, x: HallElement, y: HallElement) -> HallElement:
        return self.multiply(x, y) - self.multiply(y, x)

    def torus_relation_check(self, mu: Sequence[int], x: HallElement) -> bool:
        """K_mu x K_{-mu} = v^{(mu, deg x)} x for homogeneous x."""
        lhs = self.multiply(self.multiply(self.K(mu), x), self.K([-m for m in mu]))
        rhs = x.scale(self.v(self._torus_pair(mu, x.degree())))
        return lhs == rhs

    # -- coproduct, counit, antipode -----------------------------------------

    def _check_size(self, M: ModuleClass) -> None:
        if M.total > MAX_HOPF_TOTAL:
            raise ValueError(f"total dimension {M.total} exceeds the Hopf budget {MAX_HOPF_TOTAL}")

    def splittings(self, L: ModuleClass) -> dict:
        """{(quotient, sub): g} over all dimension vectors of the submodule."""
        out = self._split_cache.get(L)
        if out is None:
            out = {}
            for beta in subvectors(L.dims):
                for (quo, sub), g in self.calc.submodule_table(L, beta).items():
                    out[(quo, sub)] = g
            self._split_cache[L] = out
        return out

    def comultiply(self, x: HallElement) -> TensorElement:
        """Delta(K_mu u_L) = sum v^<a,b> (a_a a_b / a_L) g_{ab}^L K_mu u_a K_b (x) K_mu u_b."""
        cat = self.catalog
        out: dict = {}
        for (mu, L), c in x.terms.items():
            self._check_size(L)
            aL = cat.aut_order(L)
            for (A, B), g in self.splittings(L).items():
                w = self.v(euler_form(self.quiver, A.dims, B.dims), Fraction(cat.aut_order(A) * cat.aut_order(B) * g, aL))
                # u_A K_b = v^{-(b, A)} K_b u_A
                w = w * self.v(-self._torus_pair(B.dims, A.dims))
                left = (tuple(m + b for m, b in zip(mu, B.dims)), A)
                right = (tuple(mu), B)
                key = (left, right)
                val = c * w
                out[key] = out[key] + val if key in out else val
        return TensorElement(self, out)

    def counit(self, x: HallElement) -> LaurentCoeff:
        return sum((c for (mu, M), c in x.terms.items() if M.is_zero), self.coeff(0))

    def tensor(self, x: HallElement, y: HallElement) -> TensorElement:
        out: dict = {}
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                out[(kx, ky)] = cx * cy
        return TensorElement(self, out)

    def _filtrations(self, L: ModuleClass) -> dict:
        """{(l_1, ..., l_m): g^L_{l_1 ... l_m}} over sequences of nonzero classes (l_1 on top)."""
        if L.is_zero:
            return {(): 1}
        out: dict = {}
        for (quo, sub), g in self.splittings(L).items():
            if quo.is_zero:
                continue
            for rest, h in self._filtrations(sub).items():
                key = (quo,) + rest
                out[key] = out.get(key, 0) + g * h
        return out

    def _untwisted_chain(self, parts: tuple) -> dict:
        """sum_pi g^pi_{l_1 ... l_m} u_pi, built from the untwisted products."""
        cur = {self.catalog.zero(): 1}
        for p in reversed(parts):
            nxt: dict = {}
            for X, c in cur.items():
                if X.is_zero:
                    nxt[p] = nxt.get(p, 0) + c
                    continue
                for Y, g in self.calc.products(p, X).items():
                    nxt[Y] = nxt.get(Y, 0) + c * g
            cur = nxt
        return cur

    def antipode_u(self, L: ModuleClass) -> HallElement:
        """S(u_L) by the closed formula over filtrations."""
        hit = self._antipode_cache.get(L)
        if hit is not None:
            return hit
        self._check_size(L)
        cat = self.catalog
        if L.is_zero:
            res = self.one()
            self._antipode_cache[L] = res
            return res
        aL = cat.aut_order(L)
        negL = tuple(-d for d in L.dims)
        terms: dict = {}
        for parts, g in self._filtrations(L).items():
            m = len(parts)
            e = 2 * sum(euler_form(self.quiver, parts[i].dims, parts[j].dims) for i in range(m) for j in range(i + 1, m))
            auts = 1
            for p in parts:
                auts *= cat.aut_order(p)
            base = self.v(e, Fraction((-1) ** m * auts * g, aL))
            for pi, h in self._untwisted_chain(parts).items():
                key = (negL, pi)
                val = base * h
                terms[key] = terms[key] + val if key in terms else val
        res = HallElement(self, terms)
        self._antipode_cache[L] = res
        return res

    def antipode_u_recursive(self, M: ModuleClass) -> HallElement:
        """S(u_M) from the counit axiom mu(S (x) 1) Delta(u_M) = 0:

        S(u_M) = - sum_{(A, B), B != 0} v^<A,B> (a_A a_B / a_M) g_{AB}^M K_{-B} S(u_A) u_B.
        """
        hit = self._antipode_rec_cache.get(M)
        if hit is not None:
            return hit
        self._check_size(M)
        cat = self.catalog
        if M.is_zero:
            return self.one()
        aM = cat.aut_order(M)
        total = self.zero()
        for (A, B), g in self.splittings(M).items():
            if B.is_zero:
                continue
            c = self.v(euler_form(self.quiver, A.dims, B.dims), Fraction(cat.aut_order(A) * cat.aut_order(B) * g, aM))
            SA = self.antipode_u_recursive(A) if not A.is_zero else self.one()
            term = self.multiply(self.multiply(self.K([-b for b in B.dims]), SA), self.u(B))
            total = total + term.scale(c)
        res = -total
        self._antipode_rec_cache[M] = res
        return res

    def antipode(self, x: HallElement, method: str = "closed") -> HallElement:
        """S(K_mu u_L) = S(u_L) K_{-mu}."""
        out = self.zero()
        for (mu, L), c in x.terms.items():
            S = self.antipode_u(L) if method == "closed" else self.antipode_u_recursive(L)
            out = out + self.multiply(S, self.K([-m for m in mu])).scale(c)
        return out

    def hopf_left(self, x: HallElement, method: str = "closed") -> HallElement:
        """mu (S (x) 1) Delta (x)."""
        out = self.zero()
        for (l, r), c in self.comultiply(x).terms.items():
            left = self.antipode(HallElement(self, {l: self.coeff(1)}), method)
            out = out + self.multiply(left, HallElement(self, {r: self.coeff(1)})).scale(c)
        return out

    def hopf_right(self, x: HallElement, method: str = "closed") -> HallElement:
        """mu (1 (x) S) Delta (x)."""
        out = self.zero()
        for (l, r), c in self.comultiply(x).terms.items():
            right = self.antipode(HallElement(self, {r: self.coeff(1)}), method)
            out = out + self.multiply(HallElement(self, {l: self.coeff(1)}), right).scale(c)
        return out

    # -- Green's pairing ---------------------------------------------------------

    def v_alpha(self, dims: Sequence[int]) -> int:
        if self.conv.v_alpha == "one":
            return 1
        return self.q ** sum(dims)

    def green_diag(self, M: ModuleClass) -> LaurentCoeff:
        """phi(u_M^+, u_M^-) = |V_M| / a_M."""
        return self.coeff(Fraction(self.v_alpha(M.dims), self.catalog.aut_order(M)))

    def green_form(self, x: HallElement, y_mirror: HallElement) -> LaurentCoeff:
        """phi(x, y) where y in the negative half is given by its mirror labels.

        phi(K_mu u_a^+, K_nu u_b^-) = v^{-(mu,nu) - (a,nu) + (mu,b)} |V_a| / a_a delta_ab.
        """
        Q = self.quiver
        total = self.coeff(0)
        for (mu, A), c in x.terms.items():
            for (nu, B), d in y_mirror.terms.items():
                if A != B:
                    continue
                e = -symmetric_form(Q, mu, nu) - symmetric_form(Q, A.dims, nu) + symmetric_form(Q, mu, B.dims)
                total = total + c * d * self.v(e) * self.green_diag(A)
        return total

    # -- graded spans -------------------------------------------------------------

    def composition_generators(self) -> list[HallElement]:
        return [self.simple(self.quiver.label(i)) for i in range(self.quiver.n)]

    def singular_generators(self, bound: Sequence[int]) -> list[HallElement]:
        """u_i and u_[M] for every nonzero M in the non-homogeneous tubes with dim M <= bound."""
        cat = self.catalog
        cat.ensure(sum(bound))
        gens = self.composition_generators()
        for beta in sorted(subvectors(tuple(bound)), key=lambda b: (sum(b), b)):
            if sum(beta) < 2:
                continue
            for M in cat.classes(beta):
                if all(isinstance(lab, TubeMod) for lab, _ in M.parts):
                    gens.append(self.u(M))
        return gens

    def graded_span(self, generators: Iterable[HallElement], gamma: Sequence[int]) -> GradedSubspace:
        """The degree-gamma piece of the subalgebra generated by homogeneous generators."""
        gamma = tuple(gamma)
        gens = [g for g in generators if not g.is_zero()]
        for g in gens:
            if not g.is_homogeneous():
                raise ValueError("generators must be homogeneous")
        spans = self._spans(tuple(gens), gamma)
        basis = spans.get(gamma, [])
        return GradedSubspace(gamma, basis, len(basis), sorted({k for b in basis for k in b.terms}, key=_key_sort))

    def _spans(self, gens: tuple, gamma: tuple) -> dict:
        by_deg: dict = {}
        for g in gens:
            d = g.degree()
            if any(d) and dim_leq(d, gamma):
                by_deg.setdefault(d, []).append(g)
        degrees = sorted((b for b in subvectors(gamma)), key=lambda b: (sum(b), b))
        spans: dict = {self.zero_torus: [self.one()]}
        for beta in degrees:
            if not any(beta):
                continue
            cands: list[HallElement] = []
            for d, gl in by_deg.items():
                if not dim_leq(d, beta):
                    continue
                rest = dim_sub(beta, d)
                for b in spans.get(rest, []):
                    for g in gl:
                        cands.append(self.multiply(g, b))
            spans[beta] = self.independent(cands)
        return spans

    def coefficient_matrix(self, elems: Sequence[HallElement], columns: list | None = None) -> tuple[list, list]:
        if columns is None:
            columns = sorted({k for e in elems for k in e.terms}, key=_key_sort)
        zero = self.coeff(0)
        rows = [[e.terms.get(k, zero) for k in columns] for e in elems]
        return rows, columns

    def independent(self, elems: Sequence[HallElement]) -> list[HallElement]:
        elems = [e for e in elems if not e.is_zero()]
        if not elems:
            return []
        rows, _ = self.coefficient_matrix(elems)
        return [elems[i] for i in independent_rows(rows, self.q)]

    def rank(self, elems: Sequence[HallElement]) -> int:
        elems = [e for e in elems if not e.is_zero()]
        if not elems:
            return 0
        rows, _ = self.coefficient_matrix(elems)
        return matrix_rank(rows, self.q)

    def in_span(self, x: HallElement, elems: Sequence[HallElement]) -> bool:
        return self.rank(list(elems) + [x]) == self.rank(elems)

    # -- L_{n delta} ---------------------------------------------------------------

    def _pairing_matrix(self, xs: Sequence[HallElement], ys: Sequence[HallElement]) -> list[list[LaurentCoeff]]:
        return [[self.green_form(x, y) for y in ys] for x in xs]

    def orthogonal_complement(self, space: Sequence[HallElement], against: Sequence[HallElement]) -> list[HallElement]:
        """Elements x of span(space) with phi(x, omega(y)) = 0 for all y in ``against``."""
        if not space:
            return []
        if not against:
            return list(space)
        G = self._pairing_matrix(space, against)  # rows: space, cols: against
        Gt = [[G[i][j] for i in range(len(space))] for j in range(len(against))]
        null = right_nullspace(Gt, self.q, len(space))
        out = []
        for vec in null:
            x = self.zero()
            for c, s in zip(vec, space):
                if not c.is_zero():
                    x = x + s.scale(c)
            out.append(x)
        return out

    def l_delta(self, n: int = 1) -> "LDelta":
        cat = self.catalog
        td = cat.tame
        if td is None:
            raise ValueError("L_{n delta} needs a tame quiver")
        delta = td.delta
        target = tuple(n * d for d in delta)
        cat.ensure(sum(target))
        hs_gens = self.singular_generators(target)
        hs = self.graded_span(hs_gens, target)
        lower_gens = self.composition_generators()
        previous: list[HallElement] = []
        for m in range(1, n):
            previous += self.l_delta(m).basis
        lower = self.graded_span(lower_gens + previous, target)
        basis = self.orthogonal_complement(hs.elements, lower.elements)
        gram = self._pairing_matrix(basis, basis)
        if basis and matrix_rank(gram, self.q) < len(basis):
            raise DegeneratePairing("the pairing on L_{n delta} is degenerate")
        return LDelta(self, n, basis, hs, lower, gram)

    def centrality_check(self, x: HallElement, gens: Iterable[HallElement], degree_bound: Sequence[int] | None = None) -> bool:
        """x commutes with every generator whose product with x stays within degree_bound."""
        dx = x.degree() if not x.is_zero() else self.zero_torus
        for g in gens:
            if degree_bound is not None and not dim_leq(dim_add(dx, g.degree()), degree_bound):
                continue
            if not self.commutator(x, g).is_zero():
                return False
        return True

    # -- serialization --------------------------------------------------------------

    def element_from_json(self, data: list) -> HallElement:
        terms = {}
        for t in data:
            M = self.catalog.parse(t["module"])
            terms[(tuple(t["torus"]), M)] = LaurentCoeff.from_json(t["coeff"], self.q)
        return HallElement(self, terms)

    def dumps(self, x: HallElement) -> str:
        return json.dumps(x.to_json())

    def loads(self, s: str) -> HallElement:
        return self.element_from_json(json.loads(s))


@dataclass
class LDelta:
    alg: HallAlgebra
    n: int
    basis: list
    singular: GradedSubspace
    lower: GradedSubspace
    gram: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def direct_sum_holds(self) -> bool:
        """rank H^s = rank(lower) + dim L and lower + L spans H^s."""
        alg = self.alg
        joint = alg.rank(self.lower.elements + self.basis)
        return joint == self.singular.rank == self.lower.rank + self.dim

    def dual_basis(self) -> list[HallElement]:
        """Mirror-label elements y_q with phi(x_p, y_q) = delta_pq / (v - v^-1)."""
        alg = self.alg
        from .coeff import echelon

        k = self.dim
        if k == 0:
            return []
        q = alg.q
        scale = (alg.v(1) - alg.v(-1)).inverse()
        aug = [list(self.gram[i]) + [alg.coeff(int(i == j)) for j in range(k)] for i in range(k)]
        red, piv = echelon(aug, q)
        if piv[:k] != list(range(k)):
            raise DegeneratePairing("singular Gram matrix")
        inv = [row[k:] for row in red]  # inverse of the Gram matrix
        out = []
        for j in range(k):
            y = alg.zero()
            for r in range(k):
                c = inv[r][j]
                if not c.is_zero():
                    y = y + self.basis[r].scale(c * scale)
            out.append(y)
        return out


def _key_sort(k) -> tuple:
    mu, M = k
    return (M.sort_key(), mu)


def classes_up_to(catalog: Catalog, max_total: int) -> list[ModuleClass]:
    """Every nonzero class of total dimension <= max_total."""
    catalog.ensure(max_total)
    n = catalog.quiver.n
    out = []
    for g in itertools.product(range(max_total + 1), repeat=n):
        if 0 < sum(g) <= max_total:
            out.extend(catalog.classes(g))
    return sorted(out)


def hopf_suite(alg: "HallAlgebra", max_total: int = 3) -> dict:
    """Failure counts for Delta multiplicativity (pairs with total <= max_total), both counit
    laws, both antipode laws and agreement of the two antipode evaluations."""
    mods = classes_up_to(alg.catalog, max_total)
    rep = {"classes": len(mods), "multiplicativity": 0, "counit": 0, "antipode_left": 0, "antipode_right": 0, "antipode_methods": 0}
    for M in mods:
        x = alg.u(M)
        d = alg.comultiply(x)
        if d.counit_left() != x or d.counit_right() != x:
            rep["counit"] += 1
        if not alg.hopf_left(x).is_zero():
            rep["antipode_left"] += 1
        if not alg.hopf_right(x).is_zero():
            rep["antipode_right"] += 1
        if alg.antipode_u(M) != alg.antipode_u_recursive(M):
            rep["antipode_methods"] += 1
        for N in mods:
            if M.total + N.total <= max_total:
                y = alg.u(N)
                if alg.comultiply(alg.multiply(x, y)) != d * alg.comultiply(y):
                    rep["multiplicativity"] += 1
    rep["ok"] = all(v == 0 for k, v in rep.items() if k != "classes")
    return rep


def serre_suite(alg: "HallAlgebra") -> dict:
    """The quantum Serre combination for every ordered pair of distinct vertices."""
    Q = alg.quiver
    bad = []
    pairs = 0
    for i in range(Q.n):
        for j in range(Q.n):
            if i != j:
                pairs += 1
                if not alg.serre_check(Q.label(i), Q.label(j)).is_zero():
                    bad.append((Q.label(i), Q.label(j)))
    return {"pairs": pairs, "nonzero": bad, "ok": not bad}


_ALGEBRAS: dict = {}


def get_algebra(catalog: Catalog) -> HallAlgebra:
    alg = _ALGEBRAS.get(catalog.key)
    if alg is None:
        alg = HallAlgebra(catalog)
        _ALGEBRAS[catalog.key] = alg
    return alg
