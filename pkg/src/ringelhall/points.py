"""Closed points of the projective line over F_q and the matching Kronecker modules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import GF


@dataclass(frozen=True)
class Point:
    """A closed point of P^1(F_q).

    ``coeffs`` lists the non-leading coefficients of the monic irreducible
    polynomial, lowest degree first; the point at infinity has ``coeffs=None``.
    """

    q: int
    degree: int
    coeffs: tuple[int, ...] | None

    @property
    def is_infinity(self) -> bool:
        return self.coeffs is None

    @property
    def value(self) -> int | None:
        """The root of a degree-1 point (None at infinity)."""
        if self.coeffs is None or self.degree != 1:
            return None
        return GF(self.q).neg(self.coeffs[0])

    def ident(self) -> str:
        if self.coeffs is None:
            return "inf"
        if self.degree == 1:
            return str(self.value)
        return "f" + ".".join(str(c) for c in self.coeffs)

    def sort_key(self) -> tuple:
        return (self.degree, self.coeffs is not None, self.coeffs or ())

    def __repr__(self) -> str:
        return f"Point({self.ident()})"


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(F: GF, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return tuple(out)


def poly_rem(F: GF, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    r = list(a)
    db = len(b) - 1
    lead_inv = F.inv(b[-1])
    while len(_poly_trim(r)) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = F.mul(r[-1], lead_inv)
        for j, y in enumerate(b):
            r[shift + j] = F.sub(r[shift + j], F.mul(c, y))
        _poly_trim(r)
    return tuple(r)


@lru_cache(maxsize=None)
def monic_irreducibles(q: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Monic irreducible polynomials of degree d over F_q, as full coefficient tuples (low first)."""
    F = GF(q)
    lower = [f for k in range(1, d // 2 + 1) for f in monic_irreducibles(q, k)]
    out = []
    for tail in itertools.product(range(q), repeat=d):
        f = tuple(tail) + (1,)
        if d == 1 or all(poly_rem(F, f, g) != () for g in lower):
            out.append(f)
    return tuple(out)


def make_point(F: GF, coeffs: tuple[int, ...] | None) -> Point:
    if coeffs is None:
        return Point(F.q, 1, None)
    return Point(F.q, len(coeffs), tuple(coeffs))


def closed_points(F: GF, d: int) -> list[Point]:
    """Closed points of degree d: infinity (d = 1) and the monic irreducibles of degree d."""
    pts = []
    if d == 1:
        pts.append(make_point(F, None))
    for f in monic_irreducibles(F.q, d):
        pts.append(make_point(F, f[:-1]))
    return pts


def point_for_value(F: GF, lam: int | None) -> Point:
    """The degree-1 point x = lam (None for infinity)."""
    if lam is None:
        return make_point(F, None)
    return make_point(F, (F.neg(lam),))


def parse_point(F: GF, ident: str) -> Point:
    ident = ident.strip()
    if ident == "inf":
        return point_for_value(F, None)
    if ident.startswith("f"):
        coeffs = tuple(int(c) for c in ident[1:].split("."))
        full = coeffs + (1,)
        if full not in monic_irreducibles(F.q, len(coeffs)):
            raise ValueError(f"{ident} is not a monic irreducible over F_{F.q}")
        return make_point(F, coeffs)
    lam = int(ident)
    if not 0 <= lam < F.q:
        raise ValueError(f"point {ident} is not an element of F_{F.q}")
    return point_for_value(F, lam)


def companion(F: GF, f: tuple[int, ...]) -> np.ndarray:
    """Companion matrix of a monic polynomial given with all coefficients (low first)."""
    d = len(f) - 1
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        C[i, i - 1] = 1
    for i in range(d):
        C[i, d - 1] = F.neg(f[i])
    return C


def kronecker_regular(F: GF, point: Point, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrow matrices (a, b) of the indecomposable regular Kronecker module at ``point``
    with quasi-length m; both spaces have dimension degree * m."""
    if point.is_infinity:
        nil = companion(F, (0,) * m + (1,))
        return nil, np.eye(m, dtype=np.int64)
    f = point.coeffs + (1,)
    g = (1,)
    for _ in range(m):
        g = poly_mul(F, g, f)
    n = point.degree * m
    return np.eye(n, dtype=np.int64), companion(F, g)
