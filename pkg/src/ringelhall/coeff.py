"""Exact coefficients in v = sqrt(q).

Two modes share one class:

* fixed-q: the number a + b*sqrt(q) with rational a, b (v^2 reduced to q);
* generic: a Laurent polynomial in v with rational coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import flint

Number = Union[int, Fraction]


def _is_square(q: int) -> int | None:
    r = math.isqrt(q)
    return r if r * r == q else None


class LaurentCoeff:
    __slots__ = ("q", "a", "b", "terms")

    def __init__(self, q: int | None = None, a: Number = 0, b: Number = 0, terms: dict | None = None):
        self.q = q
        if q is None:
            clean = {int(e): Fraction(c) for e, c in (terms or {}).items() if c}
            self.terms = tuple(sorted(clean.items()))
            self.a = self.b = None
        else:
            a, b = Fraction(a), Fraction(b)
            root = _is_square(q)
            if root is not None and b:
                a, b = a + b * root, Fraction(0)
            self.a, self.b = a, b
            self.terms = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def fixed(cls, q: int, a: Number = 0, b: Number = 0) -> "LaurentCoeff":
        return cls(q, a, b)

    @classmethod
    def generic(cls, terms: dict) -> "LaurentCoeff":
        return cls(None, terms=terms)

    @classmethod
    def const(cls, c: Number, q: int | None = None) -> "LaurentCoeff":
        return cls(q, c) if q is not None else cls(None, terms={0: c})

    @classmethod
    def v_pow(cls, k: int, q: int | None = None, c: Number = 1) -> "LaurentCoeff":
        """c * v^k."""
        if q is None:
            return cls(None, terms={k: c})
        r = k % 2
        scale = Fraction(q) ** ((k - r) // 2) * Fraction(c)
        return cls(q, 0, scale) if r else cls(q, scale, 0)

    # -- predicates -----------------------------------------------------------

    @property
    def is_generic(self) -> bool:
        return self.q is None

    def is_zero(self) -> bool:
        if self.q is None:
            return not self.terms
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "LaurentCoeff":
        if isinstance(other, LaurentCoeff):
            if other.q != self.q:
                raise ValueError("coefficients from different modes or fields")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentCoeff.const(other, self.q)
        return NotImplemented

    def __add__(self, other) -> "LaurentCoeff":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.q is None:
            d = dict(self.terms)
            for e, c in o.terms:
                d[e] = d.get(e, 0) + c
            return LaurentCoeff(None, terms=d)
        return LaurentCoeff(self.q, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "LaurentCoeff":
        if self.q is None:
            return LaurentCoeff(None, terms={e: -c for e, c in self.terms})
        return LaurentCoeff(self.q, -self.a, -self.b)

    def __sub__(self, other) -> "LaurentCoeff":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> "LaurentCoeff":
        return (-self) + other

    def __mul__(self, other) -> "LaurentCoeff":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.q is None:
            d: dict = {}
            for e1, c1 in self.terms:
                for e2, c2 in o.terms:
                    d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
            return LaurentCoeff(None, terms=d)
        q = self.q
        return LaurentCoeff(q, self.a * o.a + q * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "LaurentCoeff":
        """a - b sqrt(q) in fixed mode; v -> -v in generic mode."""
        if self.q is None:
            return LaurentCoeff(None, terms={e: (-c if e % 2 else c) for e, c in self.terms})
        return LaurentCoeff(self.q, self.a, -self.b)

    def inverse(self) -> "LaurentCoeff":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.q is None:
            if len(self.terms) != 1:
                raise ArithmeticError(f"{self} is not a unit of Q[v, 1/v]")
            (e, c), = self.terms
            return LaurentCoeff(None, terms={-e: 1 / c})
        norm = self.a * self.a - self.q * self.b * self.b
        return LaurentCoeff(self.q, self.a / norm, -self.b / norm)

    def __truediv__(self, other) -> "LaurentCoeff":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.q is None:
            return _laurent_divide(self, o)
        return self * o.inverse()

    def __rtruediv__(self, other) -> "LaurentCoeff":
        return LaurentCoeff.const(other, self.q) / self

    def __pow__(self, k: int) -> "LaurentCoeff":
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentCoeff.const(1, self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentCoeff.const(other, self.q)
        if not isinstance(other, LaurentCoeff) or other.q != self.q:
            return NotImplemented
        if self.q is None:
            return self.terms == other.terms
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.q, self.a, self.b, self.terms))

    # -- conversions ----------------------------------------------------------

    def specialize(self, q: int) -> "LaurentCoeff":
        """Evaluate a generic coefficient at v = sqrt(q)."""
        if self.q is not None:
            if self.q != q:
                raise ValueError("cannot re-specialize a fixed-q coefficient")
            return self
        out = LaurentCoeff(q)
        for e, c in self.terms:
            out = out + LaurentCoeff.v_pow(e, q, c)
        return out

    def rational(self) -> Fraction:
        """The value as a rational number (raises if it involves sqrt(q) or v)."""
        if self.q is None:
            if any(e for e, _ in self.terms):
                raise ValueError(f"{self} is not constant")
            return self.terms[0][1] if self.terms else Fraction(0)
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def to_json(self) -> dict:
        if self.q is None:
            return {"laurent": [[e, _frac_str(c)] for e, c in self.terms]}
        return {"a": _frac_str(self.a), "b": _frac_str(self.b)}

    @classmethod
    def from_json(cls, data: dict, q: int | None = None) -> "LaurentCoeff":
        if "laurent" in data:
            return cls(None, terms={int(e): Fraction(c) for e, c in data["laurent"]})
        if q is None:
            raise ValueError("fixed-q coefficient needs q")
        return cls(q, Fraction(data["a"]), Fraction(data["b"]))

    def __str__(self) -> str:
        if self.q is None:
            if not self.terms:
                return "0"
            parts = []
            for e, c in reversed(self.terms):
                parts.append(f"{_frac_str(c)}" if e == 0 else f"{_frac_str(c)}*v^{e}")
            return " + ".join(parts)
        if self.b == 0:
            return _frac_str(self.a)
        if self.a == 0:
            return f"{_frac_str(self.b)}*sqrt({self.q})"
        return f"{_frac_str(self.a)} + {_frac_str(self.b)}*sqrt({self.q})"

    def __repr__(self) -> str:
        return f"LaurentCoeff({self})"


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _laurent_divide(num: LaurentCoeff, den: LaurentCoeff) -> LaurentCoeff:
    """Exact division in Q[v, 1/v]; raises ArithmeticError when not exact."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero")
    if num.is_zero():
        return num
    n_low = num.terms[0][0]
    d_low = den.terms[0][0]
    n = [Fraction(0)] * (num.terms[-1][0] - n_low + 1)
    for e, c in num.terms:
        n[e - n_low] = c
    d = [Fraction(0)] * (den.terms[-1][0] - d_low + 1)
    for e, c in den.terms:
        d[e - d_low] = c
    if len(n) < len(d):
        raise ArithmeticError(f"{num} is not divisible by {den}")
    quo = [Fraction(0)] * (len(n) - len(d) + 1)
    rem = n[:]
    for i in range(len(quo) - 1, -1, -1):
        c = rem[i + len(d) - 1] / d[-1]
        quo[i] = c
        if c:
            for j, y in enumerate(d):
                rem[i + j] -= c * y
    if any(rem):
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return LaurentCoeff(None, terms={i + n_low - d_low: c for i, c in enumerate(quo)})


def quantum_int(n: int, q: int | None = None) -> LaurentCoeff:
    """[n] = (v^n - v^-n) / (v - v^-1) = v^(n-1) + v^(n-3) + ... + v^(1-n)."""
    if n < 0:
        return -quantum_int(-n, q)
    out = LaurentCoeff.const(0, q)
    for k in range(n):
        out = out + LaurentCoeff.v_pow(n - 1 - 2 * k, q)
    return out


def quantum_factorial(n: int, q: int | None = None) -> LaurentCoeff:
    out = LaurentCoeff.const(1, q)
    for k in range(1, n + 1):
        out = out * quantum_int(k, q)
    return out


def _realify(rows: list[list[LaurentCoeff]], q: int):
    """The Q-linear block matrix [[A0, q A1], [A1, A0]] of A = A0 + sqrt(q) A1."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    M = flint.fmpq_mat(2 * n, 2 * m)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x.q != q:
                raise ValueError("matrix entries must be fixed-q coefficients over the same q")
            if x.a:
                a = flint.fmpq(x.a.numerator, x.a.denominator)
                M[i, j] = a
                M[n + i, m + j] = a
            if x.b:
                b = flint.fmpq(x.b.numerator, x.b.denominator)
                M[i, m + j] = b * q
                M[n + i, j] = b
    return M


def matrix_rank(rows: list[list[LaurentCoeff]], q: int) -> int:
    """Rank over Q(sqrt q) of a matrix of fixed-q coefficients."""
    if not rows or not rows[0]:
        return 0
    return _realify(rows, q).rank() // 2


def independent_rows(rows: list[list[LaurentCoeff]], q: int) -> list[int]:
    """Indices of a maximal Q(sqrt q)-independent set of rows, chosen greedily in order."""
    if not rows or not rows[0]:
        return []
    n = len(rows)
    A = _realify(rows, q).transpose()  # columns j and n + j come from row j
    order = [c for j in range(n) for c in (j, n + j)]
    B = flint.fmpq_mat(A.nrows(), 2 * n)
    for new, old in enumerate(order):
        for i in range(A.nrows()):
            B[i, new] = A[i, old]
    R, rk = B.rref()
    out = []
    row = 0
    for c in range(2 * n):
        if row < rk and R[row, c] != 0:
            if c % 2 == 0:
                out.append(c // 2)
            row += 1
    return out


def right_nullspace(rows: list[list[LaurentCoeff]], q: int, ncols: int | None = None) -> list[list[LaurentCoeff]]:
    """A Q(sqrt q)-basis of {x : A x = 0}."""
    m = len(rows[0]) if rows else (ncols or 0)
    if not rows:
        return [[LaurentCoeff.const(int(i == j), q) for j in range(m)] for i in range(m)]
    R, rk = _realify(rows, q).rref()
    piv = []
    for i in range(rk):
        for j in range(2 * m):
            if R[i, j] != 0:
                piv.append(j)
                break
    free = [j for j in range(2 * m) if j not in set(piv)]
    out: list[list[LaurentCoeff]] = []
    for f in free:
        x = [Fraction(0)] * (2 * m)
        x[f] = Fraction(1)
        for i, pc in enumerate(piv):
            e = R[i, f]
            x[pc] = -Fraction(int(e.p), int(e.q))
        vec = [LaurentCoeff(q, x[j], x[m + j]) for j in range(m)]
        if matrix_rank(out + [vec], q) > len(out):
            out.append(vec)
    return out


def echelon(rows: list[list[LaurentCoeff]], q: int) -> tuple[list[list[LaurentCoeff]], list[int]]:
    """Reduced row echelon form over Q(sqrt q); returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if not M[i][c].is_zero()), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots
