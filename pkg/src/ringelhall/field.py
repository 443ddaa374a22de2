"""Finite fields F_q and dense linear algebra over them.

Elements of F_q are encoded as integers 0..q-1.  For a prime field the
encoding is the residue itself.  For q = p^e the integer's base-p digits are
the coefficients of a polynomial in a fixed root of a Conway-style irreducible
modulus, so addition is digitwise and multiplication goes through log tables.
Matrices are numpy int64 arrays of such codes.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import sympy


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise ValueError(f"q={q} is not a prime power")
    (p, e), = factors.items()
    return int(p), int(e)


def _find_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lowest-coefficient-first monic irreducible of degree e with a primitive root."""
    x = sympy.Symbol("x")
    for tail in itertools.product(range(p), repeat=e):
        coeffs = list(tail) + [1]
        poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        if poly.is_irreducible and _is_primitive(coeffs, p, e):
            return tuple(coeffs)
    raise RuntimeError("no primitive polynomial found")


def _poly_mulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    e = len(mod) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
    return prod[:e]


def _is_primitive(mod: list[int], p: int, e: int) -> bool:
    order = p**e - 1
    one = [1] + [0] * (e - 1)
    cur = one
    xpoly = [0, 1] + [0] * (e - 2) if e > 1 else [0]
    if e == 1:
        return True
    for k in range(1, order + 1):
        cur = _poly_mulmod(cur, xpoly, tuple(mod), p)
        if cur == one:
            return k == order
    return False


class GF:
    """The finite field with q elements.

    Instances are cached per q, so ``GF(4) is GF(4)``.
    """

    _cache: dict[int, "GF"] = {}

    def __new__(cls, q: int):
        if q in cls._cache:
            return cls._cache[q]
        obj = super().__new__(cls)
        obj._setup(q)
        cls._cache[q] = obj
        return obj

    def __getnewargs__(self):
        return (self.q,)

    def _setup(self, q: int) -> None:
        p, e = _factor_prime_power(q)
        self.q, self.p, self.e = q, p, e
        self.is_prime = e == 1
        if self.is_prime:
            self.modulus = (0, 1)
            elems = np.arange(q)
            self.add_table = (elems[:, None] + elems[None, :]) % p
            self.mul_table = (elems[:, None] * elems[None, :]) % p
            self.neg_table = (-elems) % p
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = pow(a, p - 2, p)
            self.inv_table = inv
        else:
            self.modulus = _find_modulus(p, e)
            digits = np.array([[(a // p**k) % p for k in range(e)] for a in range(q)])
            weights = p ** np.arange(e)
            self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
            self.neg_table = ((-digits) % p) @ weights
            # powers of the primitive root x give the log tables
            exp = np.zeros(q - 1, dtype=np.int64)
            log = np.full(q, -1, dtype=np.int64)
            cur = [1] + [0] * (e - 1)
            xpoly = [0, 1] + [0] * (e - 2)
            for k in range(q - 1):
                code = int(sum(c * p**i for i, c in enumerate(cur)))
                exp[k] = code
                log[code] = k
                cur = _poly_mulmod(cur, xpoly, self.modulus, p)
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(1, q):
                for b in range(1, q):
                    mul[a, b] = exp[(log[a] + log[b]) % (q - 1)]
            self.mul_table = mul
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = exp[(-log[a]) % (q - 1)]
            self.inv_table = inv
        self.add_table = self.add_table.astype(np.int64)
        self.mul_table = self.mul_table.astype(np.int64)
        self.neg_table = self.neg_table.astype(np.int64)
        self._self_test()

    def _self_test(self) -> None:
        q = self.q
        A, M = self.add_table, self.mul_table
        elems = range(q)
        assert all(A[0, a] == a and M[1, a] == a for a in elems)
        assert all(A[a, self.neg_table[a]] == 0 for a in elems)
        assert all(M[a, self.inv_table[a]] == 1 for a in range(1, q))
        assert (A == A.T).all() and (M == M.T).all()
        for a, b, c in itertools.islice(itertools.product(elems, repeat=3), 0, 4096):
            assert M[a, A[b, c]] == A[M[a, b], M[a, c]]
            assert M[a, M[b, c]] == M[M[a, b], c]

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF, (self.q,))

    # scalar helpers
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return int(self.inv_table[a])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # array arithmetic
    def madd(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return (A + B) % self.p
        return self.add_table[A, B]

    def msub(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return (A - B) % self.p
        return self.add_table[A, self.neg_table[B]]

    def mneg(self, A: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return (-A) % self.p
        return self.neg_table[A]

    def scale(self, c: int, A: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return (c * A) % self.p
        return self.mul_table[c, A]

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        if self.is_prime:
            return (A @ B) % self.p
        return self._matmul_ext(A, B)

    def _matmul_ext(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        p, e = self.p, self.e
        Ad = [(A // p**k) % p for k in range(e)]
        Bd = [(B // p**k) % p for k in range(e)]
        prod = [np.zeros((A.shape[0], B.shape[1]), dtype=np.int64) for _ in range(2 * e - 1)]
        for i in range(e):
            for j in range(e):
                prod[i + j] += Ad[i] @ Bd[j]
        prod = [P % p for P in prod]
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            for j in range(e):
                prod[k - e + j] = (prod[k - e + j] - c * self.modulus[j]) % p
        return sum(prod[k] * p**k for k in range(e))


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


# ---------------------------------------------------------------------------
# echelon forms


def rref(F: GF, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    prime = F.is_prime
    p = F.p
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        piv = int(R[r, c])
        if piv != 1:
            R[r] = F.scale(F.inv(piv), R[r])
        f = R[:, c].copy()
        f[r] = 0
        nzr = np.flatnonzero(f)
        if nzr.size:
            if prime:
                R[nzr] = (R[nzr] - np.outer(f[nzr], R[r])) % p
            else:
                R[nzr] = F.add_table[R[nzr], F.neg_table[F.mul_table[f[nzr][:, None], R[r][None, :]]]]
        pivots.append(c)
        r += 1
    return R, pivots


def batch_rref(F: GF, A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-reduce a stack of matrices at once; returns the stack of rref forms and their ranks."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 3:
        raise ValueError("batch_rref expects a stack of matrices")
    B, rows, cols = R.shape
    r = np.zeros(B, dtype=np.int64)
    row_ids = np.arange(rows)
    for c in range(cols):
        cand = (R[:, :, c] != 0) & (row_ids[None, :] >= r[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.flatnonzero(has)
        k = cand[sel].argmax(axis=1)
        rr = r[sel]
        prow = R[sel, k].copy()
        R[sel, k] = R[sel, rr]
        prow = F.mul_table[F.inv_table[prow[:, c]][:, None], prow]
        R[sel, rr] = prow
        fac = R[sel, :, c].copy()
        fac[np.arange(sel.size), rr] = 0
        R[sel] = F.add_table[R[sel], F.neg_table[F.mul_table[fac[:, :, None], prow[:, None, :]]]]
        r[sel] += 1
    return R, r


def coefficient_grid(q: int, k: int) -> np.ndarray:
    """All q^k coefficient vectors of length k, as rows."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(q, dtype=np.int64)] * k), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def rank(F: GF, A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: GF, A: np.ndarray) -> np.ndarray:
    """Basis of {x : A x = 0} as rows of the returned matrix."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(F, A)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, fcol in enumerate(free):
        basis[k, fcol] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = F.neg(int(R[i, fcol]))
    return basis


def row_space(F: GF, A: np.ndarray) -> np.ndarray:
    """Canonical basis (nonzero rref rows) of the row space."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1])
    R, piv = rref(F, A)
    return R[: len(piv)]


def inverse(F: GF, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return R[:, n:]


def solve_left(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Return X with X A = B, assuming the rows of A are independent and B lies in their span."""
    # X A = B  <=>  A^T X^T = B^T
    k = A.shape[0]
    aug = np.hstack([A.T, B.T])
    R, piv = rref(F, aug)
    if any(c >= k for c in piv):
        raise ValueError("B is not in the row space of A")
    X = np.zeros((B.shape[0], k), dtype=np.int64)
    for i, c in enumerate(piv):
        X[:, c] = R[i, k:]
    return X


def all_vectors(F: GF, basis: np.ndarray):
    """Yield every F_q-linear combination of the rows of ``basis``."""
    basis = np.asarray(basis, dtype=np.int64)
    k = basis.shape[0]
    if k == 0:
        yield np.zeros(basis.shape[1], dtype=np.int64)
        return
    for coeffs in itertools.product(range(F.q), repeat=k):
        c = np.array(coeffs, dtype=np.int64)[None, :]
        yield F.matmul(c, basis)[0]


def gl_order(q: int, n: int) -> int:
    out = 1
    for k in range(n):
        out *= q**n - q**k
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
