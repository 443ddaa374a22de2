"""Hall numbers by three independent routes, filtration numbers and extension sets.

Convention: in g_{MN}^L the module N is the submodule and M the quotient.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import rep as R
from .catalog import Catalog, ModuleClass
from .field import batch_rref as _batch_rref, coefficient_grid, nullspace, row_space
from .quiver import dim_add, dim_sub

DEFAULT_BUDGET = 1 << 22


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured operation budget."""


@dataclass(frozen=True)
class HallCount:
    value: int
    method: str

    def __int__(self) -> int:
        return self.value


@dataclass
class ExtSet:
    M: ModuleClass
    N: ModuleClass
    members: dict = field(default_factory=dict)  # L -> HallCount
    orbit_dims: dict = field(default_factory=dict)  # L -> int


class HallCalculator:
    """Hall numbers over one catalog, with the per-(L, beta) submodule memo."""

    def __init__(self, catalog: Catalog, budget: int = DEFAULT_BUDGET):
        self.catalog = catalog
        self.budget = budget
        self._sub_memo: dict = {}
        self._seq_img: dict = {}
        self._seq_ker: dict = {}
        self._ext_memo: dict = {}

    @property
    def q(self) -> int:
        return self.catalog.q

    def _charge(self, n: int) -> None:
        if n > self.budget:
            raise BudgetExceeded(f"enumeration of {n} objects exceeds the budget of {self.budget}")

    # -- submodule enumeration ------------------------------------------------

    def submodule_table(self, L: ModuleClass, beta: Sequence[int]) -> Counter:
        """Counter over (quotient class, submodule class) of the submodules of L of dimension beta."""
        beta = tuple(beta)
        key = (L, beta)
        tab = self._sub_memo.get(key)
        if tab is None:
            cat = self.catalog
            W = L.witness
            self._charge(_grassmann_bound(W.dims, beta, self.q))
            tab = Counter()
            for bases in R.enumerate_submodules(W, beta):
                sub, quo = R.restrict_to_submodule(W, bases)
                tab[(cat.classify(quo), cat.classify(sub))] += 1
            self._sub_memo[key] = tab
        return tab

    def hall_number(self, M: ModuleClass, N: ModuleClass, L: ModuleClass) -> HallCount:
        if dim_add(M.dims, N.dims) != L.dims:
            return HallCount(0, "submodule-enum")
        return HallCount(self.submodule_table(L, N.dims).get((M, N), 0), "submodule-enum")

    def products(self, M: ModuleClass, N: ModuleClass, method: str = "riedtmann") -> dict[ModuleClass, int]:
        """All nonzero g_{MN}^L, i.e. the structure constants of u_M * u_N before twisting.

        "riedtmann" reads the middle terms off Ext^1(M, N); "submodule" walks the
        submodules of every class of the total dimension.
        """
        if method == "riedtmann":
            return {L: self.hall_number_riedtmann(M, N, L).value for L in self.extension_table(M, N)}
        if method != "submodule":
            raise ValueError(f"unknown method {method!r}")
        gamma = dim_add(M.dims, N.dims)
        out = {}
        for L in self.catalog.classes(gamma):
            g = self.submodule_table(L, N.dims).get((M, N), 0)
            if g:
                out[L] = g
        return out

    # -- exact sequences -----------------------------------------------------

    def _sequence_table(self, X: ModuleClass, Y: ModuleClass, mono: bool) -> dict:
        """Enumerate Hom(X, Y) and group the monomorphisms (or epimorphisms) by the
        class of their cokernel (or kernel).

        Returns {class: (distinct images or kernels, number of maps)}.
        """
        memo = self._seq_img if mono else self._seq_ker
        key = (X, Y)
        if key in memo:
            return memo[key]
        F = self.catalog.field
        Xw, Yw = X.witness, Y.witness
        n = Xw.quiver.n
        basis = R.hom_basis(Xw, Yw)
        self._charge(self.q ** len(basis))
        shapes = [(Yw.dims[i], Xw.dims[i]) for i in range(n)]
        if basis:
            flat = np.array([R.flatten_morphism(f) for f in basis], dtype=np.int64)
        else:
            flat = np.zeros((0, sum(r * c for r, c in shapes)), dtype=np.int64)
        target = Xw.dims if mono else Yw.dims
        counts: Counter = Counter()
        reps: dict = {}
        for coeffs in _coefficient_chunks(self.q, len(basis)):
            v = F.matmul(coeffs, flat) if basis else np.zeros((1, flat.shape[1]), dtype=np.int64)
            ok = np.ones(v.shape[0], dtype=bool)
            forms, off = [], 0
            for i, (r, c) in enumerate(shapes):
                block = v[:, off : off + r * c].reshape(v.shape[0], r, c)
                off += r * c
                if mono:
                    block = block.transpose(0, 2, 1)
                if block.shape[1] == 0 or block.shape[2] == 0:
                    forms.append(block)
                    continue
                red, rk = _batch_rref(F, block)
                ok &= rk == target[i]
                forms.append(red)
            if not ok.any():
                continue
            flat_keys = np.concatenate([f.reshape(f.shape[0], -1) for f in forms], axis=1)[ok]
            uniq, inv, cnt = np.unique(flat_keys, axis=0, return_inverse=True, return_counts=True)
            for row, c in zip(uniq, cnt):
                k = row.tobytes()
                counts[k] += int(c)
                if k not in reps:
                    reps[k] = row
            del inv
        table: dict = {}
        cat = self.catalog
        for k, row in reps.items():
            bases, off = [], 0
            for i, (r, c) in enumerate(shapes):
                rows_, cols_ = (c, r) if mono else (r, c)
                mat = row[off : off + rows_ * cols_].reshape(rows_, cols_)
                off += rows_ * cols_
                if mono:
                    bases.append(mat)
                else:
                    d = Xw.dims[i]
                    if d == 0:
                        bases.append(np.zeros((0, 0), dtype=np.int64))
                    elif mat.shape[0] == 0:
                        bases.append(np.eye(d, dtype=np.int64))
                    else:
                        bases.append(row_space(F, nullspace(F, mat)) if mat.shape[0] < d else np.zeros((0, d), dtype=np.int64))
            if mono:
                _, other = R.restrict_to_submodule(Yw, bases)
            else:
                other, _ = R.restrict_to_submodule(Xw, bases)
            cls = cat.classify(other)
            spans, maps = table.get(cls, (0, 0))
            table[cls] = (spans + 1, maps + counts[k])
        memo[key] = table
        return table

    def hall_number_via_sequences(self, M: ModuleClass, N: ModuleClass, L: ModuleClass) -> HallCount:
        """Orbits of exact pairs (f: N -> L, g: L -> M) under Aut N x Aut M.

        Aut N x Aut M acts freely and an orbit is fixed by the subspace
        im f = ker g.  The orbits are counted from whichever side has the
        smaller Hom space: distinct images of monomorphisms N -> L with
        cokernel isomorphic to M, or distinct kernels of epimorphisms L -> M
        with kernel isomorphic to N.
        """
        if dim_add(M.dims, N.dims) != L.dims:
            return HallCount(0, "sequence-orbit")
        cat = self.catalog
        if cat.hom_dim(N, L) <= cat.hom_dim(L, M):
            spans, _ = self._sequence_table(N, L, mono=True).get(M, (0, 0))
        else:
            spans, _ = self._sequence_table(L, M, mono=False).get(N, (0, 0))
        return HallCount(spans, "sequence-orbit")

    def exact_pair_count(self, M: ModuleClass, N: ModuleClass, L: ModuleClass) -> int:
        """|W(N, M; L)|: the number of exact pairs (f, g)."""
        if dim_add(M.dims, N.dims) != L.dims:
            return 0
        cat = self.catalog
        if cat.hom_dim(N, L) <= cat.hom_dim(L, M):
            _, monos = self._sequence_table(N, L, mono=True).get(M, (0, 0))
            return monos * cat.aut_order(M)
        _, epis = self._sequence_table(L, M, mono=False).get(N, (0, 0))
        return epis * cat.aut_order(N)

    # -- Riedtmann ------------------------------------------------------------

    def extension_table(self, M: ModuleClass, N: ModuleClass) -> Counter:
        """Counter over middle-term classes L of the elements of Ext^1(M, N)."""
        key = (M, N)
        tab = self._ext_memo.get(key)
        if tab is None:
            cat = self.catalog
            Mw, Nw = M.witness, N.witness
            Q = cat.quiver
            basis = R.ext_data(Mw, Nw)
            self._charge(self.q ** len(basis))
            dims = dim_add(M.dims, N.dims)
            shapes = [(Nw.dims[a.target], Mw.dims[a.source]) for a in Q.arrows]
            if basis:
                flat = np.array([np.concatenate([np.ravel(c) for c in b]) for b in basis], dtype=np.int64)
            tab = Counter()
            for coeffs in _coefficient_chunks(self.q, len(basis), 1 << 12):
                B = coeffs.shape[0]
                coc = cat.field.matmul(coeffs, flat) if basis else np.zeros((B, sum(r * c for r, c in shapes)), dtype=np.int64)
                maps, off = [], 0
                for k, a in enumerate(Q.arrows):
                    s, t = a.source, a.target
                    r, c = shapes[k]
                    m = np.zeros((B, dims[t], dims[s]), dtype=np.int64)
                    m[:, : Nw.dims[t], : Nw.dims[s]] = Nw.maps[k]
                    m[:, : Nw.dims[t], Nw.dims[s] :] = coc[:, off : off + r * c].reshape(B, r, c)
                    m[:, Nw.dims[t] :, Nw.dims[s] :] = Mw.maps[k]
                    off += r * c
                    maps.append(m)
                tab.update(cat.classify_stack(dims, maps))
            self._ext_memo[key] = tab
        return tab

    def hall_number_riedtmann(self, M: ModuleClass, N: ModuleClass, L: ModuleClass) -> HallCount:
        """g = |Ext^1(M,N)_L| |Aut L| / (|Aut M| |Aut N| |Hom(M,N)|)."""
        if dim_add(M.dims, N.dims) != L.dims:
            return HallCount(0, "riedtmann")
        cat = self.catalog
        ext_l = self.extension_table(M, N).get(L, 0)
        num = ext_l * cat.aut_order(L)
        den = cat.aut_order(M) * cat.aut_order(N) * self.q ** cat.hom_dim(M, N)
        value = Fraction(num, den)
        if value.denominator != 1:
            raise ArithmeticError(f"Riedtmann quotient {value} is not an integer")
        return HallCount(int(value), "riedtmann")

    # -- filtrations and extension sets -------------------------------------

    def filtration_number(self, parts: Sequence[ModuleClass], L: ModuleClass) -> HallCount:
        """Filtrations of L with subquotients parts[0] (top) ... parts[-1] (bottom).

        g^L_{l1 ... lm} = sum_X g^L_{l1, X} g^X_{l2 ... lm}.
        """
        parts = list(parts)
        total = L.catalog.quiver.zero()
        for p in parts:
            total = dim_add(total, p.dims)
        if total != L.dims:
            return HallCount(0, "filtration")
        return HallCount(self._filtration(tuple(parts), L), "filtration")

    def _filtration(self, parts: tuple, L: ModuleClass) -> int:
        if len(parts) == 0:
            return 1 if L.is_zero else 0
        if len(parts) == 1:
            return 1 if parts[0] == L else 0
        head, rest = parts[0], parts[1:]
        rest_dim = dim_sub(L.dims, head.dims)
        total = 0
        for (quo, sub), c in self.submodule_table(L, rest_dim).items():
            if quo == head:
                total += c * self._filtration(rest, sub)
        return total

    def ext_set(self, M: ModuleClass, N: ModuleClass) -> ExtSet:
        out = ExtSet(M, N)
        for L, g in sorted(self.products(M, N, method="submodule").items()):
            out.members[L] = HallCount(g, "submodule-enum")
            out.orbit_dims[L] = orbit_dim(L)
        return out


def split_regular_factor(M: ModuleClass, M1: ModuleClass, M2: ModuleClass, N: ModuleClass) -> tuple[Fraction, Fraction]:
    """Both sides of g_{M1+M2, N}^{M+M2} = g_{M1,N}^M |Hom(M, M2)| / |Hom(M1, M2)|.

    The identity holds when N is preprojective, M2 regular and Hom(M2, M1) = 0.
    """
    cat = M.catalog
    calc = get_calculator(cat)
    lhs = Fraction(calc.hall_number(M1 + M2, N, M + M2).value)
    rhs = Fraction(calc.hall_number(M1, N, M).value * cat.q ** cat.hom_dim(M, M2), cat.q ** cat.hom_dim(M1, M2))
    return lhs, rhs


def orbit_dim(L: ModuleClass) -> int:
    """dim of the GL-orbit of L inside its representation space: sum dim_i^2 - dim End L."""
    return sum(d * d for d in L.dims) - L.catalog.end_dim(L)


def rep_space_dim(L: ModuleClass) -> int:
    return sum(L.dims[a.source] * L.dims[a.target] for a in L.catalog.quiver.arrows)


def orbit_codim(L: ModuleClass) -> int:
    return rep_space_dim(L) - orbit_dim(L)


def _grassmann_bound(dims, beta, q) -> int:
    from .field import gaussian_binomial

    n = 1
    for d, b in zip(dims, beta):
        n *= gaussian_binomial(d, b, q)
    return n


def _coefficient_chunks(q: int, k: int, chunk: int = 1 << 15):
    """All coefficient vectors of length k in blocks of at most ``chunk`` rows."""
    if k == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    lead = 0
    while lead < k and q ** (k - lead) > chunk:
        lead += 1
    tail = coefficient_grid(q, k - lead)
    for head in itertools.product(range(q), repeat=lead):
        h = np.broadcast_to(np.array(head, dtype=np.int64), (tail.shape[0], lead))
        yield np.hstack([h, tail])


_CALCS: dict = {}


def get_calculator(catalog: Catalog) -> HallCalculator:
    calc = _CALCS.get(catalog.key)
    if calc is None:
        calc = HallCalculator(catalog)
        _CALCS[catalog.key] = calc
    return calc


def hall_number(M: ModuleClass, N: ModuleClass, L: ModuleClass) -> HallCount:
    return get_calculator(L.catalog).hall_number(M, N, L)


def hall_number_via_sequences(M: ModuleClass, N: ModuleClass, L: ModuleClass) -> HallCount:
    return get_calculator(L.catalog).hall_number_via_sequences(M, N, L)


def hall_number_riedtmann(M: ModuleClass, N: ModuleClass, L: ModuleClass) -> HallCount:
    return get_calculator(L.catalog).hall_number_riedtmann(M, N, L)


def filtration_number(parts: Sequence[ModuleClass], L: ModuleClass) -> HallCount:
    return get_calculator(L.catalog).filtration_number(parts, L)


def ext_set(M: ModuleClass, N: ModuleClass) -> ExtSet:
    return get_calculator(M.catalog).ext_set(M, N)
