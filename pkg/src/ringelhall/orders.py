"""Degeneration orders on module classes of one dimension vector.

N <=_ext M when M degenerates to N through a chain of short exact sequences
0 -> U -> M_i -> V -> 0 with M_{i+1} = U + V.  The hom order (dim Hom(X, N) >= dim Hom(X, M)
and dim Hom(N, X) >= dim Hom(M, X) for catalog indecomposables X) is the computable necessary
condition for N <=_deg M.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .catalog import ModuleClass
from .hallnum import get_calculator, orbit_dim, rep_space_dim
from .quiver import euler_form
from .quiver import subvectors

TRUE, FALSE, UNKNOWN = "true", "false", "unknown"


def ext_degenerations(M: ModuleClass) -> set[ModuleClass]:
    """Classes U + V for the non-split short exact sequences 0 -> U -> M -> V -> 0."""
    calc = get_calculator(M.catalog)
    out = set()
    for beta in subvectors(M.dims):
        if not any(beta) or beta == M.dims:
            continue
        for quo, sub in calc.submodule_table(M, beta):
            X = quo + sub
            if X != M:
                out.add(X)
    return out


def ext_reachable(M: ModuleClass, chain_bound: int) -> tuple[dict, bool]:
    """Classes reachable from M in at most chain_bound steps, with their step count,
    and whether the search saturated (nothing new beyond the bound)."""
    seen = {M: 0}
    frontier = [M]
    for step in range(1, chain_bound + 1):
        nxt = []
        for X in frontier:
            for Y in ext_degenerations(X):
                if Y not in seen:
                    seen[Y] = step
                    nxt.append(Y)
        frontier = nxt
        if not frontier:
            return seen, True
    saturated = all(Y in seen for X in frontier for Y in ext_degenerations(X))
    return seen, saturated


def ext_order_leq(N: ModuleClass, M: ModuleClass, chain_bound: int = 4) -> str:
    """"true" if M degenerates to N within chain_bound steps, "false" if the search
    exhausts every degeneration of M without meeting N, else "unknown"."""
    if N.dims != M.dims:
        raise ValueError("ext order compares classes of one dimension vector")
    if N == M:
        return TRUE
    seen, saturated = ext_reachable(M, chain_bound)
    if N in seen:
        return TRUE
    return FALSE if saturated else UNKNOWN


def hom_order_leq(N: ModuleClass, M: ModuleClass, test_bound: int | None = None) -> bool:
    """dim Hom(X, N) >= dim Hom(X, M) and dim Hom(N, X) >= dim Hom(M, X) for every catalog
    indecomposable X of total <= test_bound.

    For equal dimension vectors the second family is the first one at tau^-1 X, so testing
    both sides reaches witnesses of roughly twice the bound.
    """
    if N.dims != M.dims:
        raise ValueError("hom order compares classes of one dimension vector")
    cat = M.catalog
    bound = M.total if test_bound is None else test_bound
    for X in cat.indecomposables(bound):
        Xc = cat.of(X.label)
        if cat.hom_dim(Xc, N) < cat.hom_dim(Xc, M) or cat.hom_dim(N, Xc) < cat.hom_dim(M, Xc):
            return False
    return True


@dataclass
class OrderReport:
    pairs: int = 0
    ext_true: int = 0
    counterexamples: list = field(default_factory=list)  # ext true but hom false
    unresolved: list = field(default_factory=list)  # hom true but no ext chain found

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def order_coherence(catalog, max_total: int, chain_bound: int = 4, test_bound: int | None = None) -> OrderReport:
    """Compare the two orders on every ordered pair of distinct classes with equal
    dimension vector and total dimension <= max_total."""
    catalog.ensure(max_total)
    rep = OrderReport()
    n = catalog.quiver.n
    vectors = [g for g in itertools.product(range(max_total + 1), repeat=n) if 0 < sum(g) <= max_total]
    for gamma in sorted(vectors):
        classes = catalog.classes(gamma)
        if len(classes) < 2:
            continue
        reach = {M: ext_reachable(M, chain_bound)[0] for M in classes}
        for M in classes:
            for N in classes:
                if M == N:
                    continue
                rep.pairs += 1
                e = N in reach[M]
                h = hom_order_leq(N, M, test_bound)
                if e:
                    rep.ext_true += 1
                    if not h:
                        rep.counterexamples.append((str(N), str(M)))
                elif h:
                    rep.unresolved.append((str(N), str(M)))
    return rep


def orbit_closure(M: ModuleClass, chain_bound: int = 8) -> set[ModuleClass]:
    """Classes in the closure of the orbit of M, read off the ext order.

    Exact for quivers of finite representation type, where the two orders coincide.
    """
    return set(ext_reachable(M, chain_bound)[0])


def extension_set_codim(M: ModuleClass, N: ModuleClass) -> dict:
    """codim of closure(O_M) * closure(O_N) with N on the submodule side, and the
    admissible range [c, c + dim Hom(N, M)] with c = codim O_M + codim O_N - <dim N, dim M>.

    The extension set is a finite union of orbits on finite type, so its dimension is the
    largest orbit dimension among the middle terms.
    """
    cat = M.catalog
    if cat.tame is not None or not cat.dynkin:
        raise ValueError("extension-set dimensions are counted orbitwise only on finite type")
    calc = get_calculator(cat)
    middles = set()
    for X in orbit_closure(M):
        for Y in orbit_closure(N):
            middles.update(calc.products(X, Y, method="submodule"))
    total = M + N
    codim = rep_space_dim(total) - max(orbit_dim(L) for L in middles)
    base = (rep_space_dim(M) - orbit_dim(M)) + (rep_space_dim(N) - orbit_dim(N)) - euler_form(cat.quiver, N.dims, M.dims)
    return {"codim": codim, "low": base, "high": base + cat.hom_dim(N, M), "ok": base <= codim <= base + cat.hom_dim(N, M)}
