"""The Kronecker embedding on module classes, the elements E_{n delta} with their three-way
split, and the PBW-type basis <P> * <M> * E_{w delta,3} * <I> at bounded degree."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .catalog import Catalog, Homog, ModuleClass, Preinj, Preproj, TubeMod, get_catalog
from .hallalg import HallAlgebra, HallElement, get_algebra
from .points import closed_points
from .quiver import dim_leq, dim_scale, dim_sub, kronecker, subvectors


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


class KroneckerFunctor:
    """Module-class level view of the embedding mod K -> C(P, L) inside mod Lambda."""

    def __init__(self, catalog: Catalog):
        if catalog.tame is None:
            raise ValueError("the Kronecker embedding needs a tame quiver")
        self.catalog = catalog
        self.emb = catalog.embedding()
        self.kron = get_catalog(kronecker(), catalog.q)
        self._point_cache: dict = {}

    @property
    def P(self) -> ModuleClass:
        return self.catalog.classify(self.emb.P)

    @property
    def L(self) -> ModuleClass:
        return self.catalog.classify(self.emb.L)

    def embed_rep(self, a, b) -> ModuleClass:
        return self.catalog.classify(self.emb.embed(a, b))

    def embed_kronecker(self, MK: ModuleClass) -> ModuleClass:
        """F(M_K) for a Kronecker module class (additive over summands)."""
        if MK.catalog.quiver != self.kron.quiver or MK.catalog.q != self.catalog.q:
            raise ValueError("expected a Kronecker module class over the same field")
        out = self.catalog.zero()
        for lab, m in MK.parts:
            W = MK.catalog.indec(lab).rep
            img = self.embed_rep(W.maps[0], W.maps[1])
            out = out + m * img
        return out

    def point_image(self, point, m: int) -> ModuleClass:
        """F of the indecomposable regular Kronecker module at a closed point with quasi-length m."""
        key = (point, m)
        hit = self._point_cache.get(key)
        if hit is None:
            cat = self.catalog
            if point in cat.exceptional_points():
                hit = cat.classify(self.emb.embed_point(point, m))
            else:
                hit = cat.of(Homog(point, m))
            self._point_cache[key] = hit
        return hit

    def regular_images(self, n: int) -> list[tuple[ModuleClass, str]]:
        """F-images of all regular Kronecker modules of dimension (n, n), tagged
        "C1" (non-homogeneous), "C0" (homogeneous) or "mixed"."""
        cat = self.catalog
        cat.ensure(n * sum(cat.tame.delta))
        pieces = []  # (degree of the support, image class, exceptional?)
        for d in range(1, n + 1):
            for pt in closed_points(cat.field, d):
                exc = pt in cat.exceptional_points()
                for m in range(1, n // d + 1):
                    pieces.append((d * m, self.point_image(pt, m), exc))
        out = []
        seen = set()

        def rec(idx: int, left: int, acc: ModuleClass, has_exc: bool, has_hom: bool):
            if left == 0:
                if acc in seen:
                    return
                seen.add(acc)
                tag = "mixed" if has_exc and has_hom else ("C1" if has_exc else "C0")
                out.append((acc, tag))
                return
            if idx == len(pieces):
                return
            size, img, exc = pieces[idx]
            k = 0
            while k * size <= left:
                rec(idx + 1, left - k * size, acc + k * img if k else acc, has_exc or (exc and k > 0), has_hom or (not exc and k > 0))
                k += 1

        rec(0, n, cat.zero(), False, False)
        return out


@dataclass
class EDeltaParts:
    n: int
    e1: HallElement
    e2: HallElement
    e3: HallElement

    @property
    def total(self) -> HallElement:
        return self.e1 + self.e2 + self.e3


class PBW:
    """E_{n delta} elements and the basis B over one tame catalog."""

    def __init__(self, catalog: Catalog, algebra: HallAlgebra | None = None):
        self.catalog = catalog
        self.alg = algebra or get_algebra(catalog)
        self.functor = KroneckerFunctor(catalog)
        self._parts: dict = {}

    @property
    def delta(self) -> tuple:
        return self.catalog.tame.delta

    def e_delta_parts(self, n: int) -> EDeltaParts:
        """E_{n delta,1..3} = v^(-n|delta|) * sums of u_[M] over C1, mixed and C0 classes."""
        hit = self._parts.get(n)
        if hit is not None:
            return hit
        alg = self.alg
        w = alg.v(-n * sum(self.delta))
        sums = {"C1": alg.zero(), "mixed": alg.zero(), "C0": alg.zero()}
        for M, tag in self.functor.regular_images(n):
            sums[tag] = sums[tag] + alg.u(M, w)
        res = EDeltaParts(n, sums["C1"], sums["mixed"], sums["C0"])
        self._parts[n] = res
        return res

    def e_delta(self, n: int) -> HallElement:
        return self.e_delta_parts(n).total

    def e_w3(self, w: Sequence[int]) -> HallElement:
        """E_{w delta,3} = E_{w_1 delta,3} * ... * E_{w_t delta,3}."""
        out = self.alg.one()
        for part in w:
            out = self.alg.multiply(out, self.e_delta_parts(part).e3)
        return out

    def lemma412_check(self, n: int, n2: int) -> dict:
        alg = self.alg
        a = alg.multiply(self.e_delta_parts(n).e1, self.e_delta_parts(n2).e3) == alg.multiply(
            self.e_delta_parts(n2).e3, self.e_delta_parts(n).e1
        )
        rhs = alg.zero()
        for m in range(1, n):
            rhs = rhs + alg.multiply(self.e_delta_parts(m).e1, self.e_delta_parts(n - m).e3)
        b = self.e_delta_parts(n).e2 == rhs
        c = alg.multiply(self.e_delta_parts(n).e3, self.e_delta_parts(n2).e3) == alg.multiply(
            self.e_delta_parts(n2).e3, self.e_delta_parts(n).e3
        )
        return {"a": a, "b": b, "c": c}

    # -- the basis B ----------------------------------------------------------

    def _classes_of_kind(self, dims, kind) -> list[ModuleClass]:
        cat = self.catalog
        if not any(dims):
            return [cat.zero()]
        return [M for M in cat.classes(dims) if all(isinstance(lab, kind) for lab, _ in M.parts)]

    def pbw_basis(self, gamma: Sequence[int]) -> list["PBWElement"]:
        gamma = tuple(gamma)
        cat = self.catalog
        cat.ensure(sum(gamma))
        alg = self.alg
        delta = self.delta
        out = []
        for p in subvectors(gamma):
            Ps = self._classes_of_kind(p, Preproj)
            if not Ps:
                continue
            rest1 = dim_sub(gamma, p)
            for i in subvectors(rest1):
                Is = self._classes_of_kind(i, Preinj)
                if not Is:
                    continue
                rest2 = dim_sub(rest1, i)
                k = 0
                while dim_leq(dim_scale(k, delta), rest2):
                    mdim = dim_sub(rest2, dim_scale(k, delta))
                    Ms = self._classes_of_kind(mdim, TubeMod)
                    for w in partitions(k):
                        E = self.e_w3(w)
                        for P in Ps:
                            for M in Ms:
                                for I in Is:
                                    val = alg.multiply(alg.multiply(alg.multiply(alg.angle(P), alg.angle(M)), E), alg.angle(I))
                                    out.append(PBWElement(P, M, w, I, val))
                    k += 1
        return out

    def singular_spans(self, gamma: Sequence[int]) -> dict:
        alg = self.alg
        gens = alg.singular_generators(gamma)
        return alg._spans(tuple(gens), tuple(gamma))

    def pbw_rank_check(self, gamma: Sequence[int], spans: dict | None = None) -> dict:
        """B_gamma is independent and spans the degree-gamma piece of H^s."""
        alg = self.alg
        gamma = tuple(gamma)
        B = [b.value for b in self.pbw_basis(gamma)]
        spans = spans if spans is not None else self.singular_spans(gamma)
        Hs = spans.get(gamma, [])
        rb = alg.rank(B)
        rh = len(Hs)
        joint = alg.rank(B + Hs)
        return {
            "degree": gamma,
            "size": len(B),
            "rank_B": rb,
            "rank_Hs": rh,
            "rank_joint": joint,
            "ok": rb == len(B) == rh == joint,
        }

    def lemma411_check(self, M: ModuleClass, N: ModuleClass) -> bool:
        """u_M u_N = u_N u_M, and = u_{M+N} when M, N share no tube."""
        alg = self.alg
        x, y = alg.u(M), alg.u(N)
        xy, yx = alg.multiply(x, y), alg.multiply(y, x)
        if xy != yx:
            return False
        Mpts = {lab.point for lab, _ in M.parts if isinstance(lab, Homog)}
        disjoint = all(not (isinstance(lab, Homog) and lab.point in Mpts) for lab, _ in N.parts)
        if disjoint:
            return xy == alg.u(M + N)
        return True


@dataclass
class PBWElement:
    P: ModuleClass
    M: ModuleClass
    w: tuple
    I: ModuleClass
    value: HallElement

    def label(self) -> str:
        w = ",".join(str(x) for x in self.w)
        return f"<{self.P}> | <{self.M}> | w=({w}) | <{self.I}>"
