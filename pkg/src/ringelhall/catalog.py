"""Indecomposable catalogs, isomorphism classes and classification of representations.

A catalog lists every indecomposable of a Dynkin or tame quiver over F_q up
to a total-dimension bound, with an explicit witness representation:

* preprojectives ``tau^-k P(i)`` and preinjectives ``tau^k I(i)`` from
  Coxeter-ordered reflection functors,
* non-homogeneous tube modules ``T<t>[j,m]`` (regular socle ``E_{t,j}``,
  quasi-length m) grown from regular simples by one-dimensional extensions,
* homogeneous tube modules ``H[x,m]`` as images of regular Kronecker modules
  under the embedding ``mod K -> C(P, L)``.

Isomorphism classes of a fixed dimension vector are multisets of catalog
entries.  ``Catalog.classify`` identifies an arbitrary representation by
walking a decision tree of additive invariants (arrow ranks and Hom
dimensions) that separates all classes of that dimension vector.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from . import rep as R
from .field import GF, batch_rref, gl_order, rank
from .points import Point, closed_points, kronecker_regular, parse_point
from .quiver import (
    DimVector,
    Quiver,
    QuiverError,
    TameData,
    coxeter_dim,
    dim_add,
    dim_leq,
    euler_form,
    is_dynkin,
    tame_data,
)


class CatalogMiss(LookupError):
    """A module (or label) outside the generated catalog."""


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True)
class Preproj:
    vertex: int
    shift: int = 0


@dataclass(frozen=True)
class Preinj:
    vertex: int
    shift: int = 0


@dataclass(frozen=True)
class TubeMod:
    tube: int  # 0-based
    socle: int  # 0-based position of the regular socle in the tube's simple list
    length: int


@dataclass(frozen=True)
class Homog:
    point: Point
    length: int


IndecLabel = Union[Preproj, Preinj, TubeMod, Homog]


def label_key(lab: IndecLabel) -> tuple:
    if isinstance(lab, Preproj):
        return (0, lab.shift, lab.vertex)
    if isinstance(lab, TubeMod):
        return (1, lab.tube, lab.length, lab.socle)
    if isinstance(lab, Homog):
        return (2, lab.point.sort_key(), lab.length)
    return (3, -lab.shift, lab.vertex)


def format_label(quiver: Quiver, lab: IndecLabel) -> str:
    if isinstance(lab, Preproj):
        base = f"P({quiver.label(lab.vertex)})"
        return base if lab.shift == 0 else f"tau^-{lab.shift} {base}"
    if isinstance(lab, Preinj):
        base = f"I({quiver.label(lab.vertex)})"
        return base if lab.shift == 0 else f"tau^{lab.shift} {base}"
    if isinstance(lab, TubeMod):
        return f"T{lab.tube + 1}[{lab.socle + 1},{lab.length}]"
    return f"H[{lab.point.ident()},{lab.length}]"


@dataclass
class Indec:
    label: IndecLabel
    rep: R.Rep
    residue_degree: int  # End/rad End = F_{q^d}

    @property
    def dims(self) -> DimVector:
        return self.rep.dims


# ---------------------------------------------------------------------------
# module classes


class ModuleClass:
    """An isomorphism class: a multiset of catalog indecomposables."""

    __slots__ = ("catalog", "parts", "dims", "_hash")

    def __init__(self, catalog: "Catalog", parts: Iterable[tuple[IndecLabel, int]]):
        merged: dict = {}
        for lab, m in parts:
            if m < 0:
                raise ValueError("negative multiplicity")
            if m:
                merged[lab] = merged.get(lab, 0) + m
        self.catalog = catalog
        self.parts: tuple[tuple[IndecLabel, int], ...] = tuple(
            sorted(merged.items(), key=lambda kv: label_key(kv[0]))
        )
        dims = catalog.quiver.zero()
        for lab, m in self.parts:
            d = catalog.indec(lab).dims
            dims = tuple(x + m * y for x, y in zip(dims, d))
        self.dims: DimVector = dims
        self._hash = hash((catalog.key, self.parts))

    def __eq__(self, other) -> bool:
        return isinstance(other, ModuleClass) and self.catalog.key == other.catalog.key and self.parts == other.parts

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "ModuleClass") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (self.dims, tuple((label_key(l), m) for l, m in self.parts))

    def __add__(self, other: "ModuleClass") -> "ModuleClass":
        return ModuleClass(self.catalog, list(self.parts) + list(other.parts))

    def __mul__(self, k: int) -> "ModuleClass":
        return ModuleClass(self.catalog, [(l, m * k) for l, m in self.parts])

    __rmul__ = __mul__

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return not self.parts

    def summands(self) -> list[IndecLabel]:
        return [l for l, m in self.parts for _ in range(m)]

    @property
    def witness(self) -> R.Rep:
        return self.catalog.witness(self)

    def __str__(self) -> str:
        if not self.parts:
            return "0"
        q = self.catalog.quiver
        return " + ".join(
            (f"{m}*" if m > 1 else "") + format_label(q, lab) for lab, m in self.parts
        )

    def __repr__(self) -> str:
        return f"ModuleClass({self})"


# ---------------------------------------------------------------------------
# Kronecker embedding


@dataclass
class KroneckerEmbedding:
    """The exact embedding mod K -> C(P, L) with P = P(e) for an extending vertex e."""

    extending_vertex: int
    P: R.Rep
    L: R.Rep
    L_label: IndecLabel
    hom_basis: tuple  # two morphisms P -> L

    def embed(self, a: np.ndarray, b: np.ndarray) -> R.Rep:
        """Image of the Kronecker module V1 -> V2 with arrow matrices a, b (shape d2 x d1).

        Uses the standard presentation
        0 -> P_K(2)^{2 d1} -> P_K(1)^{d1} + P_K(2)^{d2} -> M -> 0
        with P_K(2) -> P, P_K(1) -> L and the two paths -> hom_basis.
        """
        P, L = self.P, self.L
        F = P.field
        Q = P.quiver
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        d2, d1 = a.shape
        src = R.direct_sum([P] * (2 * d1)) if d1 else R.zero_rep(Q, F)
        tgt_parts = [L] * d1 + [P] * d2
        tgt = R.direct_sum(tgt_parts) if tgt_parts else R.zero_rep(Q, F)
        ha, hb = self.hom_basis
        f = []
        for v in range(Q.n):
            p, l = P.dims[v], L.dims[v]
            top = np.hstack([np.kron(np.eye(d1, dtype=np.int64), ha[v]), np.kron(np.eye(d1, dtype=np.int64), hb[v])])
            if d2 and p:
                bottom = np.hstack([np.kron(F.mneg(a), np.eye(p, dtype=np.int64)), np.kron(F.mneg(b), np.eye(p, dtype=np.int64))])
            else:
                bottom = np.zeros((d2 * p, 2 * d1 * p), dtype=np.int64)
            f.append(np.vstack([top.reshape(d1 * l, 2 * d1 * p), bottom]).astype(np.int64))
        if not R.is_morphism(src, tgt, tuple(f)):
            raise RuntimeError("transported presentation is not a morphism")
        if not R.is_injective(F, tuple(f)):
            raise RuntimeError("transported presentation is not injective")
        return R.cokernel(src, tgt, tuple(f))

    def embed_point(self, point: Point, m: int) -> R.Rep:
        a, b = kronecker_regular(self.P.field, point, m)
        return self.embed(a, b)


# ---------------------------------------------------------------------------
# the catalog


def _seed(*parts) -> int:
    return int.from_bytes(hashlib.sha256(repr(parts).encode()).digest()[:8], "little")


FEATURE_RANK = "rank"
FEATURE_OUT = "out"
FEATURE_IN = "in"
FEATURE_FROM = "from"
FEATURE_TO = "to"
_MISSING = object()


class Catalog:
    """All indecomposables of a Dynkin or tame quiver over F_q up to a growing bound."""

    def __init__(self, quiver: Quiver, q: int):
        self.quiver = quiver
        self.field = GF(q)
        self.key = (quiver, q)
        self.dynkin = is_dynkin(quiver)
        self.tame: TameData | None = None
        if not self.dynkin:
            self.tame = tame_data(quiver)
        self._indecs: dict[IndecLabel, Indec] = {}
        self.bound = -1
        self._hom_cache: dict = {}
        self._feature_cache: dict = {}
        self._classes: dict[DimVector, list[ModuleClass]] = {}
        self._trees: dict[DimVector, object] = {}
        self._witness: dict[ModuleClass, R.Rep] = {}
        self._aut: dict[ModuleClass, int] = {}
        self._embedding: KroneckerEmbedding | None = None
        self._exceptional: dict | None = None
        self._tube_simples: list[list[R.Rep]] | None = None
        if self.dynkin:
            self._build_dynkin()

    @property
    def q(self) -> int:
        return self.field.q

    def __repr__(self) -> str:
        return f"Catalog({self.quiver.name or 'quiver'}, q={self.q}, bound={self.bound})"

    # -- construction -------------------------------------------------------

    def _add(self, lab: IndecLabel, rep: R.Rep, deg: int = 1) -> None:
        self._indecs[lab] = Indec(lab, rep, deg)

    def _build_dynkin(self) -> None:
        Q, F = self.quiver, self.field
        for i in range(Q.n):
            cur = R.projective_rep(Q, F, i)
            k = 0
            while not cur.is_zero():
                self._add(Preproj(i, k), cur)
                cur = R.ar_translate(cur, -1)
                k += 1
        self.bound = 10**9

    def ensure(self, bound: int) -> "Catalog":
        """Extend the catalog to every indecomposable of total dimension <= bound."""
        if bound <= self.bound:
            return self
        self._build_tame(bound)
        self.bound = bound
        self._classes.clear()
        self._trees.clear()
        return self

    def _orbit_lengths(self, start: DimVector, inverse: bool, bound: int) -> int:
        """Largest shift k such that some later orbit member may still fit in the bound."""
        Q = self.quiver
        window = max(2, 2 * Q.n)
        best, k, over, cur = -1, 0, 0, start
        while over < window:
            if sum(cur) <= bound and all(x >= 0 for x in cur):
                best, over = k, 0
            else:
                over += 1
            cur = coxeter_dim(Q, cur, inverse=inverse)
            k += 1
        return best

    def _build_tame(self, bound: int) -> None:
        Q, F = self.quiver, self.field
        td = self.tame
        assert td is not None
        for i in range(Q.n):
            P = R.projective_rep(Q, F, i)
            kmax = self._orbit_lengths(P.dims, True, bound)
            cur = P
            for k in range(kmax + 1):
                lab = Preproj(i, k)
                if lab not in self._indecs and sum(cur.dims) <= bound:
                    self._add(lab, cur)
                if k < kmax:
                    cur = R.ar_translate(cur, -1)
            I = R.injective_rep(Q, F, i)
            kmax = self._orbit_lengths(I.dims, False, bound)
            cur = I
            for k in range(kmax + 1):
                lab = Preinj(i, k)
                if lab not in self._indecs and sum(cur.dims) <= bound:
                    self._add(lab, cur)
                if k < kmax:
                    cur = R.ar_translate(cur, +1)
        simples = self.tube_simples()
        for t, tube in enumerate(simples):
            r = len(tube)
            for j in range(r):
                m = 1
                cur = tube[j]
                while sum(cur.dims) <= bound:
                    lab = TubeMod(t, j, m)
                    if lab not in self._indecs:
                        self._add(lab, cur)
                    nxt = self._extend_in_tube(cur, tube)
                    cur, m = nxt, m + 1
        emb = self.embedding()
        exc = self.exceptional_points()
        dsize = sum(td.delta)
        d = 1
        while d * dsize <= bound:
            for pt in closed_points(F, d):
                if pt in exc:
                    continue
                m = 1
                while d * m * dsize <= bound:
                    lab = Homog(pt, m)
                    if lab not in self._indecs:
                        self._add(lab, emb.embed_point(pt, m), d)
                    m += 1
            d += 1

    def tube_simples(self) -> list[list[R.Rep]]:
        if self._tube_simples is None:
            assert self.tame is not None
            self._tube_simples = [
                [self._brick(d) for d in tube] for tube in self.tame.regular_simple_dims
            ]
        return self._tube_simples

    def _brick(self, dims: DimVector) -> R.Rep:
        """A representation with End = F_q of the given (real root) dimension vector."""
        Q, F = self.quiver, self.field
        rng = np.random.default_rng(_seed("brick", Q.labels, tuple((a.source, a.target) for a in Q.arrows), F.q, dims))
        for _ in range(20000):
            maps = [rng.integers(0, F.q, size=(dims[a.target], dims[a.source])) for a in Q.arrows]
            M = R.Rep(Q, F, dims, maps)
            if R.hom_dim(M, M) == 1:
                return M
        raise RuntimeError(f"no brick found with dimension vector {dims}")

    def _extend_in_tube(self, M: R.Rep, tube: list[R.Rep]) -> R.Rep:
        """The unique non-split extension 0 -> M -> X -> E -> 0 by a regular simple E of the tube."""
        hits = [E for E in tube if R.ext_dim(E, M) > 0]
        if len(hits) != 1:
            raise RuntimeError("tube extension is not unique")
        E = hits[0]
        basis = R.ext_data(E, M)
        if len(basis) != 1:
            raise RuntimeError("tube extension space is not one-dimensional")
        return R.extension(E, M, basis[0])

    def embedding(self) -> KroneckerEmbedding:
        if self._embedding is None:
            self._embedding = self._make_embedding()
        return self._embedding

    def _make_embedding(self) -> KroneckerEmbedding:
        Q, F = self.quiver, self.field
        td = self.tame
        if td is None:
            raise QuiverError("the Kronecker embedding needs a tame quiver")
        e = td.extending_vertex
        P = R.projective_rep(Q, F, e)
        target = dim_add(td.delta, P.dims)
        found = None
        for i in range(Q.n):
            cur = R.projective_rep(Q, F, i)
            k = 0
            while sum(cur.dims) <= sum(target) + 2 * sum(td.delta):
                if cur.dims == target:
                    found = (Preproj(i, k), cur)
                    break
                cur = R.ar_translate(cur, -1)
                k += 1
            if found:
                break
        if found is None:
            raise QuiverError("no preprojective of dimension delta + dim P(e)")
        lab, L = found
        basis = R.hom_basis(P, L)
        if len(basis) != 2:
            raise RuntimeError(f"dim Hom(P, L) = {len(basis)}, expected 2")
        return KroneckerEmbedding(e, P, L, lab, tuple(basis))

    def exceptional_points(self) -> dict[Point, int]:
        """Degree-1 points whose Kronecker regular simple lands in a non-homogeneous tube."""
        if self._exceptional is None:
            emb = self.embedding()
            out = {}
            simples = self.tube_simples()
            for pt in closed_points(self.field, 1):
                X = emb.embed_point(pt, 1)
                for t, tube in enumerate(simples):
                    if any(R.hom_dim(E, X) for E in tube):
                        out[pt] = t
                        break
            if len(out) != len(simples):
                raise RuntimeError(f"found {len(out)} exceptional points for {len(simples)} tubes")
            self._exceptional = out
        return self._exceptional

    def homogeneous_points(self, degree: int = 1) -> list[Point]:
        exc = self.exceptional_points() if self.tame is not None else {}
        return [p for p in closed_points(self.field, degree) if p not in exc]

    # -- access ---------------------------------------------------------------

    def indec(self, lab: IndecLabel) -> Indec:
        try:
            return self._indecs[lab]
        except KeyError:
            pass
        if not self.dynkin:
            # grow to a bound large enough for a label of this kind when it is cheap to know
            guess = self._label_total(lab)
            if guess is not None and guess > self.bound:
                self.ensure(guess)
                if lab in self._indecs:
                    return self._indecs[lab]
        raise CatalogMiss(f"{format_label(self.quiver, lab)} is not in the catalog (bound {self.bound})")

    def _label_total(self, lab: IndecLabel) -> int | None:
        td = self.tame
        if td is None:
            return None
        if isinstance(lab, Homog):
            return lab.point.degree * lab.length * sum(td.delta)
        if isinstance(lab, TubeMod):
            if lab.tube >= len(td.regular_simple_dims):
                return None
            tube = td.regular_simple_dims[lab.tube]
            r = len(tube)
            if lab.socle >= r:
                return None
            return sum(sum(tube[(lab.socle + k) % r]) for k in range(lab.length))
        Q = self.quiver
        if lab.vertex >= Q.n:
            return None
        if isinstance(lab, Preproj):
            d = R.projective_rep(Q, self.field, lab.vertex).dims
            for _ in range(lab.shift):
                d = coxeter_dim(Q, d, inverse=True)
        else:
            d = R.injective_rep(Q, self.field, lab.vertex).dims
            for _ in range(lab.shift):
                d = coxeter_dim(Q, d)
        return sum(d) if all(x >= 0 for x in d) else None

    def indecomposables(self, max_total: int | None = None) -> list[Indec]:
        if max_total is not None:
            self.ensure(max_total)
        out = [x for x in self._indecs.values() if max_total is None or sum(x.dims) <= max_total]
        return sorted(out, key=lambda x: label_key(x.label))

    def module(self, parts: Iterable[tuple[IndecLabel, int]]) -> ModuleClass:
        parts = list(parts)
        for lab, _ in parts:
            self.indec(lab)
        return ModuleClass(self, parts)

    def zero(self) -> ModuleClass:
        return ModuleClass(self, [])

    def of(self, lab: IndecLabel, mult: int = 1) -> ModuleClass:
        return self.module([(lab, mult)])

    def witness(self, cls: ModuleClass) -> R.Rep:
        w = self._witness.get(cls)
        if w is None:
            reps = [self.indec(l).rep for l in cls.summands()]
            w = R.direct_sum(reps) if reps else R.zero_rep(self.quiver, self.field)
            self._witness[cls] = w
        return w

    # -- additive invariants --------------------------------------------------

    def hom_indec(self, a: IndecLabel, b: IndecLabel) -> int:
        key = (a, b)
        v = self._hom_cache.get(key)
        if v is None:
            v = R.hom_dim(self.indec(a).rep, self.indec(b).rep)
            self._hom_cache[key] = v
        return v

    def hom_dim(self, A: ModuleClass, B: ModuleClass) -> int:
        return sum(m * n * self.hom_indec(a, b) for a, m in A.parts for b, n in B.parts)

    def ext_dim(self, A: ModuleClass, B: ModuleClass) -> int:
        return self.hom_dim(A, B) - euler_form(self.quiver, A.dims, B.dims)

    def end_dim(self, A: ModuleClass) -> int:
        return self.hom_dim(A, A)

    def aut_order(self, A: ModuleClass) -> int:
        """|Aut M| = q^{dim rad End} * prod |GL_{m}(F_{q^d})| over the summand types."""
        v = self._aut.get(A)
        if v is None:
            q = self.q
            semisimple = 0
            v = 1
            for lab, m in A.parts:
                d = self.indec(lab).residue_degree
                semisimple += m * m * d
                v *= gl_order(q**d, m)
            v *= q ** (self.end_dim(A) - semisimple)
            self._aut[A] = v
        return v

    # -- classes of a dimension vector --------------------------------------

    def classes(self, dims: Sequence[int]) -> list[ModuleClass]:
        """Every isomorphism class with dimension vector ``dims``."""
        dims = tuple(dims)
        if dims in self._classes:
            return self._classes[dims]
        self.ensure(sum(dims))
        cands = [x for x in self.indecomposables() if any(x.dims) and dim_leq(x.dims, dims)]
        out: list[ModuleClass] = []

        def rec(idx: int, rest: tuple, acc: list):
            if not any(rest):
                out.append(ModuleClass(self, acc))
                return
            if idx == len(cands):
                return
            x = cands[idx]
            # multiplicity of cands[idx]
            m = 0
            cur = rest
            while True:
                rec(idx + 1, cur, acc + ([(x.label, m)] if m else []))
                cur = tuple(c - d for c, d in zip(cur, x.dims))
                if any(c < 0 for c in cur):
                    break
                m += 1

        rec(0, dims, [])
        out.sort()
        self._classes[dims] = out
        return out

    # -- classification -----------------------------------------------------

    def _features_for(self, dims: DimVector) -> list[tuple]:
        Q = self.quiver
        feats: list[tuple] = [(FEATURE_RANK, k) for k in range(len(Q.arrows))]
        feats += [(FEATURE_OUT, i) for i in range(Q.n) if sum(1 for a in Q.arrows if a.source == i) > 1]
        feats += [(FEATURE_IN, i) for i in range(Q.n) if sum(1 for a in Q.arrows if a.target == i) > 1]
        small = [x for x in self.indecomposables() if any(x.dims) and dim_leq(x.dims, dims)]
        small.sort(key=lambda x: (sum(x.dims), label_key(x.label)))
        feats += [(FEATURE_FROM, x.label) for x in small]
        feats += [(FEATURE_TO, x.label) for x in small]
        return feats

    def _feature_rep(self, feat: tuple, M: R.Rep) -> int:
        kind, arg = feat
        F = self.field
        Q = self.quiver
        if kind == FEATURE_RANK:
            m = M.maps[arg]
            return rank(F, m) if m.size else 0
        if kind == FEATURE_OUT:
            mats = [M.maps[k] for k, a in enumerate(Q.arrows) if a.source == arg]
            m = np.vstack(mats)
            return rank(F, m) if m.size else 0
        if kind == FEATURE_IN:
            mats = [M.maps[k] for k, a in enumerate(Q.arrows) if a.target == arg]
            m = np.hstack(mats)
            return rank(F, m) if m.size else 0
        if kind == FEATURE_FROM:
            return R.hom_dim(self.indec(arg).rep, M)
        return R.hom_dim(M, self.indec(arg).rep)

    def _feature_indec(self, feat: tuple, lab: IndecLabel) -> int:
        key = (feat, lab)
        v = self._feature_cache.get(key)
        if v is None:
            kind, arg = feat
            if kind == FEATURE_FROM:
                v = self.hom_indec(arg, lab)
            elif kind == FEATURE_TO:
                v = self.hom_indec(lab, arg)
            else:
                v = self._feature_rep(feat, self.indec(lab).rep)
            self._feature_cache[key] = v
        return v

    def _feature_class(self, feat: tuple, cls: ModuleClass) -> int:
        return sum(m * self._feature_indec(feat, lab) for lab, m in cls.parts)

    def _tree(self, dims: DimVector):
        tree = self._trees.get(dims)
        if tree is None:
            cands = self.classes(dims)
            feats = self._features_for(dims)
            tree = self._split(cands, feats)
            self._trees[dims] = tree
        return tree

    def _split(self, cands: list[ModuleClass], feats: list[tuple]):
        if len(cands) == 1:
            return cands[0]
        if not cands:
            return None
        best = None
        for f in feats:
            groups: dict[int, list[ModuleClass]] = {}
            for c in cands:
                groups.setdefault(self._feature_class(f, c), []).append(c)
            score = (len(groups), -max(len(g) for g in groups.values()))
            if best is None or score > best[0]:
                best = (score, f, groups)
                if len(groups) == len(cands):
                    break
        if best is None or best[0][0] == 1:
            names = ", ".join(str(c) for c in cands[:6])
            raise RuntimeError(f"invariants do not separate the classes {names}")
        _, f, groups = best
        return (f, {v: self._split(g, feats) for v, g in groups.items()})

    def classify(self, M: R.Rep) -> ModuleClass:
        """The isomorphism class of a representation (Krull-Schmidt decomposition)."""
        if M.quiver != self.quiver or M.field.q != self.q:
            raise ValueError("representation over a different quiver or field")
        node = self._tree(M.dims)
        while isinstance(node, tuple):
            f, children = node
            v = self._feature_rep(f, M)
            if v not in children:
                raise CatalogMiss(f"no catalog class of dimension {M.dims} matches the invariants")
            node = children[v]
        if node is None:
            raise CatalogMiss(f"no catalog class of dimension {M.dims}")
        return node

    def _feature_stack(self, feat: tuple, dims: DimVector, maps: list[np.ndarray]) -> np.ndarray:
        kind, arg = feat
        F, Q = self.field, self.quiver
        B = maps[0].shape[0] if maps else 1
        if kind in (FEATURE_RANK, FEATURE_OUT, FEATURE_IN):
            if kind == FEATURE_RANK:
                m = maps[arg]
            elif kind == FEATURE_OUT:
                m = np.concatenate([maps[k] for k, a in enumerate(Q.arrows) if a.source == arg], axis=1)
            else:
                m = np.concatenate([maps[k] for k, a in enumerate(Q.arrows) if a.target == arg], axis=2)
            if m.shape[1] == 0 or m.shape[2] == 0:
                return np.zeros(B, dtype=np.int64)
            return batch_rref(F, m)[1]
        X = self.indec(arg).rep
        xmaps = [x[None] for x in X.maps]
        if kind == FEATURE_FROM:
            return R.hom_dim_stack(F, Q, X.dims, xmaps, dims, maps)
        return R.hom_dim_stack(F, Q, dims, maps, X.dims, xmaps)

    def classify_stack(self, dims: DimVector, maps: list[np.ndarray]) -> list[ModuleClass]:
        """Classify a batch of representations of one dimension vector.

        ``maps`` holds one array of shape (B, d_t, d_s) per arrow.
        """
        dims = tuple(dims)
        B = maps[0].shape[0] if maps else 1
        out: list = [None] * B
        work = [(self._tree(dims), np.arange(B))]
        while work:
            node, idx = work.pop()
            if node is None:
                raise CatalogMiss(f"no catalog class of dimension {dims}")
            if not isinstance(node, tuple):
                for i in idx:
                    out[i] = node
                continue
            f, children = node
            vals = self._feature_stack(f, dims, [m[idx] for m in maps])
            for v in np.unique(vals):
                child = children.get(int(v), _MISSING)
                if child is _MISSING:
                    raise CatalogMiss(f"no catalog class of dimension {dims} matches the invariants")
                work.append((child, idx[vals == v]))
        return out

    # -- label parsing --------------------------------------------------------

    def parse_label(self, text: str) -> ModuleClass:
        """Parse one indecomposable label (including the ``S<i>`` simple shorthand)."""
        Q, F = self.quiver, self.field
        t = text.strip()
        m = re.fullmatch(r"S\(?([^()\s]+)\)?", t)
        if m:
            return self.classify(R.simple_rep(Q, F, Q.index(m.group(1))))
        m = re.fullmatch(r"(?:tau\^(-?\d+)\s*)?([PI])\(([^()]+)\)", t)
        if m:
            k = int(m.group(1) or 0)
            kind, v = m.group(2), Q.index(m.group(3))
            if kind == "P" and k <= 0 and not self.dynkin:
                return self.of(Preproj(v, -k))
            if kind == "I" and k >= 0 and not self.dynkin:
                return self.of(Preinj(v, k))
            base = R.projective_rep(Q, F, v) if kind == "P" else R.injective_rep(Q, F, v)
            cur = base
            for _ in range(abs(k)):
                cur = R.ar_translate(cur, 1 if k > 0 else -1)
            if cur.is_zero():
                raise CatalogMiss(f"{t} is zero")
            if self.dynkin and kind == "P" and k <= 0:
                return self.of(Preproj(v, -k))
            return self.classify(cur)
        m = re.fullmatch(r"T(\d+)\[(\d+),(\d+)\]", t)
        if m:
            return self.of(TubeMod(int(m.group(1)) - 1, int(m.group(2)) - 1, int(m.group(3))))
        m = re.fullmatch(r"H\[([^,\]]+),(\d+)\]", t)
        if m:
            pt = parse_point(F, m.group(1))
            if self.tame is not None and pt in self.exceptional_points():
                raise CatalogMiss(f"point {pt.ident()} lies in a non-homogeneous tube")
            return self.of(Homog(pt, int(m.group(2))))
        raise ValueError(f"cannot parse module label {text!r}")

    def parse(self, text: str) -> ModuleClass:
        """Parse ``2*T1[1,1] + P(3)`` style module class strings; ``0`` is the zero module."""
        t = text.strip()
        if t in ("0", ""):
            return self.zero()
        out = self.zero()
        for term in _split_terms(t):
            m = re.fullmatch(r"(\d+)\s*\*\s*(.+)", term.strip())
            mult, body = (int(m.group(1)), m.group(2)) if m else (1, term.strip())
            out = out + mult * self.parse_label(body)
        return out

    # -- tame structure -------------------------------------------------------

    def kind(self, lab: IndecLabel) -> str:
        if isinstance(lab, Preproj):
            return "preprojective"
        if isinstance(lab, Preinj):
            return "preinjective"
        return "regular"

    def split(self, cls: ModuleClass) -> dict:
        """Preprojective, per-tube, homogeneous and preinjective parts of a class."""
        ntubes = len(self.tame.periods) if self.tame else 0
        out = {"preprojective": [], "tubes": [[] for _ in range(ntubes)], "homogeneous": [], "preinjective": []}
        for lab, m in cls.parts:
            if isinstance(lab, Preproj):
                out["preprojective"].append((lab, m))
            elif isinstance(lab, Preinj):
                out["preinjective"].append((lab, m))
            elif isinstance(lab, TubeMod):
                out["tubes"][lab.tube].append((lab, m))
            else:
                out["homogeneous"].append((lab, m))
        return {
            "preprojective": ModuleClass(self, out["preprojective"]),
            "tubes": [ModuleClass(self, t) for t in out["tubes"]],
            "homogeneous": ModuleClass(self, out["homogeneous"]),
            "preinjective": ModuleClass(self, out["preinjective"]),
        }


def _split_terms(text: str) -> list[str]:
    """Split on '+' outside brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "+" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [t for t in out if t.strip()]


_CATALOGS: dict = {}


def get_catalog(quiver: Quiver, q: int) -> Catalog:
    key = (quiver, q)
    cat = _CATALOGS.get(key)
    if cat is None:
        cat = Catalog(quiver, q)
        _CATALOGS[key] = cat
    return cat


def classify(M: R.Rep) -> ModuleClass:
    return get_catalog(M.quiver, M.field.q).classify(M)


def decompose(M: R.Rep) -> ModuleClass:
    return classify(M)


def iso_test(M: R.Rep, N: R.Rep) -> bool:
    """Isomorphism test: equal classes, confirmed by an invertible intertwiner when cheap."""
    if M.dims != N.dims:
        return False
    cat = get_catalog(M.quiver, M.field.q)
    if cat.classify(M) != cat.classify(N):
        return False
    if M.field.q ** R.hom_dim(M, N) <= 1 << 12 and find_isomorphism(M, N) is None:
        raise RuntimeError("classification and intertwiner search disagree")
    return True


def find_isomorphism(M: R.Rep, N: R.Rep, limit: int = 1 << 20):
    """An explicit invertible intertwiner M -> N by exhaustive search (None if none exists)."""
    if M.dims != N.dims:
        return None
    F = M.field
    basis = R.hom_basis(M, N)
    if F.q ** len(basis) > limit:
        raise RuntimeError("Hom space too large for exhaustive search")
    for f in R.all_morphisms(F, basis):
        if R.is_isomorphism(F, f):
            return f
    return None


def aut_order(M: R.Rep) -> int:
    cat = get_catalog(M.quiver, M.field.q)
    return cat.aut_order(cat.classify(M))


def aut_order_bruteforce(M: R.Rep) -> int:
    F = M.field
    basis = R.hom_basis(M, M)
    return sum(1 for f in R.all_morphisms(F, basis) if R.is_isomorphism(F, f))
