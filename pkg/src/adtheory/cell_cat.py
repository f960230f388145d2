"""The graded categories Cell(K, L) and their incidence-compatible isomorphisms.

Objects of Cell(K, L) are oriented cells of K not in L, plus one empty object
per dimension; morphisms are face inclusions, so an isomorphism is determined
by its action on reference-oriented cells.  A :class:`CellIso` of degree k
lowers dimension by k and is incidence-compatible when it multiplies every
incidence number by (-1)^k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Hashable, Mapping, Sequence

from .complex_core import (
    BallComplex,
    ComplexError,
    OrientedCell,
    interval,
    point,
    product,
    product_cell,
    simplex,
    split_product_cell,
)


class CellCatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GradedCategoryView:
    """Cell(K, L)."""

    K: BallComplex
    L: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "L", frozenset(self.L))
        if not self.K.is_subcomplex(self.L):
            raise CellCatError("L is not a subcomplex of K")

    @cached_property
    def objects(self) -> tuple:
        return tuple(c for c in self.K.cells if c not in self.L)

    def dim(self, obj) -> int:
        if isinstance(obj, Empty):
            return obj.dim
        if isinstance(obj, OrientedCell):
            obj = obj.cell
        return self.K.dims[obj]

    def incidence(self, a: OrientedCell, b: OrientedCell) -> int:
        """[a : b] for oriented objects (zero if either lies in L)."""
        if a.cell in self.L or b.cell in self.L:
            return 0
        return a.sign * b.sign * self.K.incidence(a.cell, b.cell)

    @staticmethod
    def involution(obj):
        if isinstance(obj, Empty):
            return obj
        return -obj

    def same(self, other: "GradedCategoryView") -> bool:
        return self.K == other.K and self.L == other.L


@dataclass(frozen=True)
class Empty:
    """The empty object of a given dimension."""

    dim: int


@dataclass(frozen=True, eq=False)
class CellIso:
    """An isomorphism source -> target of degree k (dimension drops by k),
    given by its values on reference-oriented objects."""

    source: GradedCategoryView
    target: GradedCategoryView
    k: int
    obj: Mapping[Hashable, tuple]
    name: str = ""

    def __call__(self, x):
        if isinstance(x, Empty):
            return Empty(x.dim - self.k)
        if not isinstance(x, OrientedCell):
            x = OrientedCell(x, 1)
        t, s = self.obj[x.cell]
        return OrientedCell(t, s * x.sign)

    @cached_property
    def inverse_map(self) -> dict:
        return {t: (c, s) for c, (t, s) in self.obj.items()}

    def inverse(self) -> "CellIso":
        return CellIso(self.target, self.source, -self.k, self.inverse_map, f"({self.name})^-1")

    def compose(self, other: "CellIso") -> "CellIso":
        """self after other."""
        if not other.target.same(self.source):
            raise CellCatError("composition of non-matching isomorphisms")
        obj = {}
        for c, (t, s) in other.obj.items():
            t2, s2 = self.obj[t]
            obj[c] = (t2, s * s2)
        return CellIso(other.source, self.target, self.k + other.k, obj, f"{self.name}.{other.name}")

    @cached_property
    def incidence_compatible(self) -> bool:
        return check_incidence_compatible(self)

    def with_sign_flipped(self, cell) -> "CellIso":
        obj = dict(self.obj)
        t, s = obj[cell]
        obj[cell] = (t, -s)
        return CellIso(self.source, self.target, self.k, obj, self.name + "~")


def check_incidence_compatible(theta: CellIso) -> bool:
    """True iff theta is a bijection on objects lowering dimension by k and
    [theta a, theta b] = (-1)^k [a, b] for all objects a, b."""
    S, T = theta.source, theta.target
    if set(theta.obj) != set(S.objects):
        return False
    images = [t for t, _ in theta.obj.values()]
    if len(set(images)) != len(images) or set(images) != set(T.objects):
        return False
    e = -1 if theta.k % 2 else 1
    for c, (t, s) in theta.obj.items():
        if s not in (1, -1) or T.K.dims[t] != S.K.dims[c] - theta.k:
            return False
        want = {}
        for f, x in S.K.bd.get(c, {}).items():
            if f in S.L:
                continue
            tf, sf = theta.obj[f]
            want[tf] = e * x * s * sf
        have = {f: x for f, x in T.K.bd.get(t, {}).items() if f not in T.L}
        if want != have:
            return False
    return True


def identity_iso(K: BallComplex, L=frozenset()) -> CellIso:
    V = GradedCategoryView(K, frozenset(L))
    return CellIso(V, V, 0, {c: (c, 1) for c in V.objects}, "id")


def violated_pair(theta: CellIso):
    """One (cell, face) pair where incidence compatibility fails, or None."""
    S, T = theta.source, theta.target
    e = -1 if theta.k % 2 else 1
    for c, (t, s) in theta.obj.items():
        for f, x in S.K.bd.get(c, {}).items():
            if f in S.L:
                continue
            tf, sf = theta.obj[f]
            if T.K.incidence(t, tf) * s * sf != e * x:
                return c, f
    return None


# ------------------------------------------------------------------ named isomorphisms

def _interval_product_iso(J: BallComplex, top, ends, K: BallComplex, L, name: str) -> CellIso:
    P = product(J, K)
    Lset = frozenset(L)
    bad = set()
    for c in P.cells:
        a, s = split_product_cell(c, (J, K))
        if a in ends or s in Lset:
            bad.add(c)
    src = GradedCategoryView(P, frozenset(bad))
    tgt = GradedCategoryView(K, Lset)
    obj = {}
    for c in src.objects:
        a, s = split_product_cell(c, (J, K))
        obj[c] = (s, 1)
    return CellIso(src, tgt, 1, obj, name)


def kappa(K: BallComplex, L=frozenset()) -> CellIso:
    """Cell(I x K, {0,1} x K u I x L) -> Cell(K, L): I x sigma -> sigma."""
    return _interval_product_iso(interval(), "I", {"0", "1"}, K, L, "kappa")


def lambda_(K: BallComplex, L=frozenset()) -> CellIso:
    """Cell(Delta^1 x K, dDelta^1 x K) -> Cell(K): Delta^1 x sigma -> sigma."""
    return _interval_product_iso(simplex(1), (0, 1), {(0,), (1,)}, K, L, "lambda")


def suspension_pair(n: int) -> GradedCategoryView:
    """Cell(Delta^{n+1}, d_{n+1} Delta^{n+1} u {n+1})."""
    D = simplex(n + 1)
    L = frozenset(c for c in D.cells if n + 1 not in c) | {(n + 1,)}
    return GradedCategoryView(D, L)


@lru_cache(maxsize=None)
def theta_suspension(n: int) -> CellIso:
    """sigma -> sigma minus {n+1}, with (-1)^(dim sigma - 1) times the
    canonical orientation."""
    if n < 0:
        raise CellCatError("n must be non-negative")
    src = suspension_pair(n)
    tgt = GradedCategoryView(simplex(n))
    obj = {}
    for c in src.objects:
        t = tuple(v for v in c if v != n + 1)
        obj[c] = (t, -1 if (len(c) - 2) % 2 else 1)
    return CellIso(src, tgt, 1, obj, f"theta_{n}")


def mu_source(n: int) -> GradedCategoryView:
    D1, D0, Dn1 = simplex(1), simplex(0), simplex(n + 1)
    P = product(D1, D0, Dn1)
    L = set()
    for c in P.cells:
        a, _, s = c
        if a == (1,) or s == (n + 1,) or (a == (0,) and n + 1 not in s):
            L.add(c)
    return GradedCategoryView(P, frozenset(L))


@lru_cache(maxsize=None)
def mu(n: int) -> CellIso:
    """The degree-1 isomorphism Cell(D^1 x D^0 x D^{n+1}, ...) -> Cell(D^n x I).

    The 0-end agrees with theta, the D^1 x d_{n+1} part with lambda; the
    remaining cells D^1 x (tau u {n+1}) go to tau x I with the unique sign
    making the map incidence-compatible."""
    if n < 0:
        raise CellCatError("n must be non-negative")
    src = mu_source(n)
    Dn, I = simplex(n), interval()
    tgt = GradedCategoryView(product(Dn, I))
    th = theta_suspension(n)
    obj = {}
    rest = []
    for c in src.objects:
        a, _, s = c
        if a == (0,):
            t, e = th.obj[s]
            obj[c] = (product_cell((t, Dn), ("0", I)), e)
        elif n + 1 not in s:
            obj[c] = (product_cell((s, Dn), ("1", I)), 1)
        else:
            rest.append(c)
    for c in rest:
        a, z, s = c
        tau = s[:-1]
        t = product_cell((tau, Dn), ("I", I))
        # sign from the face (0,1) x tau, already assigned by lambda
        f = (a, z, tau)
        x = src.K.incidence(c, f)
        tf, sf = obj[f]
        y = tgt.K.incidence(t, tf)
        obj[c] = (t, -x * sf * y)  # (-1)^1 [c:f] = [t:tf] * s * sf
    iso = CellIso(src, tgt, 1, obj, f"mu_{n}")
    if not check_incidence_compatible(iso):
        raise CellCatError(f"mu_{n} is not incidence-compatible")
    return iso


def mu_clauses(n: int) -> dict:
    """Which clauses of the defining lemma hold for :func:`mu` (n)."""
    M = mu(n)
    Dn, I = simplex(n), interval()
    th, lam = theta_suspension(n), lambda_(Dn)
    top = ((0, 1), (0,), tuple(range(n + 2)))
    t, s = M.obj[top]
    out = {"a_cell": t == product_cell((tuple(range(n + 1)), Dn), ("I", I)), "a_sign": s}
    out["b"] = all(M.obj[c] == (product_cell((th.obj[c[2]][0], Dn), ("0", I)), th.obj[c[2]][1])
                   for c in M.source.objects if c[0] == (0,))
    lam_ok = True
    for c in M.source.objects:
        if c[0] == (0, 1) and n + 1 not in c[2]:
            lt, ls = lam.obj[product_cell(((0, 1), simplex(1)), (c[2], Dn))]
            lam_ok &= M.obj[c] == (product_cell((lt, Dn), ("1", I)), ls)
    out["c"] = lam_ok
    if n == 0:
        out["d"] = "vacuous"
        return out
    prev = mu(n - 1)
    rel = set()
    for i in range(n + 1):
        up = {j: (j if j < i else j + 1) for j in range(n + 1)}  # D^n -> d_i D^{n+1}
        dn = {j: (j if j < i else j + 1) for j in range(n)}  # D^{n-1} -> d_i D^n
        for c, (t, s) in prev.obj.items():
            a, z, sig = c
            big = (a, z, tuple(up[v] for v in sig))
            tau, x = split_product_cell(t, (simplex(n - 1), I))
            img = product_cell((tuple(dn[v] for v in tau), Dn), (x, I))
            t2, s2 = M.obj[big]
            if t2 != img:
                rel.add("mismatch")
            else:
                rel.add("same" if s2 == s else "flipped")
    out["d"] = {frozenset({"flipped"}): "i.mu_{n-1}", frozenset({"same"}): "mu_{n-1}"}.get(
        frozenset(rel), "neither")
    return out


# ------------------------------------------------------------------ permutations

def perm_compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """(p q)(j) = p(q(j))."""
    return tuple(p[q[j]] for j in range(len(q)))


def perm_inverse(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for j, x in enumerate(p):
        out[x] = j
    return tuple(out)


def perm_parity(p: Sequence[int]) -> int:
    """epsilon(eta): 0 for even, 1 for odd permutations."""
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def permuted_index(p: Sequence[int], ns: Sequence[int]) -> tuple:
    """(n_{p^-1(1)}, ..., n_{p^-1(k)})."""
    pinv = perm_inverse(p)
    return tuple(ns[pinv[j]] for j in range(len(p)))


def multi_simplex(ns: Sequence[int]) -> BallComplex:
    if not ns:
        return point()
    return product(*[simplex(n) for n in ns])


def _koszul_sign(dims_in_source_order: Sequence[int], order: Sequence[int]) -> int:
    """Sign of moving graded items listed in source order into the order
    given by ``order`` (a list of source positions)."""
    e = 0
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                e += dims_in_source_order[order[a]] * dims_in_source_order[order[b]]
    return -1 if e % 2 else 1


@lru_cache(maxsize=None)
def eta_sharp(p: tuple, ns: tuple) -> CellIso:
    """eta_# : Cell(Delta^{n_{p^-1(1)}} x ... ) -> Cell(Delta^{n_1} x ...),
    sigma_{p^-1(1)} x ... x sigma_{p^-1(k)} -> sigma_1 x ... x sigma_k, with
    the Koszul sign of the graded reordering."""
    p, ns = tuple(p), tuple(ns)
    if len(p) != len(ns) or sorted(p) != list(range(len(p))):
        raise CellCatError("permutation and multi-index lengths differ")
    ms = permuted_index(p, ns)
    S, T = multi_simplex(ms), multi_simplex(ns)
    src_factors = [simplex(m) for m in ms]
    tgt_factors = [simplex(n) for n in ns]
    obj = {}
    for c in S.cells:
        parts = split_product_cell(c, src_factors) if ms else ()
        # source position j holds factor p^-1(j); target slot i takes source position p(i)
        tparts = [parts[p[i]] for i in range(len(p))]
        dims = [len(x) - 1 for x in parts]
        sign = _koszul_sign(dims, [p[i] for i in range(len(p))])
        t = product_cell(*zip(tparts, tgt_factors)) if ns else ()
        obj[c] = (t, sign)
    return CellIso(GradedCategoryView(S), GradedCategoryView(T), 0, obj, f"eta{p}")


# ------------------------------------------------------------------ reindexing

def reindex(theta: CellIso, F):
    """theta^* F = i^{kl} o F o theta, an ad on theta's source of degree
    l + k.  F must be defined on theta's target."""
    if F.K != theta.target.K or frozenset(F.L) != theta.target.L:
        raise CellCatError("pre-ad is not defined on the target of the isomorphism")
    vals = {}
    kl = theta.k * F.degree
    for c, (t, s) in theta.obj.items():
        v = F.value(t)
        if (kl + (s < 0)) % 2:
            v = F.theory.involute_value(v)
        vals[c] = v
    return F.rebuild(theta.source.K, theta.source.L, F.degree + theta.k, vals)
