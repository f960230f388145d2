"""Semisimplicial sets, the Quinn spaces P_k, the multisemisimplicial
levels R_k with their permutation actions, and the ring structure.

Everything is combinatorial: no geometric realization is ever formed.
Explicit semisimplicial sets are finite and truncated at a dimension N.
The Quinn spaces are lazy, with n-simplices the degree-k ads on Delta^n and
membership decided by the theory's ad check.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from . import _zlinalg as zl
from .ad_framework import AdCTheory, AdError, PreAd, kan_extend
from .cell_cat import (
    eta_sharp,
    lambda_,
    multi_simplex,
    perm_compose,
    perm_parity,
    permuted_index,
    reindex,
    suspension_pair,
    theta_suspension,
)
from .chain_algebra import HomologyGroup, cellular_chains, smith_homology
from .complex_core import (
    BallComplex,
    boundary_simplex,
    from_facets,
    horn,
    make_refinement,
    point,
    product,
    simplex,
    split_product_cell,
)

BASE = "*"


class SemisimplicialError(ValueError):
    pass


# ------------------------------------------------------------------ explicit semisimplicial sets

@dataclass(frozen=True, eq=False)
class TruncatedSemisimplicialSet:
    """Simplices of degree 0..N with face maps.

    ``simplices[n]`` lists the n-simplices and ``faces[n][x]`` is the tuple
    (d_0 x, ..., d_n x) for n >= 1.  A based set has the simplex ``*`` in
    every degree, with all faces ``*``.
    """

    N: int
    simplices: Mapping[int, tuple]
    faces: Mapping[int, Mapping[Hashable, tuple]]
    based: bool = False

    def __post_init__(self):
        object.__setattr__(self, "simplices", {n: tuple(self.simplices.get(n, ())) for n in range(self.N + 1)})
        object.__setattr__(self, "faces", {n: dict(self.faces.get(n, {})) for n in range(1, self.N + 1)})
        for n in range(1, self.N + 1):
            lower = set(self.simplices[n - 1])
            for x in self.simplices[n]:
                fs = self.faces[n].get(x)
                if fs is None or len(fs) != n + 1:
                    raise SemisimplicialError(f"simplex {x!r} of degree {n} lacks faces")
                if any(f not in lower for f in fs):
                    raise SemisimplicialError(f"a face of {x!r} is not a simplex")
        if self.based:
            for n in range(self.N + 1):
                if BASE not in self.simplices[n]:
                    raise SemisimplicialError("based set misses the basepoint")
                if n and any(f != BASE for f in self.faces[n][BASE]):
                    raise SemisimplicialError("faces of the basepoint must be the basepoint")

    def d(self, i: int, n: int, x):
        return self.faces[n][x][i]

    def size(self) -> int:
        return sum(len(v) for v in self.simplices.values())

    def identity_defects(self) -> list:
        """Triples violating d_i d_j = d_{j-1} d_i for i < j."""
        bad = []
        for n in range(2, self.N + 1):
            for x in self.simplices[n]:
                for j in range(n + 1):
                    for i in range(j):
                        a = self.d(i, n - 1, self.d(j, n, x))
                        b = self.d(j - 1, n - 1, self.d(i, n, x))
                        if a != b:
                            bad.append((n, x, i, j))
        return bad

    def same(self, other: "TruncatedSemisimplicialSet") -> bool:
        if self.N != other.N or self.based != other.based:
            return False
        for n in range(self.N + 1):
            if set(self.simplices[n]) != set(other.simplices[n]):
                return False
            if n and any(self.faces[n][x] != other.faces[n][x] for x in self.simplices[n]):
                return False
        return True

    def truncate(self, N: int) -> "TruncatedSemisimplicialSet":
        N = min(N, self.N)
        return TruncatedSemisimplicialSet(N, {n: self.simplices[n] for n in range(N + 1)},
                                          {n: self.faces[n] for n in range(1, N + 1)}, self.based)


def point_set(N: int) -> TruncatedSemisimplicialSet:
    """The based set * with one simplex in each degree."""
    return TruncatedSemisimplicialSet(N, {n: (BASE,) for n in range(N + 1)},
                                      {n: {BASE: (BASE,) * (n + 1)} for n in range(1, N + 1)}, True)


def sphere_set(n: int, N: int) -> TruncatedSemisimplicialSet:
    """S^n: the basepoint plus one simplex ``s`` of degree n, all of whose
    faces are the basepoint."""
    S = point_set(N)
    if n > N:
        return S
    simp = dict(S.simplices)
    faces = {m: dict(S.faces[m]) for m in range(1, N + 1)}
    simp[n] = simp[n] + ("s",)
    if n:
        faces[n]["s"] = (BASE,) * (n + 1)
    return TruncatedSemisimplicialSet(N, simp, faces, True)


def from_ordered_complex(K: BallComplex, N: int | None = None, basepoint: bool = True) -> TruncatedSemisimplicialSet:
    """An ordered simplicial complex as a strict semisimplicial set,
    optionally with a disjoint basepoint added."""
    N = K.dim if N is None else N
    simp: dict = {n: [] for n in range(N + 1)}
    faces: dict = {n: {} for n in range(1, N + 1)}
    for c in K.cells:
        n = K.dims[c]
        if n > N:
            continue
        simp[n].append(c)
        if n:
            faces[n][c] = tuple(c[:i] + c[i + 1:] for i in range(n + 1))
    if basepoint:
        for n in range(N + 1):
            simp[n].append(BASE)
            if n:
                faces[n][BASE] = (BASE,) * (n + 1)
    return TruncatedSemisimplicialSet(N, simp, faces, basepoint)


def kan_suspension(A: TruncatedSemisimplicialSet) -> TruncatedSemisimplicialSet:
    """Sigma A: one 0-simplex, (Sigma A)_n = A_{n-1}; d_i as in A for i < n
    and d_n to the basepoint."""
    if not A.based:
        raise SemisimplicialError("Kan suspension needs a based set")
    N = A.N + 1
    simp = {0: (BASE,)}
    faces: dict = {}
    for n in range(1, N + 1):
        simp[n] = A.simplices[n - 1]
        fn = {}
        for x in simp[n]:
            if n == 1:
                fn[x] = (BASE, BASE)
            else:
                fn[x] = tuple(A.d(i, n - 1, x) for i in range(n)) + (BASE,)
        faces[n] = fn
    return TruncatedSemisimplicialSet(N, simp, faces, True)


def loops(A: TruncatedSemisimplicialSet) -> TruncatedSemisimplicialSet:
    """Omega A: the (n+1)-simplices x with d_{n+1} x = * and d_0^{n+1} x = *."""
    if not A.based:
        raise SemisimplicialError("loops need a based set")
    N = A.N - 1
    if N < 0:
        raise SemisimplicialError("truncation too small for loops")
    simp, faces = {}, {}
    for n in range(N + 1):
        keep = []
        for x in A.simplices[n + 1]:
            if A.d(n + 1, n + 1, x) != BASE:
                continue
            y = x
            for m in range(n + 1, 0, -1):
                y = A.d(0, m, y)
            if y == BASE:
                keep.append(x)
        simp[n] = tuple(keep)
        if n:
            faces[n] = {x: tuple(A.d(i, n + 1, x) for i in range(n + 1)) for x in keep}
    return TruncatedSemisimplicialSet(N, simp, faces, True)


def semisimplicial_maps(A: TruncatedSemisimplicialSet, B: TruncatedSemisimplicialSet,
                        based: bool = True, upto: int | None = None) -> list[dict]:
    """All maps A -> B commuting with faces in degrees <= upto, as dicts
    (n, x) -> y; based maps send * to *."""
    top = min(A.N, B.N) if upto is None else upto
    order = [(n, x) for n in range(top + 1) for x in A.simplices[n]]
    out: list = []
    f: dict = {}

    def rec(j):
        if j == len(order):
            out.append(dict(f))
            return
        n, x = order[j]
        if based and x == BASE:
            cands = [BASE]
        else:
            cands = B.simplices[n]
        for y in cands:
            if n and any(f[(n - 1, A.d(i, n, x))] != B.d(i, n, y) for i in range(n + 1)):
                continue
            f[(n, x)] = y
            rec(j + 1)
            del f[(n, x)]

    rec(0)
    return out


def adjunction_check(B: TruncatedSemisimplicialSet, A: TruncatedSemisimplicialSet) -> tuple[bool, int]:
    """Whether g -> (x -> g(x)) is a bijection from based maps Sigma B -> A
    onto based maps B -> Omega A (compared in degrees < A.N); returns the
    verdict and the number of maps."""
    N = A.N
    SB = kan_suspension(B.truncate(N - 1))
    OA = loops(A)
    left = semisimplicial_maps(SB, A, upto=N)
    right = semisimplicial_maps(B.truncate(N - 1), OA, upto=N - 1)

    def adjoint(g):
        return frozenset(((n, x), g[(n + 1, x)]) for n in range(N) for x in B.simplices[n]
                         if (n + 1, x) in g)

    images = [adjoint(g) for g in left]
    right_keys = {frozenset(h.items()) for h in right}
    ok = len(set(images)) == len(images) and set(images) == right_keys
    return ok, len(left)


# ------------------------------------------------------------------ Quinn spaces

def face_cellmap(n: int, i: int) -> dict:
    """Cells of Delta^{n-1} -> cells of the i-th face of Delta^n."""
    shift = lambda v: v if v < i else v + 1
    return {c: (tuple(shift(v) for v in c), 1) for c in simplex(n - 1).cells}


@dataclass(frozen=True, eq=False)
class QuinnSpaceP:
    """(P_k)_n = ad^k(Delta^n), truncated at N, based at the trivial ads."""

    theory: object
    k: int
    N: int = 3

    def contains(self, F: PreAd, n: int) -> bool:
        return (F.K == simplex(n) and not F.L and F.degree == self.k and F.is_ad())

    def face(self, i: int, F: PreAd) -> PreAd:
        n = F.K.dim
        if not 0 <= i <= n or n < 1:
            raise SemisimplicialError(f"no face d_{i} in degree {n}")
        return F.pull(simplex(n - 1), frozenset(), face_cellmap(n, i))

    def basepoint(self, n: int) -> PreAd:
        return self.theory.trivial(simplex(n), frozenset(), self.k)

    def is_base(self, F: PreAd) -> bool:
        T = self.theory
        return all(T.is_empty(F.value(c)) for c in F.K.cells)

    def identity_defects(self, F: PreAd) -> list:
        n = F.K.dim
        bad = []
        for j in range(n + 1):
            for i in range(j):
                if not self.face(i, self.face(j, F)).equals(self.face(j - 1, self.face(i, F))):
                    bad.append((i, j))
        return bad

    # -- structure map and its adjoint
    def suspend(self, F: PreAd) -> PreAd:
        """Sigma P_k -> P_{k+1}: theta^* F, extended by the empty values."""
        n = F.K.dim if F.K.cells != point().cells else 0
        return reindex(theta_suspension(n), F).relax()

    def desuspend(self, G: PreAd) -> PreAd:
        """Inverse of the adjoint P_k -> Omega P_{k+1}."""
        from .ad_framework import inverse_reindex

        n = G.K.dim - 1
        src = suspension_pair(n)
        T = self.theory
        for c in src.L:
            if not T.is_empty(G.value(c)):
                raise SemisimplicialError("simplex is not in Omega P")
        Grel = PreAd(T, G.K, src.L, G.degree, {c: G.value(c) for c in src.objects})
        return inverse_reindex(theta_suspension(n), Grel)

    def in_loops(self, G: PreAd) -> bool:
        """d_{n+1} G = * and d_0^{n+1} G = *."""
        n = G.K.dim - 1
        if not self.is_base(self.face(n + 1, G)):
            return False
        x = G
        for _ in range(n + 1):
            x = self.face(0, x)
        return self.is_base(x)

    # -- Kan filling
    def horn_ad(self, n: int, i: int, faces: Mapping[int, PreAd]) -> PreAd:
        """Assemble a horn Lambda_{n,i} -> P_k from its faces d_j, j != i."""
        H = horn(n, i)
        D = simplex(n)
        K1 = D.restrict(H.cells)
        vals: dict = {}
        for j in range(n + 1):
            if j == i:
                continue
            F = faces[j]
            if F.K != simplex(n - 1) or F.degree != self.k:
                raise SemisimplicialError(f"face {j} has the wrong shape")
            for c, (t, _) in face_cellmap(n, j).items():
                v = F.value(c)
                if t in vals and not self.theory.values_equal(vals[t], v):
                    raise SemisimplicialError("horn faces disagree on an overlap")
                vals[t] = v
        return PreAd(self.theory, K1, frozenset(), self.k, vals)

    def kan_fill(self, n: int, i: int, faces: Mapping[int, PreAd], method: str = "auto") -> PreAd:
        F = self.horn_ad(n, i, faces)
        G = kan_extend(self.theory, simplex(n), frozenset(), horn(n, i).cells, F, method=method)
        for j, Fj in faces.items():
            if j != i and not self.face(j, G).equals(Fj):
                raise SemisimplicialError("filler does not restrict to the horn")
        return G


# ------------------------------------------------------------------ homotopy groups

def rho(T: AdCTheory, k: int, n: int) -> list[list[int]]:
    """rho_n(P_k): a basis of the ads on Delta^n that vanish on the boundary,
    as vectors of the Hom data of (Delta^n, dDelta^n)."""
    L = boundary_simplex(n).cells if n else ()
    return T.hom_data(simplex(n), frozenset(L), k).cycles


def homotopy_group(T: AdCTheory, k: int, n: int) -> HomologyGroup:
    """pi_n(P_k) = rho_n / (y ~ y' iff some z has d_0 z = y, d_1 z = y' and
    the other faces at the basepoint), computed linearly."""
    if not isinstance(T, AdCTheory):
        raise AdError("homotopy groups are computed for ad_C only")
    D, D1 = simplex(n), simplex(n + 1)
    Lr = frozenset(boundary_simplex(n).cells) if n else frozenset()
    Hr = T.hom_data(D, Lr, k)
    rho_basis = Hr.cycles
    # z on Delta^{n+1} with faces d_i, i >= 2, at the basepoint
    faces_out = [tuple(v for v in range(n + 2) if v != i) for i in range(2, n + 2)]
    Lz = D1.closure(faces_out) if faces_out else frozenset()
    Hz = T.hom_data(D1, Lz, k)
    d0, d1 = [], []
    P = QuinnSpaceP(T, k)
    for z in Hz.cycles:
        Z = Hz.to_ad(z).relax()
        y0, y1 = P.face(0, Z), P.face(1, Z)
        d0.append(Hr.to_vec(PreAd(T, D, Lr, k, {c: y0.value(c) for c in D.cells if c not in Lr})))
        d1.append(Hr.to_vec(PreAd(T, D, Lr, k, {c: y1.value(c) for c in D.cells if c not in Lr})))
    # reflexivity: every y is related to itself
    pairs = [a + b for a, b in zip(d0, d1)]
    dim = Hr.dim
    if pairs:
        refl = [list(y) + list(y) for y in rho_basis]
        if not zl.span_contains(pairs, refl, 2 * dim):
            raise AdError("the homotopy relation is not reflexive")
    # N = {d_0 z : d_1 z = 0}
    if d1:
        M = [[v[r] for v in d1] for r in range(dim)]
        ker = zl.kernel(M, len(d1)) if dim else [[int(i == j) for i in range(len(d1))] for j in range(len(d1))]
    else:
        ker = []
    Nsub = []
    for w in ker:
        v = [0] * dim
        for a, y in zip(w, d0):
            if a:
                for r in range(dim):
                    v[r] += a * y[r]
        if any(v):
            Nsub.append(v)
    betti, torsion = zl.quotient_invariants(rho_basis, Nsub, dim)
    return HomologyGroup(betti, tuple(torsion))


# ------------------------------------------------------------------ R_k, permutations, suspension

@dataclass(frozen=True, eq=False)
class RSimplex:
    """A simplex of R_k at multi-index ns: a degree-k ad on Delta^ns."""

    ns: tuple
    ad: PreAd

    def __post_init__(self):
        object.__setattr__(self, "ns", tuple(self.ns))
        if self.ad.K != multi_simplex(self.ns):
            raise SemisimplicialError("ad does not live on Delta^ns")

    @property
    def k(self) -> int:
        return self.ad.degree

    def equals(self, other: "RSimplex") -> bool:
        return self.ns == other.ns and self.ad.L == other.ad.L and self.ad.equals(other.ad)


def sigma_action(eta: Sequence[int], a: RSimplex) -> RSimplex:
    """eta . F = i^{eps(eta)} o F o eta_#, on the permuted multi-index."""
    eta = tuple(eta)
    if len(eta) != len(a.ns):
        raise SemisimplicialError("permutation arity differs from the multi-index length")
    F = a.ad.relax()
    G = reindex(eta_sharp(eta, a.ns), F)
    if perm_parity(eta):
        G = G.theory.involute(G)
    return RSimplex(permuted_index(eta, a.ns), G)


def suspend_R(a: RSimplex) -> RSimplex:
    """[t, [u, F]] -> [(t, u), lambda^* F]."""
    G = reindex(lambda_(a.ad.K, a.ad.L), a.ad)
    return RSimplex((1,) + a.ns, G.relax())


def block_permutation(zeta: Sequence[int], eta: Sequence[int]) -> tuple:
    """zeta x eta in Sigma_{p+k}."""
    p = len(zeta)
    return tuple(zeta) + tuple(p + x for x in eta)


def all_permutations(k: int) -> list[tuple]:
    return list(itertools.permutations(range(k)))


# ------------------------------------------------------------------ the ring structure

def box_product(F: PreAd, G: PreAd) -> PreAd:
    """(F [x] G)(sigma x tau) = i^{l dim sigma} F(sigma) [x] G(tau)."""
    T = F.theory
    if G.theory is not T:
        raise AdError("box product of ads of different theories")
    if hasattr(T, "box_values"):
        return _box_adC(T, F, G)
    from .symmetric_ads import SymmetricTheory, tensor_ads

    if isinstance(T, SymmetricTheory):
        return tensor_ads(F, G)
    raise AdError("theory is not multiplicative")


def _box_adC(T: AdCTheory, F: PreAd, G: PreAd) -> PreAd:
    K1, K2 = F.K, G.K
    P = product(K1, K2)
    k, l = F.degree, G.degree
    L = set()
    vals = {}
    for c in P.cells:
        s, t = split_product_cell(c, (K1, K2))
        if s in F.L or t in G.L:
            L.add(c)
            continue
        p, q = K1.dims[s] - k, K2.dims[t] - l
        u, w = F.value(s), G.value(t)
        if not T.C.rank(p + q) or not u or not w:
            vals[c] = T.empty_value(p + q)
            continue
        v = T.box_values(u, p, w, q)
        if (l * K1.dims[s]) % 2:
            v = T.involute_value(v)
        vals[c] = v
    return PreAd(T, P, frozenset(L), k + l, vals)


def unit_ad(T) -> PreAd:
    return T.unit_ad() if hasattr(T, "unit_ad") and not hasattr(T, "N") else _sym_unit(T)


def _sym_unit(T) -> PreAd:
    from .symmetric_ads import unit_ad as sym_unit

    return sym_unit(T)


def lambda_power(F: PreAd, m: int) -> PreAd:
    """(lambda^*)^m F."""
    for _ in range(m):
        F = reindex(lambda_(F.K, F.L), F)
    return F


def lemma_unit_left(F: PreAd, m: int) -> bool:
    """((lambda^*)^m E) [x] F = (lambda^*)^m F."""
    E = lambda_power(unit_ad(F.theory), m)
    A, B = box_product(E, F), lambda_power(F, m)
    return A.K == B.K and A.L == B.L and A.degree == B.degree and A.equals(B)


def lemma_unit_right(F: PreAd, ns: Sequence[int], m: int) -> bool:
    """F [x] ((lambda^*)^m E) = i^{km} o (((lambda^*)^m E) [x] F) o eta_#,
    where eta sends the block of F's k coordinates past the m new ones."""
    k = len(ns)
    E = lambda_power(unit_ad(F.theory), m)
    lhs = box_product(F, E)
    rhs0 = box_product(E, F)
    target_ns = (1,) * m + tuple(ns)
    eta = _block_move(k, m)
    G = reindex(eta_sharp(eta, target_ns), rhs0.relax())
    if (k * m) % 2:
        G = G.theory.involute(G)
    if permuted_index(eta, target_ns) != tuple(ns) + (1,) * m or G.K != lhs.K:
        return False
    return G.equals(lhs.relax())


def _block_move(k: int, m: int) -> tuple:
    """The permutation of k + m letters whose eta_# has source index
    (n_1..n_k, 1..1) and target (1..1, n_1..n_k)."""
    # permuted_index(p, ns)[j] = ns[p^-1(j)]: we need p^-1(j) = m + j for j < k
    inv = tuple(m + j for j in range(k)) + tuple(range(m))
    out = [0] * (k + m)
    for j, x in enumerate(inv):
        out[x] = j
    return tuple(out)


# ------------------------------------------------------------------ sampling

def sample_R(T, ns: Sequence[int], rng: random.Random, count: int = 2) -> list[RSimplex]:
    ns = tuple(ns)
    K = multi_simplex(ns)
    k = len(ns)
    ads = [F for F in T.sample_ads(K, frozenset(), k, rng, count) if F.is_ad()]
    if all(_is_trivial(F) for F in ads):
        ads += _suspended_samples(T, ns, rng, count)
    return [RSimplex(ns, F) for F in ads]


def _is_trivial(F: PreAd) -> bool:
    return all(F.theory.is_empty(v) for v in F.values.values())


def _suspended_samples(T, ns: tuple, rng: random.Random, count: int) -> list[PreAd]:
    """Degree-|ns| ads on Delta^ns built from degree-0 ads by lambda^* (for
    leading 1s) and theta^* (for one trailing simplex factor)."""
    m = 0
    while m < len(ns) and ns[m] == 1:
        m += 1
    rest = ns[m:]
    if not rest:
        base = T.sample_ads(point(), frozenset(), 0, rng, count)
    elif len(rest) == 1 and rest[0] >= 1:
        n = rest[0] - 1
        base = [reindex(theta_suspension(n), F).relax()
                for F in T.sample_ads(simplex(n), frozenset(), 0, rng, count)]
    else:
        return []
    out = []
    for F in base:
        G = lambda_power(F, m).relax() if m else F
        if G.is_ad() and not _is_trivial(G):
            out.append(G)
    return out


def sample_simplices(T, k: int, n: int, rng: random.Random, count: int = 3) -> list[PreAd]:
    return [F for F in T.sample_ads(simplex(n), frozenset(), k, rng, count) if F.is_ad()]


# ------------------------------------------------------------------ cup-product oracle

def staircase_product(K: BallComplex, m: int = 1) -> tuple[BallComplex, dict]:
    """The ordered triangulation of K x Delta^m (vertices (v, j) in
    lexicographic order) and the projections to K and Delta^m."""
    facets = []
    for c in K.maximal_cells():
        p = len(c) - 1
        for path in _lattice_paths(p, m):
            facets.append(tuple((c[a], b) for a, b in path))
    X = from_facets(facets)
    return X, {"K": lambda s: tuple(dict.fromkeys(v for v, _ in s)),
               "D": lambda s: tuple(dict.fromkeys(j for _, j in s))}


def _lattice_paths(p: int, q: int) -> list[list[tuple]]:
    out = []
    for ups in itertools.combinations(range(p + q), q):
        a = b = 0
        path = [(0, 0)]
        for step in range(p + q):
            if step in ups:
                b += 1
            else:
                a += 1
            path.append((a, b))
        out.append(path)
    return out


def cup_cross_cocycle(K: BallComplex, a: Mapping, b: Mapping, m: int = 1) -> dict:
    """The cellular cochain on K x Delta^m obtained by pulling
    pr_K^* a cup pr_D^* b on the staircase triangulation back along the
    subdivision chain map.  a, b are cochains {simplex: int}."""
    X, pr = staircase_product(K, m)
    P = product(K, simplex(m))
    D = simplex(m)
    carrier = {}
    for s in X.cells:
        carrier[s] = _product_id(P, K, D, pr["K"](s), pr["D"](s))
    R = make_refinement(X, P, carrier)
    p = len(next(iter(a))) - 1 if a else 0
    out = {}
    for cell in P.cells:
        tot = 0
        for s, e in R.pieces(cell):
            if len(s) - 1 != P.dims[cell]:
                continue
            front, back = s[: p + 1], s[p:]
            fa = pr["K"](front)
            fb = pr["D"](back)
            if len(fa) != len(front) or len(fb) != len(back):
                continue
            tot += e * a.get(fa, 0) * b.get(fb, 0)
        if tot:
            out[cell] = tot
    return out


def _product_id(P, K, D, s, t):
    from .complex_core import product_cell

    return product_cell((s, K), (t, D))


def cup_oracle_agrees(F: PreAd, G: PreAd) -> bool:
    """For ad_Z, whether the class of F [x] G on K x Delta^m equals the
    class of the staircase cup product pr_K^* a cup pr_D^* b, where a and b
    are the cocycles underlying F and G."""
    T = F.theory
    if not isinstance(T, AdCTheory) or T.C.ranks != {0: 1}:
        raise AdError("the cup oracle needs ad_C with C = Z")
    k, l = F.degree, G.degree
    a = {c: F.value(c)[0] for c in F.K.cells if F.K.dims[c] == k and F.value(c)[0]}
    b = {c: G.value(c)[0] for c in G.K.cells if G.K.dims[c] == l and G.value(c)[0]}
    B = box_product(F, G)
    m = G.K.dim
    cup = cup_cross_cocycle(F.K, a, b, m) if a and b else {}
    H = T.hom_data(B.K, B.L, k + l)
    vals = {c: ((cup.get(c, 0),) if B.K.dims[c] == k + l else T.empty_value(B.K.dims[c] - k - l))
            for c in B.K.cells if c not in B.L}
    if any(cup.get(c, 0) for c in B.L):
        return False
    O = PreAd(T, B.K, B.L, k + l, vals)
    if not O.is_ad():
        return False
    diff = [x - y for x, y in zip(H.to_vec(O), H.to_vec(B))]
    return not any(diff) or zl.in_span(H.boundaries, diff, H.dim)
