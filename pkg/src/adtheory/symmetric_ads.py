"""The symmetric Poincare ad theory over Z.

Chain complexes here are *based*: every basis element has a label, and a
label is a tuple of atoms.  Tensor products concatenate labels, so products
are strictly associative with the empty label as a strict unit, and the
colimits used by gluing are unions of bases.

A symmetric complex of dimension n carries phi_s in (C (x) C)_{n+s} for
s = 0..N (the truncation), standing for the image of e_s; the image of
T e_s is T phi_s.  A pre-ad is closed when, on every closed cell sigma,

    d phi_{sigma,s} - (-1)^n (phi_{sigma,s-1} + (-1)^s T phi_{sigma,s-1})
        = (-1)^k sum_tau [sigma : tau] phi_{tau,s}

with n = dim sigma - k, and it is an ad when in addition every
Upsilon_sigma is a quasi-isomorphism.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from . import _zlinalg as zl
from .ad_framework import AdError, AdTheory, PreAd, cylinder_complex
from .chain_algebra import (
    GradedChainMap,
    IntegerChainComplex,
    diagonal_W,
    extended_aw,
    hom_dual,
    is_quasi_isomorphism,
    smith_homology,
)
from .complex_core import (
    BallComplex,
    Refinement,
    coherent_orientation,
    interval,
    point,
    product,
    product_cell,
    simplex,
    sort_key,
    split_product_cell,
)

ONE = "@1"  # label atom of the 1-end of the interval ad
EDGE = "@I"

Tensor = dict  # {(label, label): coeff}


class SymmetricError(ValueError):
    pass


# ------------------------------------------------------------------ based complexes

@dataclass(frozen=True, eq=False)
class BasedComplex:
    """Labels with degrees and a sparse differential."""

    degree: Mapping[tuple, int]
    d: Mapping[tuple, Mapping[tuple, int]]

    def __post_init__(self):
        object.__setattr__(self, "degree", dict(self.degree))
        object.__setattr__(self, "d", {a: {b: x for b, x in v.items() if x}
                                       for a, v in self.d.items() if any(v.values())})
        for a, v in self.d.items():
            if a not in self.degree:
                raise SymmetricError(f"differential of unknown label {a!r}")
            for b in v:
                if self.degree.get(b) != self.degree[a] - 1:
                    raise SymmetricError(f"d({a!r}) has a term of the wrong degree")

    def __len__(self):
        return len(self.degree)

    @cached_property
    def labels(self) -> tuple:
        return tuple(sorted(self.degree, key=lambda a: (self.degree[a], sort_key(a))))

    def labels_of_degree(self, q: int, exclude: frozenset = frozenset()) -> list:
        return [a for a in self.labels if self.degree[a] == q and a not in exclude]

    def check(self) -> bool:
        for a, v in self.d.items():
            acc: dict = {}
            for b, x in v.items():
                for c, y in self.d.get(b, {}).items():
                    acc[c] = acc.get(c, 0) + x * y
            if any(acc.values()):
                return False
        return True

    def contains(self, other: "BasedComplex") -> bool:
        """Whether other is a based subcomplex."""
        for a, q in other.degree.items():
            if self.degree.get(a) != q or dict(self.d.get(a, {})) != dict(other.d.get(a, {})):
                return False
        return True

    def restrict(self, labels: Iterable) -> "BasedComplex":
        s = set(labels)
        for a in s:
            if any(b not in s for b in self.d.get(a, {})):
                raise SymmetricError("label set is not a subcomplex")
        return BasedComplex({a: self.degree[a] for a in s}, {a: self.d[a] for a in s if a in self.d})

    def chain_complex(self, exclude: frozenset = frozenset()) -> tuple[IntegerChainComplex, dict]:
        """The complex on the labels outside ``exclude`` (a quotient when
        exclude is a subcomplex) and the position of each label."""
        by: dict = {}
        for a in self.labels:
            if a not in exclude:
                by.setdefault(self.degree[a], []).append(a)
        pos = {a: i for bs in by.values() for i, a in enumerate(bs)}
        d = {}
        for q, bs in by.items():
            if q - 1 not in by:
                continue
            M = zl.zeros(len(by[q - 1]), len(bs))
            for j, a in enumerate(bs):
                for b, x in self.d.get(a, {}).items():
                    if b not in exclude:
                        M[pos[b]][j] = x
            d[q] = M
        return IntegerChainComplex({q: len(b) for q, b in by.items()}, d,
                                   {q: tuple(b) for q, b in by.items()}), pos

    def to_json(self) -> dict:
        return {"cells": [[_lab_json(a), self.degree[a]] for a in self.labels],
                "d": [[_lab_json(a), [[_lab_json(b), x] for b, x in sorted(v.items(), key=lambda t: sort_key(t[0]))]]
                      for a, v in sorted(self.d.items(), key=lambda t: sort_key(t[0]))]}


def _lab_json(a):
    return [_lab_json(x) for x in a] if isinstance(a, tuple) else a


def _lab_from(x):
    return tuple(_lab_from(y) for y in x) if isinstance(x, list) else x


def union(parts: Iterable[BasedComplex]) -> BasedComplex:
    """The colimit of based complexes along shared labels."""
    deg: dict = {}
    d: dict = {}
    for P in parts:
        for a, q in P.degree.items():
            if a in deg and (deg[a] != q or dict(d.get(a, {})) != dict(P.d.get(a, {}))):
                raise SymmetricError(f"label {a!r} occurs with different structure")
            deg[a] = q
            if a in P.d:
                d[a] = dict(P.d[a])
    return BasedComplex(deg, d)


def tensor_based(A: BasedComplex, B: BasedComplex) -> BasedComplex:
    deg, d = {}, {}
    for a, p in A.degree.items():
        s = -1 if p % 2 else 1
        for b, q in B.degree.items():
            lab = a + b
            deg[lab] = p + q
            terms = {}
            for a2, x in A.d.get(a, {}).items():
                terms[a2 + b] = terms.get(a2 + b, 0) + x
            for b2, y in B.d.get(b, {}).items():
                terms[a + b2] = terms.get(a + b2, 0) + s * y
            if terms:
                d[lab] = terms
    return BasedComplex(deg, d)


# ------------------------------------------------------------------ tensors in C (x) C

def t_add(a: Mapping, b: Mapping, s: int = 1) -> Tensor:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


def t_scale(a: Mapping, s: int) -> Tensor:
    return {k: s * v for k, v in a.items() if v and s}


def t_d(t: Mapping, C: BasedComplex) -> Tensor:
    out: dict = {}
    for (a, b), c in t.items():
        for a2, x in C.d.get(a, {}).items():
            out[(a2, b)] = out.get((a2, b), 0) + c * x
        s = -1 if C.degree[a] % 2 else 1
        for b2, y in C.d.get(b, {}).items():
            out[(a, b2)] = out.get((a, b2), 0) + s * c * y
    return {k: v for k, v in out.items() if v}


def t_T(t: Mapping, C: BasedComplex) -> Tensor:
    out: dict = {}
    for (a, b), c in t.items():
        s = -1 if (C.degree[a] * C.degree[b]) % 2 else 1
        out[(b, a)] = out.get((b, a), 0) + s * c
    return {k: v for k, v in out.items() if v}


def t_N(t: Mapping, C: BasedComplex, s: int) -> Tensor:
    """(1 + (-1)^s T) t."""
    return t_add(t, t_T(t, C), -1 if s % 2 else 1)


# ------------------------------------------------------------------ symmetric complexes

@dataclass(frozen=True, eq=False)
class SymmetricComplex:
    """(C, phi) of dimension n; phi[s] is the image of e_s."""

    C: BasedComplex
    n: int
    phi: tuple

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple({k: v for k, v in p.items() if v} for p in self.phi))
        for s, p in enumerate(self.phi):
            for (a, b) in p:
                if a not in self.C.degree or b not in self.C.degree:
                    raise SymmetricError(f"phi_{s} involves an unknown label")
                if self.C.degree[a] + self.C.degree[b] != self.n + s:
                    raise SymmetricError(f"phi_{s} has a term of the wrong degree")

    @property
    def is_empty(self) -> bool:
        return not self.C.degree

    def phi_s(self, s: int) -> Tensor:
        return self.phi[s] if s < len(self.phi) else {}

    def involute(self) -> "SymmetricComplex":
        return SymmetricComplex(self.C, self.n, tuple(t_scale(p, -1) for p in self.phi))

    def truncate(self, N: int) -> "SymmetricComplex":
        phi = tuple(self.phi_s(s) for s in range(N + 1))
        return SymmetricComplex(self.C, self.n, phi)

    def closed_defect(self) -> list[int]:
        """Degrees s where d phi_s != (-1)^n N_s phi_{s-1}."""
        bad = []
        e = -1 if self.n % 2 else 1
        for s in range(len(self.phi)):
            lhs = t_d(self.phi[s], self.C)
            if s:
                lhs = t_add(lhs, t_N(self.phi[s - 1], self.C, s), -e)
            if lhs:
                bad.append(s)
        return bad

    @property
    def is_symmetric(self) -> bool:
        return not self.closed_defect()

    def relabel(self, f) -> "SymmetricComplex":
        C = BasedComplex({f(a): q for a, q in self.C.degree.items()},
                         {f(a): {f(b): x for b, x in v.items()} for a, v in self.C.d.items()})
        if len(C.degree) != len(self.C.degree):
            raise SymmetricError("relabelling is not injective")
        phi = tuple({(f(a), f(b)): c for (a, b), c in p.items()} for p in self.phi)
        return SymmetricComplex(C, self.n, phi)

    def same(self, other: "SymmetricComplex") -> bool:
        if self.n != other.n or self.C.degree != other.C.degree:
            return False
        if {a: dict(v) for a, v in self.C.d.items()} != {a: dict(v) for a, v in other.C.d.items()}:
            return False
        m = max(len(self.phi), len(other.phi))
        return all(self.phi_s(s) == other.phi_s(s) for s in range(m))

    def to_json(self) -> dict:
        out = {"format": 1, "n": self.n}
        out.update(self.C.to_json())
        out["phi"] = {str(s): [[_lab_json(a), _lab_json(b), c]
                               for (a, b), c in sorted(p.items(), key=lambda t: sort_key(t[0]))]
                      for s, p in enumerate(self.phi) if p}
        return out

    @classmethod
    def from_json(cls, obj: dict, N: int | None = None) -> "SymmetricComplex":
        if not isinstance(obj, dict) or set(obj) - {"format", "n", "cells", "d", "phi"}:
            raise SymmetricError("malformed symmetric complex")
        if obj.get("format", 1) != 1 or not isinstance(obj.get("n"), int):
            raise SymmetricError("malformed symmetric complex")
        deg = {_lab_from(a): int(q) for a, q in obj.get("cells", [])}
        d = {_lab_from(a): {_lab_from(b): int(x) for b, x in terms} for a, terms in obj.get("d", [])}
        C = BasedComplex(deg, d)
        phi_in = {int(s): {(_lab_from(a), _lab_from(b)): int(c) for a, b, c in v}
                  for s, v in obj.get("phi", {}).items()}
        top = max(phi_in, default=0) if N is None else N
        return cls(C, obj["n"], tuple(phi_in.get(s, {}) for s in range(top + 1)))


def empty_complex(n: int, N: int = 3) -> SymmetricComplex:
    return SymmetricComplex(BasedComplex({}, {}), n, tuple({} for _ in range(N + 1)))


def unit_complex(N: int = 3) -> SymmetricComplex:
    """Z in degree 0 with phi_0 = 1 (x) 1, labelled by the empty tuple."""
    return SymmetricComplex(BasedComplex({(): 0}, {}), 0, ({((), ()): 1},) + tuple({} for _ in range(N)))


def direct_sum(*Ss: SymmetricComplex) -> SymmetricComplex:
    """Orthogonal sum; summand j has its labels prefixed by the atom #j."""
    if len({S.n for S in Ss}) > 1:
        raise SymmetricError("summands must have equal dimension")
    N = max(len(S.phi) for S in Ss) - 1
    parts, phi = [], [dict() for _ in range(N + 1)]
    for j, S in enumerate(Ss):
        tag = (f"#{j}",)
        R = S.relabel(lambda a, tag=tag: tag + a)
        parts.append(R.C)
        for s in range(N + 1):
            phi[s] = t_add(phi[s], R.phi_s(s))
    return SymmetricComplex(union(parts), Ss[0].n, tuple(phi))


def tensor_complexes(S1: SymmetricComplex, S2: SymmetricComplex, N: int | None = None) -> SymmetricComplex:
    """(C1 (x) C2, (phi1 (x) phi2) o Delta) with Koszul signs."""
    if N is None:
        N = min(len(S1.phi), len(S2.phi)) - 1
    C = tensor_based(S1.C, S2.C)
    D = diagonal_W(N)
    m2 = S2.n
    cache1: dict = {}
    cache2: dict = {}

    def part(S, cache, i, g):
        if (i, g) not in cache:
            p = S.phi_s(i)
            cache[(i, g)] = t_T(p, S.C) if g else p
        return cache[(i, g)]

    phi = []
    for s in range(N + 1):
        acc: dict = {}
        for ((i, g), (j, h)), c in D[s].items():
            A, B = part(S1, cache1, i, g), part(S2, cache2, j, h)
            if not A or not B:
                continue
            sign = c * (-1 if (m2 * i) % 2 else 1)
            for (a1, a2), x in A.items():
                q2 = S1.C.degree[a2]
                for (b1, b2), y in B.items():
                    e = -1 if (q2 * S2.C.degree[b1]) % 2 else 1
                    key = (a1 + b1, a2 + b2)
                    acc[key] = acc.get(key, 0) + sign * e * x * y
        phi.append({k: v for k, v in acc.items() if v})
    return SymmetricComplex(C, S1.n + S2.n, tuple(phi))


# ------------------------------------------------------------------ signatures of simplicial complexes

def simplicial_chains(X: BallComplex) -> BasedComplex:
    """Chains of X; the label of a simplex c is (c,)."""
    return BasedComplex({(c,): X.dims[c] for c in X.cells},
                        {(c,): {(f,): x for f, x in X.bd.get(c, {}).items()} for c in X.cells})


def sig_of(X: BallComplex, xi: Mapping, N: int = 3) -> SymmetricComplex:
    """The symmetric signature (C(X), phi_s = (-1)^{ns} Delta_s(xi)) of a
    simplicial complex with an n-cycle xi."""
    if not xi:
        raise SymmetricError("the cycle is zero")
    dims = {X.dims[c] for c in xi}
    if len(dims) != 1:
        raise SymmetricError("xi is not homogeneous")
    n = dims.pop()
    bd: dict = {}
    for c, x in xi.items():
        for f, y in X.bd.get(c, {}).items():
            bd[f] = bd.get(f, 0) + x * y
    if any(bd.values()):
        raise SymmetricError("xi is not a cycle")
    return _aw_complex(X, xi, n, N)


def _aw_complex(X: BallComplex, chain: Mapping, n: int, N: int) -> SymmetricComplex:
    C = simplicial_chains(X)
    phi = []
    for s in range(N + 1):
        e = -1 if (n * s) % 2 else 1
        phi.append({((a,), (b,)): e * c for (a, b), c in extended_aw(dict(chain), s).items()})
    return SymmetricComplex(C, n, tuple(phi))


def fundamental_cycle(X: BallComplex, orientation: Mapping | None = None) -> dict:
    if orientation is None:
        orientation = coherent_orientation(X)
    return {c: s for c, s in orientation.items()}


# ------------------------------------------------------------------ duality

def upsilon(S: SymmetricComplex, boundary: frozenset = frozenset(),
            splitting: tuple[int, int] = (1, 0)) -> GradedChainMap:
    """Upsilon: Hom(C, Z) -> C / C_boundary, from the image of the splitting
    a e_0 + b T e_0 of the augmentation (a + b = 1)."""
    a0, b0 = splitting
    if a0 + b0 != 1:
        raise SymmetricError("splitting must be a right inverse of the augmentation")
    C = S.C
    full, pos = C.chain_complex()
    quot, qpos = C.chain_complex(boundary)
    dual = hom_dual(full)
    p0 = S.phi_s(0)
    t = t_add(t_scale(p0, a0), t_scale(t_T(p0, C), b0))
    maps: dict = {}
    for (a, b), c in t.items():
        if a in boundary:
            continue
        q = C.degree[b]
        src = -q
        M = maps.get(src)
        if M is None:
            M = maps[src] = zl.zeros(quot.rank(S.n - q), dual.rank(src))
        M[qpos[a]][pos[b]] += c if q % 2 == 0 else -c
    return GradedChainMap(dual, quot, S.n, maps)


def is_poincare(S: SymmetricComplex, boundary: frozenset = frozenset()) -> bool:
    f = upsilon(S, boundary)
    if not f.src.ranks and not f.tgt.ranks:
        return True
    return is_quasi_isomorphism(f)


def upsilon_homology_difference(S: SymmetricComplex, boundary: frozenset, s1: tuple, s2: tuple) -> bool:
    """Whether the two splittings give Upsilons agreeing on cohomology: the
    difference sends every cocycle to a boundary."""
    f, g = upsilon(S, boundary, s1), upsilon(S, boundary, s2)
    src, tgt = f.src, f.tgt
    for n in src.ranks:
        Z = zl.kernel(src.d[n], src.rank(n)) if n in src.d else [
            [int(i == j) for i in range(src.rank(n))] for j in range(src.rank(n))]
        m = n + S.n
        B = tgt.d.get(m + 1)
        for z in Z:
            diff = [x - y for x, y in zip(f.apply(n, z), g.apply(n, z))]
            if any(diff) and (B is None or zl.solve(B, diff, tgt.rank(m + 1)) is None):
                return False
    return True


# ------------------------------------------------------------------ signature

def signature(S: SymmetricComplex, check: bool = True) -> int:
    """Signature of the form (x, y) -> <x (x) y, phi_0> on the middle
    cohomology of a Poincare complex of dimension 4m."""
    if S.n % 4:
        raise SymmetricError("signature needs dimension divisible by 4")
    if check and not is_poincare(S):
        raise SymmetricError("complex is not Poincare")
    G = middle_form(S)
    return zl.sylvester_signature(G) if G else 0


def middle_form(S: SymmetricComplex) -> list[list[int]]:
    """Gram matrix of the phi_0 pairing on a basis of middle cocycles."""
    q = S.n // 2
    full, pos = S.C.chain_complex()
    dual = hom_dual(full)
    r = full.rank(q)
    if not r:
        return []
    Z = zl.kernel(dual.d[-q], r) if -q in dual.d else [[int(i == j) for i in range(r)] for j in range(r)]
    pairs = [(pos[a], pos[b], c) for (a, b), c in S.phi_s(0).items()
             if S.C.degree[a] == q and S.C.degree[b] == q]
    G = [[0] * len(Z) for _ in Z]
    for i, x in enumerate(Z):
        for j, y in enumerate(Z):
            G[i][j] = sum(c * x[a] * y[b] for a, b, c in pairs)
    if any(G[i][j] != G[j][i] for i in range(len(G)) for j in range(len(G))):
        raise SymmetricError("middle form is not symmetric")
    return G


def cup_signature_oracle(X: BallComplex, orientation: Mapping) -> int:
    """Signature of the cup-product form on H^{2m}(X; Q), 4m = dim X, from
    the front/back-face cup product evaluated on the oriented facets."""
    import numpy as np
    import sympy

    n = X.dim
    if n % 4:
        raise SymmetricError("cup form needs dimension divisible by 4")
    q = n // 2
    sq = list(X.cells_of_dim(q))
    up = list(X.cells_of_dim(q + 1))
    spos = {c: i for i, c in enumerate(sq)}
    delta = sympy.zeros(len(up), len(sq))
    for i, c in enumerate(up):
        for f, x in X.bd[c].items():
            delta[i, spos[f]] = x
    Z = delta.nullspace()
    if not Z:
        return 0
    Zm = np.array([[float(v) for v in z] for z in Z])
    G = np.zeros((len(Z), len(Z)))
    for c, e in orientation.items():
        front, back = spos[c[: q + 1]], spos[c[q:]]
        G += e * np.outer(Zm[:, front], Zm[:, back])
    G = (G + G.T) / 2
    ev = np.linalg.eigvalsh(G)
    tol = 1e-8 * max(1.0, float(np.abs(ev).max()))
    return int((ev > tol).sum() - (ev < -tol).sum())


# ------------------------------------------------------------------ quadratic complexes

@dataclass(frozen=True, eq=False)
class QuadraticComplex:
    """(C, psi) with psi_s in (C (x) C)_{n-s}."""

    C: BasedComplex
    n: int
    psi: tuple

    def __post_init__(self):
        for s, p in enumerate(self.psi):
            for (a, b) in p:
                if self.C.degree[a] + self.C.degree[b] != self.n - s:
                    raise SymmetricError(f"psi_{s} has a term of the wrong degree")

    def involute(self) -> "QuadraticComplex":
        return QuadraticComplex(self.C, self.n, tuple(t_scale(p, -1) for p in self.psi))


def norm(Q: QuadraticComplex, N: int = 3) -> SymmetricComplex:
    """The symmetrization: phi_0 = (1 + T) psi_0, phi_s = 0 for s > 0."""
    p0 = Q.psi[0] if Q.psi else {}
    return SymmetricComplex(Q.C, Q.n, (t_N(p0, Q.C, 0),) + tuple({} for _ in range(N)))


def is_quadratic_poincare(Q: QuadraticComplex, N: int = 3) -> bool:
    S = norm(Q, N)
    return S.is_symmetric and is_poincare(S)


# ------------------------------------------------------------------ the ad theory

class SymmetricTheory(AdTheory):
    """ad^Z: values are based symmetric complexes."""

    def __init__(self, N: int = 3):
        self.N = N
        self.name = "sym"

    def __repr__(self):
        return f"SymmetricTheory(N={self.N})"

    # -- target category
    def involute_value(self, v: SymmetricComplex):
        return v.involute()

    def empty_value(self, dim: int):
        return empty_complex(dim, self.N)

    def is_empty(self, v) -> bool:
        return v.is_empty

    def values_equal(self, a, b) -> bool:
        """Equality after identifying C (x) Z with C at either cylinder end."""
        return a.same(b) or _strip_end(a).same(_strip_end(b))

    def value_to_json(self, v):
        return v.to_json()

    def value_from_json(self, x, dim: int):
        S = SymmetricComplex.from_json(x, self.N)
        if S.n != dim:
            raise AdError(f"value has dimension {S.n}, expected {dim}")
        return S

    # -- ads
    def cell_defects(self, F: PreAd, c) -> list[str]:
        K, k = F.K, F.degree
        V = F.value(c)
        m = K.dims[c] - k
        out = []
        if V.n != m:
            return [f"{c!r}: value has dimension {V.n}, expected {m}"]
        if not V.C.check():
            return [f"{c!r}: d^2 != 0"]
        faces = K.proper_faces(c)
        bl: set = set()
        for t in faces:
            W = F.value(t)
            if not V.C.contains(W.C):
                return [f"{c!r}: value of {t!r} is not a based subcomplex"]
            bl |= set(W.C.degree)
        # closed
        e = -1 if m % 2 else 1
        ek = -1 if k % 2 else 1
        for s in range(self.N + 1):
            lhs = t_d(V.phi_s(s), V.C)
            if s:
                lhs = t_add(lhs, t_N(V.phi_s(s - 1), V.C, s), -e)
            for t, x in K.bd.get(c, {}).items():
                lhs = t_add(lhs, F.value(t).phi_s(s), -ek * x)
            if lhs:
                out.append(f"{c!r}: not closed at s={s}")
                break
        if out:
            return out
        if V.is_empty:
            return out
        if not is_poincare(V, frozenset(bl)):
            out.append(f"{c!r}: Upsilon is not a quasi-isomorphism")
        return out

    def glue(self, R: Refinement, F: PreAd, L: Iterable = ()) -> PreAd:
        return glue_symmetric(R, F, L)

    def cylinder(self, F: PreAd) -> PreAd:
        return cylinder_symmetric(F)

    # -- harness hooks
    def sample_ads(self, K, L, k, rng, count):
        out = [self.trivial(K, L, k)]
        if L:
            return out
        base = tautological_ad(self, K)
        if base is None:
            return out
        shift = -k
        if shift < 0:
            return out
        if shift:
            base = tensor_ads(base, point_ad(self, _sphere(shift)))
        out += [base, self.involute(base)]
        return out

    def isomorphic_copy(self, F, rng):
        """Rename every label atom by a random injective map."""
        atoms = set()
        for v in F.values.values():
            for a in v.C.degree:
                atoms.update(a)
        atoms = sorted(atoms, key=sort_key)
        tags = list(range(len(atoms)))
        rng.shuffle(tags)
        ren = {a: ("iso", t, a) for a, t in zip(atoms, tags)}
        f = lambda lab: tuple(ren[x] for x in lab)
        return F.rebuild(F.K, F.L, F.degree, {c: v.relabel(f) for c, v in F.values.items()})

    def perturb(self, F, rng):
        cells = [c for c in F.K.cells if c not in F.L and not F.values[c].is_empty]
        if not cells:
            return None
        c = rng.choice(cells)
        vals = dict(F.values)
        v = vals[c]
        vals[c] = SymmetricComplex(v.C, v.n, (t_scale(v.phi_s(0), 2),) + tuple(v.phi[1:]))
        G = F.rebuild(F.K, F.L, F.degree, vals)
        return None if G.is_ad() else G


def _strip_end(v: SymmetricComplex) -> SymmetricComplex:
    """Drop the trailing @1 atom while every label carries one; this undoes
    the identification C (x) Z[@1] = C at the 1-end of a cylinder."""
    while v.C.degree and all(a and a[-1] == ONE for a in v.C.degree):
        v = v.relabel(lambda a: a[:-1])
    return v


@lru_cache(maxsize=None)
def _sphere(n: int) -> BallComplex:
    from .complex_core import boundary_simplex
    return boundary_simplex(n + 1)


def point_ad(T: SymmetricTheory, X: BallComplex, xi: Mapping | None = None) -> PreAd:
    """The symmetric *-ad of degree -n of an n-cycle on X."""
    if xi is None:
        xi = fundamental_cycle(X)
    S = sig_of(X, xi, T.N)
    return PreAd(T, point(), frozenset(), -S.n, {(): S})


def unit_ad(T: SymmetricTheory) -> PreAd:
    return PreAd(T, point(), frozenset(), 0, {(): unit_complex(T.N)})


def interval_ad(T: SymmetricTheory) -> PreAd:
    """The I-ad G: the unit at 0, its copy labelled @1 at 1, and the
    signature of the 1-simplex on I."""
    I = interval()
    D1 = simplex(1)
    base = _aw_complex(D1, {(0, 1): 1}, 1, T.N)
    ren = {((0,),): (), ((1,),): (ONE,), ((0, 1),): (EDGE,)}
    GI = base.relabel(lambda a: ren[a])
    G1 = SymmetricComplex(GI.C.restrict([(ONE,)]), 0,
                          ({((ONE,), (ONE,)): 1},) + tuple({} for _ in range(T.N)))
    return PreAd(T, I, frozenset(), 0, {"0": unit_complex(T.N), "1": G1, "I": GI})


def tautological_ad(T: SymmetricTheory, K: BallComplex) -> PreAd | None:
    """sigma -> sig(closure of sigma, sigma) on a simplicial complex, and
    products of these (with the interval ad on I factors)."""
    if K.factors:
        parts = []
        for A in K.factors:
            P = tautological_ad(T, A)
            if P is None:
                return None
            parts.append(P)
        out = parts[0]
        for P in parts[1:]:
            out = tensor_ads(out, P)
        return out
    if K == interval():
        return interval_ad(T)
    if K == point():
        return unit_ad(T)
    if not _is_vertex_simplicial(K):
        return None
    vals = {}
    for c in K.cells:
        X = K.restrict(K.cell_closure(c))
        vals[c] = _aw_complex(X, {c: 1}, K.dims[c], T.N)
    return PreAd(T, K, frozenset(), 0, vals)


def _is_vertex_simplicial(K: BallComplex) -> bool:
    if not K.cells or not K.is_simplicial():
        return False
    for c in K.cells:
        if not isinstance(c, tuple) or len(c) != K.dims[c] + 1:
            return False
        if len(c) > 1 and K.bd[c] != {c[:i] + c[i + 1:]: (-1) ** i for i in range(len(c))}:
            return False
    return True


def tensor_ads(F1: PreAd, F2: PreAd) -> PreAd:
    """F1 (x) F2 on K1 x K2: (sigma x tau) -> i^{k2 dim sigma} F1(sigma) (x) F2(tau)."""
    T = F1.theory
    K1, K2 = F1.K, F2.K
    P = product(K1, K2)
    L = set()
    for c in P.cells:
        s, t = split_product_cell(c, (K1, K2))
        if s in F1.L or t in F2.L:
            L.add(c)
    k2 = F2.degree
    vals = {}
    for c in P.cells:
        if c in L:
            continue
        s, t = split_product_cell(c, (K1, K2))
        V = tensor_complexes(F1.value(s), F2.value(t), T.N)
        if (k2 * K1.dims[s]) % 2:
            V = V.involute()
        vals[c] = V
    return PreAd(T, P, frozenset(L), F1.degree + k2, vals)


def cylinder_symmetric(F: PreAd) -> PreAd:
    """J(F) = F (x) G on K x I."""
    J = tensor_ads(F, interval_ad(F.theory))
    P, LI = cylinder_complex(F.K, F.L)
    if J.K != P or J.L != LI:
        raise SymmetricError("cylinder landed on the wrong pair")
    return J


def glue_symmetric(R: Refinement, F: PreAd, L: Iterable = ()) -> PreAd:
    """Based gluing: D_tau is the union of the C_sigma over the fine cells
    in tau, and phi_tau the signed sum over the pieces of tau."""
    T = F.theory
    L = frozenset(L)
    if F.K != R.fine:
        raise AdError("pre-ad is not defined on the fine complex")
    k = F.degree
    vals = {}
    for s in R.coarse.cells:
        if s in L:
            continue
        n = R.coarse.dims[s] - k
        inside = R.fine_cells_in(s)
        D = union(F.value(c).C for c in inside)
        phi = [dict() for _ in range(T.N + 1)]
        for c, e in R.pieces(s):
            v = F.value(c)
            for j in range(T.N + 1):
                phi[j] = t_add(phi[j], v.phi_s(j), e)
        vals[s] = SymmetricComplex(D, n, tuple(phi))
    return PreAd(T, R.coarse, L, k, vals)


def is_symmetric_ad(F: PreAd) -> tuple[bool, list[str]]:
    d = F.theory.defects(F)
    return not d, d


def box_product_sym(F: PreAd, G: PreAd) -> PreAd:
    return tensor_ads(F, G)
