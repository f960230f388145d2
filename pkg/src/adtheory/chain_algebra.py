"""Exact homological algebra over the integers.

Conventions used everywhere in the package:

* ``d[n]`` is the matrix of ``C_n -> C_{n-1}``; columns index the basis of
  ``C_n``.
* A graded map ``f`` of degree ``k`` (raising degree by ``k``) is a chain map
  when ``d f = (-1)^k f d`` (Koszul).
* ``d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy`` and the transposition on a
  tensor square is ``T(x (x) y) = (-1)^{|x||y|} y (x) x``.
* ``W`` is the standard free resolution of ``Z`` over ``Z[Z/2]``, with
  ``d e_s = e_{s-1} + (-1)^s T e_{s-1}``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from . import _zlinalg as zl


class ChainComplexError(ValueError):
    """Raised for malformed complexes or maps (for example d^2 != 0)."""


# ------------------------------------------------------------------ complexes

@dataclass(frozen=True, eq=False)
class IntegerChainComplex:
    """A finitely generated free chain complex over Z.

    ``ranks`` maps degree to rank; ``d`` maps degree ``n`` to the matrix of
    ``d_n`` with shape ``(rank n-1, rank n)``.  ``basis`` optionally names
    the basis elements of each degree.
    """

    ranks: Mapping[int, int]
    d: Mapping[int, list] = field(default_factory=dict)
    basis: Mapping[int, tuple] | None = None

    def __post_init__(self):
        ranks = {int(k): int(v) for k, v in self.ranks.items() if v}
        object.__setattr__(self, "ranks", ranks)
        dd = {}
        for n, M in self.d.items():
            n = int(n)
            r0, r1 = ranks.get(n - 1, 0), ranks.get(n, 0)
            if r0 == 0 or r1 == 0:
                if any(x for row in M for x in row):
                    raise ChainComplexError(f"nonzero d_{n} between zero modules")
                continue
            if len(M) != r0 or any(len(row) != r1 for row in M):
                raise ChainComplexError(f"d_{n} has wrong shape, expected {r0}x{r1}")
            if any(x for row in M for x in row):
                dd[n] = [list(map(int, row)) for row in M]
        object.__setattr__(self, "d", dd)
        if self.basis is not None:
            b = {int(k): tuple(v) for k, v in self.basis.items() if ranks.get(int(k), 0)}
            for k, r in ranks.items():
                if len(b.get(k, ())) != r:
                    raise ChainComplexError(f"basis of degree {k} has wrong length")
            object.__setattr__(self, "basis", b)

    # -- access
    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def diff(self, n: int) -> list:
        """d_n as a (possibly zero) dense matrix."""
        M = self.d.get(n)
        if M is not None:
            return M
        return zl.zeros(self.rank(n - 1), self.rank(n))

    @property
    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def degree_range(self) -> range:
        if not self.ranks:
            return range(0)
        return range(min(self.ranks), max(self.ranks) + 1)

    def check(self) -> None:
        for n in self.d:
            if n - 1 in self.d:
                if not zl.is_zero(zl.matmul(self.d[n - 1], self.d[n])):
                    raise ChainComplexError(f"d_{n-1} d_{n} != 0")

    def is_valid(self) -> bool:
        try:
            self.check()
        except ChainComplexError:
            return False
        return True

    def boundary_of(self, n: int, v: list[int]) -> list[int]:
        if n not in self.d:
            return [0] * self.rank(n - 1)
        return zl.matvec(self.d[n], v)

    def shift(self, k: int) -> "IntegerChainComplex":
        """The complex with C'_m = C_{m-k} and d' = (-1)^k d."""
        s = -1 if k % 2 else 1
        return IntegerChainComplex(
            {n + k: r for n, r in self.ranks.items()},
            {n + k: [[s * x for x in row] for row in M] for n, M in self.d.items()},
            None if self.basis is None else {n + k: b for n, b in self.basis.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, IntegerChainComplex):
            return NotImplemented
        return self.ranks == other.ranks and self.d == other.d

    def __hash__(self):
        return hash(tuple(sorted(self.ranks.items())))

    def __repr__(self):
        return f"IntegerChainComplex(ranks={dict(sorted(self.ranks.items()))})"

    # -- serialization
    def to_json(self) -> dict:
        return {
            "format": 1,
            "ranks": {str(k): v for k, v in sorted(self.ranks.items())},
            "d": {str(k): M for k, M in sorted(self.d.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntegerChainComplex":
        if not isinstance(obj, dict):
            raise ChainComplexError("chain complex must be a JSON object")
        extra = set(obj) - {"format", "ranks", "d"}
        if extra:
            raise ChainComplexError(f"unknown fields: {sorted(extra)}")
        if obj.get("format", 1) != 1:
            raise ChainComplexError("unsupported format version")
        try:
            ranks = {int(k): int(v) for k, v in obj["ranks"].items()}
            d = {int(k): [[int(x) for x in row] for row in M] for k, M in obj.get("d", {}).items()}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ChainComplexError(f"malformed chain complex: {exc}") from None
        if any(r < 0 for r in ranks.values()):
            raise ChainComplexError("negative rank")
        C = cls(ranks, d)
        C.check()
        return C


def zero_complex() -> IntegerChainComplex:
    return IntegerChainComplex({})


def unit_complex(degree: int = 0) -> IntegerChainComplex:
    """Z concentrated in one degree."""
    return IntegerChainComplex({degree: 1})


# ------------------------------------------------------------------ homology

@dataclass(frozen=True)
class HomologyGroup:
    betti: int = 0
    torsion: tuple = ()

    @property
    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return "+".join(parts) if parts else "0"


def smith_homology(C: IntegerChainComplex, degrees: Iterable[int] | None = None) -> dict[int, HomologyGroup]:
    """H_n(C) for every degree where C is nonzero (or the given degrees)."""
    C.check()
    degs = sorted(set(C.ranks) if degrees is None else set(degrees))
    divs: dict[int, list[int]] = {}

    def ed(n):
        if n not in divs:
            divs[n] = zl.elementary_divisors(C.d[n]) if n in C.d else []
        return divs[n]

    out = {}
    for n in degs:
        r = C.rank(n)
        out_n = ed(n)
        in_n = ed(n + 1)
        betti = r - len(out_n) - len(in_n)
        out[n] = HomologyGroup(betti, tuple(x for x in in_n if x > 1))
    return out


def homology_string(H: Mapping[int, HomologyGroup]) -> str:
    parts = [f"H{n}={g}" for n, g in sorted(H.items()) if not g.is_zero]
    return " ".join(parts) if parts else "0"


def is_acyclic(C: IntegerChainComplex) -> bool:
    return all(g.is_zero for g in smith_homology(C).values())


def cycles_basis(C: IntegerChainComplex, n: int) -> list[list[int]]:
    return zl.kernel(C.diff(n), C.rank(n)) if C.rank(n) else []


def boundaries_gens(C: IntegerChainComplex, n: int) -> list[list[int]]:
    if n + 1 not in C.d:
        return []
    return [c for c in zl.columns(C.d[n + 1]) if any(c)]


def is_boundary(C: IntegerChainComplex, n: int, v: list[int]) -> bool:
    if not any(v):
        return True
    if n + 1 not in C.d:
        return False
    return zl.solve(C.d[n + 1], v, C.rank(n + 1)) is not None


def is_cycle(C: IntegerChainComplex, n: int, v: list[int]) -> bool:
    return not any(C.boundary_of(n, v))


# ------------------------------------------------------------------ maps

@dataclass(frozen=True, eq=False)
class GradedChainMap:
    """A map raising degree by ``degree``: ``maps[n]`` sends src_n to
    tgt_{n+degree}."""

    src: IntegerChainComplex
    tgt: IntegerChainComplex
    degree: int
    maps: Mapping[int, list]

    def __post_init__(self):
        clean = {}
        for n, M in self.maps.items():
            r_src, r_tgt = self.src.rank(n), self.tgt.rank(n + self.degree)
            if r_src == 0 or r_tgt == 0:
                continue
            if len(M) != r_tgt or any(len(row) != r_src for row in M):
                raise ChainComplexError(f"map component {n} has wrong shape")
            clean[n] = M
        object.__setattr__(self, "maps", clean)

    def component(self, n: int) -> list:
        M = self.maps.get(n)
        return M if M is not None else zl.zeros(self.tgt.rank(n + self.degree), self.src.rank(n))

    @property
    def is_chain_map(self) -> bool:
        sign = -1 if self.degree % 2 else 1
        for n in set(self.src.ranks) | {m + 1 for m in self.src.ranks}:
            if not self.src.rank(n) or not self.tgt.rank(n + self.degree - 1):
                continue
            lhs = zl.matmul(self.tgt.diff(n + self.degree), self.component(n),
                            self.tgt.rank(n + self.degree), self.src.rank(n))
            rhs = zl.matmul(self.component(n - 1), self.src.diff(n),
                            self.src.rank(n - 1), self.src.rank(n))
            if any(a != sign * b for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                return False
        return True

    def apply(self, n: int, v: list[int]) -> list[int]:
        if n not in self.maps:
            return [0] * self.tgt.rank(n + self.degree)
        return zl.matvec(self.maps[n], v)


def identity_map(C: IntegerChainComplex) -> GradedChainMap:
    return GradedChainMap(C, C, 0, {n: zl.identity(r) for n, r in C.ranks.items()})


def mapping_cone(f: GradedChainMap) -> IntegerChainComplex:
    """Cone of a degree-0 chain map: Cone_n = src_{n-1} + tgt_n with
    d(x, y) = (-dx, fx + dy)."""
    if f.degree != 0:
        raise ChainComplexError("mapping_cone expects a degree-0 map; shift first")
    if not f.is_chain_map:
        raise ChainComplexError("not a chain map")
    A, B = f.src, f.tgt
    degs = {n + 1 for n in A.ranks} | set(B.ranks)
    ranks = {n: A.rank(n - 1) + B.rank(n) for n in degs}
    d = {}
    for n in degs:
        if not ranks.get(n - 1):
            continue
        a1, b1 = A.rank(n - 1), B.rank(n)
        a2, b2 = A.rank(n - 2), B.rank(n - 1)
        M = zl.zeros(a2 + b2, a1 + b1)
        if n - 1 in A.d:
            for i, row in enumerate(A.d[n - 1]):
                for j, x in enumerate(row):
                    if x:
                        M[i][j] = -x
        if n - 1 in f.maps:
            for i, row in enumerate(f.maps[n - 1]):
                for j, x in enumerate(row):
                    if x:
                        M[a2 + i][j] = x
        if n in B.d:
            for i, row in enumerate(B.d[n]):
                for j, x in enumerate(row):
                    if x:
                        M[a2 + i][a1 + j] = x
        d[n] = M
    return IntegerChainComplex(ranks, d)


def quasi_iso_sign(f: GradedChainMap) -> int:
    """Return +1 if f is a chain map, -1 if it anticommutes in the sense
    that the degreewise twist (-1)^n f_n is a chain map, 0 otherwise."""
    if f.is_chain_map:
        return 1
    g = GradedChainMap(f.src, f.tgt, f.degree,
                       {n: [[-x for x in r] for r in M] if n % 2 else M for n, M in f.maps.items()})
    return -1 if g.is_chain_map else 0


def is_quasi_isomorphism(f: GradedChainMap) -> bool:
    """Whether f induces an isomorphism on homology (via an acyclic cone).

    Maps of nonzero degree are handled by regrading the source; a map that
    commutes with differentials only up to the alternating twist is accepted
    after applying the twist, since that does not change the homology maps
    up to sign."""
    sign = quasi_iso_sign(f)
    if sign == 0:
        raise ChainComplexError("not a chain map, even up to sign")
    maps = dict(f.maps)
    if sign == -1:
        maps = {n: [[-x for x in r] for r in M] if n % 2 else M for n, M in maps.items()}
    src = f.src.shift(f.degree) if f.degree else f.src
    g = GradedChainMap(src, f.tgt, 0, {n + f.degree: M for n, M in maps.items()})
    return is_acyclic(mapping_cone(g))


# ------------------------------------------------------------------ dual / tensor / hom

def hom_dual(C: IntegerChainComplex) -> IntegerChainComplex:
    """D_{-q} = Hom(C_q, Z) with differential -(-1)^q d_{q+1}^T."""
    ranks = {-q: r for q, r in C.ranks.items()}
    d = {}
    for q in C.ranks:
        if q + 1 in C.d:
            s = 1 if q % 2 else -1
            d[-q] = [[s * x for x in row] for row in zl.transpose(C.d[q + 1])]
    basis = None if C.basis is None else {-q: b for q, b in C.basis.items()}
    return IntegerChainComplex(ranks, d, basis)


def tensor_index(C: IntegerChainComplex, D: IntegerChainComplex) -> dict[int, list[tuple]]:
    """Basis of (C (x) D)_n as (p, i, q, j), lexicographically ordered."""
    out: dict[int, list[tuple]] = {}
    for p in sorted(C.ranks):
        for q in sorted(D.ranks):
            for i in range(C.rank(p)):
                for j in range(D.rank(q)):
                    out.setdefault(p + q, []).append((p, i, q, j))
    for n in out:
        out[n].sort()
    return out


def tensor(C: IntegerChainComplex, D: IntegerChainComplex) -> IntegerChainComplex:
    """C (x) D with the Koszul-signed differential."""
    idx = tensor_index(C, D)
    pos = {n: {b: k for k, b in enumerate(bs)} for n, bs in idx.items()}
    ranks = {n: len(bs) for n, bs in idx.items()}
    d = {}
    for n, bs in idx.items():
        if n - 1 not in idx:
            continue
        M = zl.zeros(ranks[n - 1], ranks[n])
        P = pos[n - 1]
        for col, (p, i, q, j) in enumerate(bs):
            if p in C.d:
                for a in range(C.rank(p - 1)):
                    x = C.d[p][a][i]
                    if x:
                        M[P[(p - 1, a, q, j)]][col] += x
            if q in D.d:
                s = -1 if p % 2 else 1
                for b in range(D.rank(q - 1)):
                    x = D.d[q][b][j]
                    if x:
                        M[P[(p, i, q - 1, b)]][col] += s * x
        d[n] = M
    return IntegerChainComplex(ranks, d)


def hom_index(C: IntegerChainComplex, E: IntegerChainComplex) -> dict[int, list[tuple]]:
    """Basis of Hom(C, E)_n as (q, i, j): the map e_i in C_q to e_j in
    E_{q+n}."""
    out: dict[int, list[tuple]] = {}
    for q in sorted(C.ranks):
        for m in sorted(E.ranks):
            for i in range(C.rank(q)):
                for j in range(E.rank(m)):
                    out.setdefault(m - q, []).append((q, i, j))
    for n in out:
        out[n].sort()
    return out


def hom_complex(C: IntegerChainComplex, E: IntegerChainComplex):
    """The total complex Hom(C, E) with D f = d f - (-1)^n f d; returns the
    complex together with its basis index."""
    idx = hom_index(C, E)
    pos = {n: {b: k for k, b in enumerate(bs)} for n, bs in idx.items()}
    ranks = {n: len(bs) for n, bs in idx.items()}
    # column-sparse views
    dE = {m: _col_nz(M) for m, M in E.d.items()}
    dCrows = {q: _row_nz(M) for q, M in C.d.items()}
    d = {}
    for n, bs in idx.items():
        if n - 1 not in idx:
            continue
        M = zl.zeros(ranks[n - 1], ranks[n])
        P = pos[n - 1]
        s = 1 if n % 2 else -1  # -(-1)^n
        for col, (q, i, j) in enumerate(bs):
            m = q + n
            for jj, x in dE.get(m, {}).get(j, ()):
                M[P[(q, i, jj)]][col] += x
            # (f d)(e_i') for e_i' in C_{q+1}: coefficient d_C[q+1][i][i']
            for ii, x in dCrows.get(q + 1, {}).get(i, ()):
                M[P[(q + 1, ii, j)]][col] += s * x
        d[n] = M
    return IntegerChainComplex(ranks, d), idx


def _col_nz(M):
    out: dict[int, list] = {}
    for r, row in enumerate(M):
        for c, x in enumerate(row):
            if x:
                out.setdefault(c, []).append((r, x))
    return out


def _row_nz(M):
    return {r: [(c, x) for c, x in enumerate(row) if x] for r, row in enumerate(M)}


# ------------------------------------------------------------------ cellular chains

def cellular_chains(K, L: Iterable = ()) -> IntegerChainComplex:
    """Relative cellular chains cl(K)/cl(L) on the reference-oriented cells
    of K not in L; basis labels are the cell ids."""
    Lset = frozenset(L)
    for c in Lset:
        if c not in K.dims:
            raise ChainComplexError(f"{c!r} is not a cell of K")
        if any(f not in Lset for f in K.bd.get(c, {})):
            raise ChainComplexError("L is not a subcomplex")
    basis: dict[int, list] = {}
    for c in K.cells:
        if c not in Lset:
            basis.setdefault(K.dims[c], []).append(c)
    pos = {n: {c: i for i, c in enumerate(bs)} for n, bs in basis.items()}
    d = {}
    for n, bs in basis.items():
        if n - 1 not in basis:
            continue
        M = zl.zeros(len(basis[n - 1]), len(bs))
        P = pos[n - 1]
        for j, c in enumerate(bs):
            for f, x in K.bd.get(c, {}).items():
                if f in P:
                    M[P[f]][j] = x
        d[n] = M
    return IntegerChainComplex({n: len(b) for n, b in basis.items()}, d,
                               {n: tuple(b) for n, b in basis.items()})


# ------------------------------------------------------------------ W, V, norm

@dataclass(frozen=True)
class EquivariantComplexW:
    """W truncated at N; each W_s has Z-basis (e_s, T e_s)."""

    N: int
    complex: IntegerChainComplex
    T: Mapping[int, list]

    def augmentation(self) -> list[int]:
        return [1, 1]


@lru_cache(maxsize=None)
def resolution_W(N: int) -> EquivariantComplexW:
    if N < 0:
        raise ValueError("N must be non-negative")
    ranks = {s: 2 for s in range(N + 1)}
    d = {}
    for s in range(1, N + 1):
        e = -1 if s % 2 else 1
        d[s] = [[1, e], [e, 1]]
    return EquivariantComplexW(N, IntegerChainComplex(ranks, d), {s: [[0, 1], [1, 0]] for s in range(N + 1)})


@dataclass(frozen=True)
class ComplexV:
    """V_{-n} = Hom_{Z/2}(W_n, Z[Z/2]), Z-basis (the functional e_n -> 1,
    the functional e_n -> T)."""

    N: int
    complex: IntegerChainComplex


@lru_cache(maxsize=None)
def complex_V(N: int) -> ComplexV:
    ranks = {-n: 2 for n in range(N + 1)}
    d = {}
    for n in range(N):
        # V_{-n} -> V_{-n-1}: -(-1)^n times the transpose of W's d_{n+1}
        e = 1 if n % 2 else -1
        sgn = -1 if n % 2 == 0 else 1
        d[-n] = [[sgn * 1, sgn * e], [sgn * e, sgn * 1]]
    return ComplexV(N, IntegerChainComplex(ranks, d))


@lru_cache(maxsize=None)
def norm_map(N: int) -> GradedChainMap:
    """W -> Z -> V: e_0 and T e_0 both go to the norm element 1 + T."""
    W, V = resolution_W(N).complex, complex_V(N).complex
    return GradedChainMap(W, V, 0, {0: [[1, 1], [1, 1]]})


# elements of W (x) W: {((i, g), (j, h)): coeff} meaning T^g e_i (x) T^h e_j

def _W_d(i: int, g: int):
    if i == 0:
        return []
    e = -1 if i % 2 else 1
    return [((i - 1, g), 1), ((i - 1, 1 - g), e)]


def _WW_d(elem: dict) -> dict:
    out: dict = {}
    for ((i, g), (j, h)), c in elem.items():
        for x, a in _W_d(i, g):
            k = (x, (j, h))
            out[k] = out.get(k, 0) + c * a
        s = -1 if i % 2 else 1
        for y, b in _W_d(j, h):
            k = ((i, g), y)
            out[k] = out.get(k, 0) + s * c * b
    return {k: v for k, v in out.items() if v}


def _WW_T(elem: dict) -> dict:
    return {((i, 1 - g), (j, 1 - h)): c for ((i, g), (j, h)), c in elem.items()}


def _add(a: dict, b: dict, s: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def diagonal_W(N: int) -> tuple:
    """Equivariant diagonal W -> W (x) W, as a tuple whose s-th entry is
    Delta(e_s); Delta(T e_s) is T applied diagonally."""
    out = [{((0, 0), (0, 0)): 1}]
    for s in range(1, N + 1):
        prev = out[-1]
        e = -1 if s % 2 else 1
        target = _add(prev, _WW_T(prev), e)
        found = None
        for signs in itertools.product((1, -1), repeat=s + 1):
            cand = {((i, 0), (s - i, i % 2)): signs[i] for i in range(s + 1)}
            if _WW_d(cand) == target:
                found = cand
                break
        if found is None:
            found = _solve_WW(s, target)
        out.append(found)
    return tuple(out)


def _solve_WW(s: int, target: dict) -> dict:
    basis = [((i, g), (s - i, h)) for i in range(s + 1) for g in (0, 1) for h in (0, 1)]
    rows = sorted({k for b in basis for k in _WW_d({b: 1})} | set(target))
    rpos = {k: r for r, k in enumerate(rows)}
    A = zl.zeros(len(rows), len(basis))
    for c, b in enumerate(basis):
        for k, v in _WW_d({b: 1}).items():
            A[rpos[k]][c] = v
    x = zl.solve(A, [target.get(k, 0) for k in rows], len(basis))
    if x is None:
        raise ChainComplexError("diagonal on W does not exist (convention error)")
    return {b: v for b, v in zip(basis, x) if v}


def check_diagonal_W(N: int) -> bool:
    D = diagonal_W(N)
    if D[0] != {((0, 0), (0, 0)): 1}:
        return False
    for s in range(1, N + 1):
        e = -1 if s % 2 else 1
        if _WW_d(D[s]) != _add(D[s - 1], _WW_T(D[s - 1]), e):
            return False
        # Delta(T e_s) := T Delta(e_s); equivariance of d then follows
        if _WW_d(_WW_T(D[s])) != _WW_T(_WW_d(D[s])):
            return False
    return True


# ------------------------------------------------------------------ simplicial tensors

# Simplicial chains: dict simplex(tuple of vertices, sorted by vertex rank)
# -> coeff.  Tensors: dict (simplex, simplex) -> coeff.

def simplex_boundary(sigma: tuple) -> list[tuple[tuple, int]]:
    if len(sigma) <= 1:
        return []
    return [(sigma[:i] + sigma[i + 1:], -1 if i % 2 else 1) for i in range(len(sigma))]


def chain_boundary(chain: Mapping) -> dict:
    out: dict = {}
    for s, c in chain.items():
        for f, e in simplex_boundary(s):
            out[f] = out.get(f, 0) + c * e
    return {k: v for k, v in out.items() if v}


def tensor_boundary(t: Mapping) -> dict:
    out: dict = {}
    for (a, b), c in t.items():
        for f, e in simplex_boundary(a):
            k = (f, b)
            out[k] = out.get(k, 0) + c * e
        s = -1 if (len(a) - 1) % 2 else 1
        for f, e in simplex_boundary(b):
            k = (a, f)
            out[k] = out.get(k, 0) + s * c * e
    return {k: v for k, v in out.items() if v}


def tensor_T(t: Mapping) -> dict:
    out = {}
    for (a, b), c in t.items():
        s = -1 if ((len(a) - 1) * (len(b) - 1)) % 2 else 1
        out[(b, a)] = out.get((b, a), 0) + s * c
    return {k: v for k, v in out.items() if v}


def _lin_add(a: dict, b: Mapping, s: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


def _faces_of_simplex(m: int) -> list[tuple]:
    verts = range(m + 1)
    return [c for r in range(1, m + 2) for c in itertools.combinations(verts, r)]


@lru_cache(maxsize=None)
def aw_model(m: int, s: int) -> tuple:
    """Delta_s of the top simplex of the standard m-simplex, as a sorted
    tuple of ((face, face), coeff).

    Delta_0 is the front-face/back-face diagonal.  For s >= 1 it is the
    solution (by acyclic models) of
    d Delta_s(i) = (-1)^s Delta_s(d i) + Delta_{s-1}(i) + (-1)^s T Delta_{s-1}(i),
    which makes d phi_s - (-1)^s phi_s d = phi_{s-1} + (-1)^s T phi_{s-1}."""
    top = tuple(range(m + 1))
    if s == 0:
        return tuple(sorted(((top[: i + 1], top[i:]), 1) for i in range(m + 1)))
    if s > m:
        return ()
    e = -1 if s % 2 else 1
    rhs = dict(_aw_apply(top, s - 1))
    rhs = _lin_add(rhs, tensor_T(rhs), e)
    rhs = _lin_add(rhs, _aw_apply_chain(chain_boundary({top: 1}), s), e)
    faces = _faces_of_simplex(m)
    deg = m + s
    basis = [(a, b) for a in faces for b in faces if len(a) + len(b) - 2 == deg]
    rows: dict = {}
    cols = []
    for b in basis:
        db = tensor_boundary({b: 1})
        cols.append(db)
        for k in db:
            rows.setdefault(k, len(rows))
    for k in rhs:
        if k not in rows:
            raise ChainComplexError("extended AW: right-hand side outside the image")
    A = zl.zeros(len(rows), len(basis))
    for c, db in enumerate(cols):
        for k, v in db.items():
            A[rows[k]][c] = v
    vec = [0] * len(rows)
    for k, v in rhs.items():
        vec[rows[k]] = v
    x = zl.solve(A, vec, len(basis))
    if x is None:
        raise ChainComplexError("extended AW: no integral solution")
    return tuple(sorted((basis[i], v) for i, v in enumerate(x) if v))


def _aw_apply(sigma: tuple, s: int) -> dict:
    """Delta_s on a simplex given by its ordered vertex tuple."""
    out: dict = {}
    for (a, b), c in aw_model(len(sigma) - 1, s):
        k = (tuple(sigma[i] for i in a), tuple(sigma[i] for i in b))
        out[k] = out.get(k, 0) + c
    return out


def _aw_apply_chain(chain: Mapping, s: int) -> dict:
    out: dict = {}
    for sigma, c in chain.items():
        for k, v in _aw_apply(sigma, s).items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def extended_aw(chain: Mapping | tuple, s: int) -> dict:
    """The degree-s higher diagonal on simplicial chains.  ``chain`` is a
    single ordered simplex or a dict simplex -> coefficient; simplices must
    list their vertices in increasing order of the ambient vertex order."""
    if s < 0:
        raise ValueError("s must be non-negative")
    if isinstance(chain, tuple):
        chain = {chain: 1}
    return _aw_apply_chain(chain, s)


def aw_ladder_defect(chain: Mapping, s: int) -> dict:
    """d phi_s(x) - (-1)^s phi_s(dx) - phi_{s-1}(x) - (-1)^s T phi_{s-1}(x);
    zero for all chains x when the ladder holds."""
    e = -1 if s % 2 else 1
    lhs = tensor_boundary(extended_aw(chain, s))
    lhs = _lin_add(lhs, extended_aw(chain_boundary(chain), s), -e)
    if s >= 1:
        prev = extended_aw(chain, s - 1)
        lhs = _lin_add(lhs, prev, -1)
        lhs = _lin_add(lhs, tensor_T(prev), -e)
    return lhs


def load_chain_complex(path: str) -> IntegerChainComplex:
    with open(path) as fh:
        return IntegerChainComplex.from_json(json.load(fh))
