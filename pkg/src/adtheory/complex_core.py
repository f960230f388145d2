"""Ball complexes as finite oriented face posets with integer incidences.

A :class:`BallComplex` stores, for every cell, its dimension and its
boundary as a formal integer combination of cells one dimension lower.
The reference orientation of each cell is the basis element itself; an
:class:`OrientedCell` pairs a cell with a sign.

Cell identifiers are ints, strings or (nested) tuples of those.  Simplicial
complexes use sorted vertex tuples; products use tuples of factor cells.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .chain_algebra import cellular_chains, smith_homology


class ComplexError(ValueError):
    """Malformed ball complex or invalid use of one."""


class NonOrientable(ComplexError):
    """No coherent orientation of the top cells exists."""


def sort_key(x):
    """Total order on cell ids: ints before strings before tuples."""
    if isinstance(x, bool):
        raise ComplexError("booleans are not cell ids")
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x))
    raise ComplexError(f"unsupported cell id {x!r}")


@dataclass(frozen=True)
class OrientedCell:
    cell: Hashable
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ComplexError("orientation sign must be +1 or -1")

    def __neg__(self):
        return OrientedCell(self.cell, -self.sign)


class BallComplex:
    """Immutable oriented face poset.

    Parameters
    ----------
    dims:
        cell id -> dimension.
    bd:
        cell id -> {face id: incidence}.  Missing entries mean empty boundary.
    labels:
        optional cell id -> text.
    vertex_rank:
        for simplicial complexes, vertex -> position in the vertex order.
    factors:
        atomic factors when the complex was built by :func:`product`.
    """

    __slots__ = ("dims", "bd", "labels", "vertex_rank", "factors", "cells", "__dict__")

    def __init__(self, dims: Mapping, bd: Mapping, labels: Mapping | None = None,
                 vertex_rank: Mapping | None = None, factors: tuple | None = None):
        self.dims = dict(dims)
        self.bd = {c: {f: int(x) for f, x in faces.items() if x} for c, faces in bd.items()}
        self.bd = {c: f for c, f in self.bd.items() if f}
        self.labels = dict(labels or {})
        self.vertex_rank = dict(vertex_rank) if vertex_rank is not None else None
        self.factors = factors
        for c, faces in self.bd.items():
            if c not in self.dims:
                raise ComplexError(f"boundary given for unknown cell {c!r}")
            for f in faces:
                if f not in self.dims:
                    raise ComplexError(f"face {f!r} of {c!r} is not a cell")
                if self.dims[f] != self.dims[c] - 1:
                    raise ComplexError(f"face {f!r} of {c!r} has the wrong dimension")
        self.cells = tuple(sorted(self.dims, key=lambda c: (self.dims[c], sort_key(c))))

    # -- basic queries
    def __contains__(self, c):
        return c in self.dims

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.cells)

    def __repr__(self):
        counts = [len(self.cells_of_dim(n)) for n in range(self.dim + 1)]
        return f"BallComplex(f-vector={counts})"

    def __eq__(self, other):
        if not isinstance(other, BallComplex):
            return NotImplemented
        return self.dims == other.dims and self.bd == other.bd

    def __hash__(self):
        return hash((len(self.dims), self.cells[:3]))

    @property
    def dim(self) -> int:
        return max(self.dims.values(), default=-1)

    def cells_of_dim(self, n: int) -> tuple:
        return self._by_dim.get(n, ())

    @cached_property
    def _by_dim(self):
        out: dict[int, list] = {}
        for c in self.cells:
            out.setdefault(self.dims[c], []).append(c)
        return {n: tuple(v) for n, v in out.items()}

    def f_vector(self) -> tuple:
        return tuple(len(self.cells_of_dim(n)) for n in range(self.dim + 1))

    def boundary(self, c) -> dict:
        return self.bd.get(c, {})

    @cached_property
    def cofaces(self) -> dict:
        out: dict = {c: {} for c in self.cells}
        for c, faces in self.bd.items():
            for f, x in faces.items():
                out[f][c] = x
        return out

    def incidence(self, c, f) -> int:
        return self.bd.get(c, {}).get(f, 0)

    def closure(self, cells: Iterable) -> frozenset:
        seen = set()
        stack = list(cells)
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            if c not in self.dims:
                raise ComplexError(f"unknown cell {c!r}")
            seen.add(c)
            stack.extend(self.bd.get(c, ()))
        return frozenset(seen)

    @lru_cache(maxsize=None)
    def cell_closure(self, c) -> frozenset:
        return self.closure([c])

    def proper_faces(self, c) -> frozenset:
        return self.cell_closure(c) - {c}

    def is_face(self, f, c) -> bool:
        return f in self.cell_closure(c)

    def vertices_of(self, c) -> tuple:
        vs = [f for f in self.cell_closure(c) if self.dims[f] == 0]
        return tuple(sorted(vs, key=self._vkey))

    def _vkey(self, v):
        if self.vertex_rank is not None and isinstance(v, tuple) and len(v) == 1 \
                and v[0] in self.vertex_rank:
            return (0, self.vertex_rank[v[0]])
        return (1, sort_key(v))

    def maximal_cells(self) -> tuple:
        co = self.cofaces
        return tuple(c for c in self.cells if not co[c])

    # -- subcomplexes
    def is_subcomplex(self, cells: Iterable) -> bool:
        s = set(cells)
        return all(c in self.dims for c in s) and all(f in s for c in s for f in self.bd.get(c, ()))

    def sub(self, cells: Iterable) -> "SubcomplexRef":
        return SubcomplexRef(self, frozenset(cells))

    def restrict(self, cells: Iterable) -> "BallComplex":
        s = frozenset(cells)
        if not self.is_subcomplex(s):
            raise ComplexError("not a subcomplex")
        vr = None
        if self.vertex_rank is not None:
            vr = {v: r for v, r in self.vertex_rank.items() if (v,) in s}
        return BallComplex({c: self.dims[c] for c in s},
                           {c: self.bd[c] for c in s if c in self.bd},
                           {c: l for c, l in self.labels.items() if c in s}, vr)

    def boundary_subcomplex(self) -> frozenset:
        """Closure of the codimension-one cells lying in exactly one top cell."""
        n = self.dim
        co = self.cofaces
        free = [f for f in self.cells_of_dim(n - 1) if len(co[f]) == 1]
        return self.closure(free)

    # -- structure checks
    def is_simplicial(self) -> bool:
        for c in self.cells:
            cl = self.cell_closure(c)
            k = self.dims[c]
            if len(cl) != 2 ** (k + 1) - 1:
                return False
            if sum(1 for f in cl if self.dims[f] == 0) != k + 1:
                return False
        return True

    def check_dd(self) -> bool:
        for c, faces in self.bd.items():
            acc: dict = {}
            for f, x in faces.items():
                for g, y in self.bd.get(f, {}).items():
                    acc[g] = acc.get(g, 0) + x * y
            if any(acc.values()):
                return False
        return True

    def validate(self) -> None:
        """Raise :class:`ComplexError` unless every ball-complex invariant
        holds (graded faces, d^2 = 0, sphere-homology cell boundaries)."""
        for c, n in self.dims.items():
            if not isinstance(n, int) or n < 0:
                raise ComplexError(f"bad dimension for {c!r}")
            sort_key(c)
        if not self.check_dd():
            raise ComplexError("boundary of boundary is nonzero")
        for c in self.cells:
            n = self.dims[c]
            if n == 0:
                continue
            if not self.bd.get(c):
                raise ComplexError(f"cell {c!r} has zero boundary")
            faces = self.proper_faces(c)
            H = smith_homology(cellular_chains(self.restrict(faces)))
            if not _is_sphere_homology(H, n - 1):
                raise ComplexError(f"boundary of {c!r} does not have sphere homology")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except ComplexError:
            return False
        return True

    # -- serialization
    def to_json(self) -> dict:
        cells = []
        for c in self.cells:
            rec = {"id": _id_to_json(c), "dim": self.dims[c]}
            if c in self.labels and self.labels[c] is not None:
                rec["label"] = self.labels[c]
            cells.append(rec)
        boundary = {}
        for c in self.cells:
            if c in self.bd:
                faces = sorted(self.bd[c].items(), key=lambda kv: sort_key(kv[0]))
                boundary[encode_id(c)] = [[_id_to_json(f), x] for f, x in faces]
        out = {"format": 1, "cells": cells, "boundary": boundary}
        if self.vertex_rank is not None:
            order = sorted(self.vertex_rank, key=lambda v: self.vertex_rank[v])
            out["vertex_order"] = [_id_to_json(v) for v in order]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, obj) -> "BallComplex":
        if not isinstance(obj, dict):
            raise ComplexError("complex must be a JSON object")
        if "facets" in obj:
            extra = set(obj) - {"format", "facets"}
            if extra:
                raise ComplexError(f"unknown fields: {sorted(extra)}")
            _check_format(obj)
            facets = obj["facets"]
            if not isinstance(facets, list) or not all(isinstance(f, list) and f for f in facets):
                raise ComplexError("facets must be a list of nonempty vertex lists")
            return from_facets([[_id_from_json(v) for v in f] for f in facets])
        extra = set(obj) - {"format", "cells", "boundary", "vertex_order"}
        if extra:
            raise ComplexError(f"unknown fields: {sorted(extra)}")
        _check_format(obj)
        if not isinstance(obj.get("cells"), list):
            raise ComplexError("missing cell list")
        dims, labels, keys = {}, {}, {}
        for rec in obj["cells"]:
            if not isinstance(rec, dict) or set(rec) - {"id", "dim", "label"} or "id" not in rec or "dim" not in rec:
                raise ComplexError(f"malformed cell record {rec!r}")
            c = _id_from_json(rec["id"])
            if c in dims:
                raise ComplexError(f"duplicate cell {c!r}")
            if not isinstance(rec["dim"], int) or isinstance(rec["dim"], bool) or rec["dim"] < 0:
                raise ComplexError(f"bad dimension for {c!r}")
            dims[c] = rec["dim"]
            if "label" in rec:
                if not isinstance(rec["label"], str):
                    raise ComplexError("labels must be strings")
                labels[c] = rec["label"]
            k = encode_id(c)
            if k in keys:
                raise ComplexError(f"ambiguous cell id encoding {k!r}")
            keys[k] = c
        bd = {}
        braw = obj.get("boundary", {})
        if not isinstance(braw, dict):
            raise ComplexError("boundary must be an object")
        for k, faces in braw.items():
            if k not in keys:
                raise ComplexError(f"boundary for unknown cell {k!r}")
            if not isinstance(faces, list):
                raise ComplexError("boundary entries must be lists")
            entry = {}
            for item in faces:
                if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], int)
                        and not isinstance(item[1], bool)):
                    raise ComplexError(f"malformed boundary term {item!r}")
                f = _id_from_json(item[0])
                if f in entry:
                    raise ComplexError("repeated face in boundary")
                entry[f] = item[1]
            bd[keys[k]] = entry
        vr = None
        if "vertex_order" in obj:
            order = [_id_from_json(v) for v in obj["vertex_order"]]
            vr = {v: i for i, v in enumerate(order)}
        K = cls(dims, bd, labels, vr)
        if not K.check_dd():
            raise ComplexError("boundary of boundary is nonzero")
        return K


def _check_format(obj):
    if obj.get("format", 1) != 1:
        raise ComplexError("unsupported format version")


def _id_to_json(c):
    if isinstance(c, tuple):
        return [_id_to_json(x) for x in c]
    return c


def _id_from_json(x):
    if isinstance(x, list):
        return tuple(_id_from_json(y) for y in x)
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ComplexError(f"bad cell id {x!r}")
    return x


def encode_id(c) -> str:
    """String key for a cell id: strings as-is, everything else compact JSON."""
    if isinstance(c, str):
        return c
    return json.dumps(_id_to_json(c), separators=(",", ":"))


def _is_sphere_homology(H, m: int) -> bool:
    for n, g in H.items():
        if g.torsion:
            return False
        want = 0
        if m == 0 and n == 0:
            want = 2
        elif n == 0 or n == m:
            want = 1
        if g.betti != want:
            return False
    needed = {0, m} if m >= 0 else set()
    return all(n in H for n in needed)


@dataclass(frozen=True)
class SubcomplexRef:
    """A downward-closed set of cells of ``parent``."""

    parent: BallComplex
    cells: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.parent.is_subcomplex(self.cells):
            raise ComplexError("cell set is not closed under faces")

    def __contains__(self, c):
        return c in self.cells

    def __iter__(self):
        return iter(c for c in self.parent.cells if c in self.cells)

    def __len__(self):
        return len(self.cells)

    def complex(self) -> BallComplex:
        return self.parent.restrict(self.cells)


# ------------------------------------------------------------------ constructors

@lru_cache(maxsize=None)
def point() -> BallComplex:
    """The one-point complex: the empty product, with the single cell ()."""
    return BallComplex({(): 0}, {}, factors=())


def from_facets(facets: Iterable[Iterable], vertex_order: Iterable | None = None) -> BallComplex:
    """Simplicial complex generated by the given facets; cells are vertex
    tuples sorted by vertex order (default: the id order)."""
    facets = [tuple(f) for f in facets]
    verts = {v for f in facets for v in f}
    if vertex_order is None:
        order = sorted(verts, key=sort_key)
    else:
        order = list(vertex_order)
        if set(order) != verts or len(order) != len(verts):
            raise ComplexError("vertex order must list every vertex once")
    rank = {v: i for i, v in enumerate(order)}
    cells = set()
    for f in facets:
        if len(set(f)) != len(f):
            raise ComplexError(f"repeated vertex in facet {f!r}")
        f = tuple(sorted(f, key=rank.__getitem__))
        for r in range(1, len(f) + 1):
            cells.update(combinations(f, r))
    dims = {c: len(c) - 1 for c in cells}
    bd = {}
    for c in cells:
        if len(c) > 1:
            bd[c] = {c[:i] + c[i + 1:]: (-1) ** i for i in range(len(c))}
    return BallComplex(dims, bd, vertex_rank=rank)


@lru_cache(maxsize=None)
def simplex(n: int) -> BallComplex:
    if n < 0:
        raise ComplexError("simplex dimension must be non-negative")
    return from_facets([tuple(range(n + 1))])


@lru_cache(maxsize=None)
def boundary_simplex(n: int) -> BallComplex:
    """The boundary of the standard n-simplex (n >= 1)."""
    if n < 1:
        raise ComplexError("boundary of a simplex needs n >= 1")
    return from_facets(combinations(range(n + 1), n))


@lru_cache(maxsize=None)
def interval() -> BallComplex:
    """I with vertices "0", "1" and the 1-cell "I"; d I = 1 - 0."""
    return BallComplex({"0": 0, "1": 0, "I": 1}, {"I": {"1": 1, "0": -1}})


def _atomic(K: BallComplex) -> tuple:
    return K.factors if K.factors is not None else (K,)


def _split(c, K: BallComplex) -> tuple:
    """Cell of K as a tuple of atomic-factor cells."""
    if K.factors is None or len(K.factors) == 1:
        return (c,)
    return c


def product(*Ks: BallComplex) -> BallComplex:
    """Cartesian product with Leibniz incidences.  Factors that are
    themselves products are flattened, so the product is strictly
    associative and the point is a strict unit."""
    atoms: list[BallComplex] = []
    for K in Ks:
        atoms.extend(_atomic(K))
    return _product_atoms(tuple(atoms))


@lru_cache(maxsize=256)
def _product_atoms(atoms: tuple) -> BallComplex:
    if len(atoms) == 0:
        return point()
    if len(atoms) == 1:
        return atoms[0]
    cell_lists = [A.cells for A in atoms]
    dims, bd = {}, {}

    def rec(j, prefix, dsum):
        if j == len(atoms):
            dims[prefix] = dsum
            return
        for c in cell_lists[j]:
            rec(j + 1, prefix + (c,), dsum + atoms[j].dims[c])

    rec(0, (), 0)
    for cell in dims:
        faces = {}
        sgn_exp = 0
        for j, c in enumerate(cell):
            s = -1 if sgn_exp % 2 else 1
            for f, x in atoms[j].bd.get(c, {}).items():
                faces[cell[:j] + (f,) + cell[j + 1:]] = s * x
            sgn_exp += atoms[j].dims[c]
        if faces:
            bd[cell] = faces
    return BallComplex(dims, bd, factors=atoms)


def product_cell(*pairs) -> Hashable:
    """Cell id of the product of (cell, complex) pairs, flattened the same
    way as :func:`product`."""
    out: tuple = ()
    for c, K in pairs:
        out += _split(c, K)
    return out[0] if len(out) == 1 else out


def split_product_cell(cell, Ks: Iterable[BallComplex]) -> tuple:
    """Inverse of :func:`product_cell` for the given factor list."""
    Ks = list(Ks)
    sizes = [len(_atomic(K)) for K in Ks]
    flat = (cell,) if sum(sizes) == 1 else cell
    out, pos = [], 0
    for n in sizes:
        part = flat[pos:pos + n]
        pos += n
        out.append(part[0] if n == 1 else tuple(part))
    return tuple(out)


def horn(n: int, i: int) -> SubcomplexRef:
    """Lambda_{n,i}: simplex(n) without its top cell and its i-th face."""
    if n < 1 or not 0 <= i <= n:
        raise ComplexError(f"no horn ({n}, {i})")
    D = simplex(n)
    top = tuple(range(n + 1))
    face = top[:i] + top[i + 1:]
    return SubcomplexRef(D, frozenset(D.cells) - {top, face})


def disjoint_union(*Ks: BallComplex) -> BallComplex:
    """Cells are (index, cell) pairs."""
    dims, bd = {}, {}
    for k, K in enumerate(Ks):
        for c in K.cells:
            dims[(k, c)] = K.dims[c]
            if c in K.bd:
                bd[(k, c)] = {(k, f): x for f, x in K.bd[c].items()}
    return BallComplex(dims, bd)


# ------------------------------------------------------------------ refinements

@dataclass(frozen=True, eq=False)
class Refinement:
    """A subdivision ``fine`` of ``coarse``: every fine cell is carried by a
    coarse cell; fine cells of the same dimension as their carrier carry an
    orientation sign relative to it."""

    fine: BallComplex
    coarse: BallComplex
    carrier: Mapping
    sign: Mapping

    def pieces(self, sigma) -> list:
        """Fine cells of full dimension carried by sigma, with signs."""
        return [(c, self.sign[c]) for c in self._pieces.get(sigma, ())]

    @cached_property
    def _pieces(self):
        out: dict = {}
        for c in self.fine.cells:
            s = self.carrier[c]
            if self.fine.dims[c] == self.coarse.dims[s]:
                out.setdefault(s, []).append(c)
        return out

    def fine_cells_in(self, sigma) -> frozenset:
        """Fine cells whose carrier lies in the closure of sigma."""
        cl = self.coarse.cell_closure(sigma)
        return frozenset(c for c in self.fine.cells if self.carrier[c] in cl)

    def check(self) -> None:
        F, K = self.fine, self.coarse
        for c in F.cells:
            s = self.carrier.get(c)
            if s not in K.dims:
                raise ComplexError(f"fine cell {c!r} has no carrier")
            if F.dims[c] > K.dims[s]:
                raise ComplexError(f"fine cell {c!r} is bigger than its carrier")
            for f in F.bd.get(c, ()):
                if not K.is_face(self.carrier[f], s):
                    raise ComplexError("carrier map is not monotone")
        for s in K.cells:
            if not self._pieces.get(s):
                raise ComplexError(f"coarse cell {s!r} has no pieces")
            # d(sum of pieces) = refinement of d(sigma)
            acc: dict = {}
            for c in self._pieces[s]:
                for f, x in F.bd.get(c, {}).items():
                    acc[f] = acc.get(f, 0) + self.sign[c] * x
            want: dict = {}
            for t, y in K.bd.get(s, {}).items():
                for c in self._pieces.get(t, ()):
                    want[c] = want.get(c, 0) + y * self.sign[c]
            acc = {k: v for k, v in acc.items() if v}
            want = {k: v for k, v in want.items() if v}
            if acc != want:
                raise ComplexError(f"refinement signs inconsistent at {s!r}")


def induced_signs(fine: BallComplex, coarse: BallComplex, carrier: Mapping) -> dict:
    """Orientation signs making each coarse cell the signed sum of its
    pieces, found by propagation across interior codimension-one faces."""
    sign: dict = {}
    pieces: dict = {}
    for c in fine.cells:
        s = carrier[c]
        if fine.dims[c] == coarse.dims[s]:
            pieces.setdefault(s, []).append(c)
    for s in coarse.cells:
        n = coarse.dims[s]
        ps = pieces.get(s, [])
        if not ps:
            raise ComplexError(f"coarse cell {s!r} has no pieces")
        if n == 0:
            if len(ps) != 1:
                raise ComplexError("a vertex must refine to a single vertex")
            sign[ps[0]] = 1
            continue
        pset = set(ps)
        local = {ps[0]: 1}
        queue = deque([ps[0]])
        while queue:
            c = queue.popleft()
            for f, x in fine.bd.get(c, {}).items():
                if carrier[f] != s:
                    continue
                for c2, y in fine.cofaces[f].items():
                    if c2 == c or c2 not in pset:
                        continue
                    want = -local[c] * x * y  # x, y are +-1
                    if c2 in local:
                        if local[c2] != want:
                            raise ComplexError(f"pieces of {s!r} cannot be coherently oriented")
                    else:
                        local[c2] = want
                        queue.append(c2)
        if len(local) != len(ps):
            raise ComplexError(f"pieces of {s!r} are not connected")
        # fix the global sign against one boundary piece
        flip = None
        for c in ps:
            for f, x in fine.bd.get(c, {}).items():
                t = carrier[f]
                if t != s and coarse.dims[t] == n - 1:
                    y = coarse.incidence(s, t)
                    if y:
                        flip = 1 if local[c] * x == y * sign[f] else -1
                        break
            if flip is not None:
                break
        if flip is None:
            raise ComplexError(f"cannot orient pieces of {s!r}")
        for c in ps:
            sign[c] = flip * local[c]
    return sign


def make_refinement(fine: BallComplex, coarse: BallComplex, carrier: Mapping) -> Refinement:
    R = Refinement(fine, coarse, dict(carrier), induced_signs(fine, coarse, carrier))
    R.check()
    return R


def trivial_refinement(K: BallComplex) -> Refinement:
    return Refinement(K, K, {c: c for c in K.cells}, {c: 1 for c in K.cells})


def barycentric_subdivision(K: BallComplex) -> Refinement:
    """Barycentric subdivision of a simplicial complex.  Vertices of the
    subdivision are the cells of K (ordered by dimension, then id), so a
    simplex is a chain of cells listed from smallest to largest; its
    carrier is the largest one."""
    if not K.is_simplicial():
        raise ComplexError("barycentric subdivision needs a simplicial complex")
    order = list(K.cells)
    # maximal chains <-> facets; enumerate all chains ending in each cell
    chains_to: dict = {}
    for c in K.cells:
        acc = [(c,)]
        for f in K.bd.get(c, ()):
            acc.extend(ch + (c,) for ch in chains_to[f])
        chains_to[c] = acc
    # include chains ending below (closure of sets of faces)
    facets = [ch for c in K.maximal_cells() for ch in chains_to[c] if len(ch) == K.dims[c] + 1]
    sd = from_facets(facets, vertex_order=order)
    carrier = {ch: ch[-1] for ch in sd.cells}
    return make_refinement(sd, K, carrier)


def barycenter(sigma) -> tuple:
    """The vertex of the subdivision corresponding to sigma."""
    return (sigma,)


@dataclass(frozen=True)
class StarLinkDual:
    star: SubcomplexRef
    link: SubcomplexRef
    dual: SubcomplexRef
    dual_boundary: SubcomplexRef


def star_link_dual(K: BallComplex, sigma, R: Refinement | None = None) -> StarLinkDual:
    """Star and link of the barycenter of sigma in the barycentric
    subdivision, and the dual cell D(sigma) with its boundary."""
    if sigma not in K:
        raise ComplexError(f"unknown cell {sigma!r}")
    R = R or barycentric_subdivision(K)
    sd = R.fine
    b = sigma
    containing = [c for c in sd.cells if b in c]
    star = sd.closure(containing)
    link = frozenset(c for c in star if b not in c)
    dual = frozenset(c for c in sd.cells if all(K.is_face(sigma, t) for t in c))
    dual_bd = frozenset(c for c in dual if sigma not in c)
    return StarLinkDual(SubcomplexRef(sd, star), SubcomplexRef(sd, link),
                        SubcomplexRef(sd, dual), SubcomplexRef(sd, dual_bd))


# ------------------------------------------------------------------ fundamental chains

@dataclass(frozen=True)
class FundamentalChain:
    chain: dict
    boundary: dict
    coherent: bool


def _top_cells(K: BallComplex) -> tuple:
    n = K.dim
    tops = K.cells_of_dim(n)
    if any(K.dims[c] != n for c in K.maximal_cells()):
        raise ComplexError("complex is not pure")
    return tops


def chain_boundary(K: BallComplex, chain: Mapping) -> dict:
    out: dict = {}
    for c, x in chain.items():
        for f, y in K.bd.get(c, {}).items():
            out[f] = out.get(f, 0) + x * y
    return {k: v for k, v in out.items() if v}


def coherent_orientation(K: BallComplex) -> dict:
    """Signs on the top cells such that every codimension-one cell shared by
    two top cells cancels; raises :class:`NonOrientable` otherwise.  Each
    component starts from its smallest top cell with sign +1."""
    tops = _top_cells(K)
    n = K.dim
    co = K.cofaces
    for f in K.cells_of_dim(n - 1):
        if len(co[f]) > 2:
            raise ComplexError("not a pseudomanifold: a facet has more than two cofaces")
    sign: dict = {}
    for start in tops:
        if start in sign:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for f, x in K.bd.get(c, {}).items():
                for c2, y in co[f].items():
                    if c2 == c:
                        continue
                    want = -sign[c] * x * y
                    if c2 in sign:
                        if sign[c2] != want:
                            raise NonOrientable("no coherent orientation exists")
                    else:
                        sign[c2] = want
                        queue.append(c2)
    return sign


def fundamental_chain(K: BallComplex, orientation: Mapping | None = None) -> FundamentalChain:
    """Sum of the top cells with the given signs (or a coherent choice) and
    its boundary; ``coherent`` says whether interior facets cancel."""
    tops = _top_cells(K)
    if orientation is None:
        orientation = coherent_orientation(K)
    else:
        if set(orientation) != set(tops) or any(s not in (1, -1) for s in orientation.values()):
            raise ComplexError("orientation must assign +-1 to every top cell")
    chain = {c: orientation[c] for c in tops}
    bdry = chain_boundary(K, chain)
    co = K.cofaces
    coherent = all(len(co[f]) == 1 for f in bdry) and all(abs(v) == 1 for v in bdry.values())
    return FundamentalChain(chain, bdry, coherent)


# ------------------------------------------------------------------ M and M'

def _square_map(prefix_x: int) -> dict:
    """Cell map from product(I, I) onto one square of M'."""
    xs = {"0": f"{prefix_x}", "1": f"{prefix_x + 1}"}
    out = {}
    for a in ("0", "1"):
        for b in ("0", "1"):
            out[(a, b)] = f"v{xs[a]}{b}"
    left = "g" if prefix_x == 0 else "d"
    out[("I", "0")] = f"b{prefix_x}"
    out[("I", "1")] = f"t{prefix_x}"
    out[("0", "I")] = f"l{prefix_x}"
    out[("1", "I")] = f"l{prefix_x + 1}"
    out[("I", "I")] = left
    return out


@lru_cache(maxsize=None)
def model_M_prime() -> BallComplex:
    """Two copies of I x I glued along {1} x I of the first and {0} x I of
    the second.  Vertices v_xy (x in 0..2, y in 0..1); horizontal edges
    b0, b1 (bottom), t0, t1 (top); vertical edges l0, l1, l2; squares g, d."""
    dims, bd = {}, {}
    for x in range(3):
        for y in range(2):
            dims[f"v{x}{y}"] = 0
    for x in range(2):
        dims[f"b{x}"] = 1
        bd[f"b{x}"] = {f"v{x + 1}0": 1, f"v{x}0": -1}
        dims[f"t{x}"] = 1
        bd[f"t{x}"] = {f"v{x + 1}1": 1, f"v{x}1": -1}
    for x in range(3):
        dims[f"l{x}"] = 1
        bd[f"l{x}"] = {f"v{x}1": 1, f"v{x}0": -1}
    dims["g"] = dims["d"] = 2
    bd["g"] = {"l1": 1, "l0": -1, "t0": -1, "b0": 1}
    bd["d"] = {"l2": 1, "l1": -1, "t1": -1, "b1": 1}
    return BallComplex(dims, bd)


def square_maps() -> tuple[dict, dict]:
    """The cell maps gamma, delta: product(I, I) -> M' (both orientation
    preserving on every cell)."""
    return _square_map(0), _square_map(1)


@lru_cache(maxsize=None)
def model_M() -> BallComplex:
    """M: the same square with one 2-cell D and 1-cells lambda1..lambda5
    (lambda1 = b0, lambda2 = b1, lambda3 = l0, lambda4 = l2,
    lambda5 = t0 u t1)."""
    dims = {"v00": 0, "v10": 0, "v20": 0, "v01": 0, "v21": 0}
    bd = {
        "lambda1": {"v10": 1, "v00": -1},
        "lambda2": {"v20": 1, "v10": -1},
        "lambda3": {"v01": 1, "v00": -1},
        "lambda4": {"v21": 1, "v20": -1},
        "lambda5": {"v21": 1, "v01": -1},
    }
    for k in bd:
        dims[k] = 1
    dims["D"] = 2
    bd["D"] = {"lambda1": 1, "lambda2": 1, "lambda4": 1, "lambda3": -1, "lambda5": -1}
    labels = {f"lambda{i}": f"lambda_{i}" for i in range(1, 6)}
    return BallComplex(dims, bd, labels)


@lru_cache(maxsize=None)
def refinement_M() -> Refinement:
    """M' as a subdivision of M."""
    carrier = {"v00": "v00", "v10": "v10", "v20": "v20", "v01": "v01", "v21": "v21",
               "v11": "lambda5", "b0": "lambda1", "b1": "lambda2", "l0": "lambda3",
               "l2": "lambda4", "t0": "lambda5", "t1": "lambda5", "l1": "D",
               "g": "D", "d": "D"}
    return make_refinement(model_M_prime(), model_M(), carrier)
