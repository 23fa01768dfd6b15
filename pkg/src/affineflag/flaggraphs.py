"""Flag graphs of AG(n, q): vertices are all flags, arcs a self-paired orbital."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    IncompatibleSeed,
    InternalMismatch,
    InvalidParameters,
    NotSelfPaired,
    NotSelfPairedForC,
    SizeCapExceeded,
)
from .field import FieldSpec, field_of_order
from .geometry import (
    RELATION_CODES,
    AffineSpace,
    Flag,
    Line,
    LineRelation,
    affine_space,
    flag_label,
    parse_flag,
)
from .group import (
    DEFAULT_ORBIT_CAP,
    GroupSpec,
    SemiAffineMap,
    StandardParameters,
    A_c,
    flag_pair_orbit,
    membership_SL_H,
    named_group,
    sl2_semidirect_h,
)

DEFAULT_FLAG_CAP = 4096


@dataclass(eq=False)
class FlagGraph:
    """Undirected graph on all flags of ``space`` in CSR form (sorted rows)."""

    space: AffineSpace
    indptr: np.ndarray
    indices: np.ndarray
    meta: dict = dc_field(default_factory=dict)

    @classmethod
    def from_arc_codes(cls, space: AffineSpace, codes, meta=None) -> "FlagGraph":
        """Build from codes ``a*F + b``; reverse arcs are added, loops rejected."""
        F = space.num_flags
        codes = np.asarray(codes, dtype=np.int64)
        a, b = np.divmod(codes, F)
        if np.any(a == b):
            raise InvalidParameters("flag graphs have no loops")
        both = np.unique(np.concatenate([a * F + b, b * F + a]))
        src, dst = np.divmod(both, F)
        indptr = np.zeros(F + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=F), out=indptr[1:])
        return cls(space, indptr, dst.astype(np.int64), dict(meta or {}))

    @classmethod
    def from_adjacency(cls, space: AffineSpace, adj, meta=None) -> "FlagGraph":
        a, b = np.nonzero(np.asarray(adj, dtype=bool))
        return cls.from_arc_codes(space, a * space.num_flags + b, meta)

    def __eq__(self, other):
        return (
            isinstance(other, FlagGraph)
            and self.space.n == other.space.n
            and self.space.field == other.space.field
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self):
        return f"<FlagGraph {self.meta.get('family', '?')} on {self.space}: {self.order} vertices, {self.num_edges} edges>"

    @property
    def order(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def valency(self) -> int | None:
        """Common degree, or None when the graph is not regular."""
        d = self.degrees
        if len(d) == 0 or np.all(d == d[0]):
            return int(d[0]) if len(d) else 0
        return None

    @property
    def vertices(self) -> list[Flag]:
        return [self.space.flag(i) for i in range(self.order)]

    def neighbours(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbours(u)
        k = np.searchsorted(row, v)
        return bool(k < len(row) and row[k] == v)

    @cached_property
    def arc_codes(self) -> np.ndarray:
        """Sorted codes ``a*F + b`` of all ordered adjacent pairs."""
        src = np.repeat(np.arange(self.order), self.degrees)
        return src * self.order + self.indices

    def edges(self) -> np.ndarray:
        """Edges as rows (i, j) with i < j, sorted."""
        src = np.repeat(np.arange(self.order), self.degrees)
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    def adjacency_matrix(self) -> np.ndarray:
        adj = np.zeros((self.order, self.order), dtype=bool)
        src = np.repeat(np.arange(self.order), self.degrees)
        adj[src, self.indices] = True
        return adj

    def subgraph(self, vertices) -> tuple[np.ndarray, np.ndarray]:
        """CSR (indptr, indices) of the induced subgraph, relabelled in the given order."""
        vertices = np.asarray(vertices, dtype=np.int64)
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[vertices] = np.arange(len(vertices))
        rows = [np.sort(pos[r][pos[r] >= 0]) for r in (self.neighbours(v) for v in vertices)]
        indptr = np.zeros(len(vertices) + 1, dtype=np.int64)
        np.cumsum([len(r) for r in rows], out=indptr[1:])
        indices = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
        return indptr, indices.astype(np.int64)

    # -- export ------------------------------------------------------------------

    def meta_json(self) -> dict:
        return {
            "family": self.meta.get("family", "custom"),
            "n": self.space.n,
            "q": self.space.q,
            "params": self.meta.get("params", {}),
            "order": self.order,
            "valency": self.valency,
        }

    def to_edgelist(self) -> str:
        labels = self.space.flag_labels()
        lines = []
        for i, j in self.edges():
            a, b = sorted((labels[i], labels[j]))
            lines.append(f"{a}\t{b}\n")
        lines.sort()
        return "".join(lines)

    @classmethod
    def from_edgelist(cls, text: str, space: AffineSpace, meta=None) -> "FlagGraph":
        codes = []
        F = space.num_flags
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise InvalidParameters(f"line {lineno}: expected two tab-separated labels")
            a, b = (space.flag_index(parse_flag(x.strip())) for x in parts)
            codes.append(a * F + b)
        return cls.from_arc_codes(space, codes, meta)

    def dumps_meta(self) -> str:
        return json.dumps(self.meta_json(), sort_keys=True)


# -- seeds and relation graphs ---------------------------------------------------------

def _e(n: int, i: int, scale: int = 1) -> tuple:
    return tuple(scale if j == i else 0 for j in range(n))


def seed_pair(space: AffineSpace, rel: LineRelation, c: int = 1) -> tuple[Flag, Flag]:
    """A canonical compatible flag pair whose lines stand in relation ``rel``.

    For INTERSECTING this is ((e1, <e1>), (c e2, <e2>)).
    """
    n, f = space.n, space.field
    zero = (0,) * n
    if c == 0:
        raise InvalidParameters("c must be nonzero")
    if rel is LineRelation.INTERSECTING:
        if n < 2:
            raise InvalidParameters("intersecting seeds need n >= 2")
        a = space.make_flag(_e(n, 0), space.line_through(zero, _e(n, 0)))
        b = space.make_flag(_e(n, 1, c), space.line_through(zero, _e(n, 1)))
    elif rel is LineRelation.PARALLEL:
        if n < 2:
            raise InvalidParameters("parallel seeds need n >= 2")
        a = space.make_flag(zero, space.line_through(zero, _e(n, 0)))
        shifted = tuple(f.add(x, y) for x, y in zip(_e(n, 1), _e(n, 0)))
        b = space.make_flag(_e(n, 1), space.line_through(_e(n, 1), shifted))
    elif rel is LineRelation.SKEW:
        if n < 3:
            raise InvalidParameters("skew lines need n >= 3")
        a = space.make_flag(zero, space.line_through(zero, _e(n, 0)))
        shifted = tuple(f.add(x, y) for x, y in zip(_e(n, 2), _e(n, 1)))
        b = space.make_flag(_e(n, 2), space.line_through(_e(n, 2), shifted))
    else:
        raise InvalidParameters(f"no compatible seed for relation {rel}")
    return a, b


def _parse_relation(rel) -> LineRelation:
    if isinstance(rel, LineRelation):
        return rel
    try:
        return LineRelation(str(rel).lower())
    except ValueError:
        raise InvalidParameters(f"unknown line relation {rel!r}") from None


FAMILY_OF = {
    LineRelation.INTERSECTING: "plus",
    LineRelation.PARALLEL: "par",
    LineRelation.SKEW: "skew",
}


def relation_adjacency(space: AffineSpace, rel: LineRelation) -> np.ndarray:
    fl = space.flag_line
    same = space.relation_matrix[fl[:, None], fl[None, :]] == RELATION_CODES[rel]
    return same & space.compatible_matrix()


def relation_graph(n: int, f: FieldSpec, rel, cap: int = DEFAULT_FLAG_CAP) -> FlagGraph:
    """Flags adjacent iff compatible with lines in relation ``rel``."""
    rel = _parse_relation(rel)
    if rel is LineRelation.EQUAL:
        raise InvalidParameters("flags on equal lines are never compatible")
    if n < 2:
        raise InvalidParameters("relation graphs need n >= 2")
    flags = (f.q**n) * (f.q**n - 1) // (f.q - 1)
    if flags > cap:
        raise SizeCapExceeded(f"{flags} flags exceed the cap {cap}")
    space = affine_space(n, f)
    meta = {"family": FAMILY_OF[rel], "params": {}}
    return FlagGraph.from_adjacency(space, relation_adjacency(space, rel), meta)


# -- orbitals -----------------------------------------------------------------------

@dataclass(eq=False)
class Orbital:
    group: GroupSpec
    seed: tuple
    codes: np.ndarray  # sorted a*F + b

    @property
    def space(self) -> AffineSpace:
        return self.group.space

    def __len__(self):
        return len(self.codes)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return self.contains_code(self.space.flag_index(a) * self.space.num_flags
                                  + self.space.flag_index(b))

    def contains_code(self, code: int) -> bool:
        k = np.searchsorted(self.codes, code)
        return bool(k < len(self.codes) and self.codes[k] == code)

    @property
    def pairs(self) -> list[tuple[Flag, Flag]]:
        F = self.space.num_flags
        return [(self.space.flag(int(c // F)), self.space.flag(int(c % F))) for c in self.codes]

    @property
    def seed_code(self) -> int:
        return self.space.flag_index(self.seed[0]) * self.space.num_flags + self.space.flag_index(self.seed[1])

    def reversed_codes(self) -> np.ndarray:
        a, b = np.divmod(self.codes, self.space.num_flags)
        return np.sort(b * self.space.num_flags + a)

    def relations(self) -> set[LineRelation]:
        sp = self.space
        a, b = np.divmod(self.codes, sp.num_flags)
        codes = np.unique(sp.relation_matrix[sp.flag_line[a], sp.flag_line[b]])
        inverse = {v: k for k, v in RELATION_CODES.items()}
        return {inverse[int(c)] for c in codes}

    def is_compatible(self) -> bool:
        sp = self.space
        a, b = np.divmod(self.codes, sp.num_flags)
        inc = sp.incidence
        return bool(len(self.codes)) and not bool(
            inc[sp.flag_line[b], sp.flag_point[a]].any() or inc[sp.flag_line[a], sp.flag_point[b]].any()
        )


def orbital_of(G: GroupSpec, seed, cap: int = DEFAULT_ORBIT_CAP) -> Orbital:
    """Closure of an ordered compatible flag pair under the diagonal action of G."""
    a, b = seed
    sp = G.space
    if len(a.point) != sp.n or len(b.point) != sp.n:
        raise DimensionMismatch("seed flags do not live in the group's space")
    if not sp.is_compatible(a, b):
        raise IncompatibleSeed(f"seed ({flag_label(a)}, {flag_label(b)}) is not compatible")
    code = sp.flag_index(a) * sp.num_flags + sp.flag_index(b)
    return Orbital(G, (a, b), flag_pair_orbit(G, code, cap))


def is_self_paired(o: Orbital) -> bool:
    a, b = o.seed
    F = o.space.num_flags
    return o.contains_code(o.space.flag_index(b) * F + o.space.flag_index(a))


def graph_from_orbital(o: Orbital, meta=None) -> FlagGraph:
    if not o.is_compatible():
        raise IncompatibleSeed("orbital contains incompatible pairs")
    if not is_self_paired(o):
        raise NotSelfPaired("the reversed seed lies in a different orbital")
    meta = dict(meta or {"family": "orbital", "params": {}})
    return FlagGraph.from_arc_codes(o.space, o.codes, meta)


def selfpaired_orbital_census(G: GroupSpec, cap: int = DEFAULT_ORBIT_CAP,
                              self_paired_only: bool = True) -> list[Orbital]:
    """Partition all compatible ordered flag pairs of AG(2, q) into G-orbitals.

    Returns the self-paired ones (all of them with ``self_paired_only=False``),
    ordered by least member; each seed is that least member.
    """
    sp = G.space
    if sp.n != 2:
        raise InvalidParameters("the census is defined for the plane")
    F = sp.num_flags
    if F * F > cap:
        raise SizeCapExceeded(f"{F * F} flag pairs exceed the cap {cap}")
    mask = np.ascontiguousarray(sp.compatible_matrix().ravel().astype(np.uint8))
    labels = kernels.pair_orbit_labels(np.ascontiguousarray(G.flag_perms), mask)
    order = np.argsort(labels, kind="stable")
    sorted_labels = labels[order]
    starts = np.searchsorted(sorted_labels, np.arange(sorted_labels.max() + 1 if len(order) else 0))
    ends = np.append(starts[1:], len(order))
    out = []
    for lo, hi in zip(starts, ends):
        codes = np.sort(order[lo:hi])
        if not len(codes) or labels[codes[0]] < 0:
            continue
        a, b = divmod(int(codes[0]), F)
        orb = Orbital(G, (sp.flag(a), sp.flag(b)), codes)
        if not self_paired_only or labels[b * F + a] == labels[codes[0]]:
            out.append(orb)
    return out


# -- named families -----------------------------------------------------------------

def is_self_paired_algebraic(f: FieldSpec, params: StandardParameters, c: int) -> bool:
    """Whether some t(A_{c,theta^j}, 0, theta^j) lies in SL(2,q) x| H."""
    for j in range(f.ell):
        g = SemiAffineMap.linear(f, A_c(f, c, j), j)
        if membership_SL_H(g, params):
            return True
    return False


def gamma_Gc(q: int, params, r: int, cap: int = DEFAULT_ORBIT_CAP) -> FlagGraph:
    """The flag graph of the orbital of ((e1,<e1>), (w^r e2, <e2>)) under translations x| (SL(2,q) x| H)."""
    f = field_of_order(q)
    params = StandardParameters(*params) if isinstance(params, tuple) else params
    params.validate(f)
    if not 0 < r < q:
        raise InvalidParameters(f"r must satisfy 0 < r < q, got {r}")
    c = f.omega_pow(r)
    G = sl2_semidirect_h(f, params)
    o = orbital_of(G, seed_pair(G.space, LineRelation.INTERSECTING, c), cap)
    direct = is_self_paired(o)
    algebraic = is_self_paired_algebraic(f, params, c)
    if direct != algebraic:
        raise InternalMismatch(
            f"self-pairing disagrees for q={q}, params={params.as_tuple()}, r={r}: "
            f"reversed seed {direct}, matrix criterion {algebraic}"
        )
    if not direct:
        raise NotSelfPairedForC(
            f"no t(A_c,0,delta) lies in G_0 for c = omega^{r}: the orbital is not self-paired"
        )
    meta = {"family": "gc", "params": {"t": params.t, "e": params.e, "s": params.s, "r": r}}
    return graph_from_orbital(o, meta)


def gamma_Gc_group(q: int, params) -> GroupSpec:
    f = field_of_order(q)
    params = StandardParameters(*params) if isinstance(params, tuple) else params
    return sl2_semidirect_h(f, params)


def relation_orbital(G: GroupSpec, rel) -> Orbital:
    """The G-orbital of the canonical seed for ``rel``."""
    rel = _parse_relation(rel)
    return orbital_of(G, seed_pair(G.space, rel))


def sporadic_graphs(frobenius: bool = False) -> list[FlagGraph]:
    """Graphs of the self-paired compatible orbitals of AGL(1,4) (or AGammaL(1,4)) on AG(2,2)."""
    kind = "AGammaL1" if frobenius else "AGL1"
    G = named_group(kind, q=2, d=2)
    out = []
    for k, o in enumerate(selfpaired_orbital_census(G)):
        meta = {"family": "sporadic", "params": {"group": kind, "index": k}}
        out.append(graph_from_orbital(o, meta))
    return out


def census_group(p: int, ell_elt: int) -> GroupSpec:
    return named_group("SL2p_C", p=p, l=ell_elt)


__all__ = [
    "FlagGraph",
    "Orbital",
    "census_group",
    "gamma_Gc",
    "gamma_Gc_group",
    "graph_from_orbital",
    "is_self_paired",
    "is_self_paired_algebraic",
    "orbital_of",
    "relation_adjacency",
    "relation_graph",
    "relation_orbital",
    "seed_pair",
    "selfpaired_orbital_census",
    "sporadic_graphs",
]
