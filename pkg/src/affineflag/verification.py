"""Exact checks on flag graphs: invariants, quotients, designs, feasibility, isomorphism."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import kernels
from .errors import (
    InternalMismatch,
    InvalidParameters,
    NotA2Design,
    NotAlmostMulticover,
    NotAnAutomorphismGroup,
    NotCompleteMultipartite,
    SizeCapExceeded,
)
from .field import field_of_order
from .flaggraphs import FlagGraph
from .geometry import AffineSpace, flag_label
from .group import (
    GroupSpec,
    StandardParameters,
    bfs_orbit,
    flag_pair_orbit,
    gl1_orbit_length,
    is_two_transitive_on_directions,
    regenerate,
    schreier_generators,
)

INFINITE = "Infinite"


def _csr(g):
    """(indptr, indices) as contiguous int64 arrays, from a FlagGraph or a pair."""
    if isinstance(g, FlagGraph):
        indptr, indices = g.indptr, g.indices
    else:
        indptr, indices = g
    return (np.ascontiguousarray(indptr, dtype=np.int64),
            np.ascontiguousarray(indices, dtype=np.int64))


def _finite(x):
    return INFINITE if x is None else x


# -- invariants ----------------------------------------------------------------------

@dataclass
class InvariantReport:
    order: int
    degree_multiset: dict
    girth: int | None  # None means no cycle
    diameter: int | None  # None means disconnected (or empty)
    components: list
    component_diameters: list

    @property
    def regular(self) -> bool:
        return len(self.degree_multiset) <= 1

    @property
    def valency(self) -> int | None:
        if len(self.degree_multiset) == 1:
            return next(iter(self.degree_multiset))
        return 0 if not self.degree_multiset else None

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "degree_multiset": {str(k): v for k, v in sorted(self.degree_multiset.items())},
            "girth": _finite(self.girth),
            "diameter": _finite(self.diameter),
            "num_components": len(self.components),
            "component_sizes": [len(c) for c in self.components],
            "component_diameters": self.component_diameters,
        }


def invariants(g) -> InvariantReport:
    indptr, indices = _csr(g)
    n = len(indptr) - 1
    degrees = np.diff(indptr)
    values, counts = np.unique(degrees, return_counts=True)
    ecc, comp = kernels.bfs_eccentricity(indptr, indices)
    comps = [np.flatnonzero(comp == c) for c in range(int(comp.max()) + 1)] if n else []
    comp_diam = [int(ecc[c].max()) for c in comps]
    girth = int(kernels.girth(indptr, indices)) or None
    diameter = comp_diam[0] if len(comps) == 1 else None
    return InvariantReport(
        order=n,
        degree_multiset={int(v): int(c) for v, c in zip(values, counts)},
        girth=girth,
        diameter=diameter,
        components=comps,
        component_diameters=comp_diam,
    )


def check_complete_multipartite(component, g) -> tuple[int, int]:
    """(number of parts, part size) if the induced subgraph is complete multipartite."""
    verts = np.asarray(component, dtype=np.int64)
    indptr, indices = g.subgraph(verts) if isinstance(g, FlagGraph) else _induced(g, verts)
    k = len(verts)
    adj = np.zeros((k, k), dtype=bool)
    adj[np.repeat(np.arange(k), np.diff(indptr)), indices] = True
    same = ~adj  # non-adjacency, reflexive
    rows, part_of = np.unique(same, axis=0, return_inverse=True)
    part_of = part_of.ravel()
    for r, row in enumerate(rows):
        members = np.flatnonzero(part_of == r)
        if not np.array_equal(np.flatnonzero(row), members):
            a = members[0]
            b = next(x for x in np.flatnonzero(row) if x != a)
            c = next(x for x in np.flatnonzero(same[b]) if not same[a, x])
            witness = _labels(g, verts[[a, b, c]])
            raise NotCompleteMultipartite(
                "non-adjacency is not transitive: the first two and last two are "
                "non-adjacent but the outer pair is adjacent",
                witness=witness,
            )
    sizes = np.bincount(part_of)
    if len(set(sizes.tolist())) != 1:
        raise NotCompleteMultipartite(f"parts have unequal sizes {sorted(set(sizes.tolist()))}",
                                      witness=sizes.tolist())
    return len(rows), int(sizes[0])


def _induced(g, verts):
    indptr, indices = _csr(g)
    pos = np.full(len(indptr) - 1, -1, dtype=np.int64)
    pos[verts] = np.arange(len(verts))
    rows = []
    for v in verts:
        r = pos[indices[indptr[v]:indptr[v + 1]]]
        rows.append(np.sort(r[r >= 0]))
    ip = np.zeros(len(verts) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=ip[1:])
    return ip, (np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64))


def _labels(g, vertices) -> list:
    if isinstance(g, FlagGraph):
        return [flag_label(g.space.flag(int(v))) for v in vertices]
    return [int(v) for v in vertices]


# -- arc-transitivity --------------------------------------------------------------------

def check_automorphisms(g: FlagGraph, G: GroupSpec) -> None:
    """Raise NotAnAutomorphismGroup unless every generator maps arcs to arcs."""
    arcs = g.arc_codes
    F = g.order
    a, b = np.divmod(arcs, F)
    for j, perm in enumerate(G.flag_perms):
        images = perm[a] * F + perm[b]
        bad = ~np.isin(images, arcs)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise NotAnAutomorphismGroup(
                f"generator {j} maps an edge to a non-edge",
                witness={
                    "generator": j,
                    "edge": _labels(g, [a[k], b[k]]),
                    "image": _labels(g, [perm[a[k]], perm[b[k]]]),
                },
            )


def is_arc_transitive(g: FlagGraph, G: GroupSpec) -> bool:
    check_automorphisms(g, G)
    arcs = g.arc_codes
    if not len(arcs):
        return True
    return len(flag_pair_orbit(G, int(arcs[0]))) == len(arcs)


# -- quotient and design -----------------------------------------------------------------

@dataclass
class QuotientReport:
    partition: list
    quotient_complete: bool
    almost_multicover: bool
    multiplicity: int | None
    block_size: int
    quotient_valency: int
    missing: np.ndarray = dc_field(repr=False, default=None)  # [C, B] -> missing flag or -1

    def to_json(self) -> dict:
        return {
            "num_blocks": len(self.partition),
            "block_size": self.block_size,
            "quotient_complete": self.quotient_complete,
            "quotient_valency": self.quotient_valency,
            "almost_multicover": self.almost_multicover,
            "multiplicity": self.multiplicity,
        }


def quotient_analysis(g: FlagGraph) -> QuotientReport:
    """Quotient of ``g`` by the point fibers of its flags, with the multiplicity m.

    For adjacent fibers C and B the almost-multicover condition asks that the
    neighbours of C inside B are all of B but one flag; m counts the fibers D
    with the same trace on B, and must not depend on the pair.
    """
    sp = g.space
    P, D = sp.num_points, sp.num_directions
    fiber = sp.flag_point
    partition = [np.arange(p * D, (p + 1) * D) for p in range(P)]
    adj = g.adjacency_matrix()
    if adj[fiber[:, None] == fiber[None, :]].any():
        raise InvalidParameters("a point fiber is not an independent set")
    # reach[C, v]: v has a neighbour in fiber C
    reach = np.logical_or.reduceat(adj, np.arange(0, g.order, D), axis=0)
    trace = reach.reshape(P, P, D)  # [C, B, position in B]
    counts = trace.sum(axis=2)
    quot = counts > 0
    np.fill_diagonal(quot, False)
    off = ~np.eye(P, dtype=bool)
    complete = bool(quot[off].all())
    qval = int(quot.sum(axis=1).max()) if P else 0
    adjacent = np.argwhere(quot)
    bad = counts[quot] != D - 1
    if bad.any():
        C, B = adjacent[int(np.flatnonzero(bad)[0])]
        raise NotAlmostMulticover(
            f"fiber pair has trace of size {counts[C, B]}, expected {D - 1}",
            witness={"C": sp.point(int(C)), "B": sp.point(int(B)),
                     "trace": _labels(g, np.flatnonzero(trace[C, B]) + B * D)},
        )
    missing = np.full((P, P), -1, dtype=np.int64)
    missing[quot] = np.argmin(trace[quot], axis=1)
    missing[quot] += (np.nonzero(quot)[1] * D)
    # m per adjacent (C, B): fibers D adjacent to B missing the same flag
    mults = set()
    for B in range(P):
        col = missing[:, B]
        col = col[col >= 0]
        if len(col):
            mults.update(np.unique(col, return_counts=True)[1].tolist())
    multiplicity = mults.pop() if len(mults) == 1 else None
    if mults:
        raise InternalMismatch("multiplicity differs between adjacent block pairs")
    return QuotientReport(partition, complete, True, multiplicity, D, qval, missing)


@dataclass
class IncidenceStructure:
    points: list
    blocks: list
    parameters: tuple | None  # (v, k, lambda)

    def to_json(self) -> dict:
        v, k, lam = self.parameters
        return {"v": v, "k": k, "lambda": lam, "num_blocks": len(self.blocks)}

    def is_linear_space(self) -> bool:
        return self.parameters is not None and self.parameters[2] == 1


def _two_design_parameters(num_points: int, blocks: list) -> tuple:
    sizes = {len(b) for b in blocks}
    if not blocks or len(sizes) != 1:
        raise NotA2Design("blocks are empty or of unequal sizes", witness=sorted(sizes))
    inc = np.zeros((len(blocks), num_points), dtype=np.int64)
    for i, b in enumerate(blocks):
        inc[i, list(b)] = 1
    cover = inc.T @ inc
    off = cover[~np.eye(num_points, dtype=bool)]
    if len(off) and len(np.unique(off)) != 1:
        x, y = np.argwhere((cover != off[0]) & ~np.eye(num_points, dtype=bool))[0]
        raise NotA2Design("point pairs are covered unequally often",
                          witness={"pair": [int(x), int(y)], "count": int(cover[x, y])})
    return num_points, sizes.pop(), int(off[0]) if len(off) else 0


def design_recover(g: FlagGraph, G: GroupSpec | None = None,
                   report: QuotientReport | None = None) -> IncidenceStructure:
    """The 2-design on fibers whose blocks are {B} together with the fibers missing a fixed flag of B."""
    report = report or quotient_analysis(g)
    sp = g.space
    P = sp.num_points
    by_flag = {}
    for alpha in range(g.order):
        B = int(sp.flag_point[alpha])
        members = np.flatnonzero(report.missing[:, B] == alpha)
        by_flag[alpha] = frozenset([B, *members.tolist()])
    blocks = sorted(set(by_flag.values()), key=sorted)
    if G is not None and len(G.perms):
        # images of one block under G must give every block
        base = sorted(by_flag[0])
        seen = {frozenset(base)}
        frontier = [np.array(base)]
        while frontier:
            nxt = []
            for b in frontier:
                for perm in G.perms:
                    img = frozenset(perm[b].tolist())
                    if img not in seen:
                        seen.add(img)
                        nxt.append(np.array(sorted(img)))
            frontier = nxt
        if seen != set(blocks):
            raise InternalMismatch("G-images of one block differ from the blocks built from every flag")
    params = _two_design_parameters(P, blocks)
    return IncidenceStructure(list(range(P)), [sorted(b) for b in blocks], params)


# -- feasibility -------------------------------------------------------------------------

@dataclass
class FeasibilityReport:
    flag_transitive: bool
    three_flags_per_point: bool
    lines_meet_once_at_point: bool
    flag_stabilizer_transitive_on_line: bool
    pair_stabilizer_transitive_on_flags: bool
    point_two_transitive: bool
    transitive_off_line: bool
    two_transitive_on_directions: bool

    @property
    def feasible(self) -> bool:
        return all((self.flag_transitive, self.three_flags_per_point, self.lines_meet_once_at_point,
                    self.flag_stabilizer_transitive_on_line, self.pair_stabilizer_transitive_on_flags))

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible,
            "flag_transitive": self.flag_transitive,
            "three_flags_per_point": self.three_flags_per_point,
            "lines_meet_once_at_point": self.lines_meet_once_at_point,
            "flag_stabilizer_transitive_on_line": self.flag_stabilizer_transitive_on_line,
            "pair_stabilizer_transitive_on_flags": self.pair_stabilizer_transitive_on_flags,
            "point_2_transitive": self.point_two_transitive,
            "stabilizer_of_flag_transitive_off_line": self.transitive_off_line,
            "origin_stabilizer_2_transitive_on_directions": self.two_transitive_on_directions,
        }


def _reaches(perms: np.ndarray, seed: int, targets) -> bool:
    orbit = bfs_orbit(perms, seed)[0]
    return bool(np.isin(np.asarray(targets), orbit).all())


def feasibility_check(G: GroupSpec) -> FeasibilityReport:
    """Whether the orbit of the flag (0, <e1>) can serve as a flag-graph vertex set (tau = e1)."""
    sp = G.space
    N, D = sp.num_points, sp.num_directions
    sigma, tau = 0, sp.basis(0)
    L = int(sp.line_of[sp.dir_of_vec[tau], sigma])
    flag0 = sp.flag_id(sigma, int(sp.dir_of_vec[tau]))
    on_L = sp.line_points[L]
    off_L = np.setdiff1d(np.arange(N), on_L)
    flags_at_sigma = np.arange(sigma * D, (sigma + 1) * D)

    flag_transitive = _reaches(G.flag_perms, flag0, np.arange(sp.num_flags))
    enough_flags = D >= 3
    lines = sp.flag_line[flags_at_sigma]
    inc = sp.incidence[lines].astype(np.int64)
    meet = inc @ inc.T
    meet_once = bool((meet[~np.eye(D, dtype=bool)] == 1).all())

    stab_flag = GroupSpec.from_perms(sp, schreier_generators(G, flag0, "flag")[0])
    rest_of_L = on_L[on_L != sigma]
    along_line = (_reaches(stab_flag.perms, int(rest_of_L[0]), rest_of_L)
                  if len(stab_flag.perms) else len(rest_of_L) <= 1)
    transitive_off_line = (_reaches(stab_flag.perms, int(off_L[0]), off_L)
                           if len(stab_flag.perms) else len(off_L) <= 1)

    pair = sigma * N + tau
    stab_pair = GroupSpec.from_perms(sp, schreier_generators(G, pair, "point_pair")[0])
    rest = flags_at_sigma[flags_at_sigma != flag0]
    around_point = (_reaches(stab_pair.flag_perms, int(rest[0]), rest)
                    if len(stab_pair.perms) else len(rest) <= 1)

    pairs = np.array([a * N + b for a in range(N) for b in range(N) if a != b])
    two_trans = _reaches(G.perms_for("point_pair"), int(pairs[0]), pairs)
    stab0 = GroupSpec.from_perms(sp, schreier_generators(G, sigma, "point")[0])
    dir2 = is_two_transitive_on_directions(stab0) if len(stab0.perms) else D <= 1

    report = FeasibilityReport(flag_transitive, enough_flags, meet_once, along_line, around_point,
                               two_trans, transitive_off_line, dir2)
    if two_trans and flag_transitive and enough_flags:
        # for 2-point-transitive groups, feasibility reduces to G_{sigma,L} on V \ L
        if report.feasible != transitive_off_line:
            raise InternalMismatch(
                "the four conditions disagree with the transitivity of G_{sigma,L} on V \\ L")
    return report


# -- valency prediction ------------------------------------------------------------------

@dataclass(frozen=True)
class ValencyPrediction:
    """Predicted valency of the graph on the orbital of ((e1,<e1>), (w^r e2,<e2>)).

    ``i`` is the least i <= l with t | (e + r(p^s - 1)) (p^(si) - 1)/(p^s - 1),
    i.e. the number of theta^s omega^e steps needed to bring w^r back into
    w^r <w^t>.  Then ell_c = i (q-1)/t and the valency is (q^2 - q) ell_c.
    ``closed_form`` is i q (q-1)^2 / (t s) (None when not an integer); it
    equals ``valency`` exactly when s = 1.
    """

    t: int
    e: int
    s: int
    r: int
    i: int
    ell_c: int
    valency: int
    closed_form: int | None

    @property
    def closed_form_agrees(self) -> bool:
        return self.closed_form == self.valency

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["closed_form_agrees"] = self.closed_form_agrees
        return out


def predict_valency(q: int, params, r: int) -> ValencyPrediction:
    f = field_of_order(q)
    params = StandardParameters(*params) if isinstance(params, tuple) else params
    params.validate(f)
    if not 0 < r < q:
        raise InvalidParameters(f"r must satisfy 0 < r < q, got {r}")
    p, ell = f.p, f.ell
    t, e, s = params.as_tuple()
    ps1 = p**s - 1
    i = next(
        (k for k in range(1, ell + 1)
         if ((e + r * ps1) * ((p ** (s * k) - 1) // ps1)) % t == 0),
        None,
    )
    if i is None:
        raise InternalMismatch(f"no index i <= {ell} satisfies the divisibility rule")
    ell_c = i * (q - 1) // t
    direct = gl1_orbit_length(f, regenerate(f, params), f.omega_pow(r))
    if direct != ell_c:
        raise InternalMismatch(
            f"divisibility rule gives orbit length {ell_c}, direct enumeration gives {direct}"
        )
    num, den = i * q * (q - 1) ** 2, t * s
    closed = num // den if num % den == 0 else None
    return ValencyPrediction(t, e, s, r, i, ell_c, (q * q - q) * ell_c, closed)


# -- isomorphism -------------------------------------------------------------------------

ISO_VERTEX_CAP = 2000


def _dense(g) -> np.ndarray:
    indptr, indices = _csr(g)
    n = len(indptr) - 1
    adj = np.zeros((n, n), dtype=np.float32)
    adj[np.repeat(np.arange(n), np.diff(indptr)), indices] = 1
    return adj


def _distance_profiles(g) -> np.ndarray:
    indptr, indices = _csr(g)
    n = len(indptr) - 1
    mat = csr_matrix((np.ones(len(indices)), indices, indptr), shape=(n, n))
    dist = shortest_path(mat, unweighted=True, directed=False)
    dist[np.isinf(dist)] = n  # unreachable bucket
    dist = dist.astype(np.int64)
    return np.stack([np.bincount(row, minlength=n + 1) for row in dist])


def _refine(adj1, adj2, c1, c2):
    """Joint colour refinement; colours are canonical across both graphs."""
    n = len(c1)
    while True:
        k = int(max(c1.max(), c2.max())) + 1
        onehot1 = np.zeros((n, k), dtype=np.float32)
        onehot2 = np.zeros((n, k), dtype=np.float32)
        onehot1[np.arange(n), c1] = 1
        onehot2[np.arange(n), c2] = 1
        sig = np.concatenate([
            np.column_stack([c1, adj1 @ onehot1]),
            np.column_stack([c2, adj2 @ onehot2]),
        ]).astype(np.int64)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        n1, n2 = new[:n], new[n:]
        if len(np.unique(new)) == len(np.unique(np.concatenate([c1, c2]))):
            return n1, n2
        c1, c2 = n1, n2


def _same_histogram(c1, c2) -> bool:
    k = int(max(c1.max(), c2.max())) + 1
    return np.array_equal(np.bincount(c1, minlength=k), np.bincount(c2, minlength=k))


def are_isomorphic(g1, g2, cap: int = ISO_VERTEX_CAP) -> bool:
    """Exact isomorphism test: invariant filter, colour refinement, then backtracking."""
    ip1, ix1 = _csr(g1)
    ip2, ix2 = _csr(g2)
    n = len(ip1) - 1
    if n != len(ip2) - 1 or len(ix1) != len(ix2):
        return False
    if n > cap:
        raise SizeCapExceeded(f"{n} vertices exceed the isomorphism cap {cap}")
    if n == 0:
        return True
    if not np.array_equal(np.sort(np.diff(ip1)), np.sort(np.diff(ip2))):
        return False
    t1 = kernels.triangle_counts(ip1, ix1)
    t2 = kernels.triangle_counts(ip2, ix2)
    if not np.array_equal(np.sort(t1), np.sort(t2)):
        return False
    prof1, prof2 = _distance_profiles((ip1, ix1)), _distance_profiles((ip2, ix2))
    init = np.concatenate([np.column_stack([t1, prof1]), np.column_stack([t2, prof2])])
    _, start = np.unique(init, axis=0, return_inverse=True)
    start = start.ravel()
    c1, c2 = start[:n], start[n:]
    if not _same_histogram(c1, c2):
        return False
    adj1, adj2 = _dense((ip1, ix1)), _dense((ip2, ix2))
    return _search(adj1, adj2, c1, c2)


def _search(adj1, adj2, c1, c2) -> bool:
    c1, c2 = _refine(adj1, adj2, c1, c2)
    if not _same_histogram(c1, c2):
        return False
    counts = np.bincount(c1)
    if counts.max() == 1:
        mapping = np.empty(len(c1), dtype=np.int64)
        mapping[np.argsort(c1)] = np.argsort(c2)  # vertex of g1 -> vertex of g2 with equal colour
        return bool(np.array_equal(adj1, adj2[np.ix_(mapping, mapping)]))
    # branch on the smallest non-singleton cell
    cells = np.flatnonzero(counts > 1)
    cell = cells[np.argmin(counts[cells])]
    v = int(np.flatnonzero(c1 == cell)[0])
    fresh = int(max(c1.max(), c2.max())) + 1
    for w in np.flatnonzero(c2 == cell):
        d1, d2 = c1.copy(), c2.copy()
        d1[v] = fresh
        d2[w] = fresh
        if _search(adj1, adj2, d1, d2):
            return True
    return False
