"""Semilinear affine maps t(A, v, k): u -> A u^(p^k) + v, and groups they generate.

Composition convention: ``g.compose(h)`` (also ``g * h``) applies ``h`` first,
then ``g``.

Groups are never enumerated unless asked (``order``/``elements``).  Orbits and
stabilizers work on the permutation each generator induces on the points,
lines, flags or flag pairs of the ambient :class:`AffineSpace`; the point
action is faithful, so point permutations double as group elements
internally.  Stabilizers come from Schreier generators over a BFS transversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    InvalidParameters,
    InvalidShape,
    NotASubgroup,
    OrbitCapExceeded,
    SizeCapExceeded,
)
from .field import FieldSpec, field_of_order, prime_factors
from .geometry import AffineSpace, Flag, Line, affine_space

DEFAULT_ORBIT_CAP = 10**7
DEFAULT_ELEMENT_CAP = 10**7


# -- small exact linear algebra over a FieldSpec -------------------------------

def identity_matrix(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(f: FieldSpec, A, B) -> tuple:
    n, m, r = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(r):
            acc = 0
            for k in range(m):
                acc = f.add(acc, f.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(f: FieldSpec, A, v) -> tuple:
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            acc = f.add(acc, f.mul(a, x))
        out.append(acc)
    return tuple(out)


def mat_frob(f: FieldSpec, A, k: int) -> tuple:
    return tuple(tuple(f.frobenius(a, k) for a in row) for row in A)


def vec_frob(f: FieldSpec, v, k: int) -> tuple:
    return tuple(f.frobenius(a, k) for a in v)


def _eliminate(f: FieldSpec, A):
    """Gauss-Jordan on [A | I]; returns (det, inverse or None)."""
    n = len(A)
    M = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return 0, None
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = f.neg(det)
        pv = M[col][col]
        det = f.mul(det, pv)
        inv = f.inv(pv)
        M[col] = [f.mul(inv, x) for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                factor = M[r][col]
                M[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(M[r], M[col])]
    return det, tuple(tuple(row[n:]) for row in M)


def det(f: FieldSpec, A) -> int:
    return _eliminate(f, A)[0]


def mat_inv(f: FieldSpec, A) -> tuple:
    d, inv = _eliminate(f, A)
    if inv is None:
        raise InvalidParameters("matrix is singular")
    return inv


# -- maps ---------------------------------------------------------------------

@dataclass(frozen=True)
class SemiAffineMap:
    field: FieldSpec
    A: tuple
    v: tuple
    k: int = 0

    def __post_init__(self):
        A = tuple(tuple(int(a) for a in row) for row in self.A)
        v = tuple(int(x) for x in self.v)
        n = len(v)
        if len(A) != n or any(len(row) != n for row in A):
            raise DimensionMismatch(f"matrix shape does not match vector length {n}")
        for x in v:
            self.field.check(x)
        for row in A:
            for a in row:
                self.field.check(a)
        if det(self.field, A) == 0:
            raise InvalidParameters("linear part is singular")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "k", int(self.k) % self.field.ell)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "SemiAffineMap":
        return cls(field, identity_matrix(n), (0,) * n, 0)

    @classmethod
    def translation(cls, field: FieldSpec, v) -> "SemiAffineMap":
        return cls(field, identity_matrix(len(v)), tuple(v), 0)

    @classmethod
    def linear(cls, field: FieldSpec, A, k: int = 0) -> "SemiAffineMap":
        return cls(field, A, (0,) * len(A), k)

    @property
    def n(self) -> int:
        return len(self.v)

    @property
    def key(self) -> tuple:
        return (self.A, self.v, self.k)

    def is_identity(self) -> bool:
        return self.key == (identity_matrix(self.n), (0,) * self.n, 0)

    def __call__(self, u) -> tuple:
        if len(u) != self.n:
            raise DimensionMismatch(f"point {tuple(u)} has the wrong dimension")
        f = self.field
        image = mat_vec(f, self.A, vec_frob(f, u, self.k))
        return tuple(f.add(a, b) for a, b in zip(image, self.v))

    def compose(self, other: "SemiAffineMap") -> "SemiAffineMap":
        """The map u -> self(other(u))."""
        if other.n != self.n or other.field != self.field:
            raise DimensionMismatch("maps act on different spaces")
        f = self.field
        A = mat_mul(f, self.A, mat_frob(f, other.A, self.k))
        v = mat_vec(f, self.A, vec_frob(f, other.v, self.k))
        v = tuple(f.add(a, b) for a, b in zip(v, self.v))
        return SemiAffineMap(f, A, v, self.k + other.k)

    __mul__ = compose

    def inverse(self) -> "SemiAffineMap":
        f = self.field
        back = (-self.k) % f.ell
        Ainv = mat_inv(f, self.A)
        w = mat_vec(f, Ainv, self.v)
        return SemiAffineMap(
            f,
            mat_frob(f, Ainv, back),
            tuple(f.neg(x) for x in vec_frob(f, w, back)),
            back,
        )

    def to_json(self) -> dict:
        return {"A": [list(r) for r in self.A], "v": list(self.v), "k": self.k}

    @classmethod
    def from_json(cls, field: FieldSpec, data: dict) -> "SemiAffineMap":
        return cls(field, data["A"], data["v"], data.get("k", 0))

    def point_perm(self, space: AffineSpace) -> np.ndarray:
        """Permutation of point indices induced on ``space``."""
        if space.n != self.n or space.field != self.field:
            raise DimensionMismatch("map and space disagree on dimension or field")
        f = self.field
        x = f.vfrob(space.coords, self.k)
        out = np.zeros_like(x)
        for i in range(self.n):
            acc = np.full(len(x), self.v[i], dtype=np.int64)
            for j in range(self.n):
                acc = f.vadd(acc, f.vmul(self.A[i][j], x[:, j]))
            out[:, i] = acc
        return space.encode(out)


def apply(g: SemiAffineMap, obj, space: AffineSpace | None = None):
    """Image of a point, line or flag under ``g``."""
    if isinstance(obj, Flag):
        return Flag(apply(g, obj.point), apply(g, obj.line))
    if isinstance(obj, Line):
        space = space or affine_space(g.n, g.field)
        a = g(obj.base)
        other = tuple(g.field.add(x, y) for x, y in zip(obj.base, obj.direction))
        return space.line_through(a, g(other))
    return g(tuple(obj))


def map_from_point_perm(space: AffineSpace, perm) -> SemiAffineMap:
    """Recover t(A, v, k) from the permutation it induces on the points."""
    perm = np.asarray(perm, dtype=np.int64)
    f, n = space.field, space.n
    v = space.point(perm[0])
    cols = [space.point(space.vsub(perm[space.basis(i)], perm[0])) for i in range(n)]
    A = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    for k in range(f.ell):
        try:
            cand = SemiAffineMap(f, A, v, k)
        except InvalidParameters:
            break
        if np.array_equal(cand.point_perm(space), perm):
            return cand
    raise InvalidParameters("permutation is not induced by a semilinear affine map")


# -- permutation helpers ----------------------------------------------------------

def _invert_perms(P: np.ndarray) -> np.ndarray:
    inv = np.empty_like(P)
    rows = np.arange(P.shape[0])[:, None]
    inv[rows, P] = np.arange(P.shape[1])[None, :]
    return inv


def _compose_perms(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Row-wise outer o inner (inner applied first)."""
    return np.take_along_axis(outer, inner, axis=1)


def bfs_orbit(perms: np.ndarray, seed: int, cap: int = DEFAULT_ORBIT_CAP):
    """Orbit of ``seed`` under index permutations, level by level.

    Returns ``(members, parent, gen)``: ``members`` in BFS order (each level
    sorted), and for every member the position of its BFS parent and the
    generator that reached it (-1 for the seed).
    """
    perms = np.asarray(perms, dtype=np.int64)
    ngen, M = perms.shape
    if not 0 <= seed < M:
        raise InvalidParameters(f"seed {seed} outside the action domain")
    position = np.full(M, -1, dtype=np.int64)
    position[seed] = 0
    members = [np.array([seed], dtype=np.int64)]
    parents = [np.array([-1], dtype=np.int64)]
    gens = [np.array([-1], dtype=np.int64)]
    frontier = members[0]
    start = 0
    total = 1
    while frontier.size and ngen:
        imgs = perms[:, frontier]  # (ngen, len(frontier))
        flat = imgs.ravel()
        src = np.tile(np.arange(len(frontier)), ngen) + start
        gid = np.repeat(np.arange(ngen), len(frontier))
        fresh_mask = position[flat] < 0
        flat, src, gid = flat[fresh_mask], src[fresh_mask], gid[fresh_mask]
        uniq, first = np.unique(flat, return_index=True)
        start += len(frontier)
        position[uniq] = total + np.arange(len(uniq))
        total += len(uniq)
        if total > cap:
            raise OrbitCapExceeded(f"orbit exceeds cap {cap}")
        members.append(uniq)
        parents.append(src[first])
        gens.append(gid[first])
        frontier = uniq
    return np.concatenate(members), np.concatenate(parents), np.concatenate(gens)


def _pair_perms(P: np.ndarray) -> np.ndarray:
    N = P.shape[1]
    return (P[:, :, None] * N + P[:, None, :]).reshape(P.shape[0], N * N)


ACTIONS = ("point", "line", "flag", "direction", "point_pair")


class GroupSpec:
    """A subgroup of AGammaL(n, q) given by generators.

    Construct from maps (``GroupSpec(space, maps)``) or from point
    permutations (``GroupSpec.from_perms``); the other form is derived lazily.
    """

    def __init__(self, space: AffineSpace, generators=(), name=None, params=None,
                 _perms=None):
        self.space = space
        self.name = name
        self.params = dict(params or {})
        if _perms is not None:
            self._maps = None
            self.perms = np.asarray(_perms, dtype=np.int64).reshape(-1, space.num_points)
        else:
            maps = list(generators)
            for g in maps:
                if g.n != space.n or g.field != space.field:
                    raise DimensionMismatch(f"generator does not act on {space}")
            self._maps = maps
            if maps:
                self.perms = np.stack([g.point_perm(space) for g in maps])
            else:
                self.perms = np.zeros((0, space.num_points), dtype=np.int64)
        self.perms.setflags(write=False)

    @classmethod
    def from_perms(cls, space, perms, name=None, params=None):
        return cls(space, name=name, params=params, _perms=perms)

    def __repr__(self):
        label = self.name or "group"
        return f"<{label} on {self.space}, {len(self.perms)} generators>"

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def generators(self) -> list[SemiAffineMap]:
        if self._maps is None:
            self._maps = [map_from_point_perm(self.space, p) for p in self.perms]
        return list(self._maps)

    def to_json(self) -> dict:
        if self.name:
            return {"kind": self.name, "params": self.params}
        return {"generators": [g.to_json() for g in self.generators]}

    # -- induced permutations ---------------------------------------------------

    @cached_property
    def direction_perms(self) -> np.ndarray:
        sp = self.space
        P = self.perms
        if not len(P):
            return np.zeros((0, sp.num_directions), dtype=np.int64)
        origin = P[:, :1]
        vecs = sp.vsub(P[:, sp.direction_points], np.broadcast_to(origin, (len(P), sp.num_directions)))
        return sp.dir_of_vec[vecs]

    @cached_property
    def flag_perms(self) -> np.ndarray:
        sp = self.space
        D = sp.num_directions
        P, dimg = self.perms, self.direction_perms
        out = P[:, sp.flag_point] * D + dimg[:, sp.flag_dir]
        return np.ascontiguousarray(out)

    @cached_property
    def line_perms(self) -> np.ndarray:
        sp = self.space
        P, dimg = self.perms, self.direction_perms
        return sp.line_of[dimg[:, sp.line_dir], P[:, sp.line_base]]

    def perms_for(self, action: str) -> np.ndarray:
        if action == "point":
            return self.perms
        if action == "line":
            return self.line_perms
        if action == "flag":
            return self.flag_perms
        if action == "direction":
            return self.direction_perms
        if action == "point_pair":
            return _pair_perms(self.perms)
        raise InvalidParameters(f"unknown action {action!r}; choose from {ACTIONS}")

    # -- materialisation ----------------------------------------------------------

    def elements(self, cap: int = DEFAULT_ELEMENT_CAP) -> np.ndarray:
        """Every group element as a point permutation (identity first)."""
        N = self.space.num_points
        ident = np.arange(N, dtype=np.int64)
        seen = {ident.tobytes()}
        out = [ident]
        frontier = [ident]
        gens = list(self.perms)
        while frontier:
            new = []
            for h in frontier:
                for g in gens:
                    e = g[h]
                    key = e.tobytes()
                    if key not in seen:
                        seen.add(key)
                        out.append(e)
                        new.append(e)
                        if len(out) > cap:
                            raise SizeCapExceeded(f"group order exceeds cap {cap}")
            frontier = new
        return np.stack(out)

    def order(self, cap: int = DEFAULT_ELEMENT_CAP) -> int:
        return len(self.elements(cap))

    def contains(self, g, cap: int = DEFAULT_ELEMENT_CAP) -> bool:
        perm = g.point_perm(self.space) if isinstance(g, SemiAffineMap) else np.asarray(g)
        key = perm.astype(np.int64).tobytes()
        return any(key == e.tobytes() for e in self.elements(cap))


# -- orbits and stabilizers ------------------------------------------------------

def _object_kind(space: AffineSpace, obj):
    if isinstance(obj, Flag):
        return "flag", space.flag_index(obj)
    if isinstance(obj, Line):
        return "line", space.line_index(obj)
    if isinstance(obj, tuple) and len(obj) == 2 and all(isinstance(x, Flag) for x in obj):
        F = space.num_flags
        return "flag_pair", space.flag_index(obj[0]) * F + space.flag_index(obj[1])
    if isinstance(obj, tuple) and len(obj) == 2 and all(isinstance(x, tuple) for x in obj):
        N = space.num_points
        return "point_pair", space.point_index(obj[0]) * N + space.point_index(obj[1])
    return "point", space.point_index(obj)


def _decode(space: AffineSpace, kind: str, idx: int):
    if kind == "flag":
        return space.flag(idx)
    if kind == "line":
        return space.line(idx)
    if kind == "flag_pair":
        a, b = divmod(idx, space.num_flags)
        return (space.flag(a), space.flag(b))
    if kind == "point_pair":
        a, b = divmod(idx, space.num_points)
        return (space.point(a), space.point(b))
    return space.point(idx)


def flag_pair_orbit(G: GroupSpec, seed_code: int, cap: int = DEFAULT_ORBIT_CAP) -> np.ndarray:
    """Sorted codes ``a*F + b`` of the orbit of a flag pair."""
    F = G.space.num_flags
    if F * F > cap:
        raise OrbitCapExceeded(f"{F * F} flag pairs exceed the orbit cap {cap}")
    visited = np.zeros(F * F, dtype=np.uint8)
    if not len(G.perms):
        return np.array([seed_code], dtype=np.int64)
    return kernels.pair_orbit_closure(G.flag_perms, int(seed_code), visited)


def orbit_indices(G: GroupSpec, seed: int, action: str = "point",
                  cap: int = DEFAULT_ORBIT_CAP) -> np.ndarray:
    if action == "flag_pair":
        return flag_pair_orbit(G, seed, cap)
    return bfs_orbit(G.perms_for(action), seed, cap)[0]


def orbit(G: GroupSpec, seed, cap: int = DEFAULT_ORBIT_CAP) -> list:
    """Orbit of a point, line, flag, point pair or flag pair, in BFS order.

    Flag-pair orbits are returned in code order.
    """
    kind, idx = _object_kind(G.space, seed)
    return [_decode(G.space, kind, int(i)) for i in orbit_indices(G, idx, kind, cap)]


def orbit_generic(generators, seed, act, cap: int = DEFAULT_ORBIT_CAP) -> list:
    """Breadth-first closure of ``seed`` under ``act(g, x)`` for arbitrary hashables."""
    seen = {seed}
    out = [seed]
    frontier = [seed]
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = act(g, x)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    new.append(y)
                    if len(out) > cap:
                        raise OrbitCapExceeded(f"orbit exceeds cap {cap}")
        frontier = new
    return out


def schreier_generators(G: GroupSpec, seed: int, action: str,
                        cap: int = DEFAULT_ORBIT_CAP) -> tuple[np.ndarray, int]:
    """Point permutations generating the stabilizer of ``seed``; also the orbit size."""
    P = G.perms
    N = G.space.num_points
    if not len(P):
        return np.zeros((0, N), dtype=np.int64), 1
    D = G.perms_for(action)
    members, parent, gen = bfs_orbit(D, seed, cap)
    O = len(members)
    U = np.empty((O, N), dtype=np.int64)
    U[0] = np.arange(N)
    # parents always sit in an earlier BFS level
    level_start = 1
    while level_start < O:
        level_end = level_start
        while level_end < O and parent[level_end] < level_start:
            level_end += 1
        sl = slice(level_start, level_end)
        U[sl] = _compose_perms(P[gen[sl]], U[parent[sl]])
        level_start = level_end
    Uinv = _invert_perms(U)
    position = np.full(D.shape[1], -1, dtype=np.int64)
    position[members] = np.arange(O)
    found = []
    for j in range(len(P)):
        target = position[D[j, members]]
        s = _compose_perms(Uinv[target], _compose_perms(np.broadcast_to(P[j], (O, N)), U))
        found.append(s)
    S = np.concatenate(found)
    ident = np.arange(N)
    S = S[~(S == ident).all(axis=1)]
    if len(S):
        S = np.unique(S, axis=0)
    return S, O


def stabilizer_index(G: GroupSpec, seed: int, action: str = "point",
                     cap: int = DEFAULT_ORBIT_CAP) -> GroupSpec:
    S, _ = schreier_generators(G, seed, action, cap)
    return GroupSpec.from_perms(G.space, S, name=None)


def stabilizer(G: GroupSpec, obj, cap: int = DEFAULT_ORBIT_CAP) -> GroupSpec:
    """Stabilizer of a point, ordered point pair, line or flag."""
    kind, idx = _object_kind(G.space, obj)
    if kind == "flag_pair":
        raise InvalidParameters("stabilizers of flag pairs are not supported")
    return stabilizer_index(G, idx, kind, cap)


def is_transitive_indices(G: GroupSpec, domain, action: str) -> bool:
    domain = np.asarray(domain, dtype=np.int64)
    if domain.size == 0:
        raise InvalidParameters("transitivity on an empty domain")
    if action == "flag_pair":
        reached = flag_pair_orbit(G, int(domain[0]))
    else:
        reached = bfs_orbit(G.perms_for(action), int(domain[0]))[0]
    return bool(np.isin(domain, reached).all())


def is_transitive(G: GroupSpec, domain, action: str | None = None) -> bool:
    """True iff the orbit of ``domain[0]`` contains all of ``domain``.

    ``domain`` is either a list of points/lines/flags, or a list of indices
    together with an explicit ``action`` name.
    """
    domain = list(domain)
    if not domain:
        raise InvalidParameters("transitivity on an empty domain")
    if action is None:
        kind = _object_kind(G.space, domain[0])[0]
        idx = [_object_kind(G.space, x)[1] for x in domain]
        return is_transitive_indices(G, idx, kind)
    return is_transitive_indices(G, domain, action)


def is_two_transitive_on_directions(G: GroupSpec) -> bool:
    """Transitivity of G on ordered pairs of distinct directions (points of PG(n-1, q))."""
    Dp = G.direction_perms
    D = G.space.num_directions
    if D < 2:
        return True
    pair = (Dp[:, :, None] * D + Dp[:, None, :]).reshape(len(Dp), D * D)
    reached = bfs_orbit(pair, 0 * D + 1)[0]
    return len(reached) == D * (D - 1)


# -- GammaL(1, q) ------------------------------------------------------------------

# An element (a, k) acts on F_q as y -> a * y^(p^k).

def gl1_compose(f: FieldSpec, x: tuple, y: tuple) -> tuple:
    """x o y (y applied first)."""
    return (f.mul(x[0], f.frobenius(y[0], x[1])), (x[1] + y[1]) % f.ell)


def gl1_apply(f: FieldSpec, x: tuple, y: int) -> int:
    return f.mul(x[0], f.frobenius(y, x[1]))


def gl1_closure(f: FieldSpec, gens, cap: int = DEFAULT_ELEMENT_CAP) -> frozenset:
    gens = [(int(a), int(k) % f.ell) for a, k in gens]
    for a, _ in gens:
        if a == 0:
            raise InvalidParameters("GammaL(1,q) elements need a nonzero scalar")
    ident = (1, 0)
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for h in frontier:
            for g in gens:
                e = gl1_compose(f, g, h)
                if e not in seen:
                    seen.add(e)
                    new.append(e)
        if len(seen) > cap:
            raise SizeCapExceeded(f"subgroup exceeds cap {cap}")
        frontier = new
    return frozenset(seen)


@dataclass(frozen=True, order=True)
class StandardParameters:
    t: int
    e: int
    s: int

    def validate(self, f: FieldSpec) -> "StandardParameters":
        q1 = f.q - 1
        t, e, s = self.t, self.e, self.s
        if not (t > 0 and q1 % t == 0):
            raise InvalidParameters(f"t={t} must be a positive divisor of {q1}")
        if not (s > 0 and f.ell % s == 0):
            raise InvalidParameters(f"s={s} must be a positive divisor of {f.ell}")
        if not (0 <= e < t and (e * q1 // (f.p**s - 1)) % t == 0):
            raise InvalidParameters(f"e={e} violates 0 <= e < t and t | e(q-1)/(p^s-1)")
        return self

    def as_tuple(self) -> tuple:
        return (self.t, self.e, self.s)


def standard_generators(f: FieldSpec, params: StandardParameters) -> list[tuple]:
    """The pair omega^t and (theta^s then multiplication by omega^e)."""
    return [(f.omega_pow(params.t), 0), (f.omega_pow(params.e), params.s % f.ell)]


def regenerate(f: FieldSpec, params: StandardParameters) -> frozenset:
    params.validate(f)
    return gl1_closure(f, standard_generators(f, params))


def standard_form(f: FieldSpec, M) -> StandardParameters:
    """Standard parameters (t, e, s) of a subgroup M of GammaL(1, q)."""
    M = frozenset((int(a), int(k) % f.ell) for a, k in M)
    if (1, 0) not in M or gl1_closure(f, M) != M:
        raise NotASubgroup("element set is not closed under composition")
    q1 = f.q - 1
    t = next(tt for tt in range(1, q1 + 1) if (f.omega_pow(tt), 0) in M)
    frob = sorted((k, f.dlog(a)) for a, k in M if k != 0)
    if frob:
        s, x = frob[0]
        e = x % t
    else:
        s, e = f.ell, 0
    params = StandardParameters(t, e, s).validate(f)
    if regenerate(f, params) != M:
        raise NotASubgroup("standard parameters do not regenerate the subgroup")
    return params


def gl1_orbit_length(f: FieldSpec, M, c: int) -> int:
    orb = {c}
    frontier = [c]
    while frontier:
        new = []
        for y in frontier:
            for g in M:
                z = gl1_apply(f, g, y)
                if z not in orb:
                    orb.add(z)
                    new.append(z)
        frontier = new
    return len(orb)


def membership_SL_H(g: SemiAffineMap, params: StandardParameters) -> bool:
    """Is ``g`` in SL(2,q) x| H, where H is the lift of <omega^t, theta^s omega^e>?

    ``g`` must fix the origin.  Writing g = t(S,0,id) t(Q_u,0,delta) forces
    u = det(A_g); the test is then (u, delta) in Lambda(H).
    """
    if any(g.v):
        raise InvalidShape("membership test needs a map fixing the origin")
    if g.n != 2:
        raise InvalidShape("membership test is for n = 2")
    f = g.field
    u = det(f, g.A)
    if (u, g.k) not in regenerate(f, params):
        return False
    Qinv = ((1, 0), (0, f.inv(u)))
    return det(f, mat_mul(f, g.A, Qinv)) == 1


# -- named catalogue -------------------------------------------------------------

def _translation_maps(space: AffineSpace) -> list[SemiAffineMap]:
    f = space.field
    out = []
    for i in range(space.n):
        for j in range(f.ell):
            v = [0] * space.n
            v[i] = f.omega_pow(j)  # omega^0..omega^(ell-1) span F_q over F_p
            out.append(SemiAffineMap.translation(f, v))
    return out


def _transvections(space: AffineSpace) -> list[SemiAffineMap]:
    f, n = space.field, space.n
    out = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for m in range(f.ell):
                A = [list(r) for r in identity_matrix(n)]
                A[i][j] = f.omega_pow(m)
                out.append(SemiAffineMap.linear(f, A))
    return out


def _diag(f: FieldSpec, n: int, entries) -> tuple:
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def Q(f: FieldSpec, u: int) -> tuple:
    return ((1, 0), (0, u))


def A_c(f: FieldSpec, c: int, k: int) -> tuple:
    """Matrix swapping (e1, <e1>) and (c e2, <e2>) together with theta^k."""
    return ((0, f.inv(f.frobenius(c, k))), (c, 0))


def B_c(f: FieldSpec, c: int, k: int) -> tuple:
    cd = f.frobenius(c, k)
    return ((f.neg(1), f.inv(cd)), (0, f.div(c, cd)))


def translations(n: int, f: FieldSpec) -> GroupSpec:
    sp = affine_space(n, f)
    return GroupSpec(sp, _translation_maps(sp), "Translations", {"n": n, "q": f.q})


def asl(n: int, f: FieldSpec) -> GroupSpec:
    sp = affine_space(n, f)
    return GroupSpec(sp, _translation_maps(sp) + _transvections(sp), "ASL", {"n": n, "q": f.q})


def agl(n: int, f: FieldSpec) -> GroupSpec:
    sp = affine_space(n, f)
    gens = _translation_maps(sp) + _transvections(sp)
    gens.append(SemiAffineMap.linear(f, _diag(f, n, [f.omega] + [1] * (n - 1))))
    return GroupSpec(sp, gens, "AGL", {"n": n, "q": f.q})


def agammal(n: int, f: FieldSpec) -> GroupSpec:
    sp = affine_space(n, f)
    gens = list(agl(n, f).generators)
    if f.ell > 1:
        gens.append(SemiAffineMap.linear(f, identity_matrix(n), 1))
    return GroupSpec(sp, gens, "AGammaL", {"n": n, "q": f.q})


def _extension_matrix(f: FieldSpec, d: int) -> tuple:
    """Companion matrix of the least monic degree-d polynomial over f with a primitive root."""
    if d not in (1, 2, 3):
        raise InvalidParameters("extension degree must be 1, 2 or 3")
    import itertools

    Q_ = f.q**d
    targets = prime_factors(Q_ - 1) if Q_ > 2 else []
    for tail in itertools.product(range(f.q), repeat=d):
        coeffs = list(reversed(tail))  # constant term first, monic
        if d > 1 and any(
            _poly_eval(f, coeffs, x) == 0 for x in range(f.q)
        ):
            continue  # degree <= 3 without roots is irreducible
        if coeffs[0] == 0:
            continue
        C = [[0] * d for _ in range(d)]
        for i in range(1, d):
            C[i][i - 1] = 1
        for i in range(d):
            C[i][d - 1] = f.neg(coeffs[i])
        C = tuple(tuple(r) for r in C)
        if all(_mat_pow(f, C, (Q_ - 1) // r) != identity_matrix(d) for r in targets):
            return C
    raise InvalidParameters("no primitive polynomial found")


def _poly_eval(f, coeffs, x):
    acc = 1  # monic leading term
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _mat_pow(f, A, k):
    out = identity_matrix(len(A))
    base = A
    while k:
        if k & 1:
            out = mat_mul(f, out, base)
        base = mat_mul(f, base, base)
        k >>= 1
    return out


def agammal1(f: FieldSpec, d: int = 1, frobenius: bool = True) -> GroupSpec:
    """AGL(1, q^d) or AGammaL(1, q^d) acting on F_{q^d} = F_q^d, i.e. on AG(d, q).

    Multiplication by a primitive element is its companion matrix; the
    Frobenius z -> z^p of the big field is semilinear over F_q.
    """
    sp = affine_space(d, f)
    C = _extension_matrix(f, d)
    gens = _translation_maps(sp) + [SemiAffineMap.linear(f, C)]
    name = "AGL1"
    if frobenius:
        name = "AGammaL1"
        # column i holds the coordinates of x^(i p), i.e. C^(ip) e1
        cols = []
        for i in range(d):
            M = _mat_pow(f, C, i * f.p)
            cols.append([M[r][0] for r in range(d)])
        A = tuple(tuple(cols[j][r] for j in range(d)) for r in range(d))
        frob = SemiAffineMap.linear(f, A, 1)
        if not frob.is_identity():
            gens.append(frob)
    return GroupSpec(sp, gens, name, {"q": f.q, "d": d})


def sl2_semidirect_h(f: FieldSpec, params: StandardParameters) -> GroupSpec:
    """Translations, SL(2,q) and the lift H of <omega^t, theta^s omega^e> via Q_u."""
    params = StandardParameters(*params) if isinstance(params, tuple) else params
    params.validate(f)
    sp = affine_space(2, f)
    gens = _translation_maps(sp) + _transvections(sp)
    for a, k in standard_generators(f, params):
        m = SemiAffineMap.linear(f, Q(f, a), k)
        if not m.is_identity():
            gens.append(m)
    return GroupSpec(sp, gens, "SL2_semidirect_H",
                     {"q": f.q, "t": params.t, "e": params.e, "s": params.s})


def sl2p_c(p: int, ell_elt: int) -> GroupSpec:
    """Translations and SL(2,p) x| <C_l>, C_l = diag(1, l), over the prime field."""
    f = field_of_order(p)
    if f.ell != 1:
        raise InvalidParameters(f"{p} is not prime")
    ell_elt %= p
    if ell_elt == 0:
        raise InvalidParameters("C_l needs a nonzero l")
    sp = affine_space(2, f)
    gens = _translation_maps(sp) + _transvections(sp)
    if ell_elt != 1:
        gens.append(SemiAffineMap.linear(f, Q(f, ell_elt)))
    return GroupSpec(sp, gens, "SL2p_C", {"p": p, "l": ell_elt})


def sl2p_c_params(p: int, ell_elt: int) -> StandardParameters:
    """Standard parameters of <l> as a subgroup of GL(1, p)."""
    f = field_of_order(p)
    t = gcd(f.dlog(ell_elt % p), p - 1)
    return StandardParameters(t if t else p - 1, 0, 1)


def named_group(kind: str, **params) -> GroupSpec:
    """Catalogue constructor.

    Kinds: Translations, ASL, AGL, AGammaL (n, q); AGL1, AGammaL1 (q, d);
    SL2_semidirect_H (q, t, e, s); SL2p_C (p, l).
    """
    try:
        if kind in ("Translations", "ASL", "AGL", "AGammaL"):
            f = field_of_order(params["q"])
            build = {"Translations": translations, "ASL": asl, "AGL": agl,
                     "AGammaL": agammal}[kind]
            return build(params["n"], f)
        if kind in ("AGL1", "AGammaL1"):
            f = field_of_order(params["q"])
            return agammal1(f, params.get("d", 1), frobenius=kind == "AGammaL1")
        if kind == "SL2_semidirect_H":
            f = field_of_order(params["q"])
            return sl2_semidirect_h(f, StandardParameters(params["t"], params["e"], params["s"]))
        if kind == "SL2p_C":
            return sl2p_c(params["p"], params["l"])
    except KeyError as exc:
        raise InvalidParameters(f"missing parameter {exc} for {kind}") from None
    raise InvalidParameters(f"unknown group kind {kind!r}")
