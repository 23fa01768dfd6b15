"""Points, lines and flags of AG(n, q).

Points are tuples of element codes.  Inside an :class:`AffineSpace` they are
also numbered: the index of a point is its coordinate tuple read as a base-q
number with the first coordinate most significant, so index order is the
lexicographic order of coordinate tuples.

Lines are canonical: the direction is scaled to have leading coordinate 1 and
the base is the least point on the line, so equal lines compare equal.
Flags are numbered point-major; within a point, flags follow direction order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    CoincidentPoints,
    DimensionMismatch,
    InvalidParameters,
    SizeCapExceeded,
)
from .field import FieldSpec

DEFAULT_POINT_CAP = 1 << 14

Point = tuple


@dataclass(frozen=True, order=True)
class Line:
    direction: tuple
    base: tuple


@dataclass(frozen=True, order=True)
class Flag:
    point: tuple
    line: Line


class LineRelation(enum.Enum):
    EQUAL = "equal"
    INTERSECTING = "intersecting"
    PARALLEL = "parallel"
    SKEW = "skew"


def point_label(u) -> str:
    return ",".join(str(c) for c in u)


def parse_point(text: str) -> tuple:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise InvalidParameters(f"cannot parse point label {text!r}") from None


def flag_label(flag: Flag) -> str:
    return f"{point_label(flag.point)}|{point_label(flag.line.base)};{point_label(flag.line.direction)}"


def parse_flag(text: str) -> Flag:
    try:
        pt, rest = text.split("|")
        base, direction = rest.split(";")
    except ValueError:
        raise InvalidParameters(f"cannot parse flag label {text!r}") from None
    return Flag(parse_point(pt), Line(parse_point(direction), parse_point(base)))


class AffineSpace:
    """AG(n, q) with every point, line and flag enumerated once."""

    def __init__(self, n: int, field: FieldSpec, cap: int = DEFAULT_POINT_CAP):
        if n < 1:
            raise InvalidParameters(f"dimension must be positive, got {n}")
        q = field.q
        if q**n > cap:
            raise SizeCapExceeded(f"AG({n},{q}) has {q**n} points, cap is {cap}")
        self.n = n
        self.field = field
        self.q = q
        self.num_points = q**n
        self.num_directions = (q**n - 1) // (q - 1)
        self.lines_per_direction = q ** (n - 1)
        self.num_lines = self.num_directions * self.lines_per_direction
        self.num_flags = self.num_points * self.num_directions

        idx = np.arange(self.num_points, dtype=np.int64)
        place = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self._place = place
        self.coords = (idx[:, None] // place[None, :]) % q

        # direction of every nonzero vector: scale by the inverse of its
        # leading nonzero coordinate
        nz = self.coords != 0
        lead_pos = np.argmax(nz, axis=1)
        lead = self.coords[idx, lead_pos]
        inv_lead = field.inv_table[lead]
        normalized = field.vmul(self.coords, inv_lead[:, None])
        norm_idx = self.encode(normalized)
        norm_idx[0] = 0
        is_dir = (norm_idx == idx) & (idx != 0)
        self.direction_points = idx[is_dir]
        dir_rank = np.full(self.num_points, -1, dtype=np.int64)
        dir_rank[self.direction_points] = np.arange(len(self.direction_points))
        self.dir_of_vec = np.where(idx == 0, -1, dir_rank[norm_idx])
        assert len(self.direction_points) == self.num_directions

        # coset decomposition per direction
        scalars = np.arange(q, dtype=np.int64)
        line_of = np.full((self.num_directions, self.num_points), -1, dtype=np.int64)
        line_points = np.zeros((self.num_lines, q), dtype=np.int64)
        for d, dvec in enumerate(self.direction_points):
            multiples = field.vmul(scalars[:, None], self.coords[dvec][None, :])
            # every point plus every multiple of the direction
            members = self.encode(
                field.vadd(self.coords[:, None, :], multiples[None, :, :])
            )
            members.sort(axis=1)
            bases = members[:, 0]
            uniq = np.unique(bases)
            line_ids = d * self.lines_per_direction + np.searchsorted(uniq, bases)
            line_of[d] = line_ids
            line_points[d * self.lines_per_direction + np.arange(len(uniq))] = members[uniq]
        self.line_of = line_of
        self.line_points = line_points
        self.line_dir = np.arange(self.num_lines) // self.lines_per_direction
        self.line_base = line_points[:, 0]

        f = np.arange(self.num_flags, dtype=np.int64)
        self.flag_point = f // self.num_directions
        self.flag_dir = f % self.num_directions
        self.flag_line = line_of[self.flag_dir, self.flag_point]

        for arr in (self.coords, self.dir_of_vec, self.line_of, self.line_points,
                    self.flag_point, self.flag_dir, self.flag_line):
            arr.setflags(write=False)

    def __repr__(self):
        return f"AG({self.n},{self.q})"

    # -- index <-> value conversions ------------------------------------------

    def encode(self, coords) -> np.ndarray:
        return (np.asarray(coords, dtype=np.int64) * self._place).sum(axis=-1)

    def point_index(self, u) -> int:
        u = tuple(u)
        if len(u) != self.n:
            raise DimensionMismatch(f"point {u} is not in AG({self.n},{self.q})")
        for c in u:
            self.field.check(c)
        return int(self.encode(u))

    def point(self, i: int) -> tuple:
        return tuple(int(c) for c in self.coords[i])

    def line(self, i: int) -> Line:
        return Line(self.point(self.direction_points[self.line_dir[i]]),
                    self.point(self.line_base[i]))

    def line_index(self, line: Line) -> int:
        d = self.dir_of_vec[self.point_index(line.direction)]
        if d < 0 or self.direction_points[d] != self.point_index(line.direction):
            raise InvalidParameters(f"{line} has a non-canonical direction")
        i = int(self.line_of[d, self.point_index(line.base)])
        if self.line_base[i] != self.point_index(line.base):
            raise InvalidParameters(f"{line} has a non-canonical base")
        return i

    def flag(self, i: int) -> Flag:
        return Flag(self.point(self.flag_point[i]), self.line(self.flag_line[i]))

    def flag_index(self, flag: Flag) -> int:
        u = self.point_index(flag.point)
        li = self.line_index(flag.line)
        if not self.incident(u, li):
            raise InvalidParameters(f"point {flag.point} is not on {flag.line}")
        return u * self.num_directions + int(self.line_dir[li])

    def make_flag(self, point, line: Line) -> Flag:
        """Validated flag constructor."""
        flag = Flag(tuple(point), line)
        self.flag_index(flag)
        return flag

    def flag_id(self, u: int, d: int) -> int:
        return u * self.num_directions + d

    def incident(self, u: int, line: int) -> bool:
        return int(self.line_of[self.line_dir[line], u]) == line

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean line-by-point incidence matrix."""
        inc = np.zeros((self.num_lines, self.num_points), dtype=bool)
        inc[np.repeat(np.arange(self.num_lines), self.q), self.line_points.ravel()] = True
        return inc

    def flag_labels(self) -> list[str]:
        return [flag_label(self.flag(i)) for i in range(self.num_flags)]

    # -- vector arithmetic on point indices -----------------------------------

    def vadd(self, i, j):
        return self.encode(self.field.vadd(self.coords[i], self.coords[j]))

    def vsub(self, i, j):
        return self.encode(self.field.vsub(self.coords[i], self.coords[j]))

    def scale(self, a: int, i):
        return self.encode(self.field.vmul(a, self.coords[i]))

    def basis(self, k: int) -> int:
        """Index of the standard basis vector e_{k+1}."""
        return int(self._place[k])

    # -- geometry -------------------------------------------------------------

    def line_through_index(self, u: int, v: int) -> int:
        if u == v:
            raise CoincidentPoints(f"points {self.point(u)} coincide")
        d = int(self.dir_of_vec[int(self.vsub(v, u))])
        return int(self.line_of[d, u])

    def line_through(self, u, v) -> Line:
        return self.line(self.line_through_index(self.point_index(u), self.point_index(v)))

    def line_points_of(self, line: Line) -> list[tuple]:
        return [self.point(i) for i in self.line_points[self.line_index(line)]]

    def classify_index(self, a: int, b: int) -> LineRelation:
        if a == b:
            return LineRelation.EQUAL
        if self.line_dir[a] == self.line_dir[b]:
            return LineRelation.PARALLEL
        if np.intersect1d(self.line_points[a], self.line_points[b]).size:
            return LineRelation.INTERSECTING
        return LineRelation.SKEW

    def classify(self, a: Line, b: Line) -> LineRelation:
        if len(a.direction) != len(b.direction):
            raise DimensionMismatch("lines live in spaces of different dimension")
        return self.classify_index(self.line_index(a), self.line_index(b))

    @cached_property
    def relation_matrix(self) -> np.ndarray:
        """Line-by-line relation codes: 0 equal, 1 intersecting, 2 parallel, 3 skew."""
        inc = self.incidence.astype(np.int32)
        meet = inc @ inc.T
        same_dir = self.line_dir[:, None] == self.line_dir[None, :]
        rel = np.full(meet.shape, 3, dtype=np.int8)
        rel[meet == 1] = 1
        rel[same_dir] = 2
        np.fill_diagonal(rel, 0)
        return rel

    def compatible_matrix(self) -> np.ndarray:
        """Flag-by-flag matrix of compatible ordered pairs (a.point off b.line and vice versa)."""
        inc = self.incidence
        fp, fl = self.flag_point, self.flag_line
        a_on_b = inc[fl[None, :], fp[:, None]]
        return ~a_on_b & ~a_on_b.T

    def is_compatible_index(self, a: int, b: int) -> bool:
        return not (
            self.incident(int(self.flag_point[a]), int(self.flag_line[b]))
            or self.incident(int(self.flag_point[b]), int(self.flag_line[a]))
        )

    def is_compatible(self, a: Flag, b: Flag) -> bool:
        return self.is_compatible_index(self.flag_index(a), self.flag_index(b))


RELATION_CODES = {
    LineRelation.EQUAL: 0,
    LineRelation.INTERSECTING: 1,
    LineRelation.PARALLEL: 2,
    LineRelation.SKEW: 3,
}


@lru_cache(maxsize=32)
def affine_space(n: int, field: FieldSpec) -> AffineSpace:
    return AffineSpace(n, field)


def all_lines(n: int, field: FieldSpec) -> list[Line]:
    space = affine_space(n, field)
    return [space.line(i) for i in range(space.num_lines)]


def all_flags(n: int, field: FieldSpec) -> list[Flag]:
    space = affine_space(n, field)
    return [space.flag(i) for i in range(space.num_flags)]


def line_through(field: FieldSpec, u, v) -> Line:
    if len(u) != len(v):
        raise DimensionMismatch("points of different dimension")
    return affine_space(len(u), field).line_through(u, v)


def line_points(field: FieldSpec, line: Line) -> list[tuple]:
    return affine_space(len(line.base), field).line_points_of(line)


def classify(field: FieldSpec, a: Line, b: Line) -> LineRelation:
    if len(a.base) != len(b.base):
        raise DimensionMismatch("lines live in spaces of different dimension")
    return affine_space(len(a.base), field).classify(a, b)


def is_compatible(field: FieldSpec, a: Flag, b: Flag) -> bool:
    if len(a.point) != len(b.point):
        raise DimensionMismatch("flags live in spaces of different dimension")
    return affine_space(len(a.point), field).is_compatible(a, b)
