"""Brute-force reference implementations used only by the tests.

Nothing here imports affineflag internals: field arithmetic goes through
sympy's dense polynomial routines, geometry through explicit point sets, and
graph invariants through networkx.
"""

import itertools

import networkx as nx
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem


class PolyField:
    """GF(p^l) as polynomials modulo a given modulus (highest coefficient first)."""

    def __init__(self, p, modulus):
        self.p = p
        self.modulus = list(modulus)
        self.ell = len(modulus) - 1
        self.q = p**self.ell

    def poly(self, code):
        low = [(code // self.p**i) % self.p for i in range(self.ell)]
        return list(reversed(low)) or [0]

    def code(self, poly):
        poly = list(poly)
        return sum(c * self.p**i for i, c in enumerate(reversed(poly)))

    def add(self, a, b):
        pa, pb = self.poly(a), self.poly(b)
        return self.code([(x + y) % self.p for x, y in zip(pa, pb)])

    def neg(self, a):
        return self.code([(-x) % self.p for x in self.poly(a)])

    def mul(self, a, b):
        prod = gf_mul(self.poly(a), self.poly(b), self.p, ZZ)
        return self.code(gf_rem(prod, self.modulus, self.p, ZZ) or [0])

    def power(self, a, k):
        out = 1
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def order(self, a):
        x, k = a, 1
        while x != 1:
            x, k = self.mul(x, a), k + 1
        return k

    def elements(self):
        return range(self.q)


def smallest_irreducible(p, ell):
    """Least monic irreducible, comparing coefficient lists from the top."""
    for tail in itertools.product(range(p), repeat=ell):
        cand = [1, *tail]
        if gf_irreducible_p(cand, p, ZZ):
            return cand
    raise AssertionError("no irreducible polynomial")


def oracle_field(q):
    p = next(d for d in range(2, q + 1) if q % d == 0)
    ell = 0
    while p**ell < q:
        ell += 1
    return PolyField(p, smallest_irreducible(p, ell))


# -- geometry ------------------------------------------------------------------------

def points(F, n):
    return list(itertools.product(range(F.q), repeat=n))


def vadd(F, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vscale(F, c, u):
    return tuple(F.mul(c, a) for a in u)


def lines(F, n):
    """Every line as a frozenset of points."""
    out = set()
    pts = points(F, n)
    zero = (0,) * n
    for d in pts:
        if d == zero:
            continue
        for b in pts:
            out.add(frozenset(vadd(F, b, vscale(F, t, d)) for t in F.elements()))
    return sorted(out, key=sorted)


def flags(F, n):
    return [(u, L) for L in lines(F, n) for u in sorted(L)]


def affine_span_size(F, pts):
    base = pts[0]
    diffs = [vadd(F, u, tuple(F.neg(x) for x in base)) for u in pts[1:]]
    span = {base}
    for coeffs in itertools.product(range(F.q), repeat=len(diffs)):
        v = base
        for c, d in zip(coeffs, diffs):
            v = vadd(F, v, vscale(F, c, d))
        span.add(v)
    return len(span)


def relation(F, L, N):
    if L == N:
        return "equal"
    meet = len(L & N)
    if meet == 1:
        return "intersecting"
    a, b = sorted(L)[:2], sorted(N)[:2]
    coplanar = affine_span_size(F, a + b) <= F.q**2
    return "parallel" if coplanar else "skew"


def compatible(a, b):
    return a[0] not in b[1] and b[0] not in a[1]


def relation_graph(F, n, rel):
    fl = flags(F, n)
    g = nx.Graph()
    g.add_nodes_from(range(len(fl)))
    for i, j in itertools.combinations(range(len(fl)), 2):
        if compatible(fl[i], fl[j]) and relation(F, fl[i][1], fl[j][1]) == rel:
            g.add_edge(i, j)
    return fl, g


# -- semilinear maps on explicit points ---------------------------------------------------

def apply_map(F, A, v, k, u):
    fu = [F.power(x, F.p**k) if x else 0 for x in u]
    out = []
    for row, shift in zip(A, v):
        acc = shift
        for a, x in zip(row, fu):
            acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return tuple(out)


def closure_of_functions(gens):
    """Group generated by permutations given as tuples (composition closure)."""
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for h in frontier:
            for g in gens:
                e = tuple(g[i] for i in h)
                if e not in seen:
                    seen.add(e)
                    new.append(e)
        frontier = new
    return seen


def gl1_table(F, a, k):
    """The map y -> a * y^(p^k) as a tuple over all field elements."""
    return tuple(F.mul(a, F.power(y, F.p**k)) if y else 0 for y in range(F.q))


# -- graphs ------------------------------------------------------------------------------

def to_networkx(indptr, indices):
    g = nx.Graph()
    n = len(indptr) - 1
    g.add_nodes_from(range(n))
    for v in range(n):
        for w in indices[indptr[v]:indptr[v + 1]]:
            g.add_edge(v, int(w))
    return g


def nx_girth(g):
    best = None
    for r in g.nodes:
        dist, parent = {r: 0}, {r: None}
        queue = [r]
        for x in queue:
            for y in g[x]:
                if y == parent[x]:
                    continue
                if y in dist:
                    c = dist[x] + dist[y] + 1
                    best = c if best is None else min(best, c)
                else:
                    dist[y], parent[y] = dist[x] + 1, x
                    queue.append(y)
    return best
