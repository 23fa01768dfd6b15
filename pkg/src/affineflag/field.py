"""Exact arithmetic in GF(p^ell).

Elements are plain ``int`` codes in ``[0, q)``: the base-p digits of a code
are the polynomial coefficients, constant term least significant.  Every
table (log, antilog, inverse, Frobenius) is built once in :func:`field_make`
and the resulting :class:`FieldSpec` is never mutated afterwards.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import (
    DivisionByZero,
    InvalidParameters,
    LogOfZero,
    NoPrimitiveFound,
    NotPrime,
    SizeCapExceeded,
)

DEFAULT_FIELD_CAP = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial helpers over F_p; lists are constant-term first ------------

def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while True:
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            return a
        factor = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p


def _monic_polys(p: int, degree: int):
    """Monic polynomials of one degree, lexicographic from x^(d-1) down."""
    for tail in itertools.product(range(p), repeat=degree):
        # tail is (a_{d-1}, ..., a_0)
        yield list(reversed(tail)) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(p, d):
            if not _poly_mod(poly, div, p):
                return False
    return True


def _digits(code: int, p: int, ell: int) -> list[int]:
    out = []
    for _ in range(ell):
        out.append(code % p)
        code //= p
    return out


def _undigits(digits, p: int) -> int:
    code = 0
    for c in reversed(digits):
        code = code * p + c
    return code


class FieldSpec:
    """GF(p^ell) with a fixed modulus, primitive element and lookup tables.

    ``modulus`` is stored highest coefficient first (the ordering used to pick
    the lexicographically smallest irreducible).
    """

    __slots__ = (
        "p", "ell", "q", "modulus", "omega", "exp", "log", "inv_table",
        "neg_table", "frob_tables", "_pows",
    )

    def __init__(self, p, ell, modulus, omega, exp, log):
        self.p = p
        self.ell = ell
        self.q = p**ell
        self.modulus = tuple(modulus)
        self.omega = omega
        self.exp = exp
        self.log = log
        self._pows = np.array([p**i for i in range(ell)], dtype=np.int64)
        q1 = self.q - 1
        inv = np.zeros(self.q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % q1]
        self.inv_table = inv
        codes = np.arange(self.q, dtype=np.int64)
        digs = (codes[:, None] // self._pows[None, :]) % p
        self.neg_table = (((-digs) % p) * self._pows).sum(axis=1)
        frob = np.zeros((ell, self.q), dtype=np.int64)
        for k in range(ell):
            frob[k, 1:] = exp[(log[1:] * p**k) % q1]
        self.frob_tables = frob
        for arr in (exp, log, inv, self.neg_table, frob, self._pows):
            arr.setflags(write=False)

    def __repr__(self):
        return f"GF({self.p}^{self.ell})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.ell, self.modulus, self.omega)
            == (other.p, other.ell, other.modulus, other.omega)
        )

    def __hash__(self):
        return hash((self.p, self.ell, self.modulus, self.omega))

    @property
    def name(self) -> str:
        return f"GF({self.p}^{self.ell})"

    def to_json(self) -> dict:
        return {"field": self.name, "modulus": list(self.modulus), "omega": self.omega}

    def elements(self) -> range:
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise InvalidParameters(f"{a} is not an element code of {self.name}")
        return a

    # -- scalar arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.ell == 1:
            return (a + b) % p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, int(self.neg_table[b]))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self.name}")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero(f"division by zero in {self.name}")
        return self.mul(a, int(self.inv_table[b]))

    def power(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise DivisionByZero("0 to a negative power")
            return 1 if k == 0 else 0
        return int(self.exp[(self.log[a] * k) % (self.q - 1)])

    def omega_pow(self, r: int) -> int:
        return int(self.exp[r % (self.q - 1)])

    def frobenius(self, a: int, k: int = 1) -> int:
        return int(self.frob_tables[k % self.ell, a])

    def dlog(self, a: int) -> int:
        if a == 0:
            raise LogOfZero(f"discrete log of 0 in {self.name}")
        return int(self.log[a])

    def mult_order(self, a: int) -> int:
        r = self.dlog(a)
        from math import gcd

        return (self.q - 1) // gcd(r, self.q - 1)

    # -- vectorised arithmetic on integer arrays ----------------------------

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.ell == 1:
            return (a + b) % self.p
        p, pw = self.p, self._pows
        da = (a[..., None] // pw) % p
        db = (b[..., None] // pw) % p
        return (((da + db) % p) * pw).sum(axis=-1)

    def vsub(self, a, b):
        return self.vadd(a, self.neg_table[np.asarray(b, dtype=np.int64)])

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vfrob(self, a, k: int):
        return self.frob_tables[k % self.ell][np.asarray(a, dtype=np.int64)]

    # -- polynomial view ------------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        """Coefficient list of ``a``, constant term first."""
        return _digits(a, self.p, self.ell)

    def from_coeffs(self, coeffs) -> int:
        coeffs = [c % self.p for c in coeffs]
        coeffs += [0] * (self.ell - len(coeffs))
        if len(coeffs) > self.ell:
            m = list(reversed(self.modulus))
            coeffs = _poly_mod(coeffs, m, self.p)
            coeffs += [0] * (self.ell - len(coeffs))
        return _undigits(coeffs, self.p)


def _polymulmod_code(a: int, b: int, p: int, ell: int, m_low: list[int]) -> int:
    da, db = _digits(a, p, ell), _digits(b, p, ell)
    prod = [0] * (2 * ell - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
    red = _poly_mod(prod, m_low, p)
    red += [0] * (ell - len(red))
    return _undigits(red, p)


def _code_pow(a: int, k: int, p: int, ell: int, m_low: list[int]) -> int:
    result, base = 1 % (p**ell), a
    while k:
        if k & 1:
            result = _polymulmod_code(result, base, p, ell, m_low)
        base = _polymulmod_code(base, base, p, ell, m_low)
        k >>= 1
    return result


@lru_cache(maxsize=None)
def _field_make_cached(p: int, ell: int) -> FieldSpec:
    q = p**ell
    modulus_low = None
    for cand in _monic_polys(p, ell):
        if is_irreducible(cand, p):
            modulus_low = cand
            break
    assert modulus_low is not None  # an irreducible of every degree exists

    q1 = q - 1
    factors = prime_factors(q1) if q1 > 1 else []
    omega = None
    for code in range(1, q):
        if all(_code_pow(code, q1 // r, p, ell, modulus_low) != 1 for r in factors):
            omega = code
            break
    if omega is None:
        raise NoPrimitiveFound(f"no primitive element found in GF({p}^{ell})")

    exp = np.zeros(max(q1, 1), dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    x = 1
    for i in range(q1):
        exp[i] = x
        log[x] = i
        x = _polymulmod_code(x, omega, p, ell, modulus_low)
    if x != 1 or len(set(exp.tolist())) != q1:
        raise NoPrimitiveFound(f"element {omega} is not primitive in GF({p}^{ell})")
    return FieldSpec(p, ell, tuple(reversed(modulus_low)), omega, exp, log)


def field_make(p: int, ell: int = 1, cap: int = DEFAULT_FIELD_CAP) -> FieldSpec:
    """Build GF(p^ell) with the lexicographically smallest irreducible modulus.

    The primitive element is the smallest code of multiplicative order
    ``p**ell - 1``.  Results are cached, so equal arguments give the same
    object.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if ell < 1:
        raise InvalidParameters(f"exponent must be positive, got {ell}")
    if p**ell > cap:
        raise SizeCapExceeded(f"GF({p}^{ell}) exceeds the field cap {cap}")
    return _field_make_cached(p, ell)


def field_of_order(q: int, cap: int = DEFAULT_FIELD_CAP) -> FieldSpec:
    """GF(q) for a prime power q."""
    if q < 2:
        raise InvalidParameters(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    ell, rest = 0, q
    while rest % p == 0:
        rest //= p
        ell += 1
    if rest != 1:
        raise InvalidParameters(f"{q} is not a prime power")
    return field_make(p, ell, cap=cap)


def arith(f: FieldSpec, a: int, b: int, op: str) -> int:
    """Binary field operation selected by name: add, sub, mul or div."""
    try:
        fn = {"add": f.add, "sub": f.sub, "mul": f.mul, "div": f.div}[op]
    except KeyError:
        raise InvalidParameters(f"unknown field operation {op!r}") from None
    return fn(a, b)


def frobenius(f: FieldSpec, a: int, k: int = 1) -> int:
    return f.frobenius(a, k)


def dlog(f: FieldSpec, a: int) -> int:
    return f.dlog(a)
