"""Finite field arithmetic over GF(p^k).

Elements are integers in ``[0, q)``.  The base-p digits of an element are
the coefficients of a polynomial over F_p, lowest degree first, so element
values double as array indices.
"""

from __future__ import annotations

import itertools
from typing import List, Optional, Tuple

import numpy as np

FieldElement = int

# Above this order the q x q tables get too large; fall back to polynomial arithmetic.
TABLE_LIMIT = 1 << 12


class NotAPrimePower(ValueError):
    """Raised when a field order is not of the form p^k."""


def prime_power_decomposition(q: int) -> Optional[Tuple[int, int]]:
    """Return ``(p, k)`` with ``q == p**k`` and p prime, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
        p += 1
    return q, 1


def is_prime_power(q: int) -> bool:
    return prime_power_decomposition(q) is not None


def next_prime_power(q: int) -> int:
    """Smallest prime power strictly greater than ``q``."""
    r = max(q + 1, 2)
    while not is_prime_power(r):
        r += 1
    return r


# -- polynomials over F_p as coefficient lists, low degree first ---------------

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: List[int], m: List[int], p: int) -> List[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim([c % p for c in a[:dm]])


def _is_irreducible(m: List[int], p: int) -> bool:
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(m, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> List[int]:
    """Lexicographically smallest monic irreducible of degree ``k`` over F_p.

    Coefficient lists are compared low-degree-first.
    """
    for low in itertools.product(range(p), repeat=k):
        m = list(low) + [1]
        if k == 1 or (m[0] != 0 and _is_irreducible(m, p)):
            return m
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


class Field:
    """The field with ``q = p**k`` elements.

    Immutable after construction.  For ``q <= 4096`` full addition,
    multiplication, negation and inverse tables are precomputed; the
    tables are exposed as read-only numpy arrays for vectorized callers.
    """

    def __init__(self, p: int, k: int, reduction_polynomial: List[int]):
        self.p = p
        self.k = k
        self.q = p**k
        self.reduction_polynomial = tuple(reduction_polynomial)
        self.add_table: Optional[np.ndarray] = None
        self.mul_table: Optional[np.ndarray] = None
        self.neg_table: Optional[np.ndarray] = None
        self.inv_table: Optional[np.ndarray] = None
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self) -> str:
        return f"Field(q={self.q}, p={self.p}, k={self.k}, poly={list(self.reduction_polynomial)})"

    # -- encoding ----------------------------------------------------------

    def digits(self, a: FieldElement) -> List[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def encode(self, coeffs: List[int]) -> FieldElement:
        v = 0
        for c in reversed(coeffs[: self.k]):
            v = v * self.p + (c % self.p)
        return v

    def _check(self, *xs: FieldElement) -> None:
        for x in xs:
            if not 0 <= x < self.q:
                raise ValueError(f"{x} is not an element of GF({self.q})")

    # -- direct arithmetic (no tables) -------------------------------------

    def _add_direct(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self.encode([(x + y) % self.p for x, y in zip(self.digits(a), self.digits(b))])

    def _neg_direct(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.encode([(-x) % self.p for x in self.digits(a)])

    def _mul_direct(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self.encode(_poly_mod(prod, list(self.reduction_polynomial), self.p))

    def _inv_direct(self, a: int) -> int:
        # a^(q-2) by square and multiply
        result, base, e = 1, a, self.q - 2
        while e:
            if e & 1:
                result = self._mul_direct(result, base)
            base = self._mul_direct(base, base)
            e >>= 1
        return result

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        elems = np.arange(q)
        if self.k == 1:
            add = (elems[:, None] + elems[None, :]) % p
            neg = (-elems) % p
        else:
            dig = np.stack([(elems // p**i) % p for i in range(self.k)], axis=1)
            weights = p ** np.arange(self.k)
            add = (((dig[:, None, :] + dig[None, :, :]) % p) * weights).sum(axis=2)
            neg = (((-dig) % p) * weights).sum(axis=1)

        # exp/log tables from a primitive element
        gen = self._find_generator()
        exp = np.empty(q - 1, dtype=np.int32)
        log = np.zeros(q, dtype=np.int32)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_direct(x, gen)
        mul = np.zeros((q, q), dtype=np.int32)
        nz = elems[1:]
        mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int32)
        inv[1:] = exp[(-log[nz]) % (q - 1)]

        dtype = np.int32
        self.add_table = add.astype(dtype)
        self.neg_table = neg.astype(dtype)
        self.mul_table = mul.astype(dtype)
        self.inv_table = inv.astype(dtype)
        self.generator = gen
        for t in (self.add_table, self.neg_table, self.mul_table, self.inv_table):
            t.setflags(write=False)

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        prime_factors = []
        m, d = order, 2
        while d * d <= m:
            if m % d == 0:
                prime_factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            prime_factors.append(m)

        def power(a: int, e: int) -> int:
            r = 1
            while e:
                if e & 1:
                    r = self._mul_direct(r, a)
                a = self._mul_direct(a, a)
                e >>= 1
            return r

        for g in range(2, self.q):
            if all(power(g, order // f) != 1 for f in prime_factors):
                return g
        raise AssertionError("multiplicative group is not cyclic; reduction polynomial is reducible")

    # -- public arithmetic -------------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        if self.add_table is not None:
            return int(self.add_table[a, b])
        return self._add_direct(a, b)

    def neg(self, a: FieldElement) -> FieldElement:
        self._check(a)
        if self.neg_table is not None:
            return int(self.neg_table[a])
        return self._neg_direct(a)

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        if self.mul_table is not None:
            return int(self.mul_table[a, b])
        return self._mul_direct(a, b)

    def inv(self, a: FieldElement) -> FieldElement:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.inv_table is not None:
            return int(self.inv_table[a])
        return self._inv_direct(a)

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))


def build_field(q: int) -> Field:
    """Construct GF(q) deterministically.

    >>> build_field(4).reduction_polynomial
    (1, 1, 1)
    """
    pk = prime_power_decomposition(q)
    if pk is None:
        raise NotAPrimePower(f"{q} is not a prime power")
    p, k = pk
    return Field(p, k, smallest_irreducible(p, k))
