"""Dirichlet characters mod q as precomputed value tables.

A character is stored as an integer exponent table: chi(n) = exp(2*pi*i*t/e)
with t = logs[n] and e the common order of the full character group. All
structural questions (products, conjugates, primitivity, labels) are decided
in exact integer arithmetic on the exponents; the complex table is built once
from the reduced exponents.

Enumeration is deterministic: characters mod q are labeled (q, index) with
index running lexicographically over exponent vectors on a fixed canonical
generating set of the unit group (2-part components first, then odd prime
powers in ascending order; index 0 is the principal character).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "DirichletCharacter",
    "character_from_index",
    "enumerate_characters",
    "legendre_character",
    "is_primitive",
    "gauss_sum",
    "l2_value",
    "l2_principal",
    "character_product",
]


def _factorize(n):
    """Prime factorization [(p, e), ...] with p ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _smallest_primitive_root(m, phi_m):
    phi_primes = [p for p, _ in _factorize(phi_m)]
    g = 2
    while True:
        if math.gcd(g, m) == 1 and all(pow(g, phi_m // p, m) != 1 for p in phi_primes):
            return g
        g += 1


def _crt_lift(x, m, q):
    """The residue mod q that is x mod m and 1 mod q//m (gcd(m, q//m) = 1)."""
    rest = q // m
    if rest == 1:
        return x % q
    return (x * rest * pow(rest, -1, m) + m * pow(m, -1, rest)) % q


@lru_cache(maxsize=None)
def _unit_group(q):
    """Canonical cyclic decomposition of (Z/q)* with discrete-log tables.

    Returns (components, logmap, exponent) where components is a tuple of
    (order, global_generator), logmap[n, i] is the discrete log of n on
    component i (-1 rows for non-units), and exponent = lcm of the orders.
    """
    if q < 1:
        raise ValueError("modulus must be a positive integer")
    comps = []
    tables = []  # parallel list of (piece_modulus, dlog dict)
    for p, e in _factorize(q):
        pe = p**e
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                comps.append((2, _crt_lift(3, 4, q)))
                tables.append((4, {1: 0, 3: 1}))
            else:
                s = pe // 4
                sign = {}
                five = {}
                for eps in range(2):
                    for b in range(s):
                        r = pow(pe - 1, eps, pe) * pow(5, b, pe) % pe
                        sign[r] = eps
                        five[r] = b
                comps.append((2, _crt_lift(pe - 1, pe, q)))
                tables.append((pe, sign))
                comps.append((s, _crt_lift(5, pe, q)))
                tables.append((pe, five))
        else:
            s = pe - pe // p
            g = _smallest_primitive_root(pe, s)
            dlog = {}
            x = 1
            for t in range(s):
                dlog[x] = t
                x = x * g % pe
            comps.append((s, _crt_lift(g, pe, q)))
            tables.append((pe, dlog))
    k = len(comps)
    logmap = np.full((q, k), -1, dtype=np.int64)
    for n in range(q):
        if math.gcd(n, q) == 1:
            for i, (m, dlog) in enumerate(tables):
                logmap[n, i] = dlog[n % m]
    exponent = math.lcm(*(s for s, _ in comps)) if comps else 1
    return tuple(comps), logmap, exponent


def _group_order(q):
    comps, _, _ = _unit_group(q)
    return math.prod(s for s, _ in comps)


def _index_to_exponents(q, index):
    comps, _, _ = _unit_group(q)
    ks = []
    for s, _ in reversed(comps):
        ks.append(index % s)
        index //= s
    if index:
        raise ValueError("character index out of range")
    return list(reversed(ks))


def _exponents_to_index(q, ks):
    comps, _, _ = _unit_group(q)
    index = 0
    for (s, _), k in zip(comps, ks):
        index = index * s + k % s
    return index


@dataclass(eq=False)
class DirichletCharacter:
    """Immutable-by-convention character table; see module docstring."""

    modulus: int
    index: int
    order: int  # common exponent e of the character group mod q
    logs: np.ndarray  # logs[n] = t with chi(n) = exp(2*pi*i*t/order); -1 off units
    values: np.ndarray  # complex128 table of length q

    @property
    def label(self):
        return (self.modulus, self.index)

    @property
    def is_principal(self):
        return self.index == 0

    @property
    def parity(self):
        """chi(-1) as an exact integer (+1 or -1)."""
        t = int(self.logs[(self.modulus - 1) % self.modulus])
        return 1 if t == 0 else -1

    def __call__(self, n):
        return complex(self.values[n % self.modulus])

    def conjugate(self):
        ks = _index_to_exponents(self.modulus, self.index)
        comps, _, _ = _unit_group(self.modulus)
        conj = [(-k) % s for (s, _), k in zip(comps, ks)]
        return character_from_index(self.modulus, _exponents_to_index(self.modulus, conj))

    def __repr__(self):
        return f"DirichletCharacter(q={self.modulus}, index={self.index})"


def character_from_index(q, index):
    """The character labeled (q, index) in the canonical enumeration."""
    total = _group_order(q)
    if not 0 <= index < total:
        raise ValueError(f"index {index} out of range for modulus {q} ({total} characters)")
    comps, logmap, e = _unit_group(q)
    ks = _index_to_exponents(q, index)
    n = np.arange(q)
    unit = np.gcd(n, q) == 1
    t = np.zeros(q, dtype=np.int64)
    for i, ((s, _), k) in enumerate(zip(comps, ks)):
        t[unit] += k * (e // s) * logmap[unit, i]
    logs = np.where(unit, t % e, -1)
    values = np.where(unit, np.exp(2j * np.pi * logs / e), 0)
    # quarter-turn angles are exact fourth roots of unity; snapping them keeps
    # order <= 2 characters integer-valued and conjugation bit-exact
    exact = unit & (4 * logs % e == 0)
    values[exact] = np.array([1, 1j, -1, -1j])[4 * logs[exact] // e % 4]
    return DirichletCharacter(q, index, e, logs, values)


def enumerate_characters(q):
    """All phi(q) characters mod q in label order (index 0 principal)."""
    return [character_from_index(q, i) for i in range(_group_order(q))]


def legendre_character(p):
    """The quadratic residue character mod an odd prime p."""
    if p < 3 or p % 2 == 0 or any(p % d == 0 for d in range(3, int(p**0.5) + 1, 2)):
        raise ValueError(f"{p} is not an odd prime")
    # single cyclic component of order p-1; the order-2 character has k = (p-1)/2
    return character_from_index(p, (p - 1) // 2)


def is_primitive(chi):
    """True iff the conductor equals the modulus.

    Tests triviality on the kernel subgroups {n = 1 mod d} for every proper
    divisor d of q; chi factors through mod d exactly when it is trivial there.
    """
    q = chi.modulus
    for d in range(1, q):
        if q % d:
            continue
        if all(chi.logs[n] == 0 for n in range(1, q, d) if math.gcd(n, q) == 1):
            return False
    return True


def gauss_sum(chi):
    """Sum of chi(n)*e(n/q) over n mod q, e(x) = exp(2*pi*i*x).

    Each term's phase is reduced exactly as an integer mod order*q before the
    single exp call, so no drift accumulates.
    """
    q = chi.modulus
    e = chi.order
    n = np.arange(q)
    unit = chi.logs >= 0
    num = (chi.logs[unit] * q + n[unit] * e) % (e * q)
    return complex(np.exp(2j * np.pi * num / (e * q)).sum())


_L2_CACHE = {}


def l2_value(chi):
    """L(2, chi) = sum chi(n)/n^2, truncated with guaranteed tail <= 1e-9.

    Rejects principal characters: for those the caller must use the
    zeta(2) Euler product (l2_principal).
    """
    if chi.is_principal:
        raise ValueError("principal character: use l2_principal(q) instead")
    key = chi.label
    if key in _L2_CACHE:
        return _L2_CACHE[key]
    q = chi.modulus
    # partial summation tail bound: |sum_{n>N} chi(n)/n^2| <= 2q/N^2
    N = math.ceil(math.sqrt(2 * q / 1e-9))
    total = 0j
    step = 10**6
    for start in range(1, N + 1, step):
        n = np.arange(start, min(start + step, N + 1))
        total += (chi.values[n % q] / n.astype(float) ** 2).sum()
    total = complex(total)
    _L2_CACHE[key] = total
    return total


def l2_principal(q):
    """L(2, principal character mod q) = zeta(2) * prod_{p | q} (1 - p^-2)."""
    val = math.pi**2 / 6
    for p, _ in _factorize(q):
        val *= 1 - p**-2
    return val


def character_product(chi1, chi2, conjugate_second=False):
    """The product character chi1*chi2 (or chi1*conj(chi2)) mod lcm(q1, q2).

    Computed exactly: the product's exponent on each canonical generator g of
    the unit group mod lcm is the rational t1/e1 +- t2/e2 reduced mod 1, which
    is always a multiple of 1/ord(g).
    """
    q1, q2 = chi1.modulus, chi2.modulus
    m = math.lcm(q1, q2)
    comps, _, _ = _unit_group(m)
    sign = -1 if conjugate_second else 1
    ks = []
    for s, g in comps:
        fr = Fraction(int(chi1.logs[g % q1]), chi1.order)
        fr += sign * Fraction(int(chi2.logs[g % q2]), chi2.order)
        fr %= 1
        k = fr * s
        assert k.denominator == 1  # g^s = 1 forces an s-th root of unity
        ks.append(int(k) % s)
    return character_from_index(m, _exponents_to_index(m, ks))
