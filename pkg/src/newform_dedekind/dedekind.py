"""Twisted Dedekind sums for a pair of primitive characters.

Two evaluation routes for S(a, c):

* the defining finite double sum over j mod c and n mod q1 of
  conj(chi2)(j) * conj(chi1)(n) * B1(j/c) * B1(n/q1 + a*j/c), and
* the analytic route S = tau(conj(chi1))/(pi*i) * (f(gamma z) - psi(gamma) f(z))
  at z = (-d + i)/c, gamma z = (a + i)/c, with f evaluated by a closed-form
  l-series truncated at a certified tail bound.

Admissibility: chi1, chi2 primitive nontrivial, chi1(-1)*chi2(-1) = +1,
gcd(a, c) = 1 and q1*q2 | c. Throughout c' = c/q2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import (
    character_product,
    gauss_sum,
    is_primitive,
    l2_principal,
    l2_value,
    legendre_character,
)
from .contfrac import max_partial_quotient
from .errors import CoprimalityError, DivisibilityError, ParityError, PrimitivityError

__all__ = [
    "GammaMatrix",
    "DedekindSumResult",
    "b1",
    "complete_matrix",
    "s_double_sum",
    "s_double_sum_exact",
    "f_eval",
    "phi_eval",
    "s_analytic",
    "dw_exact",
    "beta_constant",
    "korobov_sum_1",
    "korobov_sum_2",
    "bound_ratio",
]


@dataclass(frozen=True)
class GammaMatrix:
    """Integer matrix (a b; c d) with determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")


@dataclass(frozen=True)
class DedekindSumResult:
    value: complex
    method: str  # 'double_sum' or 'analytic'
    truncation_bound: float  # 0 for the double sum
    d_used: int  # the completed inverse of a mod c
    max_partial_quotient: int  # D(a, c')


def b1(x):
    """First Bernoulli function: x - floor(x) - 1/2, and 0 at integers.

    Integer detection: within 1e-12 of an integer after range reduction.
    """
    y = x - math.floor(x)
    if y <= 1e-12 or 1 - y <= 1e-12:
        return 0.0
    return y - 0.5


def complete_matrix(a, c, q1, q2):
    """Extend (a, c) to a determinant-1 matrix with 0 < d < c (d = 1 if c = 1)."""
    if c < 1:
        raise ValueError("need c >= 1")
    if math.gcd(a, c) != 1:
        raise CoprimalityError(f"gcd({a}, {c}) != 1")
    if c % (q1 * q2):
        raise DivisibilityError(f"q1*q2 = {q1 * q2} must divide c = {c}")
    d = 1 if c == 1 else pow(a, -1, c)
    b = (a * d - 1) // c
    return GammaMatrix(a, b, c, d)


def _validate_pair(chi1, chi2):
    for chi in (chi1, chi2):
        if chi.is_principal:
            raise PrimitivityError(
                f"character (q={chi.modulus}, index={chi.index}) is principal; "
                "need primitive nontrivial"
            )
        if not is_primitive(chi):
            raise PrimitivityError(
                f"character (q={chi.modulus}, index={chi.index}) is not primitive"
            )
    if chi1.parity * chi2.parity != 1:
        raise ParityError("character pair must satisfy chi1(-1)*chi2(-1) = +1")


def _validate_args(chi1, chi2, a, c):
    if c < 1:
        raise ValueError("need c >= 1")
    if math.gcd(a, c) != 1:
        raise CoprimalityError(f"gcd({a}, {c}) != 1")
    if c % (chi1.modulus * chi2.modulus):
        raise DivisibilityError(
            f"q1*q2 = {chi1.modulus * chi2.modulus} must divide c = {c}"
        )


def s_double_sum(chi1, chi2, a, c):
    """S(a, c) by the defining double sum, O(c*q1) work in double precision.

    All B1 arguments are reduced as exact fractions (integer remainders), so
    the integer-point value 0 is decided exactly, never by float rounding.
    """
    _validate_pair(chi1, chi2)
    _validate_args(chi1, chi2, a, c)
    q1, q2 = chi1.modulus, chi2.modulus
    a %= c
    qc = q1 * c
    j = np.arange(c)
    bj = np.where(j == 0, 0.0, j / c - 0.5)
    w2 = np.conj(chi2.values)[j % q2]
    inner = np.zeros(c, dtype=complex)
    for n in range(q1):
        x = np.conj(chi1.values[n])
        if x == 0:
            continue
        r = (n * c + a * q1 * j) % qc
        inner += x * np.where(r == 0, 0.0, r / qc - 0.5)
    value = complex((w2 * bj * inner).sum())
    d = 1 if c == 1 else pow(a, -1, c)
    D = max_partial_quotient(a, c // q2)
    assert abs(value) <= q1 * c + 1e-9
    return DedekindSumResult(value, "double_sum", 0.0, d, D)


def _integer_table(chi):
    """chi's values as exact integers when real-valued, else None."""
    vals = []
    for t in chi.logs:
        if t < 0:
            vals.append(0)
        elif t == 0:
            vals.append(1)
        elif 2 * t == chi.order:
            vals.append(-1)
        else:
            return None
    return vals


def s_double_sum_exact(chi1, chi2, a, c):
    """Exact-rational double sum; requires both characters real-valued.

    With B1(j/c) = (2j - c)/(2c) off integers, the whole sum is an integer
    divided by 4*q1*c^2.
    """
    _validate_pair(chi1, chi2)
    _validate_args(chi1, chi2, a, c)
    t1 = _integer_table(chi1)
    t2 = _integer_table(chi2)
    if t1 is None or t2 is None:
        raise ValueError("exact mode requires real-valued characters")
    q1, q2 = chi1.modulus, chi2.modulus
    a %= c
    qc = q1 * c
    num = 0
    for j in range(1, c):
        w = t2[j % q2]
        if w == 0:
            continue
        inner = 0
        base = a * q1 * j
        for n in range(q1):
            if t1[n] == 0:
                continue
            r = (n * c + base) % qc
            if r:
                inner += t1[n] * (2 * r - qc)
        num += w * (2 * j - c) * inner
    return Fraction(num, 4 * c * qc)


def _truncation_length(c, q2, cp, target_error):
    """Smallest L >= c' whose certified tail bound is <= target_error."""

    def tail(L):
        return 2 * q2 * c / (2 * math.pi * L) * math.exp(-2 * math.pi * L / c)

    lo = cp
    if tail(lo) <= target_error:
        return lo, tail(lo)
    hi = lo
    while tail(hi) > target_error:
        hi *= 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if tail(mid) <= target_error:
            hi = mid
        else:
            lo = mid
    return hi, tail(hi)


def f_eval(chi1, chi2, numerator, c, target_error):
    """The period-like function f at z = (numerator + i)/c, with certified tail.

    Closed form: sum over l >= 1 of chi1(l) / (l * (1 - theta)) times
    sum_{k0=1..q2} conj(chi2)(k0) e(k0*l*z), where theta = e(l*(numerator+i)/c').
    The series is truncated at the smallest L >= c' with
    2*q2*(c/(2*pi*L))*exp(-2*pi*L/c) <= target_error; that bound is returned.
    """
    q1, q2 = chi1.modulus, chi2.modulus
    if c < 1 or c % q2:
        raise DivisibilityError(f"q2 = {q2} must divide c = {c}")
    if math.gcd(numerator, c) != 1:
        raise CoprimalityError(f"gcd({numerator}, {c}) != 1")
    if target_error <= 0:
        raise ValueError("target_error must be positive")
    cp = c // q2
    L, tbound = _truncation_length(c, q2, cp, target_error)
    l = np.arange(1, L + 1)
    # 1 - theta, cancellation-safe: with theta = exp(-t) * e(x),
    # Re = -expm1(-t) + exp(-t)*2*sin^2(pi*x), Im = -exp(-t)*sin(2*pi*x),
    # and x = l*numerator/c' reduced exactly mod 1 then folded to (-1/2, 1/2].
    t = 2 * np.pi * l / cp
    frac = ((l * (numerator % cp)) % cp) / cp
    frac = np.where(frac > 0.5, frac - 1.0, frac)
    ang = np.pi * frac
    emt = np.exp(-t)
    one_minus_theta = (-np.expm1(-t) + emt * 2 * np.sin(ang) ** 2) - 1j * (
        emt * np.sin(2 * ang)
    )
    # for l >= c' the tail analysis needs |theta| < 1/2, so |1 - theta| >= 1/2
    guard = np.abs(one_minus_theta[l >= cp])
    assert guard.min() >= 0.5 - 1e-9
    coeff = chi1.values[l % q1] / (l * one_minus_theta)
    num_c = numerator % c
    chi2bar = np.conj(chi2.values)
    inner = np.zeros(L, dtype=complex)
    for k0 in range(1, q2 + 1):
        w = chi2bar[k0 % q2]
        if w == 0:
            continue
        rk = (k0 * l % c) * num_c % c
        inner += w * np.exp(-2 * np.pi * k0 * l / c) * np.exp(2j * np.pi * rk / c)
    value = complex((coeff * inner).sum())
    return value, float(tbound)


def phi_eval(chi1, chi2, gamma, target_error):
    """f(gamma z) - psi(gamma) f(z) at z = (-d + i)/c, so gamma z = (a + i)/c.

    psi(gamma) = chi1(d) * conj(chi2)(d). The target is split across the two
    f evaluations, so the returned bound is <= target_error.
    """
    c = gamma.c
    if c < 1:
        raise ValueError("need c >= 1")
    if c % (chi1.modulus * chi2.modulus):
        raise DivisibilityError(
            f"q1*q2 = {chi1.modulus * chi2.modulus} must divide c = {c}"
        )
    half = target_error / 2
    fa, ba = f_eval(chi1, chi2, gamma.a, c, half)
    fd, bd = f_eval(chi1, chi2, -gamma.d, c, half)
    psi = chi1(gamma.d) * chi2(gamma.d).conjugate()
    return fa - psi * fd, ba + abs(psi) * bd


def s_analytic(chi1, chi2, a, c, target_error=1e-8):
    """S(a, c) via the analytic route; O(c') per call, the fast path for sweeps.

    value = gauss_sum(conj(chi1)) / (pi*i) * phi(gamma); the returned
    truncation_bound is the phi bound scaled by |tau|/pi = sqrt(q1)/pi.
    """
    _validate_pair(chi1, chi2)
    _validate_args(chi1, chi2, a, c)
    q1, q2 = chi1.modulus, chi2.modulus
    a %= c
    gamma = complete_matrix(a, c, q1, q2)
    phi, tb = phi_eval(chi1, chi2, gamma, target_error)
    tau = gauss_sum(chi1.conjugate())
    value = tau / (math.pi * 1j) * phi
    bound = abs(tau) / math.pi * tb
    D = max_partial_quotient(a, c // q2)
    assert abs(value) <= q1 * c + bound + 1e-9
    return DedekindSumResult(value, "analytic", bound, gamma.d, D)


def dw_exact(p, k, l):
    """The closed-form value chi(-l) * k * (p^2 - 1) / 12 (chi Legendre mod p).

    This is the exact value of S(1 + l*k*p, k*p^2) for the self-paired
    Legendre character; zero when p divides l.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    chi = legendre_character(p)
    sign = int(round(chi(-l).real))
    return Fraction(sign * k * (p * p - 1), 12)


def beta_constant(chi1, chi2, m, n, d_mod_q2):
    """Large-value constant beta(chi1, chi2, m, n) with conj(chi2)(d) explicit.

    tau(conj chi1) tau(conj chi2) / (4 pi^2 i) * L(2, chi1*chi2)
    * ((1+i) chi2(n) - (1-i) chi2(m) conj(chi2)(d)).
    The L-value switches to the zeta(2) Euler product when chi1*chi2 is
    principal.
    """
    _validate_pair(chi1, chi2)
    prod = character_product(chi1, chi2)
    lval = l2_principal(prod.modulus) if prod.is_principal else l2_value(prod)
    t1 = gauss_sum(chi1.conjugate())
    t2 = gauss_sum(chi2.conjugate())
    bracket = (1 + 1j) * chi2(n) - (1 - 1j) * chi2(m) * chi2(d_mod_q2).conjugate()
    return t1 * t2 / (4 * math.pi**2 * 1j) * lval * bracket


def _korobov_distances(a, q):
    l = np.arange(1, q, dtype=np.int64)
    r = l * a % q
    return l, np.minimum(r, q - r) / q


def korobov_sum_1(a, q):
    """Sum over 0 < l < q of 1/||l*a/q|| (distance to nearest integer)."""
    if q < 2:
        raise ValueError("need q >= 2")
    if not 1 <= a < q:
        raise ValueError("need 1 <= a < q")
    if math.gcd(a, q) != 1:
        raise CoprimalityError(f"gcd({a}, {q}) != 1")
    l, dist = _korobov_distances(a, q)
    return float((1.0 / dist).sum())


def korobov_sum_2(a, q):
    """Sum over 0 < l < q of 1/(l * ||l*a/q||)."""
    if q < 2:
        raise ValueError("need q >= 2")
    if not 1 <= a < q:
        raise ValueError("need 1 <= a < q")
    if math.gcd(a, q) != 1:
        raise CoprimalityError(f"gcd({a}, {q}) != 1")
    l, dist = _korobov_distances(a, q)
    return float((1.0 / (l * dist)).sum())


def _korobov_table(q):
    """Both Korobov sums for every unit a mod q at once.

    Returns (a_values, sum1, sum2, D) with D[i] the largest partial quotient
    of a_values[i]/q; vectorized over (a, l) for the q <= 1000 sweeps.
    """
    from .contfrac import _max_quotient_table

    D_all, g = _max_quotient_table(q)
    unit = g == 1
    a_vals = np.nonzero(unit)[0] + 1
    l = np.arange(1, q, dtype=np.int64)
    r = a_vals[:, None] * l[None, :] % q
    dist = np.minimum(r, q - r) / q
    s1 = (1.0 / dist).sum(axis=1)
    s2 = (1.0 / (l * dist)).sum(axis=1)
    return a_vals, s1, s2, D_all[unit]


def bound_ratio(chi1, chi2, a, c, target_error=1e-8, method="analytic"):
    """|S| / (D(a, c') * log^2 c'), the empirical partial-quotient-bound constant."""
    if c // chi2.modulus < 2:
        raise ValueError("need c' >= 2")
    if method == "analytic":
        res = s_analytic(chi1, chi2, a, c, target_error)
    elif method == "double_sum":
        res = s_double_sum(chi1, chi2, a, c)
    else:
        raise ValueError(f"unknown method {method!r}")
    cp = c // chi2.modulus
    return abs(res.value) / (res.max_partial_quotient * math.log(cp) ** 2)
