"""Exact rational densities and bounds for matrix sets over GF(q)[x].

Everything here returns :class:`fractions.Fraction`; no floats are
produced or consumed.  The central quantity is the reciprocal of the
polynomial zeta value,

    zeta_inverse(q, j) = 1 - q**(1 - j)   for j >= 2,

with the convention zeta_inverse(q, 1) = 0 (the j = 1 value diverges,
and its reciprocal is taken to be zero).  The density of unimodular
k x n matrices is the product of zeta_inverse(q, j) for
j = n-k+1 .. n, which in particular vanishes exactly when k = n.

The truncated Euler product over irreducibles of degree at most t,

    product over m <= t of (1 - q**(-j*m)) ** (number of irreducibles
    of degree m),

converges to the closed form from above; ``tail_bound`` gives the
guaranteed gap 2 / (q**t * (q - 1)).  The truncated products involve
astronomically large integers for moderate q and t, so they are built
on gmpy2 integers when available; results are ordinary Fractions either
way.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

from .gf import factor_prime_power
from .matrix import IrreducibleSet
from .poly import count_irreducibles

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _bigint = int


class _LowestTerms:
    """A numerator/denominator pair already in lowest terms.

    Registered as a virtual numbers.Rational subclass: passing one to
    Fraction() then copies the pair verbatim, skipping the gcd the
    two-argument constructor would run.  For the coprime-by-construction
    giants produced by the truncated products that gcd is the dominant
    cost, so this matters.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator):
        self.numerator = numerator
        self.denominator = denominator


Rational.register(_LowestTerms)


def _coprime_fraction(numerator: int, denominator: int) -> Fraction:
    return Fraction(_LowestTerms(numerator, denominator))


def zeta_inverse(q: int, j: int) -> Fraction:
    """1 - q**(1-j) for j >= 2; zero for j = 1 by convention."""
    factor_prime_power(q)
    j = int(j)
    if j < 1:
        raise ValueError(f"j must be at least 1, got {j}")
    if j == 1:
        return Fraction(0)
    return 1 - Fraction(1, q ** (j - 1))


def zeta_inverse_truncated(q: int, j: int, t: int) -> Fraction:
    """Euler product over irreducibles of degree <= t, exactly.

    Decreases monotonically in t and stays >= the closed form; the gap
    is at most tail_bound(q, t).  Only defined for j >= 2 (at j = 1 the
    product goes to zero without terminating).
    """
    p, _ = factor_prime_power(q)
    j = int(j)
    t = int(t)
    if j < 2:
        raise ValueError(f"truncated product needs j >= 2, got {j}")
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    numerator = _bigint(1)
    denominator_exp = 0
    for m in range(1, t + 1):
        count = count_irreducibles(q, m)
        numerator *= _bigint(q ** (j * m) - 1) ** count
        denominator_exp += j * m * count
    numerator = int(numerator)
    denominator = int(_bigint(q) ** denominator_exp)
    # numerator is a product of (q**(j*m) - 1) factors, none divisible
    # by p, so the pair is coprime by construction
    if numerator % p == 0:
        raise AssertionError("truncated product numerator lost coprimality")
    return _coprime_fraction(numerator, denominator)


def tail_bound(q: int, t: int) -> Fraction:
    """Upper bound 2 / (q**t * (q-1)) on the truncation gap at cutoff t."""
    factor_prime_power(q)
    t = int(t)
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    return Fraction(2, q**t * (q - 1))


def density_unimodular(q: int, k: int, n: int) -> Fraction:
    """Asymptotic share of unimodular matrices among all k x n matrices.

    The product of zeta_inverse(q, j) for j = n-k+1 .. n; zero exactly
    when k = n (the j = 1 factor).
    """
    factor_prime_power(q)
    k, n = int(k), int(n)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    out = Fraction(1)
    for j in range(n - k + 1, n + 1):
        out *= zeta_inverse(q, j)
    return out


def density_coprime_to(q: int, k: int, n: int, primes: IrreducibleSet) -> Fraction:
    """Asymptotic share of matrices whose minor gcd avoids every member.

    The product over members f and j = n-k+1 .. n of
    (1 - q**(-j*deg f)); the empty set gives 1.
    """
    factor_prime_power(q)
    k, n = int(k), int(n)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    if primes.spec.q != q:
        raise ValueError(
            f"irreducible set lives over GF({primes.spec.q}), not GF({q})"
        )
    out = Fraction(1)
    for f in primes:
        member_order = q**f.degree
        for j in range(n - k + 1, n + 1):
            out *= 1 - Fraction(1, member_order**j)
    return out


class DivisibleBound(NamedTuple):
    """Exact share and coarse bound for a single-irreducible divisibility event."""

    exact: Fraction
    bound: Fraction


def divisible_bound(q: int, k: int, n: int, f_degree: int) -> DivisibleBound:
    """Share of k x n matrices whose minor gcd the irreducible divides.

    Exact value: 1 minus the product over j = n-k+1 .. n of
    (1 - Q**(-j)) where Q = q**f_degree; the coarse bound 2 / Q**2
    always dominates it.  Only defined for k < n (at k = n almost
    nothing is unimodular and the event is not rare).
    """
    factor_prime_power(q)
    k, n, f_degree = int(k), int(n), int(f_degree)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k >= n:
        raise ValueError(f"need k < n, got k={k}, n={n}")
    if f_degree < 1:
        raise ValueError(f"degree must be at least 1, got {f_degree}")
    member_order = q**f_degree
    keep = Fraction(1)
    for j in range(n - k + 1, n + 1):
        keep *= 1 - Fraction(1, member_order**j)
    return DivisibleBound(exact=1 - keep, bound=Fraction(2, member_order**2))


def as_ratio_string(value: Fraction) -> str:
    """Serialize a rational as "numerator/denominator", always with the slash."""
    return f"{value.numerator}/{value.denominator}"
