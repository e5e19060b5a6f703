"""Exact p-adic valuations.

Provides the valuation nu(p, r) with nu(p, 0) = INFINITY, base-p digit sums,
the digit-sum form of the factorial valuation, and valuations of the factored
coefficient products of the generalized polynomials.  Valuations of huge
coefficients are always computed from the factored form (sums over the small
linear factors), never by dividing the assembled big integer.
"""

from __future__ import annotations

from fractions import Fraction

from .polynomials import GhlParams, IntegerPolynomial, SeedCoefficients


class _InfiniteValuation:
    """Distinguished value for nu(p, 0); absorbing under addition and larger
    than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ghlcert-infinite-valuation")


INFINITY = _InfiniteValuation()

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin; the witness set covers all 64-bit inputs
    and far beyond (valid below 3.3e24)."""
    if m < 2:
        return False
    for p in _SMALL_PRIMES:
        if m % p == 0:
            return m == p
    d = m - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def nu(p: int, r: int):
    """p-adic valuation of r; INFINITY iff r = 0."""
    _require_prime(p)
    if r == 0:
        return INFINITY
    r = abs(r)
    v = 0
    while r % p == 0:
        r //= p
        v += 1
    return v


def digit_sum(p: int, m: int) -> int:
    """Sum of the base-p digits of m >= 0."""
    _require_prime(p)
    if m < 0:
        raise ValueError(f"digit_sum needs m >= 0, got {m}")
    total = 0
    while m:
        total += m % p
        m //= p
    return total


def ord_factorial(p: int, m: int) -> int:
    """Valuation of m! via the digit-sum identity (m - s_p(m)) / (p - 1)."""
    _require_prime(p)
    if m < 0:
        raise ValueError(f"ord_factorial needs m >= 0, got {m}")
    return (m - digit_sum(p, m)) // (p - 1)


def ord_binomial(p: int, m: int, k: int) -> int:
    """Valuation of C(m, k)."""
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    return ord_factorial(p, m) - ord_factorial(p, k) - ord_factorial(p, m - k)


def ord_tail_product(p: int, params: GhlParams, l: int) -> int:
    """Valuation of the product of the linear factors with index above l,
    i.e. of prod(alpha + (u+i)*d for i in l+1..n).  Finite because every
    factor is nonzero (alpha and d are coprime)."""
    if not 0 <= l <= params.n:
        raise ValueError(f"index l={l} out of range 0..{params.n}")
    total = 0
    for i in range(l + 1, params.n + 1):
        total += nu(p, params.term(i))
    return total


def prefix_valuation_rates(p: int, params: GhlParams) -> list[Fraction]:
    """For j = 1..n, the valuation of the prefix product
    prod(alpha + (u+i)*d for i in 1..j) divided by j, as exact rationals."""
    _require_prime(p)
    rates = []
    acc = 0
    for j in range(1, params.n + 1):
        acc += nu(p, params.term(j))
        rates.append(Fraction(acc, j))
    return rates


def coefficient_valuations(p: int, params: GhlParams, seed: SeedCoefficients) -> list:
    """Ordinates of the Newton-polygon point set of the seeded polynomial
    after the x -> x^delta substitution, indexed from the leading side:
    entry x is the valuation of the coefficient of x^(delta*n - x).

    Computed factored: the coefficient at seed index j is
    seed[j] * prod(term(i) for i in j+1..n), so its valuation is a suffix
    sum of small valuations plus the seed valuation.  Entries at indices
    that are not multiples of delta are INFINITY (zero coefficients).
    """
    if len(seed) != params.n + 1:
        raise ValueError(
            f"seed length {len(seed)} does not match degree n={params.n}")
    n, delta = params.n, params.delta
    tail = [0] * (n + 1)
    for j in range(n - 1, -1, -1):
        tail[j] = tail[j + 1] + nu(p, params.term(j + 1))
    ordinates = [INFINITY] * (delta * n + 1)
    for j in range(n + 1):
        ordinates[delta * (n - j)] = nu(p, seed[j]) + tail[j]
    return ordinates


def ordinates_from_polynomial(p: int, poly: IntegerPolynomial) -> list:
    """Newton-polygon ordinates of an explicit polynomial: entry x is the
    valuation of the coefficient of x^(m - x)."""
    m = poly.degree
    return [nu(p, poly.coefficient(m - x)) for x in range(m + 1)]
