"""Exact-integer construction of polynomials whose coefficients carry
arithmetic-progression tail products.

A parameter tuple fixes the rational shift q = u + alpha/d and a degree n.
Together with seed coefficients a_0..a_n it determines the integer polynomial
whose x^j coefficient is

    a_j * prod(alpha + (u+i)*d  for i in j+1..n)

so every coefficient is an exact integer and its prime factorization is
visible from the factors.  The power substitution x -> x^delta spreads
coefficients to indices delta*j without mixing them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class InvalidParameters(ValueError):
    """A parameter tuple or seed violates a structural invariant."""


@dataclass(frozen=True)
class GhlParams:
    """Shift and degree data: q = u + alpha/d in lowest terms, degree n,
    and the substitution exponent delta (1 for the plain polynomial, d for
    the polynomial evaluated at x^d)."""

    d: int
    u: int
    alpha: int
    n: int
    delta: int = 1

    def __post_init__(self):
        if self.d < 2:
            raise InvalidParameters(f"d must be at least 2, got {self.d}")
        if not 1 <= self.alpha < self.d:
            raise InvalidParameters(
                f"alpha must satisfy 1 <= alpha < d, got alpha={self.alpha}, d={self.d}")
        if math.gcd(self.alpha, self.d) != 1:
            raise InvalidParameters(
                f"alpha={self.alpha} and d={self.d} must be coprime")
        if self.delta not in (1, self.d):
            raise InvalidParameters(
                f"delta must be 1 or d={self.d}, got {self.delta}")
        if self.n < 1:
            raise InvalidParameters(f"n must be positive, got {self.n}")

    @classmethod
    def from_q(cls, q, n: int, delta: int = 1) -> "GhlParams":
        """Build parameters from the shift q itself, e.g. from_q(Fraction(-2, 3), 5)."""
        q = Fraction(q)
        u = math.floor(q)
        frac = q - u
        return cls(d=frac.denominator, u=u, alpha=frac.numerator, n=n, delta=delta)

    @property
    def q(self) -> Fraction:
        return self.u + Fraction(self.alpha, self.d)

    def term(self, i: int) -> int:
        """The linear factor alpha + (u+i)*d attached to index i."""
        return self.alpha + (self.u + i) * self.d

    @property
    def top_term(self) -> int:
        return self.term(self.n)

    def terms(self) -> tuple[int, ...]:
        return tuple(self.term(i) for i in range(1, self.n + 1))


@dataclass(frozen=True)
class SeedCoefficients:
    """Integer seed a_0..a_n; both endpoints must be nonzero."""

    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) < 2:
            raise InvalidParameters("seed needs at least two coefficients")
        if self.values[0] == 0 or self.values[-1] == 0:
            raise InvalidParameters("seed endpoints a_0 and a_n must be nonzero")

    @classmethod
    def ones(cls, n: int) -> "SeedCoefficients":
        return cls((1,) * (n + 1))

    @classmethod
    def laguerre(cls, n: int) -> "SeedCoefficients":
        return cls(tuple((-1) ** j * math.comb(n, j) for j in range(n + 1)))

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, j: int) -> int:
        return self.values[j]


def laguerre_seed(n: int) -> SeedCoefficients:
    """Alternating binomial seed (-1)^j * C(n, j)."""
    return SeedCoefficients.laguerre(n)


@dataclass(frozen=True)
class IntegerPolynomial:
    """Dense integer polynomial, lowest power first, trailing zeros trimmed."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        trimmed = tuple(self.coeffs)
        while len(trimmed) > 1 and trimmed[-1] == 0:
            trimmed = trimmed[:-1]
        if trimmed == (0,) or not trimmed:
            raise InvalidParameters("the zero polynomial is not allowed")
        object.__setattr__(self, "coeffs", trimmed)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def coefficient(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j <= self.degree else 0

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def build_ghl(params: GhlParams, seed: SeedCoefficients) -> IntegerPolynomial:
    """Assemble the seeded polynomial; coefficient j is a_j times the product
    of the linear factors with index above j."""
    if len(seed) != params.n + 1:
        raise InvalidParameters(
            f"seed length {len(seed)} does not match degree n={params.n}")
    coeffs = [0] * (params.n + 1)
    suffix = 1
    for j in range(params.n, -1, -1):
        coeffs[j] = seed[j] * suffix
        if j > 0:
            suffix *= params.term(j)
    return IntegerPolynomial(tuple(coeffs))


def substitute_power(poly: IntegerPolynomial, delta: int) -> IntegerPolynomial:
    """Replace x by x^delta: coefficient j moves to index delta*j."""
    if delta < 1:
        raise InvalidParameters(f"delta must be positive, got {delta}")
    if delta == 1:
        return poly
    out = [0] * (poly.degree * delta + 1)
    for j, c in enumerate(poly.coeffs):
        out[delta * j] = c
    return IntegerPolynomial(tuple(out))


def build_substituted(params: GhlParams, seed: SeedCoefficients) -> IntegerPolynomial:
    """The seeded polynomial evaluated at x^delta (delta taken from params)."""
    return substitute_power(build_ghl(params, seed), params.delta)


def hermite_polynomial(m: int) -> IntegerPolynomial:
    """Physicists' Hermite polynomial H_m as an exact integer polynomial.

    Built through the d=2 construction: H_{2N}(x) is a scaled degree-N
    polynomial with shift q = -1/2 evaluated at 2x^2, and H_{2N+1}(x) picks
    up one factor of x with shift q = +1/2.
    """
    if m < 1:
        raise InvalidParameters(f"m must be positive, got {m}")
    half = m // 2
    odd = m % 2
    sign = -1 if half % 2 else 1
    if half == 0:
        return IntegerPolynomial((0, 2))  # H_1 = 2x
    params = GhlParams(d=2, u=-1 + odd, alpha=1, n=half)
    core = build_ghl(params, laguerre_seed(half))
    out = [0] * (m + 1)
    for j in range(half + 1):
        out[2 * j + odd] = sign * (1 << (half + j + odd)) * core.coefficient(j)
    return IntegerPolynomial(tuple(out))


def read_coefficients(path) -> IntegerPolynomial:
    """Read a polynomial file: one integer per line, lowest power first,
    '#' starts a comment, blank lines ignored."""
    coeffs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                coeffs.append(int(line))
            except ValueError:
                raise InvalidParameters(
                    f"{path}:{lineno}: not an integer coefficient: {line!r}")
    if not coeffs:
        raise InvalidParameters(f"{path}: no coefficients found")
    return IntegerPolynomial(tuple(coeffs))


def write_coefficients(path, poly: IntegerPolynomial, header: str | None = None) -> None:
    """Write the polynomial file format read by read_coefficients."""
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for c in poly.coeffs:
            fh.write(f"{c}\n")
