"""Degree-exclusion criteria and the bookkeeping that assembles them.

A factor-degree exclusion for the substituted polynomial comes from one of:

* a witness prime dividing the top coefficient block but none of the low
  ones (excludes a window of degrees outright),
* a two-sided Newton-function margin at some prime,
* a flat-tail slope window at some prime,
* the admissible-degree complement of a Newton polygon (subset sums of
  lattice segments), or
* one of the special handlers in the certify module.

Every exclusion of degree K is also an exclusion of degree (total - K):
the statements all rule out one side of a two-way split f = g1 * g2 where
neither part is required to be irreducible.  The ledger below trims each
claim to the still-open degrees so that record degree sets stay disjoint.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .newton import (NewtonPolygon, admissible_degrees, polygon_from_params,
                     viable_margin, widest_window, window_holds)
from .polynomials import GhlParams, SeedCoefficients
from .sieve import prime_factors, primes_up_to
from .valuation import INFINITY


class Method(str, enum.Enum):
    WITNESS_PRIME = "WITNESS_PRIME"
    NEWTON_MARGIN = "NEWTON_MARGIN"
    SLOPE_WINDOW = "SLOPE_WINDOW"
    DELTA_DIVISIBILITY = "DELTA_DIVISIBILITY"
    SPECIAL_2ADIC = "SPECIAL_2ADIC"
    SPECIAL_3ADIC = "SPECIAL_3ADIC"
    LAGUERRE_NP = "LAGUERRE_NP"


@dataclass(frozen=True)
class ExclusionRecord:
    """One certified exclusion: these factor degrees are impossible."""

    method: Method
    degrees: tuple[int, ...]
    k: int | None = None
    witness_prime: int | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.witness_prime is not None) != (self.method is Method.WITNESS_PRIME):
            raise ValueError(
                "witness_prime must be present exactly for WITNESS_PRIME records")


class DegreeLedger:
    """Tracks which degrees in [1, total-1] are still unexcluded and trims
    incoming claims so that all recorded degree sets are pairwise disjoint."""

    def __init__(self, total: int):
        self.total = total
        self.remaining = set(range(1, total))
        self.records: list[ExclusionRecord] = []

    def mirrored(self, degrees) -> set[int]:
        out = set()
        for k in degrees:
            if 1 <= k <= self.total - 1:
                out.add(k)
                out.add(self.total - k)
        return out

    def claim(self, method: Method, degrees, *, mirror: bool = True,
              k: int | None = None, witness_prime: int | None = None,
              detail: dict | None = None) -> ExclusionRecord | None:
        claimed = self.mirrored(degrees) if mirror else set(degrees)
        effective = claimed & self.remaining
        if not effective:
            return None
        self.remaining -= effective
        rec = ExclusionRecord(
            method=method, degrees=tuple(sorted(effective)), k=k,
            witness_prime=witness_prime, detail=detail or {})
        self.records.append(rec)
        return rec


def find_exclusion_prime(params: GhlParams, k: int, seed: SeedCoefficients):
    """Largest prime p dividing the product of the k highest linear factors
    while dividing neither the k lowest ones, nor the seed endpoints, with
    p > d and p >= min(2k, d(d-1)); None when no prime qualifies.  Such a
    prime rules out a degree-k factor of the unsubstituted polynomial and
    degrees [d*k-d+1, d*k] after the x -> x^d substitution."""
    if params.u not in (-1, 0):
        raise ValueError(f"witness search needs u in {{-1, 0}}, got {params.u}")
    if not 1 <= k <= params.n / 2:
        raise ValueError(f"k={k} outside 1..n/2 for n={params.n}")
    candidates: set[int] = set()
    for j in range(k):
        candidates.update(prime_factors(params.term(params.n - j)))
    endpoints = seed[0] * seed[params.n]
    best = None
    for p in sorted(candidates, reverse=True):
        if p <= params.d or p < min(2 * k, params.d * (params.d - 1)):
            continue
        if any(params.term(j) % p == 0 for j in range(1, k + 1)):
            continue
        if endpoints % p == 0:
            continue
        best = p
        break
    return best


def candidate_primes(params: GhlParams, prime_limit: int = 50,
                     extra_primes=()) -> list[int]:
    """Primes worth building polygons at: the small primes plus every
    divisor of the top linear factor and of n."""
    out = {int(p) for p in primes_up_to(prime_limit)}
    out.update(prime_factors(params.top_term))
    out.update(prime_factors(params.n))
    out.update(extra_primes)
    return sorted(out)


class PolygonCache:
    """Lazily built polygons of the substituted polynomial per prime, both
    for the actual seed and for the all-ones carrier."""

    def __init__(self, params: GhlParams, seed: SeedCoefficients):
        self.params = params
        self.seed = seed
        self.ones = SeedCoefficients.ones(params.n)
        self._cache: dict[tuple[int, str], NewtonPolygon] = {}
        self._admissible: dict[tuple[int, str], frozenset] = {}

    def seed_coprime(self, p: int) -> bool:
        """Margin/window conclusions carry from the ones carrier to the
        seeded polynomial only when p divides neither seed endpoint."""
        return (self.seed[0] * self.seed[self.params.n]) % p != 0

    def polygon(self, p: int, carrier: str) -> NewtonPolygon:
        key = (p, carrier)
        if key not in self._cache:
            seed = self.seed if carrier == "self" else self.ones
            self._cache[key] = polygon_from_params(p, self.params, seed)
        return self._cache[key]

    def admissible(self, p: int, carrier: str) -> frozenset:
        key = (p, carrier)
        if key not in self._admissible:
            self._admissible[key] = admissible_degrees(
                self.polygon(p, carrier)).admissible
        return self._admissible[key]


def witness_stage(params: GhlParams, seed: SeedCoefficients,
                  ledger: DegreeLedger) -> None:
    """Witness-prime exclusions for k = 1..n//2, each covering the degree
    window [delta*k-delta+1, delta*k]."""
    delta = params.delta
    for k in range(1, params.n // 2 + 1):
        p = find_exclusion_prime(params, k, seed)
        if p is None:
            continue
        window = range(delta * k - delta + 1, delta * k + 1)
        ledger.claim(Method.WITNESS_PRIME, window, k=k, witness_prime=p,
                     detail={"window": [delta * k - delta + 1, delta * k]})


def delta_stage(cache: PolygonCache, ledger: DegreeLedger,
                primes) -> None:
    """Admissible-degree complements of the seeded polynomial's polygons.
    Sound for the instance itself at any prime: a factor degree must be a
    subset sum of lattice-segment widths."""
    for p in primes:
        if not ledger.remaining:
            return
        admissible = cache.admissible(p, "self")
        excluded = ledger.remaining - admissible
        if excluded:
            poly = cache.polygon(p, "self")
            ledger.claim(
                Method.DELTA_DIVISIBILITY, excluded, mirror=False,
                detail={"prime": p, "vertices": list(poly.vertex_xs()),
                        "segment_widths": sorted(
                            {e.segment_width for e in poly.edges})})


def window_stage(cache: PolygonCache, ledger: DegreeLedger,
                 primes) -> None:
    """Flat-tail slope windows: if p divides every coefficient below the
    top block and the rightmost slope is below 1/k, degrees [l+1, k] are
    impossible."""
    m = ledger.total
    for p in primes:
        if not ledger.remaining:
            return
        for carrier in ("self", "ones"):
            if carrier == "ones" and not cache.seed_coprime(p):
                continue
            poly = cache.polygon(p, carrier)
            if poly.ordinates[0] != 0:
                continue
            if poly.ordinates[m] == 0:
                continue  # p must divide the constant term
            l_min = max((x for x in range(1, m)
                         if poly.ordinates[x] is not INFINITY
                         and poly.ordinates[x] == 0), default=0)
            k_max = widest_window(poly, l_min)
            if k_max is None or k_max <= l_min:
                continue
            ledger.claim(
                Method.SLOPE_WINDOW, range(l_min + 1, k_max + 1),
                detail={"prime": p, "carrier": carrier, "l": l_min,
                        "k": k_max, "max_slope": str(poly.max_slope)})


def margin_stage(cache: PolygonCache, ledger: DegreeLedger,
                 primes) -> None:
    """Per-degree two-sided margins.  For each still-open degree K (taken
    on the small side of the mirror symmetry), search the prime list and
    both carriers for an integer r with g(K) > r and g(m) - g(m-K) < r+1."""
    m = ledger.total
    for K in sorted(ledger.remaining):
        if K not in ledger.remaining:
            continue
        kk = min(K, m - K)
        if kk == 0 or m < 2 * kk:
            continue
        hit = False
        for p in primes:
            for carrier in ("self", "ones"):
                if carrier == "ones" and not cache.seed_coprime(p):
                    continue
                poly = cache.polygon(p, carrier)
                if poly.ordinates[0] != 0:
                    continue
                r = viable_margin(poly, kk)
                if r is not None:
                    ledger.claim(
                        Method.NEWTON_MARGIN, [kk], k=None,
                        detail={"prime": p, "carrier": carrier, "r": r,
                                "degree": kk})
                    hit = True
                    break
            if hit:
                break


@dataclass(frozen=True)
class ScanResult:
    records: tuple[ExclusionRecord, ...]
    unresolved: frozenset


def exclude_degrees(params: GhlParams, seed: SeedCoefficients, *,
                    prime_limit: int = 50, extra_primes=()) -> ScanResult:
    """Run the generic stages (witness primes, then polygon criteria over a
    configurable prime list) against every candidate factor degree of the
    substituted polynomial.  Unresolved degrees are data, not errors; the
    certify module layers the special handlers on top."""
    ledger = DegreeLedger(params.delta * params.n)
    primes = candidate_primes(params, prime_limit, extra_primes)
    witness_stage(params, seed, ledger)
    cache = PolygonCache(params, seed)
    delta_stage(cache, ledger, primes)
    window_stage(cache, ledger, primes)
    margin_stage(cache, ledger, primes)
    return ScanResult(records=tuple(ledger.records),
                      unresolved=frozenset(ledger.remaining))
