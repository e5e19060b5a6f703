"""Exact range-verification engine for prime-factor statements.

Backs every bulk query with either a boolean prime sieve or a segmented
smallest-prime-factor table, then answers greatest-prime-factor questions
over arithmetic progressions, smooth-pair enumerations, prime gaps in
residue classes, and the closed-form bound evaluations, all in exact
integer arithmetic (floats only at the final root/log step where a real
number is the answer).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SEGMENT = 1 << 20


def prime_flags(limit: int) -> np.ndarray:
    """Boolean array of length limit+1; entry m is True iff m is prime."""
    if limit < 0:
        raise ValueError(f"limit must be nonnegative, got {limit}")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return flags


def primes_up_to(limit: int) -> np.ndarray:
    return np.flatnonzero(prime_flags(limit)).astype(np.int64)


def prime_count(x) -> int:
    """Number of primes <= x."""
    x = math.floor(x)
    if x < 2:
        return 0
    return int(prime_flags(x).sum())


class SpfTable:
    """Smallest-prime-factor table over [0, limit], built by a segmented
    sieve.  Segments write disjoint slices, so they can run on a thread
    pool; the result is identical either way."""

    def __init__(self, limit: int, segment: int = DEFAULT_SEGMENT, jobs: int = 1):
        if limit < 1:
            raise ValueError(f"limit must be positive, got {limit}")
        self.limit = limit
        dtype = np.int32 if limit < 2 ** 31 else np.int64
        spf = np.zeros(limit + 1, dtype=dtype)
        base = primes_up_to(math.isqrt(limit))
        bounds = list(range(2, limit + 1, segment)) + [limit + 1]
        ranges = list(zip(bounds, bounds[1:]))

        def fill(lo, hi):
            sl = spf[lo:hi]
            for p in base:
                p = int(p)
                if p * p >= hi:
                    break
                start = max(p * p, ((lo + p - 1) // p) * p)
                view = sl[start - lo::p]
                view[view == 0] = p

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                list(pool.map(lambda r: fill(*r), ranges))
        else:
            for lo, hi in ranges:
                fill(lo, hi)
        rest = np.flatnonzero(spf == 0)
        spf[rest] = rest  # untouched entries are primes (or 0, 1)
        self.spf = spf

    def smallest_factor(self, m: int) -> int:
        if not 2 <= m <= self.limit:
            raise ValueError(f"{m} outside table range 2..{self.limit}")
        return int(self.spf[m])

    def factorize(self, m: int) -> dict:
        out: dict[int, int] = {}
        while m > 1:
            p = int(self.spf[m])
            out[p] = out.get(p, 0) + 1
            m //= p
        return out


_SPF_CACHE: dict[str, SpfTable] = {}
_FLAG_CACHE: dict[str, np.ndarray] = {}


def shared_table(limit: int, jobs: int = 1) -> SpfTable:
    """Process-wide smallest-prime-factor table, grown on demand."""
    table = _SPF_CACHE.get("t")
    if table is None or table.limit < limit:
        table = SpfTable(limit, jobs=jobs)
        _SPF_CACHE["t"] = table
    return table


def _shared_flags(limit: int) -> np.ndarray:
    flags = _FLAG_CACHE.get("f")
    if flags is None or len(flags) <= limit:
        flags = prime_flags(limit)
        _FLAG_CACHE["f"] = flags
    return flags


def factorize(m: int) -> dict:
    """Prime factorization of |m| >= 1 by trial division."""
    if m == 0:
        raise ValueError("0 has no prime factorization")
    m = abs(m)
    out: dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    f = 5
    while f * f <= m:
        for p in (f, f + 2):
            while m % p == 0:
                out[p] = out.get(p, 0) + 1
                m //= p
        f += 6
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def prime_factors(m: int) -> list[int]:
    """Sorted distinct prime divisors of |m|; empty for m = +-1."""
    return sorted(factorize(m)) if abs(m) != 1 else []


def gpf(m: int) -> int:
    """Greatest prime factor; P(+-1) = 1 by convention."""
    if m == 0:
        raise ValueError("P(0) is undefined")
    m = abs(m)
    if m == 1:
        return 1
    return max(factorize(m))


def gpf_ap_product(n: int, d: int, k: int) -> int:
    """P(n (n+d) ... (n+d(k-1))) as the max of per-term values."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if n < 1 or d < 1:
        raise ValueError("terms must be positive")
    return max(gpf(n + d * i) for i in range(k))


def gpf_array(limit: int, jobs: int = 1) -> np.ndarray:
    """Greatest prime factor of every m in [0, limit]; entries 0, 1 map to
    0, 1.  Peels smallest factors off the whole range at once."""
    table = shared_table(limit, jobs=jobs)
    spf = table.spf[:limit + 1]
    cur = np.arange(limit + 1, dtype=spf.dtype)
    out = np.ones(limit + 1, dtype=spf.dtype)
    out[0] = 0
    idx = np.flatnonzero(cur > 1)
    while idx.size:
        s = spf[cur[idx]]
        out[idx] = np.maximum(out[idx], s)
        cur[idx] //= s
        idx = idx[cur[idx] > 1]
    return out


@dataclass(frozen=True)
class RangeFilter:
    """Predicate selecting which n a range verification applies to."""

    min_exclusive: int = 0
    odd_only: bool = False
    not_divisible_by: int | None = None

    def mask(self, values: np.ndarray) -> np.ndarray:
        keep = values > self.min_exclusive
        if self.odd_only:
            keep &= values % 2 == 1
        if self.not_divisible_by:
            keep &= values % self.not_divisible_by != 0
        return keep

    def describe(self) -> str:
        parts = [f"n>{self.min_exclusive}"]
        if self.odd_only:
            parts.append("odd")
        if self.not_divisible_by:
            parts.append(f"{self.not_divisible_by} does not divide n")
        return ", ".join(parts)


@dataclass
class SieveReport:
    """Outcome of one range verification."""

    query: str
    params: dict
    exceptions: list
    extremal: object = None
    elapsed_ms: float = field(default=0.0, compare=False)

    def to_json_dict(self, include_elapsed: bool = False) -> dict:
        body = {
            "query": self.query,
            "params": self.params,
            "exceptions": [list(e) if isinstance(e, tuple) else e
                           for e in self.exceptions],
            "extremal": self.extremal,
        }
        if include_elapsed:
            body["elapsed_ms"] = round(self.elapsed_ms, 3)
        return body


def _now_ms() -> float:
    import time
    return time.monotonic() * 1000.0


def verify_gpf_bound(d: int, k: int, bound: int, n_limit: int,
                     flt: RangeFilter = RangeFilter(), jobs: int = 1) -> SieveReport:
    """All filtered n <= n_limit with P(n (n+d) ... (n+d(k-1))) <= bound."""
    t0 = _now_ms()
    g = gpf_array(n_limit + d * (k - 1), jobs=jobs)
    best = g[:n_limit + 1].copy()
    for i in range(1, k):
        np.maximum(best, g[i * d:i * d + n_limit + 1], out=best)
    values = np.arange(n_limit + 1, dtype=np.int64)
    keep = flt.mask(values) & (values >= 1) & (best <= bound)
    exceptions = [int(v) for v in values[keep]]
    return SieveReport(
        query="gpf-ap-bound",
        params={"d": d, "k": k, "bound": bound, "n_limit": n_limit,
                "filter": flt.describe()},
        exceptions=exceptions,
        extremal=max(exceptions, default=None),
        elapsed_ms=_now_ms() - t0,
    )


def smooth_pairs(M: int, gap: int, limit: int) -> list[int]:
    """All m in [1, limit] with P(m (m+gap)) <= M."""
    g = gpf_array(limit + gap)
    best = np.maximum(g[1:limit + 1], g[1 + gap:limit + 1 + gap])
    return [int(m) for m in np.flatnonzero(best <= M) + 1]


def exact_p5_pairs(limit: int) -> list[tuple[int, int]]:
    """Pairs (i, X) with 1 <= i <= 7, X > 80, 3 not dividing X, X(X+3i)
    even, and greatest prime factor of X(X+3i) exactly 5."""
    g = gpf_array(limit + 21)
    x = np.arange(limit + 1, dtype=np.int64)
    out = []
    for i in range(1, 8):
        best = np.maximum(g[:limit + 1], g[3 * i:limit + 1 + 3 * i])
        keep = (x > 80) & (x % 3 != 0) & (best == 5)
        keep &= ((x % 2 == 0) | ((x + 3 * i) % 2 == 0))
        out.extend((i, int(v)) for v in x[keep])
    return sorted(out)


def ap_prime_gaps(modulus: int, residues, limit: int,
                  gap_bound: int) -> SieveReport:
    """Consecutive primes within each residue class; reports the largest
    gap and every consecutive pair (p, q) with p <= limit and q - p >
    gap_bound.  The successor q may exceed limit; the sieve is extended
    until every class's last prime below the limit has one."""
    t0 = _now_ms()
    residues = tuple(residues)
    for l in residues:
        if math.gcd(l, modulus) != 1:
            raise ValueError(f"residue {l} not coprime to modulus {modulus}")
    slack = max(4 * gap_bound, 1000)
    while True:
        flags = _shared_flags(limit + slack)
        primes = np.flatnonzero(flags[:limit + slack + 1])
        ok = True
        per_class = {}
        for l in residues:
            sel = primes[primes % modulus == l]
            if sel.size < 2 or sel[-1] <= limit:
                ok = False
                break
            per_class[l] = sel
        if ok:
            break
        slack *= 2
    exceptions = []
    max_gap = 0
    for l in residues:
        sel = per_class[l]
        gaps = np.diff(sel)
        first_ok = sel[:-1] <= limit
        if first_ok.any():
            max_gap = max(max_gap, int(gaps[first_ok].max()))
        for j in np.flatnonzero(first_ok & (gaps > gap_bound)):
            exceptions.append((int(sel[j]), int(sel[j + 1])))
    exceptions.sort()
    return SieveReport(
        query="ap-prime-gaps",
        params={"modulus": modulus, "residues": list(residues),
                "limit": limit, "gap_bound": gap_bound},
        exceptions=exceptions,
        extremal=max_gap,
        elapsed_ms=_now_ms() - t0,
    )


def residue_prime_count(x, modulus: int, l: int) -> int:
    """Number of primes <= x congruent to l modulo modulus."""
    xf = math.floor(x)
    if xf < 2:
        return 0
    flags = _shared_flags(xf)
    primes = np.flatnonzero(flags[:xf + 1])
    return int((primes % modulus == l).sum())


def progression_prime_set(k: int) -> set[int]:
    """Primes dividing (alpha+3)(alpha+6)...(alpha+3k), with alpha = 1 for
    even k and alpha = 2 for odd k."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    alpha = 1 if k % 2 == 0 else 2
    out: set[int] = set()
    for i in range(1, k + 1):
        out.update(prime_factors(alpha + 3 * i))
    return out


def progression_prime_set_size_printed(k: int) -> int:
    """The closed-form count claimed for the progression prime set, using
    counts of primes in residue classes mod 3."""
    if k % 2 == 0:
        return (residue_prime_count(3 * k + 1, 3, 1)
                + residue_prime_count((3 * k + 1) / 2, 3, 1) - 1)
    return (residue_prime_count(3 * k + 2, 3, 2)
            + residue_prime_count((3 * k + 2) / 2, 3, 2) - 1)


def progression_prime_set_mismatches(k_lo: int, k_hi: int) -> list[tuple[int, int, int]]:
    """(k, direct size, closed-form size) wherever the two disagree."""
    out = []
    for k in range(k_lo, k_hi + 1):
        direct = len(progression_prime_set(k))
        printed = progression_prime_set_size_printed(k)
        if direct != printed:
            out.append((k, direct, printed))
    return out


def integer_root(n: int, e: int) -> int:
    """Largest r with r**e <= n, by integer Newton iteration."""
    if n < 0 or e < 1:
        raise ValueError("need n >= 0 and e >= 1")
    if n in (0, 1) or e == 1:
        return n
    r = 1 << ((n.bit_length() - 1) // e + 1)
    while True:
        nr = ((e - 1) * r + n // r ** (e - 1)) // e
        if nr >= r:
            break
        r = nr
    while r ** e > n:
        r -= 1
    while (r + 1) ** e <= n:
        r += 1
    return r


def _nth_prime(l: int) -> int:
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    limit = 16
    while True:
        ps = primes_up_to(limit)
        if len(ps) >= l:
            return int(ps[l - 1])
        limit *= 2


def smoothness_bound_exact(k: int, l: int, printed_inner_pi: bool = False) -> tuple[int, int]:
    """Exact integer core (N, T) of the smooth-range bound N**(1/T):
    N = (k-1)! times a correction p**L0(p) for each of the first l primes,
    T = k + 1 - pi(4k+3).

    L0(2) = -ord_2((k-1)!).  For odd p, with h the largest exponent such
    that floor((k-1)/p**h) still exceeds T, L0(p) = min(0, h*T - sum of
    floor((k-1)/p**u) for u = 1..h).  The inner T in that product is
    pi(4k+3)-based by default; printed_inner_pi switches it to the
    pi(4k)-based variant.
    """
    T = k + 1 - prime_count(4 * k + 3)
    if T <= 0:
        raise ValueError(f"exponent k+1-pi(4k+3) = {T} must be positive")
    inner = (k + 1 - prime_count(4 * k)) if printed_inner_pi else T
    fac = math.factorial(k - 1)
    denom = 1
    for p in primes_up_to(_nth_prime(l)):
        p = int(p)
        if p == 2:
            e = 0
            q = 2
            while q <= k - 1:
                e += (k - 1) // q
                q *= 2
            denom <<= e
            continue
        if k - 1 <= T:
            continue  # no exponent h satisfies floor((k-1)/p^h) > T
        h = 0
        while (k - 1) // p ** (h + 1) > T:
            h += 1
        x = h * inner - sum((k - 1) // p ** u for u in range(1, h + 1))
        if x < 0:
            denom *= p ** (-x)
    n_exact, rem = divmod(fac, denom)
    if rem:
        raise AssertionError("correction exponents exceeded factorial content")
    return n_exact, T


def smoothness_bound(k: int, l: int, printed_inner_pi: bool = False) -> float:
    """Real value of the smooth-range bound N**(1/T)."""
    n_exact, T = smoothness_bound_exact(k, l, printed_inner_pi)
    return math.exp(math.log(n_exact) / T) if n_exact > 1 else float(n_exact)


def smoothness_bound_pow2(k: int) -> float:
    """Variant bound ((k-1)! with all factors of 2 removed)**(1/T)."""
    T = k + 1 - prime_count(4 * k + 3)
    if T <= 0:
        raise ValueError(f"exponent k+1-pi(4k+3) = {T} must be positive")
    fac = math.factorial(k - 1)
    e = 0
    q = 2
    while q <= k - 1:
        e += (k - 1) // q
        q *= 2
    n_exact = fac >> e
    return math.exp(math.log(n_exact) / T) if n_exact > 1 else float(n_exact)


def growth_inequality(k: int, v0: int) -> bool:
    """True iff log(v0*8*e) < (4 log(v0*4k) / log(4k+3)) (1 + 1.2762/log(4k+3))."""
    if k < 1 or v0 < 1:
        raise ValueError("need k >= 1 and v0 >= 1")
    lg = math.log(4 * k + 3)
    lhs = math.log(v0 * 8 * math.e)
    rhs = (4 * math.log(v0 * 4 * k) / lg) * (1 + 1.2762 / lg)
    return lhs < rhs


def gpf_floor_check(n: int, d: int, k: int) -> bool:
    """Spot evaluation of P(n (n+d) ... (n+d(k-1))) >= n on the ranges
    where that inequality is quotable: d = 3 with 6450 < n <= 10.6*3k, or
    d = 4 with 10**6 < n <= 138*4k."""
    in_range = ((d == 3 and 6450 < n <= 10.6 * 3 * k)
                or (d == 4 and 10 ** 6 < n <= 138 * 4 * k))
    if not in_range:
        raise ValueError(f"(n={n}, d={d}, k={k}) outside the quotable range")
    return gpf_ap_product(n, d, k) >= n
