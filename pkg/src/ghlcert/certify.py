"""End-to-end factor-degree certification.

full_certify runs, in order: hypothesis validation, witness-prime scan,
the special handlers (2-adic break polygons for d=3 with a power-of-two
top factor, the 3-adic window for the two d=4 families whose top factor
is divisible by 3, and the own-prime polygon for binomial-seeded
instances with an exceptional top factor), then the generic polygon
stages.  Whatever degrees survive become the residual, and the verdict
says whether the instance is fully certified, lands in a known
exceptional family, or simply was not closed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .criteria import (DegreeLedger, ExclusionRecord, Method, PolygonCache,
                       candidate_primes, delta_stage, margin_stage,
                       window_stage, witness_stage)
from .newton import admissible_degrees, polygon_from_params, viable_margin, widest_window
from .polynomials import GhlParams, SeedCoefficients
from .sieve import gpf, prime_factors
from .valuation import nu, ord_factorial


class Verdict(str, enum.Enum):
    IRREDUCIBLE_CERTIFIED = "IRREDUCIBLE_CERTIFIED"
    EXCLUSIONS_ONLY = "EXCLUSIONS_ONLY"
    EXCEPTIONAL_FAMILY = "EXCEPTIONAL_FAMILY"


class HypothesisViolation(ValueError):
    """The instance does not satisfy the stated seed/parameter hypotheses."""


class SpecialCaseError(RuntimeError):
    """A special handler could not establish its conclusion; the caller may
    fall back to the generic stages but must not pretend success."""


class CertificationInternalError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not an input."""


def _is_power_of(m: int, p: int) -> bool:
    if m < p:
        return False
    while m % p == 0:
        m //= p
    return m == 1


def exception_family(params: GhlParams):
    """Tag of the known not-always-certifiable family this instance falls
    in, or None.  Membership depends only on (d, u, alpha) and the
    multiplicative shape of the top linear factor."""
    d, u, alpha, top = params.d, params.u, params.alpha, params.top_term
    if d == 3 and (u, alpha) == (0, 1) and _is_power_of(top, 2):
        return "d3:1+3n=2^a"
    if d == 3 and (u, alpha) == (0, 2):
        reduced = top
        fives = 0
        while reduced % 5 == 0:
            reduced //= 5
            fives += 1
        if fives > 0 and (reduced == 1 or _is_power_of(reduced, 2)):
            return "d3:2+3n=2^b*5^c"
    if d == 4 and (u, alpha) == (-1, 3) and _is_power_of(top, 3):
        return "d4:4n-1=3^a"
    if d == 4 and (u, alpha) == (0, 1):
        reduced = top
        for p in (3, 5):
            while reduced % p == 0:
                reduced //= p
        if reduced == 1 and top > 1:
            return "d4:1+4n=3^b*5^c"
    if d == 4 and (u, alpha) == (0, 3) and _is_power_of(top, 7):
        return "d4:3+4n=7^y"
    return None


# ---------------------------------------------------------------------------
# 2-adic handler: d = 3, top linear factor a power of two
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BreakSequence:
    """Predicted vertex abscissas (in unsubstituted units) of the 2-adic
    polygon when the top linear factor is 2^a."""

    eta: int
    s: int
    a: int
    u: int
    n: int
    breaks: tuple[int, ...]


def expected_breaks(params: GhlParams) -> BreakSequence:
    if params.d != 3:
        raise SpecialCaseError(f"2-adic breaks need d=3, got d={params.d}")
    top = params.top_term
    a = nu(2, top)
    if top < 2 or (1 << a) != top:
        raise SpecialCaseError(
            f"top linear factor {top} is not a power of two >= 2")
    eta = 0 if params.alpha == 1 else 1
    # 2^a = alpha + 3(u+n) forces a = eta (mod 2), so s is integral.
    if (a - eta) % 2 != 0:
        raise CertificationInternalError(
            f"parity mismatch: a={a}, eta={eta} for top={top}")
    s = (a - eta) // 2
    if s < 1:
        raise SpecialCaseError(f"top factor {top} too small (s={s})")
    n_formula = -params.u + (1 << eta) * (4 ** s - 1) // 3
    if n_formula != params.n:
        raise CertificationInternalError(
            f"break closed form gives n={n_formula}, instance has n={params.n}")
    breaks = [0]
    acc = 0
    for i in range(1, s):
        acc += 4 ** (s - i)
        breaks.append((1 << eta) * acc)
    breaks.append(params.n)
    return BreakSequence(eta=eta, s=s, a=a, u=params.u, n=params.n,
                         breaks=tuple(breaks))


def verify_break_valuations(bs: BreakSequence) -> bool:
    """Closed forms for nu_2((n_i - 1)!) at every predicted break against a
    direct Legendre evaluation."""
    for i, ni in enumerate(bs.breaks):
        if i == 0:
            continue
        if i < bs.s:
            expected = ni - bs.a + i
        else:
            # nu_2((n-1)!) = n-1-s_2(n-1), and the binary digit sum of n-1
            # is s-1 when (u, eta) = (0, 0) and s otherwise; the uniform
            # closed form n - s + u + 1 - 2^eta therefore needs a unit
            # correction in the (u, eta) = (-1, 1) case.
            expected = bs.n - bs.s + bs.u + 1 - (1 << bs.eta)
            if (bs.u, bs.eta) == (-1, 1):
                expected += 1
        if ord_factorial(2, ni - 1) != expected:
            return False
    return True


def special_2adic_certify(params: GhlParams,
                          seed: SeedCoefficients) -> ExclusionRecord:
    """Low-degree exclusions from the 2-adic polygon when the top linear
    factor is a power of two (witness primes are structurally unavailable
    there).  Returns a record covering the degrees it could certify, which
    may be a proper subset of [1, delta]; raises SpecialCaseError when the
    instance is outside the family or nothing at all is certified."""
    if params.d != 3:
        raise SpecialCaseError(f"2-adic handler needs d=3, got d={params.d}")
    n, delta = params.n, params.delta
    if (seed[0] * seed[n]) % 2 == 0:
        raise SpecialCaseError("seed endpoints must be odd")
    bs = expected_breaks(params)
    if not verify_break_valuations(bs):
        raise CertificationInternalError(
            f"break valuation closed forms disagree with Legendre at {bs}")
    carrier_poly = polygon_from_params(2, params, SeedCoefficients.ones(n))
    realized = tuple(carrier_poly.vertex_xs())
    full = tuple(delta * b for b in bs.breaks)
    accepted = {full, (0, delta * n)}
    if (params.u, params.alpha) == (-1, 1) and bs.s >= 2:
        # for this family the next-to-last predicted break is not extremal
        accepted.add(tuple(x for x in full if x != delta * bs.breaks[-2]))
    if realized not in accepted:
        raise SpecialCaseError(
            f"2-adic vertex sequence {realized} does not match any expected "
            f"break pattern {sorted(accepted)}")
    seeded_poly = polygon_from_params(2, params, seed)
    seeded_admissible = admissible_degrees(seeded_poly).admissible
    m = delta * n
    degrees: set[int] = set()
    margins: dict[int, int] = {}
    for K in range(1, delta + 1):
        r = viable_margin(carrier_poly, K)
        if r is not None:
            margins[K] = r
            degrees.add(K)
        elif K not in seeded_admissible:
            degrees.add(K)
    if not degrees:
        raise SpecialCaseError("2-adic polygon excluded no low degree")
    mirrored = {x for K in degrees for x in (K, m - K)}
    detail = {
        "prime": 2, "eta": bs.eta, "s": bs.s, "a": bs.a,
        "vertices": list(realized),
        "margins": {str(K): r for K, r in sorted(margins.items())},
        "min_slope": str(carrier_poly.min_slope),
        "max_slope": str(carrier_poly.max_slope),
    }
    return ExclusionRecord(method=Method.SPECIAL_2ADIC,
                           degrees=tuple(sorted(mirrored)), detail=detail)


# ---------------------------------------------------------------------------
# 3-adic handler: d = 4, q in {-3/4, 3/4}, top factor divisible by 3
# ---------------------------------------------------------------------------

_THREE_ADIC_FAMILIES = {(-1, 1): (3, 3), (0, 3): (3, 5)}


def special_3adic_check(params: GhlParams, s_limit: int = 10000) -> bool:
    """Family-level inequality behind the 3-adic window for d=4: the 3-adic
    content of the bottom product of 3+3s linear factors stays below
    3(s+1).  Small s are evaluated exactly; beyond that the count of
    multiples of 3, 9, ... in the arithmetic block is bounded by
    (s+1)/2 + log_3(l0+4s), so (l0+4s)^2 < 27^(s+1) suffices."""
    key = (params.u, params.alpha)
    if params.d != 4 or key not in _THREE_ADIC_FAMILIES:
        raise SpecialCaseError(
            f"3-adic handler needs d=4 with (u, alpha) in "
            f"{sorted(_THREE_ADIC_FAMILIES)}, got {key}")
    if params.top_term % 3 != 0:
        raise SpecialCaseError(
            f"3 does not divide the top linear factor {params.top_term}")
    j0, l0 = _THREE_ADIC_FAMILIES[key]
    for s in range(0, 4):
        j = j0 + 3 * s
        total = sum(nu(3, params.alpha + (params.u + i) * 4)
                    for i in range(1, j + 1))
        if not total < 3 * (s + 1):
            return False
    pow27 = 27 ** 5
    for s in range(4, s_limit + 1):
        if not (l0 + 4 * s) ** 2 < pow27:
            return False
        pow27 *= 27
    return True


# ---------------------------------------------------------------------------
# Own-prime polygon handler for binomial-seeded exceptional instances
# ---------------------------------------------------------------------------

def laguerre_np_certify(params: GhlParams) -> ExclusionRecord:
    """For a binomial-seeded instance whose top factor has exceptional
    shape, build the polygon at the largest prime divisor of n that avoids
    the top factor and the three lowest linear factors, check the vertex
    spacing, and exclude every degree outside the lattice-admissible set.

    The record is stated in the degrees of the instance itself: when
    delta == 1 a degree-k factor of the base polynomial would lift to a
    degree d*k factor of the substituted one, so exclusions transfer down.
    """
    d, n = params.d, params.n
    if params.u not in (-1, 0) or d not in (3, 4):
        raise SpecialCaseError(
            f"own-prime handler needs d in {{3, 4}} and u in {{-1, 0}}")
    if exception_family(params) is None:
        raise SpecialCaseError(
            f"top linear factor {params.top_term} is not of exceptional shape")
    low = ((params.alpha + (params.u - 1) * d)
           * (params.alpha + params.u * d)
           * (params.alpha + (params.u + 1) * d))
    top_primes = set(prime_factors(params.top_term))
    candidates = [p for p in prime_factors(n)
                  if p not in top_primes and low % p != 0]
    if not candidates:
        raise SpecialCaseError(
            f"no prime divisor of n={n} avoids the top factor "
            f"{params.top_term} and the low factors {abs(low)}")
    p = max(candidates)
    lift = GhlParams(d=d, u=params.u, alpha=params.alpha, n=n, delta=d)
    poly = polygon_from_params(p, lift, SeedCoefficients.laguerre(n))
    if any(x % d for x in poly.vertex_xs()):
        raise CertificationInternalError(
            f"vertex abscissa not a multiple of d: {poly.vertex_xs()}")
    xs = [x // d for x in poly.vertex_xs()]
    gaps_ok = (xs[1] >= 2 if len(xs) >= 2 else True)
    gaps_ok = gaps_ok and (xs[-2] <= n - 2 if len(xs) >= 2 else True)
    gaps_ok = gaps_ok and all(xs[i + 1] - xs[i] >= 2
                              for i in range(1, len(xs) - 2))
    if not gaps_ok:
        raise SpecialCaseError(
            f"vertex spacing too tight at p={p}: {xs}")
    admissible = admissible_degrees(poly).admissible
    if d in admissible:
        raise SpecialCaseError(
            f"degree {d} stays lattice-admissible at p={p} (vertices {xs})")
    if params.delta == d:
        degrees = [K for K in range(1, d * n) if K not in admissible]
    else:
        degrees = [k for k in range(1, n) if d * k not in admissible]
    if not degrees:
        raise SpecialCaseError(f"polygon at p={p} excluded nothing")
    detail = {"prime": p, "vertices": xs,
              "min_slope": str(poly.min_slope),
              "max_slope": str(poly.max_slope)}
    return ExclusionRecord(method=Method.LAGUERRE_NP,
                           degrees=tuple(sorted(degrees)), detail=detail)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def _runs(degrees):
    """Maximal consecutive runs of a sorted integer tuple, as (lo, hi)."""
    out = []
    for k in degrees:
        if out and k == out[-1][1] + 1:
            out[-1][1] = k
        else:
            out.append([k, k])
    return [(lo, hi) for lo, hi in out]


@dataclass(frozen=True)
class Certificate:
    params: GhlParams
    seed_kind: str
    seed: tuple[int, ...]
    records: tuple[ExclusionRecord, ...]
    residual: tuple[int, ...]
    verdict: Verdict
    notes: tuple[str, ...] = ()

    @property
    def total_degree(self) -> int:
        return self.params.delta * self.params.n

    def to_json_dict(self) -> dict:
        entries = []
        for rec in self.records:
            for lo, hi in _runs(rec.degrees):
                entry = {"k_range": [lo, hi], "method": rec.method.value,
                         "evidence": dict(rec.detail)}
                prime = rec.witness_prime
                if prime is None:
                    prime = rec.detail.get("prime")
                if prime is not None:
                    entry["prime"] = prime
                if rec.k is not None:
                    entry["evidence"]["k"] = rec.k
                entries.append(entry)
        entries.sort(key=lambda e: (e["k_range"][0], e["k_range"][1],
                                    e["method"]))
        p = self.params
        return {
            "schema_version": 1,
            "params": {"d": p.d, "u": p.u, "alpha": p.alpha, "n": p.n,
                       "delta": p.delta, "q": str(p.q),
                       "total_degree": self.total_degree},
            "seed": {"kind": self.seed_kind, "values": list(self.seed)},
            "records": entries,
            "residual": list(self.residual),
            "verdict": self.verdict.value,
            "notes": list(self.notes),
        }


def verify_certificate(cert: Certificate) -> bool:
    """Partition invariant: every degree in [1, total-1] appears in exactly
    one record's degree set or in the residual."""
    m = cert.total_degree
    seen: set[int] = set()
    count = 0
    for rec in cert.records:
        seen.update(rec.degrees)
        count += len(rec.degrees)
    seen.update(cert.residual)
    count += len(cert.residual)
    return count == m - 1 and seen == set(range(1, m))


def classify_seed(seed: SeedCoefficients) -> str:
    n = seed.n
    if seed.values == SeedCoefficients.ones(n).values:
        return "ones"
    if seed.values == SeedCoefficients.laguerre(n).values:
        return "laguerre"
    return "custom"


def _make_seed(n: int, seed_kind: str) -> SeedCoefficients:
    if seed_kind == "ones":
        return SeedCoefficients.ones(n)
    if seed_kind == "laguerre":
        return SeedCoefficients.laguerre(n)
    raise ValueError(f"unknown seed kind {seed_kind!r}")


def _check_hypotheses(params: GhlParams, seed: SeedCoefficients) -> None:
    if params.u not in (-1, 0):
        raise HypothesisViolation(f"u must be -1 or 0, got {params.u}")
    if len(seed.values) != params.n + 1:
        raise HypothesisViolation(
            f"seed length {len(seed.values)} does not match n={params.n}")
    endpoints = seed[0] * seed[params.n]
    top = params.top_term
    if params.d == 3:
        if gpf(endpoints) > 3:
            raise HypothesisViolation(
                f"seed endpoint product {endpoints} has a prime factor > 3")
        if _is_power_of(top, 2) and endpoints % 2 == 0:
            raise HypothesisViolation(
                "seed endpoints must be odd when the top factor is a power "
                "of two")
    elif params.d == 4:
        if gpf(endpoints) > 3:
            raise HypothesisViolation(
                f"seed endpoint product {endpoints} has a prime factor > 3")
        if _is_power_of(top, 3) and gpf(endpoints) > 2:
            raise HypothesisViolation(
                "seed endpoints must avoid the prime 3 when the top factor "
                "is a power of three")


def full_certify(params: GhlParams, seed: SeedCoefficients | None = None, *,
                 seed_kind: str | None = None, prime_limit: int = 50,
                 extra_primes=(), s_limit: int = 10000) -> Certificate:
    """Run every applicable exclusion stage and assemble a certificate."""
    if seed is None:
        seed = _make_seed(params.n, seed_kind or "ones")
    if seed_kind is None:
        seed_kind = classify_seed(seed)
    _check_hypotheses(params, seed)
    notes: list[str] = []
    ledger = DegreeLedger(params.delta * params.n)
    primes = candidate_primes(params, prime_limit, extra_primes)
    cache = PolygonCache(params, seed)

    witness_stage(params, seed, ledger)

    if params.d == 3 and _is_power_of(params.top_term, 2):
        try:
            rec = special_2adic_certify(params, seed)
            ledger.claim(rec.method, rec.degrees, mirror=False,
                         detail=rec.detail)
        except SpecialCaseError as exc:
            notes.append(f"2-adic handler: {exc}")

    if (params.d == 4 and (params.u, params.alpha) in _THREE_ADIC_FAMILIES
            and params.top_term % 3 == 0):
        try:
            if special_3adic_check(params, s_limit=s_limit):
                claimed = _three_adic_claim(params, cache, ledger)
                if not claimed:
                    notes.append(
                        "3-adic handler: window at p=3 excluded nothing new")
            else:
                notes.append("3-adic handler: family inequalities failed")
        except SpecialCaseError as exc:
            notes.append(f"3-adic handler: {exc}")

    if seed_kind == "laguerre" and exception_family(params) is not None:
        try:
            rec = laguerre_np_certify(params)
            ledger.claim(rec.method, rec.degrees, mirror=False,
                         detail=rec.detail)
        except SpecialCaseError as exc:
            notes.append(f"own-prime handler: {exc}")

    delta_stage(cache, ledger, primes)
    window_stage(cache, ledger, primes)
    margin_stage(cache, ledger, primes)

    residual = tuple(sorted(ledger.remaining))
    if not residual:
        verdict = Verdict.IRREDUCIBLE_CERTIFIED
    elif exception_family(params) is not None:
        verdict = Verdict.EXCEPTIONAL_FAMILY
    else:
        verdict = Verdict.EXCLUSIONS_ONLY
    return Certificate(params=params, seed_kind=seed_kind,
                       seed=tuple(seed.values), records=tuple(ledger.records),
                       residual=residual, verdict=verdict, notes=tuple(notes))


def _three_adic_claim(params: GhlParams, cache: PolygonCache,
                      ledger: DegreeLedger) -> bool:
    """Record the widest flat-tail window at p=3 as a SPECIAL_3ADIC claim."""
    best = None
    for carrier in ("self", "ones"):
        if carrier == "ones" and not cache.seed_coprime(3):
            continue
        poly = cache.polygon(3, carrier)
        if poly.ordinates[0] != 0 or poly.ordinates[poly.degree] == 0:
            continue
        k = widest_window(poly, 0)
        if k is not None and (best is None or k > best[0]):
            best = (k, carrier, poly)
    if best is None:
        return False
    k, carrier, poly = best
    rec = ledger.claim(
        Method.SPECIAL_3ADIC, range(1, k + 1),
        detail={"prime": 3, "carrier": carrier, "k": k,
                "max_slope": str(poly.max_slope)})
    return rec is not None


def certify_instance(d: int, u: int, alpha: int, n: int, delta: int,
                     seed_kind: str = "laguerre", **kwargs) -> Certificate:
    params = GhlParams(d=d, u=u, alpha=alpha, n=n, delta=delta)
    return full_certify(params, seed_kind=seed_kind, **kwargs)


def _batch_worker(args):
    d, u, alpha, n, delta, seed_kind = args
    cert = certify_instance(d, u, alpha, n, delta, seed_kind)
    return cert.to_json_dict()


def batch_certify(tasks, jobs: int = 1) -> list[dict]:
    """Certify many (d, u, alpha, n, delta, seed_kind) tuples; JSON dicts
    in input order.  jobs > 1 fans out over processes."""
    tasks = [tuple(t) for t in tasks]
    if jobs <= 1:
        return [_batch_worker(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_batch_worker, tasks))
