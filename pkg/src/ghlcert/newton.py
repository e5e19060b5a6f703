"""Newton polygons, Newton functions, and slope-based factor-degree exclusions.

The polygon of a degree-m polynomial with respect to a prime p is the lower
convex hull of the points (x, nu(coefficient of x^(m-x))) for x = 0..m, so
x = 0 sits at the leading coefficient.  Edges carry exact rational slopes
which strictly increase left to right.  Points with infinite ordinate (zero
coefficients) are never hull candidates.

Factor-degree reasoning uses the lattice-segment form of the hull: an edge
of width w and height h splits into gcd(w, |h|) minimal segments, and the
degree of any factor must be a subset sum of segment widths.  The coarser
whole-edge reading is unsound ((x+2)^2 at p=2 has one slope-1 edge of width
2 yet a degree-1 factor), so it is not offered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .polynomials import IntegerPolynomial
from .valuation import INFINITY, coefficient_valuations, ordinates_from_polynomial


class PreconditionError(ValueError):
    """An exclusion criterion was invoked outside its hypotheses."""


@dataclass(frozen=True)
class Edge:
    """One maximal straight stretch of the lower hull."""

    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    @property
    def slope(self) -> Fraction:
        return Fraction(self.height, self.width)

    @property
    def lattice_length(self) -> int:
        """Number of minimal integer-lattice segments on the edge."""
        return math.gcd(self.width, abs(self.height))

    @property
    def segment_width(self) -> int:
        return self.width // self.lattice_length


@dataclass(frozen=True)
class NewtonPolygon:
    prime: int
    degree: int
    ordinates: tuple  # entry x: valuation of coeff of x^(degree-x), or INFINITY
    vertices: tuple   # (x, y) lower-hull corners, x strictly increasing
    edges: tuple      # Edge between consecutive vertices

    @property
    def min_slope(self) -> Fraction:
        return self.edges[0].slope

    @property
    def max_slope(self) -> Fraction:
        return self.edges[-1].slope

    @property
    def rightmost_edge(self) -> Edge:
        return self.edges[-1]

    def vertex_xs(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.vertices)


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Monotone-chain lower hull with exact integer cross products."""
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            ox, oy = hull[-2]
            ax, ay = hull[-1]
            cross = (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def polygon_from_ordinates(p: int, ordinates) -> NewtonPolygon:
    """Build the polygon from precomputed ordinates (leading side at index 0)."""
    ordinates = tuple(ordinates)
    degree = len(ordinates) - 1
    if degree < 1:
        raise PreconditionError("polygon needs degree at least 1")
    if ordinates[0] is INFINITY or ordinates[-1] is INFINITY:
        raise PreconditionError(
            "leading and constant coefficients must be nonzero")
    finite = [(x, y) for x, y in enumerate(ordinates) if y is not INFINITY]
    hull = _lower_hull(finite)
    vertices = tuple(hull)
    edges = tuple(
        Edge(x0, y0, x1, y1)
        for (x0, y0), (x1, y1) in zip(hull, hull[1:])
    )
    if not edges:
        raise PreconditionError("polygon degenerated to a single point")
    return NewtonPolygon(prime=p, degree=degree, ordinates=ordinates,
                         vertices=vertices, edges=edges)


def build_polygon(poly: IntegerPolynomial, p: int) -> NewtonPolygon:
    """Polygon of an explicit polynomial; requires a nonzero constant term."""
    if poly.constant == 0:
        raise PreconditionError("constant term must be nonzero")
    return polygon_from_ordinates(p, ordinates_from_polynomial(p, poly))


def polygon_from_params(p: int, params, seed) -> NewtonPolygon:
    """Polygon of the seeded, power-substituted polynomial, computed from the
    factored coefficient form without assembling big integers."""
    return polygon_from_ordinates(p, coefficient_valuations(p, params, seed))


def newton_function(polygon: NewtonPolygon, x) -> Fraction:
    """Exact piecewise-linear height of the polygon at abscissa x."""
    x = Fraction(x)
    if not 0 <= x <= polygon.degree:
        raise ValueError(f"x={x} outside [0, {polygon.degree}]")
    if x == 0:
        return Fraction(polygon.vertices[0][1])
    for e in polygon.edges:
        if x <= e.x1:
            return e.y0 + e.slope * (x - e.x0)
    raise AssertionError("unreachable: x within range but no edge found")


@dataclass(frozen=True)
class FactorDegreeSet:
    """Degrees a hypothetical factor could have, per the lattice-segment
    subset-sum rule.  Always contains 0 and the full degree and is closed
    under k -> degree - k."""

    degree: int
    admissible: frozenset

    def __contains__(self, k: int) -> bool:
        return k in self.admissible

    def sorted(self) -> list[int]:
        return sorted(self.admissible)


def admissible_degrees(polygon: NewtonPolygon) -> FactorDegreeSet:
    """Subset sums of minimal lattice-segment widths, via a bitset."""
    bits = 1
    for e in polygon.edges:
        for _ in range(e.lattice_length):
            bits |= bits << e.segment_width
    admissible = frozenset(
        k for k in range(polygon.degree + 1) if (bits >> k) & 1)
    return FactorDegreeSet(degree=polygon.degree, admissible=admissible)


def intersect_admissible(items) -> FactorDegreeSet:
    """Intersection of admissible-degree sets (polygons of the same degree
    at different primes, or precomputed sets)."""
    sets = []
    for item in items:
        if isinstance(item, NewtonPolygon):
            item = admissible_degrees(item)
        sets.append(item)
    if not sets:
        raise ValueError("need at least one polygon or degree set")
    degree = sets[0].degree
    for s in sets[1:]:
        if s.degree != degree:
            raise ValueError(
                f"mismatched degrees: {s.degree} vs {degree}")
    admissible = frozenset.intersection(*(s.admissible for s in sets))
    return FactorDegreeSet(degree=degree, admissible=admissible)


def margin_holds(polygon: NewtonPolygon, k: int, r: int) -> bool:
    """True iff the polygon's Newton function g satisfies g(k) > r and
    g(m) - g(m-k) < r + 1."""
    m = polygon.degree
    gk = newton_function(polygon, k)
    rise = newton_function(polygon, m) - newton_function(polygon, m - k)
    return gk > r and rise < r + 1


def viable_margin(polygon: NewtonPolygon, k: int):
    """Smallest integer r for which margin_holds, or None.  r must satisfy
    g(m) - g(m-k) - 1 < r < g(k); the least integer above the left bound is
    floor(left) + 1."""
    m = polygon.degree
    if m < 2 * k:
        return None
    gk = newton_function(polygon, k)
    rise = newton_function(polygon, m) - newton_function(polygon, m - k)
    r = math.floor(rise - 1) + 1
    return r if gk > r else None


def newton_margin_excludes(g: IntegerPolynomial, p: int, k: int, r: int,
                           seed_ok: bool = True) -> bool:
    """Degree-k factor exclusion from a two-sided Newton-function margin.

    When this returns True, no polynomial obtained by rescaling the
    coefficients of g with p-units (any seed b_j with p not dividing
    b_0 * b_m) has a factor of degree k.  seed_ok is the caller's assertion
    that the intended seed satisfies that coprimality; passing False always
    yields False since the conclusion would not transfer.
    """
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    if g.degree < 2 * k:
        raise PreconditionError(
            f"degree {g.degree} too small for k={k} (need m >= 2k)")
    polygon = build_polygon(g, p)
    if polygon.ordinates[0] != 0:
        raise PreconditionError(
            f"prime {p} divides the leading coefficient")
    if not seed_ok:
        return False
    return margin_holds(polygon, k, r)


def window_holds(polygon: NewtonPolygon, l: int, k: int) -> bool:
    """True iff p divides every coefficient except the leading block down to
    index m-l, and the rightmost edge is flatter than 1/k."""
    m = polygon.degree
    if polygon.ordinates[0] != 0:
        return False
    for x in range(l + 1, m + 1):
        y = polygon.ordinates[x]
        if y is not INFINITY and y < 1:
            return False
    return polygon.max_slope < Fraction(1, k)


def slope_window_excludes(g: IntegerPolynomial, p: int, l: int, k: int) -> bool:
    """Factor-degree window exclusion: True means g has no factor of degree
    in [l+1, k]."""
    if not k >= 1:
        raise PreconditionError(f"k must be positive, got {k}")
    if l < 0 or 2 * l >= 2 * k:
        raise PreconditionError(f"need k > l >= 0, got l={l}, k={k}")
    if g.degree < 2 * k:
        raise PreconditionError(
            f"degree {g.degree} too small for k={k} (need m >= 2k)")
    polygon = build_polygon(g, p)
    return window_holds(polygon, l, k)


def widest_window(polygon: NewtonPolygon, l: int):
    """Largest k with window_holds(polygon, l, k), or None."""
    m = polygon.degree
    s = polygon.max_slope
    k_cap = m // 2
    if s > 0:
        k_cap = min(k_cap, math.ceil(Fraction(1, s)) - 1)
    if k_cap <= l:
        return None
    return k_cap if window_holds(polygon, l, k_cap) else None


def polygon_tsv(polygon: NewtonPolygon) -> str:
    """Dump rows `x<TAB>y<TAB>is_vertex`; infinite ordinates print as 'inf'."""
    vertex_xs = set(polygon.vertex_xs())
    lines = ["x\ty\tis_vertex"]
    for x, y in enumerate(polygon.ordinates):
        ys = "inf" if y is INFINITY else str(y)
        lines.append(f"{x}\t{ys}\t{int(x in vertex_xs)}")
    return "\n".join(lines) + "\n"


def polygon_svg(polygon: NewtonPolygon, width: int = 640, height: int = 480) -> str:
    """Simple standalone SVG: finite points, hull path, slope labels."""
    finite = [(x, y) for x, y in enumerate(polygon.ordinates)
              if y is not INFINITY]
    max_x = polygon.degree
    max_y = max(y for _, y in finite) or 1
    pad = 40

    def sx(x):
        return pad + x * (width - 2 * pad) / max_x

    def sy(y):
        return height - pad - y * (height - 2 * pad) / max_y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    path = " ".join(
        f"{'M' if i == 0 else 'L'}{sx(x):.2f},{sy(y):.2f}"
        for i, (x, y) in enumerate(polygon.vertices))
    parts.append(
        f'<path d="{path}" fill="none" stroke="black" stroke-width="1.5"/>')
    for x, y in finite:
        parts.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="steelblue"/>')
    for x, y in polygon.vertices:
        parts.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="crimson"/>')
    for e in polygon.edges:
        mx = sx((e.x0 + e.x1) / 2)
        my = sy((e.y0 + e.y1) / 2) - 6
        parts.append(
            f'<text x="{mx:.2f}" y="{my:.2f}" font-size="11" '
            f'text-anchor="middle">{e.slope}</text>')
    parts.append(
        f'<text x="{pad}" y="{height - 10}" font-size="12">'
        f'p={polygon.prime}, degree={polygon.degree}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
