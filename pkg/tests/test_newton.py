from fractions import Fraction

import pytest

from ghlcert.newton import (
    PreconditionError,
    admissible_degrees,
    build_polygon,
    intersect_admissible,
    margin_holds,
    newton_function,
    newton_margin_excludes,
    polygon_from_ordinates,
    polygon_from_params,
    polygon_svg,
    polygon_tsv,
    slope_window_excludes,
    viable_margin,
    widest_window,
    window_holds,
)
from ghlcert.polynomials import (
    GhlParams,
    IntegerPolynomial,
    SeedCoefficients,
    build_substituted,
)
from ghlcert.valuation import INFINITY, nu

from oracles import poly_mul


def carrier_polygon(p, d, u, alpha, n, delta):
    params = GhlParams(d=d, u=u, alpha=alpha, n=n, delta=delta)
    return polygon_from_params(p, params, SeedCoefficients.ones(n))


def test_hull_of_perfect_square():
    # (x+2)^2 = x^2 + 4x + 4 at p=2: a single edge of slope 1 whose
    # lattice points give unit segments, so degree 1 stays admissible.
    poly = IntegerPolynomial(tuple(reversed((1, 4, 4))))
    polygon = build_polygon(poly, 2)
    assert polygon.vertices == ((0, 0), (2, 2))
    edge = polygon.edges[0]
    assert (edge.width, edge.height, edge.lattice_length, edge.segment_width) == (2, 2, 2, 1)
    assert admissible_degrees(polygon).sorted() == [0, 1, 2]


def test_collinear_points_are_merged():
    polygon = polygon_from_ordinates(2, [0, 1, 2])
    assert polygon.vertices == ((0, 0), (2, 2))
    assert polygon.edges[0].slope == 1


def test_infinite_ordinates_skipped():
    g = IntegerPolynomial((4, 0, 0, -8, 0, 0, 1))   # x^6 - 8x^3 + 4
    polygon = build_polygon(g, 2)
    assert polygon.vertices == ((0, 0), (6, 2))
    assert polygon.min_slope == polygon.max_slope == Fraction(1, 3)
    assert polygon.ordinates[3] == 3
    assert polygon.ordinates[1] is INFINITY


def test_endpoint_preconditions():
    with pytest.raises(PreconditionError):
        polygon_from_ordinates(2, [INFINITY, 0, 1])
    with pytest.raises(PreconditionError):
        polygon_from_ordinates(2, [0, 1, INFINITY])
    with pytest.raises(PreconditionError):
        polygon_from_ordinates(2, [0])


def test_known_carrier_polygon():
    polygon = carrier_polygon(2, 3, -1, 2, 43, 3)
    assert polygon.vertices == ((0, 0), (96, 33), (120, 42), (129, 46))
    assert polygon.min_slope == Fraction(11, 32)
    assert polygon.max_slope == Fraction(4, 9)
    assert polygon.vertex_xs() == (0, 96, 120, 129)
    flat = carrier_polygon(2, 3, -1, 2, 43, 1)
    assert flat.vertices == ((0, 0), (32, 33), (40, 42), (43, 46))


def test_newton_function_values():
    polygon = carrier_polygon(2, 3, -1, 2, 43, 3)
    assert newton_function(polygon, 0) == 0
    assert newton_function(polygon, 6) == Fraction(33, 16)
    assert newton_function(polygon, 64) == 22
    assert newton_function(polygon, 96) == 33
    assert newton_function(polygon, 129) == 46
    with pytest.raises(ValueError):
        newton_function(polygon, 130)


def test_admissible_degrees_multi_edge():
    polygon = carrier_polygon(2, 3, -1, 2, 43, 3)
    widths = [(e.lattice_length, e.segment_width) for e in polygon.edges]
    assert widths == [(3, 32), (3, 8), (1, 9)]
    adm = admissible_degrees(polygon)
    degrees = adm.sorted()
    assert len(degrees) == 32
    assert 0 in adm and 129 in adm
    assert 8 in adm and 9 in adm and 17 in adm
    assert 1 not in adm and 3 not in adm


def test_intersect_admissible():
    a = admissible_degrees(polygon_from_ordinates(2, [0, 2, 2]))
    b = admissible_degrees(polygon_from_ordinates(3, [0, INFINITY, 2]))
    both = intersect_admissible([a, b])
    assert both.sorted() == [0, 1, 2]
    c = admissible_degrees(polygon_from_ordinates(2, [0, 1]))
    with pytest.raises(ValueError):
        intersect_admissible([a, c])


def test_margins_on_carrier():
    polygon = carrier_polygon(2, 3, -1, 2, 43, 3)
    assert viable_margin(polygon, 6) == 2
    assert margin_holds(polygon, 6, 2)
    assert not margin_holds(polygon, 6, 1)
    assert viable_margin(polygon, 64) is None   # margin gap closes
    assert viable_margin(polygon, 65) is None   # m < 2k


def test_margin_exclusion_preconditions():
    g = build_substituted(GhlParams(d=3, u=-1, alpha=2, n=43, delta=3),
                          SeedCoefficients.ones(43))
    assert newton_margin_excludes(g, 2, 6, 2)
    assert not newton_margin_excludes(g, 2, 6, 2, seed_ok=False)
    with pytest.raises(PreconditionError):
        newton_margin_excludes(g, 2, 0, 1)
    with pytest.raises(PreconditionError):
        newton_margin_excludes(g, 2, 70, 1)
    doubled = IntegerPolynomial(tuple(2 * c for c in g.coeffs))
    with pytest.raises(PreconditionError):
        newton_margin_excludes(doubled, 2, 6, 2)


def test_slope_window():
    params = GhlParams(d=4, u=-1, alpha=1, n=3, delta=4)
    poly = build_substituted(params, SeedCoefficients.ones(3))
    polygon = build_polygon(poly, 3)
    assert polygon.vertices == ((0, 0), (12, 2))
    assert window_holds(polygon, 0, 4)
    assert not window_holds(polygon, 0, 6)      # slope 1/6 is not < 1/6
    assert widest_window(polygon, 0) == 5
    assert slope_window_excludes(poly, 3, 0, 4)
    with pytest.raises(PreconditionError):
        slope_window_excludes(poly, 3, 4, 4)
    with pytest.raises(PreconditionError):
        slope_window_excludes(poly, 3, 0, 7)    # m < 2k


def test_widest_window_small_example():
    g = IntegerPolynomial((4, 0, 0, -8, 0, 0, 1))
    polygon = build_polygon(g, 2)
    assert widest_window(polygon, 0) == 2
    assert widest_window(polygon, 2) is None


def test_admissible_contains_true_factor_degrees(rng):
    # every genuine factorization must appear among the admissible degrees
    for _ in range(50):
        da = rng.randint(1, 3)
        db = rng.randint(1, 3)
        a = [rng.randint(-20, 20) for _ in range(da)] + [rng.randint(1, 20)]
        b = [rng.randint(-20, 20) for _ in range(db)] + [rng.randint(1, 20)]
        prod = poly_mul(a, b)
        p = rng.choice([2, 3, 5, 7])
        if prod[0] == 0 or prod[0] % p == 0 or prod[-1] % p == 0:
            continue
        polygon = build_polygon(IntegerPolynomial(tuple(prod)), p)
        adm = admissible_degrees(polygon)
        assert da in adm and db in adm


def test_renderings():
    polygon = carrier_polygon(2, 3, -1, 2, 43, 3)
    tsv = polygon_tsv(polygon)
    lines = tsv.strip().splitlines()
    assert lines[0] == "x\ty\tis_vertex"
    assert len(lines) == 131
    assert any("\tinf\t" in line for line in lines)
    svg = polygon_svg(polygon)
    assert "<svg" in svg
    assert svg.count('fill="crimson"') == 4     # one marker per vertex
