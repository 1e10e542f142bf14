"""Grid lines, chunk geometry, spines, herringbones, thresholds, covering."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tarskilab import (
    GeometryError,
    Spine,
    brute_fixed_points,
    build_geometry,
    build_instance,
    check_monotone,
    chunked_spine,
    covering_set,
    family_parameters,
    grid_line,
    herringbone,
    line_point,
    make_nos,
    nos_correspondence,
    region_anchor,
    render_string,
    round_half_up,
    tarski_family,
    thresholds,
)


def test_round_half_up_examples():
    assert round_half_up(Fraction(3, 2)) == 2
    assert round_half_up(2) == 2
    assert round_half_up(Fraction(249, 100)) == 2
    assert round_half_up(Fraction(-1, 2)) == 0  # tie toward the larger result
    assert round_half_up(Fraction(5, 2)) == 3


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=-50, max_value=50))
def test_round_half_up_is_nearest(x):
    r = round_half_up(x)
    assert abs(Fraction(r) - x) <= Fraction(1, 2)
    if abs(Fraction(r) - x) == Fraction(1, 2):
        assert Fraction(r) > x  # the tie goes up


def test_grid_line_examples():
    assert grid_line((1, 1), (1, 4)).points == ((1, 1), (1, 2), (1, 3), (1, 4))
    assert grid_line((1, 1), (3, 3)).points == (
        (1, 1), (2, 1), (2, 2), (3, 2), (3, 3)
    )
    assert grid_line((2, 5), (2, 5)).points == ((2, 5),)
    with pytest.raises(GeometryError, match="comparable"):
        grid_line((2, 1), (1, 2))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.integers(0, 25), st.integers(0, 25))
def test_grid_line_connected_monotone(x, y, dx, dy):
    gl = grid_line((x, y), (x + dx, y + dy))  # construction validates the path
    assert gl.points[0] == (x, y)
    assert gl.points[-1] == (x + dx, y + dy)
    assert len(gl.points) == dx + dy + 1


def test_endpoint_monotonicity_of_lines():
    # sliding the high endpoint right can never move interior points left
    u = (3, 5)
    for v1, v2 in itertools.combinations([(7, 9), (8, 8), (9, 7), (10, 6)], 2):
        lo = min(v1, v2)
        hi = max(v1, v2)
        for c in range(sum(u), sum(lo) + 1):
            assert line_point(u, lo, c)[0] <= line_point(u, hi, c)[0]


def test_build_geometry_values():
    geo3 = build_geometry(3)
    assert geo3.n_prime == 33
    assert [geo3.bound[i] for i in (1, 2, 4)] == [4, 24, 64]
    assert geo3.boundary_points[4] == ((1, 3), (2, 2), (3, 1))
    assert build_geometry(2).n_prime == 10
    with pytest.raises(GeometryError):
        build_geometry(1)
    for geo in (build_geometry(2), geo3):
        for c, pts in geo.boundary_points.items():
            assert len(pts) == geo.n
            for j, p in enumerate(pts, start=1):
                assert p[0] + p[1] == c and abs(p[0] - p[1]) <= geo.n - 1
        for i in range(1, geo.n + 1):
            for j in range(1, geo.n + 2):
                assert geo.high[(i, j)] == geo.low[(i, j + 1)]


@pytest.mark.parametrize("n", [2, 3])
def test_chunked_spines(n):
    geo = build_geometry(n)
    for C in itertools.product(range(1, n + 1), repeat=n + 1):
        spine = chunked_spine(geo, C)
        assert spine.vertices[0] == (1, 1)
        assert spine.vertices[-1] == (geo.n_prime, geo.n_prime)
        assert len(spine.vertices) == 2 * geo.n_prime - 1
        for i in range(1, n + 2):
            assert geo.boundary_point(geo.bound[i], C[i - 1]) in set(spine.vertices)


def test_chunked_spine_rejects_bad_vector():
    geo = build_geometry(2)
    with pytest.raises(GeometryError):
        chunked_spine(geo, (1, 2))
    with pytest.raises(GeometryError):
        chunked_spine(geo, (1, 2, 3))


def test_herringbone_small_cases():
    spine = Spine(vertices=((1, 1), (2, 1), (2, 2), (3, 2), (3, 3)))
    f = herringbone(spine, 4)  # fixed point (2, 2)
    assert f.value(2, 2) == (2, 2)
    assert f.value(1, 1) == (2, 1)  # on-spine below the fixed point
    assert f.value(3, 3) == (3, 2)  # on-spine above it
    assert f.value(1, 3) == (2, 2)  # above the spine
    assert f.value(3, 1) == (2, 2)  # below the spine
    assert brute_fixed_points(f) == [(2, 2)]
    assert check_monotone(f)[0]


def test_herringbone_fixed_point_index_out_of_range():
    spine = Spine(vertices=((1, 1), (1, 2), (2, 2)))
    with pytest.raises(GeometryError):
        herringbone(spine, 5)


@pytest.mark.parametrize("n", [2, 3])
def test_instance_family_sound(n):
    geo = build_geometry(n)
    seen = set()
    count = 0
    for C, i, fn in tarski_family(geo):
        count += 1
        seen.add(fn.values.tobytes())
        assert check_monotone(fn)[0]
        assert brute_fixed_points(fn) == [geo.boundary_point(geo.bound[i], C[i - 1])]
    assert count == n ** (n + 1) * (n + 1)
    assert len(seen) == count  # instances pairwise distinct


def test_build_instance_rejects_bad_parameters():
    geo = build_geometry(3)
    with pytest.raises(GeometryError):
        build_instance(geo, (1, 2, 1, 3), 5)
    with pytest.raises(GeometryError):
        build_instance(geo, (1, 2, 4, 3), 2)


def test_nos_correspondence_example_and_bijection():
    geo = build_geometry(3)
    s = nos_correspondence(geo, (1, 2, 1, 3), 2)
    assert render_string(s) == "↑←←→*←↓←←→→↓"
    for n in (2, 3):
        geo = build_geometry(n)
        nos = make_nos(n + 1, n)
        images = [nos_correspondence(geo, C, i) for C, i in family_parameters(geo)]
        assert images == list(nos.instances)  # bijection, in matching order
        for (C, i), s in zip(family_parameters(geo), images):
            assert nos.answer[s] == i


def test_thresholds_example():
    geo = build_geometry(3)
    quad = thresholds(geo, ("u", (1, 1)), geo.boundary_points[4], (2, 2))
    assert (quad.d1, quad.d4) == (1, 2)
    # probe equal to the fixed endpoint: every line passes through it
    quad0 = thresholds(geo, ("u", (1, 1)), geo.boundary_points[4], (1, 1))
    assert quad0.d1 == 0
    assert quad0.d4 == max(p[0] for p in geo.boundary_points[4])


def test_thresholds_contiguous_over_first_chunk():
    geo = build_geometry(3)
    for x in range(1, geo.n_prime + 1):
        for y in range(1, geo.n_prime + 1):
            c = x + y
            if not geo.bound[1] < c < geo.bound[2]:
                continue
            if not -(geo.n - 1) <= x - y <= geo.n:
                continue
            alpha, beta, _ = region_anchor(geo, (x, y))
            if not 1 <= beta - 1 <= geo.n:
                continue
            thresholds(  # raises on any contiguity violation
                geo,
                ("u", geo.boundary_point(geo.low[(alpha, beta)], beta - 1)),
                geo.boundary_points[geo.high[(alpha, beta)]],
                (x, y),
            )


def test_region_anchor_examples():
    geo = build_geometry(3)
    alpha, beta, ell = region_anchor(geo, (3, 3))
    assert ell == 2
    assert line_point((2, 2), (4, 4), 6) == (3, 3)
    # boundary points anchor at their own index
    for i in (1, 2, 3, 4):
        for j in (1, 2, 3):
            w = geo.boundary_point(geo.bound[i], j)
            assert region_anchor(geo, w)[2] == j
    with pytest.raises(GeometryError, match="tube"):
        region_anchor(geo, (1, 10))
    with pytest.raises(GeometryError, match="range"):
        region_anchor(geo, (1, 2))


@pytest.mark.parametrize("n", [2, 3])
def test_region_anchor_everywhere_in_tube(n):
    geo = build_geometry(n)
    for x in range(1, geo.n_prime + 1):
        for y in range(1, geo.n_prime + 1):
            c = x + y
            if geo.bound[1] <= c <= geo.bound[n + 1] and -(n - 1) <= x - y <= n:
                assert 1 <= region_anchor(geo, (x, y))[2] <= n


def test_covering_set_shapes():
    geo = build_geometry(3)
    assert covering_set(geo, (1, geo.n_prime)) == []
    p = geo.boundary_point(geo.bound[2], 2)
    assert covering_set(geo, p) == [p]
    for x in range(1, geo.n_prime + 1):
        for y in range(1, geo.n_prime + 1):
            assert len(covering_set(geo, (x, y))) <= 7


def test_covering_property_exhaustive_n2():
    geo = build_geometry(2)
    tables = []
    for _, _, fn in tarski_family(geo):
        tables.append(fn.values)
    enc = np.stack(tables)
    enc = enc[:, :, :, 0].astype(np.int64) * 16 + enc[:, :, :, 1]
    for x in range(1, 11):
        for y in range(1, 11):
            V = covering_set(geo, (x, y))
            col = enc[:, x - 1, y - 1]
            differ = col[:, None] != col[None, :]
            if not differ.any():
                continue
            covered = np.zeros_like(differ)
            for (vx, vy) in V:
                cv = enc[:, vx - 1, vy - 1]
                covered |= cv[:, None] != cv[None, :]
            assert not (differ & ~covered).any(), (x, y, V)
