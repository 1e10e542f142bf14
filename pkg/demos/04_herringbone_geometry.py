"""The diagonal-tube instance family: spines, herringbones, covering sets.

Run:  python demos/04_herringbone_geometry.py
"""

from tarskilab import (
    brute_fixed_points,
    build_geometry,
    build_instance,
    chunked_spine,
    covering_set,
    nos_correspondence,
    region_anchor,
    render_string,
)

n = 2
geo = build_geometry(n)
print(f"n={n}: side length n'={geo.n_prime}, chunk boundaries at sums "
      f"{geo.chunk_boundary_sums()}")
print("boundary points of the first chunk:", geo.boundary_points[geo.bound[1]])

C = (1, 2, 2)
spine = chunked_spine(geo, C)
print(f"\nchunked spine following C={C} ({len(spine.vertices)} vertices):")
grid = [["." for _ in range(geo.n_prime)] for _ in range(geo.n_prime)]
for (x, y) in spine.vertices:
    grid[y - 1][x - 1] = "s"
for i in range(1, n + 2):
    bx, by = geo.boundary_point(geo.bound[i], C[i - 1])
    grid[by - 1][bx - 1] = "B"
for row in reversed(grid):
    print("   " + "".join(row))

i = 2
fn = build_instance(geo, C, i)
print(f"\nherringbone with the fixed point on chunk boundary {i}:")
print("   fixed point:", brute_fixed_points(fn))
print("   value at (1, 10):", fn.value(1, 10), " (above the spine: flows down-right)")
print("   value at (10, 1):", fn.value(10, 1), " (below the spine: flows up-left)")

print("\npaired nested-ordered-search instance:",
      render_string(nos_correspondence(geo, C, i)))

# Any query can be answered from at most seven chunk-boundary queries.
for p in [(1, 10), (5, 5), (4, 6), (7, 6)]:
    alpha = "-"
    try:
        alpha = region_anchor(geo, p)
    except Exception:
        pass
    print(f"covering set of {p}: {covering_set(geo, p)}  (anchor {alpha})")
