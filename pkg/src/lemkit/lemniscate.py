"""Connected components of the sublevel set {z : |p(z)| < level}.

Two independent counters are provided. The critical-value formula counts
1 + sum of multiplicities of critical points beta with |p(beta)| >= level,
which is exact arithmetic on the critical structure. The grid counter
rasterizes the indicator on a padded bounding box and flood-fills, knowing
nothing about critical points; agreement of the two is strong evidence the
count is right, and `count_components` demands it.

Grid subtleties, all of which bit during development:

- Components can be far smaller than a cell: an isolated zero's component
  has radius ~1/|p'(zero)|, easily 1e-6 while cells are ~1e-3. Zeros are
  therefore seed nodes of the flood fill, attached to raster regions (or
  to each other) through locally refined sub-grid patches and short
  segment probes rather than through their cell alone.
- A critical value exactly at the level is the degenerate touching case.
  The raster uses the slightly shrunk level * (1 - GRID_GUARD) so petals
  that meet only at an at-level saddle come apart, matching the >= of the
  formula; any configuration with margin above ~1e-7 is unaffected.
- A raster region containing no zero contradicts the maximum principle
  (every true component contains a zero), so it can only be an artifact
  of under-resolution; resolution is doubled up to a cap before refusing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .polycore import MonicPolynomial
from .rootfind import SolverError, critical_points

# Log-space slack when comparing critical values against the level: an
# exactly-at-level value must count despite ~1e-15 rounding in the log.
TIE_EPS = 1e-12
# Reports with margin below this (log-space, i.e. relative) are ambiguous.
MARGIN_THRESHOLD = 1e-6
# Relative shrink of the raster level; see module docstring.
GRID_GUARD = 1e-7
RESOLUTION_CAP = 8192
PATCH_REFINE = 16
PATCH_HALF_CELLS = 2.5


class GridResolutionError(RuntimeError):
    """The raster oracle hit its resolution cap without certifying."""


@dataclass(frozen=True)
class ComponentReport:
    """Component count plus how much to trust it.

    margin is the minimum over critical points of |log|p(beta)| - log level|
    (infinite when the method has no critical values to report, e.g. the
    grid); ambiguous means the margin is below MARGIN_THRESHOLD, in which
    case the touching configuration is not resolvable in floating point.
    """

    count: int
    method: str  # "critical_value" | "grid" | "both_agree"
    margin: float
    ambiguous: bool
    per_zero_isolated: tuple | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("component count must be at least 1")
        if self.method not in ("critical_value", "grid", "both_agree"):
            raise ValueError(f"unknown method {self.method!r}")


REPORT_CSV_HEADER = "degree,method,count,margin,ambiguous"


def report_csv_row(degree: int, report: ComponentReport) -> str:
    return (
        f"{degree},{report.method},{report.count},"
        f"{report.margin:.12g},{str(report.ambiguous).lower()}"
    )


def count_by_critical_values(p: MonicPolynomial, level: float = 1.0) -> ComponentReport:
    """1 + sum of multiplicities of critical points with |p| >= level.

    A multiplicity-k critical point contributes k. Values exactly at the
    level count (TIE_EPS absorbs the rounding) and flag the report
    ambiguous, since touching components cannot be resolved numerically.
    """
    if level <= 0 or not math.isfinite(level):
        raise ValueError("level must be a positive finite real")
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    if p.degree == 1:
        return ComponentReport(1, "critical_value", math.inf, False)

    cs = critical_points(p)
    if not cs.converged:
        raise SolverError(
            "critical-point solve did not converge (residual "
            f"{cs.residual:.3g}); refusing to count from unreliable values")
    log_level = math.log(level)
    logv = cs.log_values
    mult = cs.multiplicities
    counted = logv >= log_level - TIE_EPS
    count = 1 + int(np.sum(mult[counted]))
    margin = float(np.min(np.abs(logv - log_level)))
    ambiguous = bool(margin < MARGIN_THRESHOLD)
    return ComponentReport(count, "critical_value", margin, ambiguous)


def _bounding_box(p: MonicPolynomial, level: float):
    # Lambda_level is contained in the union of balls B(zero, level^(1/n)):
    # min_j |z - z_j| >= r forces |p(z)| >= r^n. Pad by 1.05x that radius so
    # no component can reach the box border.
    pad = 1.05 * max(1.0, level ** (1.0 / p.degree))
    re = p.zeros.real
    im = p.zeros.imag
    return (
        float(re.min() - pad),
        float(re.max() + pad),
        float(im.min() - pad),
        float(im.max() + pad),
    )


def _raster_inside(zeros, x0, y0, dx, dy, nx, ny, log_threshold):
    """Boolean raster of log|p| < log_threshold at cell centers.

    Distances to zeros are multiplied in blocks of 16 before the log: one
    log call per block instead of per zero. Block products of distances
    cannot overflow at these scales, and an underflow to zero only happens
    within ~1e-250 of a zero, where the cell is inside anyway.
    """
    xs = x0 + (np.arange(nx) + 0.5) * dx
    inside = np.empty((ny, nx), dtype=bool)
    deg = zeros.size
    rows = max(1, int(2_000_000 / max(1, nx * min(deg, 16))))
    for r0 in range(0, ny, rows):
        r1 = min(ny, r0 + rows)
        yy = y0 + (np.arange(r0, r1) + 0.5) * dy
        pts = xs[None, :] + 1j * yy[:, None]
        acc = np.zeros(pts.shape, dtype=float)
        with np.errstate(divide="ignore"):
            for b0 in range(0, deg, 16):
                d = np.abs(pts[..., None] - zeros[b0 : b0 + 16])
                acc += np.log(np.prod(d, axis=-1))
        inside[r0:r1] = acc < log_threshold
    return inside


def _cell_of(w, x0, y0, dx, dy, nx, ny):
    ix = min(nx - 1, max(0, int((w.real - x0) / dx)))
    iy = min(ny - 1, max(0, int((w.imag - y0) / dy)))
    return ix, iy


def _segment_stays_inside(p, a, b, log_threshold, samples=129):
    """Sufficient connectivity probe: the straight segment lies in the set."""
    t = np.linspace(0.0, 1.0, samples)
    pts = a + (b - a) * t
    return bool(np.max(p.log_abs(pts)) < log_threshold)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _attach_orphan(p, j, x0, y0, dx, dy, nx, ny, inside, labels, log_threshold):
    """Resolve a zero whose own cell center is outside the raster set.

    Flood-fills a refined local patch around the zero and reports which
    coarse raster regions and which other zeros its sub-grid component
    reaches. Returns (region_labels, zero_indices); both empty means the
    component is genuinely sub-cell and the zero seeds its own component.
    The patch is enlarged once if the local component spills over the
    patch border without attaching to anything.
    """
    z0 = complex(p.zeros[j])
    for half_cells in (PATCH_HALF_CELLS, 2.0 * PATCH_HALF_CELLS):
        m = int(round(2 * half_cells * PATCH_REFINE))
        lx0 = z0.real - half_cells * dx
        ly0 = z0.imag - half_cells * dy
        sdx = 2 * half_cells * dx / m
        sdy = 2 * half_cells * dy / m
        lin = _raster_inside(p.zeros, lx0, ly0, sdx, sdy, m, m, log_threshold)
        llab, _ = ndimage.label(lin)
        jx = min(m - 1, max(0, int((z0.real - lx0) / sdx)))
        jy = min(m - 1, max(0, int((z0.imag - ly0) / sdy)))
        home = llab[jy, jx]
        if home == 0:
            return [], []  # sub-cell component around the zero itself

        regions = set()
        zmates = []
        # coarse inside-cells whose center subcell belongs to the home blob
        ix_lo = max(0, int((lx0 - x0) / dx) - 1)
        ix_hi = min(nx, int((lx0 + 2 * half_cells * dx - x0) / dx) + 2)
        iy_lo = max(0, int((ly0 - y0) / dy) - 1)
        iy_hi = min(ny, int((ly0 + 2 * half_cells * dy - y0) / dy) + 2)
        for iy in range(iy_lo, iy_hi):
            cy = y0 + (iy + 0.5) * dy
            sy = int((cy - ly0) / sdy)
            if not (0 <= sy < m):
                continue
            for ix in range(ix_lo, ix_hi):
                if not inside[iy, ix]:
                    continue
                cx = x0 + (ix + 0.5) * dx
                sx = int((cx - lx0) / sdx)
                if 0 <= sx < m and llab[sy, sx] == home:
                    regions.add(int(labels[iy, ix]))
        for k in range(p.degree):
            if k == j:
                continue
            zk = complex(p.zeros[k])
            sx = int((zk.real - lx0) / sdx)
            sy = int((zk.imag - ly0) / sdy)
            if 0 <= sx < m and 0 <= sy < m and llab[sy, sx] == home:
                zmates.append(k)

        spills = (
            np.any(llab[0, :] == home)
            or np.any(llab[-1, :] == home)
            or np.any(llab[:, 0] == home)
            or np.any(llab[:, -1] == home)
        )
        if regions or zmates or not spills:
            return sorted(regions), zmates
    return sorted(regions), zmates


def _grid_count_once(p: MonicPolynomial, res: int, level: float):
    """One raster pass. Returns (count, certified)."""
    zs = p.zeros
    n = zs.size
    x0, x1, y0, y1 = _bounding_box(p, level)
    dx = (x1 - x0) / res
    dy = (y1 - y0) / res
    log_threshold = math.log(level) + math.log1p(-GRID_GUARD)

    inside = _raster_inside(zs, x0, y0, dx, dy, res, res, log_threshold)
    labels, nregions = ndimage.label(inside)  # default structure = 4-neighbor

    # Nodes: raster regions 0..nregions-1, then one node per zero.
    uf = _UnionFind(nregions + n)
    zero_node = lambda j: nregions + j

    orphans = []
    for j in range(n):
        ix, iy = _cell_of(zs[j], x0, y0, dx, dy, res, res)
        lab = int(labels[iy, ix])
        if lab > 0:
            uf.union(lab - 1, zero_node(j))
        else:
            orphans.append(j)

    # Short segment probes connect zero pairs whose shared component may be
    # thinner than a cell (both the orphan dumbbell and the narrow neck).
    reach = 3.0 * max(dx, dy)
    for j in range(n):
        for k in range(j + 1, n):
            if abs(zs[j] - zs[k]) <= reach and _segment_stays_inside(
                p, zs[j], zs[k], log_threshold
            ):
                uf.union(zero_node(j), zero_node(k))

    for j in orphans:
        regions, zmates = _attach_orphan(
            p, j, x0, y0, dx, dy, res, res, inside, labels, log_threshold
        )
        for lab in regions:
            uf.union(zero_node(j), lab - 1)
        for k in zmates:
            uf.union(zero_node(j), zero_node(k))

    roots_with_zero = set(uf.find(zero_node(j)) for j in range(n))
    region_roots = set(uf.find(r) for r in range(nregions))
    if not region_roots <= roots_with_zero:
        return 0, False  # raster region without a zero: under-resolved
    return len(roots_with_zero), True


def count_by_grid(
    p: MonicPolynomial, resolution: int = 2048, level: float = 1.0
) -> ComponentReport:
    """Zero-seeded flood-fill count over a cell-center raster.

    Fully independent of the critical-value formula. On evidence of
    under-resolution (a raster region with no zero) the resolution doubles,
    up to RESOLUTION_CAP, then GridResolutionError. The report carries no
    margin information (margin = inf): robustness is the formula's job.
    """
    if int(resolution) < 64:
        raise ValueError("resolution must be at least 64")
    if level <= 0 or not math.isfinite(level):
        raise ValueError("level must be a positive finite real")
    res = int(resolution)
    while True:
        count, certified = _grid_count_once(p, res, level)
        if certified:
            return ComponentReport(count, "grid", math.inf, False)
        if res >= RESOLUTION_CAP:
            raise GridResolutionError(
                f"raster regions without zeros persist at resolution {res}"
            )
        res = min(RESOLUTION_CAP, 2 * res)


def count_components(
    p: MonicPolynomial, resolution: int = 2048, level: float = 1.0
) -> ComponentReport:
    """Run both counters and demand agreement.

    Disagreement with a clear margin is an internal failure and raises.
    Disagreement under an ambiguous margin returns the formula's count
    flagged ambiguous: exact-level touching cases are the formula's >=
    convention by construction and no finite grid can overrule them.
    """
    cv = count_by_critical_values(p, level)
    grid = count_by_grid(p, resolution, level)
    if cv.count == grid.count:
        return ComponentReport(cv.count, "both_agree", cv.margin, cv.ambiguous)
    if cv.ambiguous:
        return ComponentReport(cv.count, "critical_value", cv.margin, True)
    raise RuntimeError(
        f"component counters disagree with clear margin: "
        f"formula {cv.count}, grid {grid.count}, margin {cv.margin:.3g}"
    )


def certify_isolated(
    p: MonicPolynomial, j: int, alpha: float, beta: float, big_constant: float = 1.0
) -> bool:
    """Derivative/spacing certificate that zero j sits in its own component.

    True iff log|p'(z_j)| >= n^alpha, the minimum spacing to other zeros is
    at least n^(-beta), and the spacing exceeds the component-diameter bound
    big_constant * n^2 / |p'(z_j)|. For any fixed (alpha, beta) the third
    condition follows from the first beyond the crossover degree where
    n^(-beta) > big_constant * n^2 * exp(-n^alpha); checking it against the
    actual derivative keeps the certificate usable at finite n. All
    comparisons run in log space, so degrees where exp(n^alpha) overflows
    are fine.
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    if big_constant <= 0:
        raise ValueError("big_constant must be positive")
    n = p.degree
    if n < 2:
        return False
    zs = p.zeros
    others = np.delete(zs, j)
    spacing = float(np.min(np.abs(others - zs[j])))
    if spacing == 0.0:
        return False  # repeated zero: p'(z_j) = 0, nothing to certify
    with np.errstate(divide="ignore"):
        log_dp = float(np.sum(np.log(np.abs(zs[j] - others))))
    if log_dp < n**alpha:
        return False
    if spacing < n ** (-beta):
        return False
    return math.log(spacing) > math.log(big_constant) + 2.0 * math.log(n) - log_dp


def isolated_component_test(p: MonicPolynomial, j: int, radius: float) -> bool:
    """Ball test: only z_j inside B(z_j, radius) and |p| >= 1 on its boundary.

    The boundary minimum is sampled at 64 * degree points (at least 256).
    True implies the component of z_j lies inside the ball and is the only
    one there. The test is necessarily radius-sensitive: petal-shaped
    components that extend past every such ball (zeros of unit modulus,
    say) correctly fail for every radius.
    """
    if radius <= 0 or not math.isfinite(radius):
        raise ValueError("radius must be a positive finite real")
    zs = p.zeros
    z0 = complex(zs[j])
    others = np.delete(zs, j)
    if others.size and float(np.min(np.abs(others - z0))) <= radius:
        return False
    m = max(64 * p.degree, 256)
    ring = z0 + radius * np.exp(2j * np.pi * np.arange(m) / m)
    # chunked so a dip below the level aborts without paying for the
    # whole ring; the answer is identical either way
    for lo in range(0, m, 2048):
        if np.min(p.log_abs(ring[lo:lo + 2048])) < 0.0:
            return False
    return True


# --- rendering ---------------------------------------------------------------

_SEGMENT_TABLE = {
    1: ((3, 0),),
    2: ((0, 1),),
    3: ((3, 1),),
    4: ((1, 2),),
    6: ((0, 2),),
    7: ((3, 2),),
    8: ((2, 3),),
    9: ((2, 0),),
    11: ((2, 1),),
    12: ((1, 3),),
    13: ((1, 0),),
    14: ((0, 3),),
}


def _corner_field(p, x0, y0, dx, dy, nx, ny, log_level):
    xs = x0 + np.arange(nx + 1) * dx
    f = np.empty((ny + 1, nx + 1), dtype=float)
    deg = p.zeros.size
    rows = max(1, int(2_000_000 / max(1, (nx + 1) * min(deg, 16))))
    for r0 in range(0, ny + 1, rows):
        r1 = min(ny + 1, r0 + rows)
        yy = y0 + np.arange(r0, r1) * dy
        pts = xs[None, :] + 1j * yy[:, None]
        f[r0:r1] = p.log_abs(pts) - log_level
    # clamp so interpolation never sees infinities (corner exactly on a zero)
    return np.clip(f, -1e6, 1e6)


def _marching_segments(f, x0, y0, dx, dy):
    """Line segments of the zero contour of corner field f, row-major order."""
    ny, nx = f.shape[0] - 1, f.shape[1] - 1
    segs = []
    for j in range(ny):
        for i in range(nx):
            v = (f[j, i], f[j, i + 1], f[j + 1, i + 1], f[j + 1, i])
            case = (
                (1 if v[0] < 0 else 0)
                | (2 if v[1] < 0 else 0)
                | (4 if v[2] < 0 else 0)
                | (8 if v[3] < 0 else 0)
            )
            if case in (0, 15):
                continue
            cx = x0 + i * dx
            cy = y0 + j * dy

            def edge_point(e):
                # edges: 0 bottom, 1 right, 2 top, 3 left
                if e == 0:
                    a, b = v[0], v[1]
                    t = a / (a - b)
                    return (cx + t * dx, cy)
                if e == 1:
                    a, b = v[1], v[2]
                    t = a / (a - b)
                    return (cx + dx, cy + t * dy)
                if e == 2:
                    a, b = v[3], v[2]
                    t = a / (a - b)
                    return (cx + t * dx, cy + dy)
                a, b = v[0], v[3]
                t = a / (a - b)
                return (cx, cy + t * dy)

            if case in (5, 10):
                # saddle cell: split by the center average, deterministically
                center_inside = (v[0] + v[1] + v[2] + v[3]) / 4.0 < 0
                if case == 5:
                    pairs = (((3, 0), (1, 2)) if center_inside else ((3, 2), (1, 0)))
                else:
                    pairs = (((0, 1), (2, 3)) if center_inside else ((0, 3), (2, 1)))
            else:
                pairs = _SEGMENT_TABLE[case]
            for ea, eb in pairs:
                segs.append((edge_point(ea), edge_point(eb)))
    return segs


def render_svg(p: MonicPolynomial, resolution: int = 512, level: float = 1.0) -> str:
    """Deterministic SVG 1.1 document: |p| = level contour plus zero markers."""
    if int(resolution) < 64:
        raise ValueError("resolution must be at least 64")
    if level <= 0 or not math.isfinite(level):
        raise ValueError("level must be a positive finite real")
    res = int(resolution)
    x0, x1, y0, y1 = _bounding_box(p, level)
    dx = (x1 - x0) / res
    dy = (y1 - y0) / res
    f = _corner_field(p, x0, y0, dx, dy, res, res, math.log(level))
    segs = _marching_segments(f, x0, y0, dx, dy)

    width = 640.0
    height = width * (y1 - y0) / (x1 - x0)
    sx = width / (x1 - x0)
    sy = height / (y1 - y0)

    def to_px(pt):
        return ((pt[0] - x0) * sx, (y1 - pt[1]) * sy)

    parts = []
    for a, b in segs:
        (ax, ay), (bx, by) = to_px(a), to_px(b)
        parts.append(f"M {ax:.4f} {ay:.4f} L {bx:.4f} {by:.4f}")
    path_d = " ".join(parts)

    dots = []
    for z in p.sorted_zeros():
        px, py = to_px((z.real, z.imag))
        dots.append(
            f'<circle cx="{px:.4f}" cy="{py:.4f}" r="2.5" fill="#000000"/>'
        )

    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.0f}" height="{height:.4f}" '
        f'viewBox="0 0 {width:.4f} {height:.4f}">\n'
        f'<rect width="100%" height="100%" fill="#ffffff"/>\n'
        f'<path d="{path_d}" fill="none" stroke="#cc0000" stroke-width="1.2"/>\n'
        + "\n".join(dots)
        + "\n</svg>\n"
    )
