"""Dirichlet-energy quadrature, degree counting, and trapped-area integration.

Maps are consumed through a light protocol: an object with

- ``evaluate(w)``: vectorized evaluation on complex points of the quarter disc,
- ``integration_regions()``: polar regions (possibly signed) whose charts pull
  the energy integrand back to seam-aligned annuli,
- ``mesh_regions()``: polar regions forming an exact partition of the domain,
  used for triangulated degree counts and area integrals.

The energy density in complex coordinates is
8 (|dK/dw|^2 + |dK/dwbar|^2) / (1 + |K|^2)^2 with Wirtinger derivatives
estimated by central differences; the coefficient 8 reproduces the exact
values E(identity) = pi and the quarter-sphere layer closed form.  Cells whose
center value exceeds the unit circle are evaluated in the reciprocal chart,
under which the density is invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import sector_centroid, stereographic_inverse
from .topology import SECTORS, sector_name

__all__ = [
    "Region",
    "QuadratureGrid",
    "SectorDegree",
    "DegreeReport",
    "IntegrationError",
    "dirichlet_energy",
    "degree_count",
    "degree_differences_by_winding",
    "trapped_area",
    "boundary_residual",
    "lemma1_lower_bound",
    "winding_number",
]

ENERGY_DENSITY_COEFF = 8.0


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Region:
    """A polar-chart subdomain: points r e^{i phi} with r in [r_lo, r_hi].

    ``evaluate`` maps chart points to extended-complex map values; the chart
    is chosen by the map so that the flat polar integrand equals the pulled
    back energy integrand (conformal charts only).  ``seams`` are radii where
    the map changes formula; cells never straddle them.  ``weight`` of -1
    marks a subtractive region (used to cut relocated discs out of the bulk).

    ``r_clusters`` and ``phi_clusters`` are (position, inner_scale) pairs
    around which geometric ladders of grid lines are inserted; they resolve
    sharp energy peaks at map zeros/poles whose derivative scales can be far
    below any uniform resolution.
    """

    name: str
    evaluate: object
    r_lo: float
    r_hi: float
    seams: tuple = ()
    spacing: str = "linear"  # or "log"
    weight: int = 1
    phi_lo: float = 0.0
    phi_hi: float = math.pi / 2
    tag: str = ""
    r_clusters: tuple = ()
    phi_clusters: tuple = ()
    skip: object = None  # optional mask on chart midpoints: cells to drop

    def radial_intervals(self):
        pts = sorted({self.r_lo, self.r_hi, *[s for s in self.seams if self.r_lo < s < self.r_hi]})
        return list(zip(pts[:-1], pts[1:]))


# resolution constants per grid level (level 1..5)
_N_PHI_BASE = 12
_N_LIN_BASE = 12
_N_DEC_BASE = 6
_LOG_FLOOR = 1e-4  # relative floor for log intervals reaching r = 0


def _level_counts(level: int):
    if not 1 <= level <= 6:
        raise ValueError("grid level must be in [1, 6]")
    scale = 2 ** (level - 1)
    return _N_PHI_BASE * scale, _N_LIN_BASE * scale, _N_DEC_BASE * scale


_CLUSTER_PER_DECADE = 6


def _cluster_ladder(points, lo, hi, clusters):
    """Insert geometric ladders around cluster centers into an edge list."""
    if not clusters:
        return points
    out = set(points.tolist())
    span = hi - lo
    for center, scale in clusters:
        inner = max(min(scale, span) * 0.02, 1e-14)
        reach = span
        n = max(4, int(math.ceil(_CLUSTER_PER_DECADE * math.log10(reach / inner))))
        ladder = np.geomspace(inner, reach, n)
        for side in (1.0, -1.0):
            vals = center + side * ladder
            out.update(v for v in vals.tolist() if lo < v < hi)
    return np.asarray(sorted(out))


def _radial_edges(region: Region, level: int) -> np.ndarray:
    _, n_lin, n_dec = _level_counts(level)
    edges = [region.r_lo]
    for a, b in region.radial_intervals():
        if region.spacing == "log":
            a_eff = a
            if a <= 0:
                a_eff = b * _LOG_FLOOR
                edges.append(a_eff)
            n = max(4, int(math.ceil(n_dec * math.log10(b / a_eff))))
            seg = np.geomspace(a_eff, b, n + 1)
        else:
            span = b - a
            n = max(6, int(math.ceil(n_lin * span / max(region.r_hi, 1e-30))))
            seg = np.linspace(a, b, n + 1)
        edges.extend(seg[1:])
    return _cluster_ladder(np.asarray(edges), region.r_lo, region.r_hi, region.r_clusters)


@dataclass
class QuadratureGrid:
    """Prepared midpoint cells for one region.

    Geometric midpoints are used in cells whose edge ratio is large (ladder
    cells near clustered singularities), arithmetic midpoints elsewhere.
    """

    region: Region
    r_edges: np.ndarray
    phi_edges: np.ndarray
    r_mid: np.ndarray = field(init=False)
    phi_mid: np.ndarray = field(init=False)

    def __post_init__(self):
        re = self.r_edges
        lo = np.where(re[:-1] > 0, re[:-1], re[1:] * _LOG_FLOOR * 0.5)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(lo > 0, re[1:] / lo, np.inf)
        self.r_mid = np.where(
            ratio > 1.2, np.sqrt(lo * re[1:]), 0.5 * (re[:-1] + re[1:])
        )
        pe = self.phi_edges
        self.phi_mid = 0.5 * (pe[:-1] + pe[1:])


def build_grids(regions, level: int):
    grids = []
    for region in regions:
        n_phi, _, _ = _level_counts(level)
        span = region.phi_hi - region.phi_lo
        n = max(8, int(round(n_phi * span / (math.pi / 2))))
        phi_edges = np.linspace(region.phi_lo, region.phi_hi, n + 1)
        phi_edges = _cluster_ladder(
            phi_edges, region.phi_lo, region.phi_hi, region.phi_clusters
        )
        grids.append(QuadratureGrid(region, _radial_edges(region, level), phi_edges))
    return grids


def _reciprocal(values: np.ndarray) -> np.ndarray:
    out = np.empty_like(values)
    finite = np.isfinite(values)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[finite] = 1.0 / values[finite]
    out[~finite] = 0.0
    zero = finite & (values == 0)
    out[zero] = np.inf
    return out


def _density(center, right, left, up, down, h):
    """Energy density from five-point stencils, reciprocal chart where |K| > 1."""
    stacked = [center, right, left, up, down]
    flip = ~np.isfinite(center) | (np.abs(center) > 1.0)
    vals = [np.where(flip, _reciprocal(v), v) for v in stacked]
    c, r, l, u, d = vals
    du = (r - l) / (2 * h)
    dv = (u - d) / (2 * h)
    kw = 0.5 * (du - 1j * dv)
    kwb = 0.5 * (du + 1j * dv)
    return (
        ENERGY_DENSITY_COEFF
        * (np.abs(kw) ** 2 + np.abs(kwb) ** 2)
        / (1.0 + np.abs(c) ** 2) ** 2
    )


def _region_energy(grid: QuadratureGrid) -> float:
    region = grid.region
    r = grid.r_mid[:, None]
    phi = grid.phi_mid[None, :]
    dr = (grid.r_edges[1:] - grid.r_edges[:-1])[:, None]
    dphi = (grid.phi_edges[1:] - grid.phi_edges[:-1])[None, :]
    w = r * np.exp(1j * phi)
    h = np.minimum(dr, r * dphi) / 6.0
    f = region.evaluate
    center = np.asarray(f(w), dtype=complex)
    right = np.asarray(f(w + h), dtype=complex)
    left = np.asarray(f(w - h), dtype=complex)
    up = np.asarray(f(w + 1j * h), dtype=complex)
    down = np.asarray(f(w - 1j * h), dtype=complex)
    dens = _density(center, right, left, up, down, h)
    bad = ~np.isfinite(dens)
    if np.any(bad):
        # subdivide offending cells once (2x2 midpoints)
        idx = np.argwhere(bad)
        for i, j in idx:
            sub = 0.0
            ok = True
            for a in (-0.25, 0.25):
                for b in (-0.25, 0.25):
                    wc = (r[i, 0] + a * dr[i, 0]) * np.exp(1j * (phi[0, j] + b * dphi[0, j]))
                    hh = h[i, j] / 2
                    pts = np.array([wc, wc + hh, wc - hh, wc + 1j * hh, wc - 1j * hh])
                    vals = np.asarray(f(pts), dtype=complex)
                    dd = _density(vals[0:1], vals[1:2], vals[2:3], vals[3:4], vals[4:5], hh)
                    if not np.isfinite(dd[0]):
                        ok = False
                        break
                    sub += 0.25 * dd[0]
                if not ok:
                    break
            if not ok:
                raise IntegrationError(
                    f"non-finite energy density persists in region {region.name}"
                )
            dens[i, j] = sub
    return float(np.sum(dens * r * dr * dphi))


def dirichlet_energy(sampled_map, level: int = 3) -> float:
    """Midpoint-rule Dirichlet energy over the map's integration regions."""
    total = 0.0
    for grid in build_grids(sampled_map.integration_regions(), level):
        total += grid.region.weight * _region_energy(grid)
    return total


# ---------------------------------------------------------------------------
# Triangulated degree counts and areas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorDegree:
    d: int
    D: int
    sample: complex
    confident: bool

    def __post_init__(self):
        if abs(self.d) > self.D or (self.d - self.D) % 2:
            raise AssertionError(f"inconsistent degree pair d={self.d}, D={self.D}")


@dataclass(frozen=True)
class DegreeReport:
    by_sector: dict

    def __getitem__(self, sector):
        return self.by_sector[tuple(sector)]

    def signed(self):
        return {s: e.d for s, e in self.by_sector.items()}

    def unsigned_total(self):
        return sum(e.D for e in self.by_sector.values())

    def as_dict(self):
        return {
            sector_name(s): {
                "d": e.d,
                "D": e.D,
                "sample": [e.sample.real, e.sample.imag],
                "confident": e.confident,
            }
            for s, e in self.by_sector.items()
        }


def _region_triangles(grid: QuadratureGrid):
    """Sphere-mapped triangle vertex arrays (each (n, 3)) for one region."""
    region = grid.region
    r = grid.r_edges
    phi = grid.phi_edges
    R, PHI = np.meshgrid(r, phi, indexing="ij")
    w = R * np.exp(1j * PHI)
    values = np.asarray(region.evaluate(w), dtype=complex)
    pts = stereographic_inverse(values)  # (nr+1, nphi+1, 3)
    a = pts[:-1, :-1]
    b = pts[1:, :-1]
    c = pts[1:, 1:]
    d = pts[:-1, 1:]
    keep_cell = None
    if region.skip is not None:
        mids = grid.r_mid[:, None] * np.exp(1j * grid.phi_mid[None, :])
        keep_cell = ~np.asarray(region.skip(mids), dtype=bool).reshape(-1)
    tri1 = (a.reshape(-1, 3), b.reshape(-1, 3), c.reshape(-1, 3))
    tri2 = (a.reshape(-1, 3), c.reshape(-1, 3), d.reshape(-1, 3))
    va = np.vstack((tri1[0], tri2[0]))
    vb = np.vstack((tri1[1], tri2[1]))
    vc = np.vstack((tri1[2], tri2[2]))
    keep = np.ones(len(va), dtype=bool)
    if keep_cell is not None:
        keep &= np.concatenate([keep_cell, keep_cell])
    # drop exactly degenerate triangles (duplicated vertices at chart centers)
    area2 = np.linalg.norm(np.cross(vb - va, vc - va), axis=1)
    keep &= area2 > 1e-18
    return va[keep], vb[keep], vc[keep]


def _all_triangles(sampled_map, level: int):
    vas, vbs, vcs = [], [], []
    for grid in build_grids(sampled_map.mesh_regions(), level):
        va, vb, vc = _region_triangles(grid)
        vas.append(va)
        vbs.append(vb)
        vcs.append(vc)
    return np.vstack(vas), np.vstack(vbs), np.vstack(vcs)


def _containment(va, vb, vc, p, tol=1e-10):
    """Signed containment of unit vector p in the spherical triangles.

    The all-positive hemisphere test identifies the triangle region only for
    counterclockwise triples (for clockwise ones it picks up the antipodal
    region), so each test is gated by the triangle's own orientation.
    """
    d1 = np.einsum("ij,j->i", np.cross(va, vb), p)
    d2 = np.einsum("ij,j->i", np.cross(vb, vc), p)
    d3 = np.einsum("ij,j->i", np.cross(vc, va), p)
    orient = np.einsum("ij,ij->i", np.cross(va, vb), vc)
    ccw = orient > 0
    pos = (d1 > tol) & (d2 > tol) & (d3 > tol) & ccw
    neg = (d1 < -tol) & (d2 < -tol) & (d3 < -tol) & ~ccw
    # near: p within tolerance of an edge of a potentially containing triangle
    near_pos = (d1 > -tol) & (d2 > -tol) & (d3 > -tol) & ccw & ~pos
    near_neg = (d1 < tol) & (d2 < tol) & (d3 < tol) & ~ccw & ~neg
    return pos, neg, near_pos | near_neg


def degree_count(sampled_map, targets=None, level: int = 3) -> DegreeReport:
    """Triangulate the domain, push vertices through the map, and count signed
    and unsigned coverings of one regular value per sector.

    Targets default to the sector centroids.  A low-confidence flag is set if
    the target lies within tolerance of an image-triangle edge after three
    perturbation retries.
    """
    va, vb, vc = _all_triangles(sampled_map, level)
    report = {}
    rng = np.random.default_rng(20240811)
    for sector in SECTORS:
        base = sector_centroid(sector) if targets is None else np.asarray(
            stereographic_inverse(targets[sector])
        )
        confident = False
        d = D = 0
        sample = base
        for attempt in range(4):
            p = base if attempt == 0 else _perturb_in_sector(base, sector, rng)
            pos, neg, near = _containment(va, vb, vc, p)
            if not near.any():
                d = int(pos.sum() - neg.sum())
                D = int(pos.sum() + neg.sum())
                confident = True
                sample = p
                break
            d = int(pos.sum() - neg.sum())
            D = int(pos.sum() + neg.sum())
            sample = p
        z = _project(sample)
        report[sector] = SectorDegree(d=d, D=D, sample=z, confident=confident)
    return DegreeReport(report)


def _project(p):
    from .geometry import stereographic

    return complex(stereographic(np.asarray(p, dtype=float)))


def _perturb_in_sector(base, sector, rng):
    p = base + rng.normal(scale=0.02, size=3)
    p /= np.linalg.norm(p)
    if tuple(1 if v > 0 else -1 for v in p) != tuple(sector):
        return base / np.linalg.norm(base)
    return p


def _signed_image_area(grid: QuadratureGrid) -> float:
    va, vb, vc = _region_triangles(grid)
    triple = np.einsum("ij,ij->i", va, np.cross(vb, vc))
    denom = (
        1.0
        + np.einsum("ij,ij->i", va, vb)
        + np.einsum("ij,ij->i", vb, vc)
        + np.einsum("ij,ij->i", vc, va)
    )
    signed = 2.0 * np.arctan2(triple, denom)
    signed[(triple == 0) & (denom <= 0)] = 0.0
    return float(np.sum(signed))


def trapped_area(sampled_map, level: int = 3):
    """Signed image area with the trapped-area sign convention.

    The solid-angle sum of each region's image triangles depends only on the
    region's boundary image, so the weighted integration regions give an exact
    decomposition.  Returns (omega, residual): omega snapped to the nearest
    multiple of pi/2 and the absolute deviation of the raw integral from it.
    """
    raw = 0.0
    for grid in build_grids(sampled_map.integration_regions(), level):
        raw -= grid.region.weight * _signed_image_area(grid)
    units = round(raw / (math.pi / 2))
    omega = units * math.pi / 2
    return omega, abs(raw - omega)


def boundary_residual(sampled_map, samples: int = 1000) -> float:
    """Max violation of the tangent boundary conditions on the three edges.

    Values beyond the unit circle are tested in the reciprocal chart, which
    measures distance to the same great circle and stays finite at poles.
    """
    t = (np.arange(samples) + 0.5) / samples
    f = sampled_map.evaluate

    def datum(values, kind):
        values = np.asarray(values, dtype=complex)
        flip = ~np.isfinite(values) | (np.abs(values) > 1.0)
        z = np.where(flip, _reciprocal(values), values)
        if kind == "real":
            return np.abs(z.imag)
        if kind == "imag":
            return np.abs(z.real)
        return np.abs(np.abs(z) - 1.0)

    res_real = datum(f(t + 0j), "real")
    res_arc = datum(f(np.exp(1j * (math.pi / 2) * t)), "arc")
    res_imag = datum(f(1j * t), "imag")
    return float(max(res_real.max(), res_arc.max(), res_imag.max()))


def lemma1_lower_bound(report: DegreeReport) -> float:
    """pi * sum of unsigned degrees; a lower bound for the Dirichlet energy."""
    return math.pi * report.unsigned_total()


# ---------------------------------------------------------------------------
# Brouwer degrees from boundary windings
# ---------------------------------------------------------------------------

def _pair_chart(values: np.ndarray, target: complex, reference: complex) -> np.ndarray:
    """Moebius chart sending target -> 0 and reference -> infinity."""
    xi = complex(target)
    ref = complex(reference)
    z = np.asarray(values, dtype=complex)
    finite = np.isfinite(z)
    zf = np.where(finite, z, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(finite, (zf - xi) / (zf - ref), 1.0 + 0j)
    return t


def winding_number(values: np.ndarray, target: complex, reference: complex) -> float:
    """Winding of a closed sampled curve around ``target`` relative to
    ``reference``.

    On the sphere a winding is only defined in the twice-punctured complement;
    for a map whose boundary values avoid both points the value equals
    d(target) - d(reference), the difference of signed preimage counts.  The
    curve is closed by joining the last sample to the first.
    """
    t = _pair_chart(values, target, reference)
    args = np.angle(t)
    d = np.diff(np.concatenate([args, args[:1]]))
    d = (d + math.pi) % (2 * math.pi) - math.pi
    return float(np.sum(d) / (2 * math.pi))


def _max_step(values: np.ndarray, target: complex, reference: complex) -> float:
    args = np.angle(_pair_chart(values, target, reference))
    d = np.diff(np.concatenate([args, args[:1]]))
    d = (d + math.pi) % (2 * math.pi) - math.pi
    return float(np.max(np.abs(d)))


def degree_differences_by_winding(
    evaluator, params, targets, reference, period: float, max_rounds: int = 16
):
    """d(target) - d(reference) for each target, from boundary windings.

    ``evaluator`` maps a parameter array (values taken modulo ``period``)
    describing the closed counterclockwise boundary loop to map values.
    Segments are bisected until every argument increment is below 0.9 rad for
    every target AND the windings are stable under one further global
    bisection (a whole aliased loop between two samples shows as a small
    step, so step size alone is not a safe criterion; seed the parameters
    densely near known fast structure).  Valid for any continuous map whose
    boundary values avoid the targets and the reference.
    """
    params = np.sort(np.unique(np.asarray(params, dtype=float) % period))
    values = np.asarray(evaluator(params), dtype=complex)

    def windings(vals):
        return [winding_number(vals, t, reference) for t in targets]

    def bisect(p):
        closing = p[0] + period
        mids = 0.5 * (p + np.concatenate([p[1:], [closing]]))
        return np.sort(np.unique(np.concatenate([p, mids % period])))

    current = windings(values)
    stable = False
    for _ in range(max_rounds):
        worst = max(_max_step(values, t, reference) for t in targets)
        params = bisect(params)
        values = np.asarray(evaluator(params), dtype=complex)
        refined = windings(values)
        if worst < 0.9 and all(
            abs(a - b) < 0.05 for a, b in zip(current, refined)
        ):
            current = refined
            stable = True
            break
        current = refined
    if not stable:
        raise IntegrationError("boundary windings failed to stabilize")
    diffs = []
    for wnd in current:
        nearest = round(wnd)
        if abs(wnd - nearest) > 0.2:
            raise IntegrationError(f"non-integral winding {wnd}")
        diffs.append(int(nearest))
    return diffs
