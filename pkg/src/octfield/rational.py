"""Rational conformal/anticonformal representatives on the quarter disc.

Maps have the product form

    f(w) = +- w^(2m+1) * prod_j ((w^2 - r_j^2)/(r_j^2 w^2 - 1))^rho_j
                       * prod_k ((w^2 + s_k^2)/(s_k^2 w^2 + 1))^sigma_k
                       * prod_l ((w^2 - t_l^2)(w^2 - conj(t_l)^2) /
                                 ((t_l^2 w^2 - 1)(conj(t_l)^2 w^2 - 1)))^tau_l

with r_j, s_k in (0, 1) and |t_l| < 1; anticonformal maps evaluate f at the
conjugated argument.  Such maps satisfy the tangent boundary conditions:
real on [0, 1], imaginary on [0, i], unit modulus on the arc.

``realize`` searches this family for a representative of a prescribed
conformal or anticonformal class.  Only the count of factors, the exponent
sign sequence along each edge, the power, and the overall sign affect the
homotopy invariants (not the particular r/s values), so the search enumerates
those discrete shapes and accepts on an exact match of the wrapping numbers
measured from boundary windings.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import sector_centroid_complex
from .numerics import degree_differences_by_winding
from .topology import (
    SECTORS,
    OctantTopology,
    WrappingNumbers,
    wrapping_from_invariants,
)

__all__ = [
    "RationalMapSpec",
    "InvalidSpecError",
    "ConstructionError",
    "evaluate_rational",
    "boundary_points",
    "measure_wrapping",
    "measure_wrapping_rational",
    "predict_invariants",
    "realize",
]


class InvalidSpecError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class RationalMapSpec:
    sign: int = 1
    m: int = 0
    real_factors: tuple = ()  # (r, +-1)
    imag_factors: tuple = ()  # (s, +-1)
    complex_factors: tuple = ()  # (t, +-1)
    orientation: str = "conformal"

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidSpecError("sign must be +-1")
        if self.orientation not in ("conformal", "anticonformal"):
            raise InvalidSpecError("orientation must be conformal or anticonformal")
        for r, rho in self.real_factors:
            if not (0 < r < 1) or rho not in (1, -1):
                raise InvalidSpecError(f"bad real factor ({r}, {rho})")
        for s, sig in self.imag_factors:
            if not (0 < s < 1) or sig not in (1, -1):
                raise InvalidSpecError(f"bad imaginary factor ({s}, {sig})")
        for t, tau in self.complex_factors:
            if not (abs(t) < 1) or not (0 < np.angle(t) < math.pi / 2) or tau not in (1, -1):
                raise InvalidSpecError(f"bad complex factor ({t}, {tau})")
        seen = {}
        for r, rho in self.real_factors:
            if seen.setdefault(("r", r), rho) != rho:
                raise InvalidSpecError(f"real parameter collision at r={r} (0/0)")
        for s, sig in self.imag_factors:
            if seen.setdefault(("s", s), sig) != sig:
                raise InvalidSpecError(f"imaginary parameter collision at s={s} (0/0)")

    def degree(self) -> int:
        """Covering count over the sphere: |2m+1| + 2a + 2b + 4c."""
        return (
            abs(2 * self.m + 1)
            + 2 * len(self.real_factors)
            + 2 * len(self.imag_factors)
            + 4 * len(self.complex_factors)
        )


def evaluate_rational(spec: RationalMapSpec, w):
    """Evaluate the map; the extended value inf is returned at poles.

    Numerator and denominator are accumulated separately so zeros and poles
    stay exact; anticonformal specs are evaluated at the conjugate argument.
    """
    w = np.asarray(w, dtype=complex)
    scalar = np.ndim(w) == 0
    z = np.conj(w) if spec.orientation == "anticonformal" else w
    z = np.atleast_1d(z)
    num = np.ones_like(z)
    den = np.ones_like(z)
    p = 2 * spec.m + 1
    if p >= 0:
        num = num * z**p
    else:
        den = den * z ** (-p)
    z2 = z * z
    for r, rho in spec.real_factors:
        top, bottom = z2 - r * r, r * r * z2 - 1
        if rho > 0:
            num, den = num * top, den * bottom
        else:
            num, den = num * bottom, den * top
    for s, sig in spec.imag_factors:
        top, bottom = z2 + s * s, s * s * z2 + 1
        if sig > 0:
            num, den = num * top, den * bottom
        else:
            num, den = num * bottom, den * top
    for t, tau in spec.complex_factors:
        tc = np.conj(t)
        top = (z2 - t * t) * (z2 - tc * tc)
        bottom = (t * t * z2 - 1) * (tc * tc * z2 - 1)
        if tau > 0:
            num, den = num * top, den * bottom
        else:
            num, den = num * bottom, den * top
    num = num * spec.sign
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    pole = (den == 0) & (num != 0)
    out = np.where(pole, np.inf + 0j, out)
    bad = (den == 0) & (num == 0)
    if np.any(bad):
        raise InvalidSpecError("indeterminate 0/0 during evaluation (parameter collision)")
    return complex(out[0]) if scalar else out


def boundary_points(t):
    """Counterclockwise boundary of Q parametrized on [0, 3):
    real edge, arc, then imaginary edge back to the origin."""
    t = np.asarray(t, dtype=float) % 3.0
    w = np.empty(t.shape, dtype=complex)
    m0 = t < 1
    m1 = (t >= 1) & (t < 2)
    m2 = t >= 2
    w[m0] = t[m0]
    w[m1] = np.exp(1j * (math.pi / 2) * (t[m1] - 1.0))
    w[m2] = 1j * (3.0 - t[m2])
    return w


_CENTROIDS = {s: sector_centroid_complex(s) for s in SECTORS}
# reference point for winding pairs: interior of the (---) sector
_REFERENCE = _CENTROIDS[(-1, -1, -1)]


def measure_degree_differences(evaluator, params=None):
    """d(centroid_sigma) - d(centroid_---) for all sectors, from boundary
    windings.

    Works for any continuous map satisfying the tangent boundary conditions:
    its boundary values stay on the three sector-bounding great circles and
    never meet the sector centroids.  ``params`` seeds the boundary
    parametrization on [0, 3) (see ``boundary_points``); pass a log-refined
    seed for maps with fine structure near the vertices.
    """
    if params is None:
        params = np.linspace(0.0, 3.0, 600, endpoint=False)
    targets = [_CENTROIDS[s] for s in SECTORS]
    return degree_differences_by_winding(
        lambda p: evaluator(boundary_points(p)),
        params,
        targets,
        _REFERENCE,
        period=3.0,
    )


def measure_wrapping(evaluator, total_signed_degree: int, params=None) -> WrappingNumbers:
    """Wrapping numbers (w_sigma = -d(sigma)) from boundary windings, anchored
    by the known sum of signed degrees over the eight sector centroids."""
    diffs = measure_degree_differences(evaluator, params)
    anchor, remainder = divmod(total_signed_degree - sum(diffs), 8)
    if remainder:
        raise ConstructionError(
            f"winding differences {diffs} inconsistent with total degree "
            f"{total_signed_degree}"
        )
    return WrappingNumbers(tuple(-(d + anchor) for d in diffs))


def singular_structure(spec: RationalMapSpec):
    """Zeros/poles of the map inside the closed quarter disc with the length
    scale on which |f| passes through unit modulus there.

    Near an edge zero or pole the energy density is a bump of this scale; the
    scale can be many orders of magnitude below any uniform grid (residues
    shrink with the product of the other factors), so quadrature grids cluster
    lines around these points.
    """
    points = []
    p = 2 * spec.m + 1
    if abs(p) >= 1:
        points.append(0.0 + 0.0j)
    for r, _ in spec.real_factors:
        points.append(complex(r, 0.0))
    for s, _ in spec.imag_factors:
        points.append(complex(0.0, s))
    for t, _ in spec.complex_factors:
        points.append(complex(t))
    out = []
    deltas = np.geomspace(1e-13, 0.2, 60)
    for w0 in points:
        direction = np.exp(1j * (0.9 if w0.imag == 0 else (0.4 if w0.real == 0 else 2.2)))
        vals = np.abs(evaluate_rational(spec, w0 + deltas * direction))
        inside = (vals > 0.2) & (vals < 5.0)
        if inside.any():
            scale = float(deltas[int(np.argmax(inside))])
        else:
            jump = (vals[:-1] < 0.2) & (vals[1:] > 5.0) | (vals[:-1] > 5.0) & (vals[1:] < 0.2)
            scale = float(deltas[int(np.argmax(jump))]) if jump.any() else 0.1
        out.append((w0, max(scale, 1e-13)))
    # arc concentration of the power factor
    q = abs(p) + 2 * len(spec.real_factors) + 2 * len(spec.imag_factors)
    if q >= 6:
        out.append((1.0 + 0.0j, 1.0 / q))
    return out


def quadrature_clusters(spec: RationalMapSpec):
    """(r_clusters, phi_clusters) resolving the map's singular structure in
    the standard polar chart of the quarter disc."""
    r_clusters = []
    phi_clusters = []
    for w0, scale in singular_structure(spec):
        radius = abs(w0)
        r_clusters.append((radius, scale))
        if radius > 1e-9:
            phi_clusters.append((float(np.angle(w0)), scale / max(radius, 0.1)))
    return tuple(r_clusters), tuple(phi_clusters)


def boundary_seed_for_spec(spec: RationalMapSpec, n_base: int = 1200) -> np.ndarray:
    """Boundary parameters with geometric ladders into every edge zero/pole,
    where the boundary image runs around a fast sub-loop that uniform
    sampling would alias away."""
    parts = [np.linspace(0.0, 3.0, n_base, endpoint=False)]
    ladder = np.geomspace(1e-9, 0.2, 48)
    singular = [0.0, 1.0, 2.0]  # vertices
    singular += [r for r, _ in spec.real_factors]  # real edge param t = r
    singular += [3.0 - s for s, _ in spec.imag_factors]  # imaginary edge t = 3 - s
    for t0 in singular:
        parts.append((t0 + ladder) % 3.0)
        parts.append((t0 - ladder) % 3.0)
    return np.sort(np.unique(np.concatenate(parts)))


def measure_wrapping_rational(spec: RationalMapSpec) -> WrappingNumbers:
    """Measured wrapping numbers of a rational map.

    The sum of signed degrees over the eight sector centroids anchors the
    winding differences: the product family is equivariant under the eight
    reflections of the sphere (f(conj w) = conj f(w), f(-w) = -f(w),
    f(1/w) = 1/f(w)), so every centroid orbit has exactly ``degree``
    preimages on the whole sphere, all of one orientation.
    """
    total = spec.degree() if spec.orientation == "conformal" else -spec.degree()
    return measure_wrapping(
        lambda w: evaluate_rational(spec, w), total, boundary_seed_for_spec(spec)
    )


# ---------------------------------------------------------------------------
# Analytic invariants of a product spec
# ---------------------------------------------------------------------------

def _edge_kink(start_zero: bool, seg_sign: int, types, end_sign: int) -> int:
    """Kink number of one straight edge from its crossing structure.

    The edge image runs along a target great circle; its lifted angle
    2*atan(f) moves inside bands of constant sign and exits through angle 0
    (mod 2pi) at zeros of f and through pi (mod 2pi) at poles.  The lift is
    therefore determined by the ordered crossing types alone; the kink is the
    full-turn count of the lift relative to the shortest geodesic.
    """
    n = 0 if start_zero else 1  # lift position theta = n*pi
    sign = seg_sign
    for t in types:
        band = n if ((n % 2 == 0) == (sign > 0)) else n - 1
        if t == "z":
            n = band if band % 2 == 0 else band + 1
        else:
            n = band if band % 2 == 1 else band + 1
        sign = -sign
    band = n if ((n % 2 == 0) == (sign > 0)) else n - 1
    if (band % 2 == 0) != (end_sign > 0):
        raise AssertionError("edge lift inconsistent with endpoint sign")
    theta_end = band * math.pi + math.pi / 2
    theta_start = 0.0 if start_zero else math.pi
    total = theta_end - theta_start
    end_val = math.pi / 2 if end_sign > 0 else -math.pi / 2
    start_val = 0.0 if start_zero else math.pi
    shortest = (end_val - start_val + math.pi) % (2 * math.pi) - math.pi
    return round(-(total - shortest) / (2 * math.pi))


def predict_invariants(spec: RationalMapSpec) -> OctantTopology:
    """Exact homotopy invariants of the map, from the factor structure alone.

    Edge kinks come from the lift simulation over the ordered edge crossings
    (zeros/poles of the factors on each edge); the arc winding accumulates
    (2m+1) pi/2 plus pi per first-order factor (signed by exponent) and 2 pi
    per complex factor; the trapped area is -+(pi/2) times the covering count
    because every sector centroid orbit has exactly ``degree`` preimages.
    """
    a_seq = [rho for _, rho in sorted(spec.real_factors)]
    b_seq = [sig for _, sig in sorted(spec.imag_factors)]
    m, sgn = spec.m, spec.sign
    a, b = len(a_seq), len(b_seq)
    start_zero = m >= 0
    ex = sgn * (-1) ** a
    ey_f = sgn * (-1) ** ((m % 2) + b)
    ez = 1 if m >= 0 else -1

    ky = _edge_kink(start_zero, sgn, ["z" if e > 0 else "p" for e in a_seq], ex)

    y_seg = sgn * (-1) ** (m % 2)
    y_types = ["z" if e > 0 else "p" for e in b_seq]

    theta_f = (
        (2 * m + 1) * math.pi / 2
        + math.pi * sum(a_seq)
        + math.pi * sum(b_seq)
        + 2 * math.pi * sum(tau for _, tau in spec.complex_factors)
    )

    def arc_kink(theta, ex_val, ey_val):
        start_val = 0.0 if ex_val > 0 else math.pi
        end_val = ey_val * math.pi / 2
        shortest = (end_val - start_val + math.pi) % (2 * math.pi) - math.pi
        return round(-(theta - start_val - shortest) / (2 * math.pi))

    if spec.orientation == "conformal":
        ey = ey_f
        kx = _edge_kink(start_zero, y_seg, y_types, ey_f)
        kz = arc_kink(theta_f + (0.0 if ex > 0 else math.pi), ex, ey)
        u = -spec.degree()
    else:
        ey = -ey_f
        kx = _edge_kink(start_zero, -y_seg, y_types, ey)
        kz = arc_kink(-(theta_f) + (0.0 if ex > 0 else math.pi), ex, ey)
        u = spec.degree()
    return OctantTopology((ex, ey, ez), (kx, ky, kz), u)


# ---------------------------------------------------------------------------
# Realization of conformal/anticonformal classes
# ---------------------------------------------------------------------------

_R_BAND = (0.28, 0.54)  # keeps edge zeros/poles clear of the vertex collars
_T_ARG = 0.9  # radians; canned argument for complex factor parameters

_REALIZE_CACHE: dict = {}


def _spread(n: int) -> list[float]:
    lo, hi = _R_BAND
    return [lo + (hi - lo) * (i + 0.5) / n for i in range(n)]


def _candidate_specs(orientation: str, e, degree: int, max_edge: int = 9):
    """All factor shapes of the given covering count, ordered by the number
    of edge factors (fewest first: edge zeros/poles are the expensive,
    ill-conditioned elements; powers and complex factors absorb the rest)."""
    for t_edge in range(min(max_edge, (degree - 1) // 2) + 1):
        rest_e = degree - 2 * t_edge
        for c in range((rest_e - 1) // 4 + 1):
            q = rest_e - 4 * c
            if q < 1 or q % 2 == 0:
                continue
            m = (q - 1) // 2 if e[2] > 0 else -(q + 1) // 2
            ts = [
                (0.3 + 0.45 * i / max(c - 1, 1))
                * complex(math.cos(_T_ARG), math.sin(_T_ARG))
                for i in range(c)
            ]
            for a in range(t_edge + 1):
                b = t_edge - a
                rs = _spread(a)
                ss = _spread(b)
                for sign in (1, -1):
                    for rho in itertools.product((1, -1), repeat=a):
                        for sig in itertools.product((1, -1), repeat=b):
                            for tau in itertools.product((1, -1), repeat=c):
                                yield RationalMapSpec(
                                    sign=sign,
                                    m=m,
                                    real_factors=tuple(zip(rs, rho)),
                                    imag_factors=tuple(zip(ss, sig)),
                                    complex_factors=tuple(zip(ts, tau)),
                                    orientation=orientation,
                                )


def _vertex_conditioning(spec: RationalMapSpec, e, ring_radius: float = 0.1) -> float:
    """How compatible the map is with vertex collars: on the chart ring where
    collars live the modulus should be far below 1 for edge sign +1 and far
    above 1 for -1, so collar blends stay in one chart regime.  Extreme
    residues at edge singularities are penalized too (they concentrate energy
    at scales any uniform estimate misses).  Smaller is better."""
    from .geometry import relocate, relocate_inverse

    phis = np.linspace(0.0, math.pi / 2, 9)
    ring = ring_radius * np.exp(1j * phis)
    worst = 0.0
    for axis, sign in zip("xyz", e):
        chart_vals = relocate_inverse(axis, evaluate_rational(spec, relocate(axis, ring)))
        mags = np.abs(chart_vals)
        bad = float(np.max(mags)) if sign > 0 else float(np.max(1.0 / np.maximum(mags, 1e-300)))
        worst = max(worst, bad)
    score = math.log10(max(worst, 1e-12))
    for _, scale in singular_structure(spec):
        score += 0.1 * max(0.0, -math.log10(scale) - 4.0)
    return score


def realize(target: OctantTopology) -> RationalMapSpec:
    """Find a rational representative of a conformal or anticonformal class.

    Enumerates factor shapes of the exact covering count (the class fixes it:
    sum |w_sigma| = |omega_units|), keeps candidates whose predicted
    invariants match (the invariants classify, so a predicted match is a
    representative), ranks the matches by vertex conditioning, and verifies
    the winner's measured wrapping numbers.
    """
    key = (target.e, target.k, target.omega_units)
    if key in _REALIZE_CACHE:
        return _REALIZE_CACHE[key]
    w = wrapping_from_invariants(target)
    if all(v <= 0 for v in w.values):
        orientation = "conformal"
    elif all(v >= 0 for v in w.values):
        orientation = "anticonformal"
    else:
        raise ConstructionError(f"class {key} is nonconformal; no rational representative")
    degree = w.total_absolute()
    if degree != abs(sum(w.values)):
        raise AssertionError("one-signed wrapping numbers must sum to +-degree")
    wanted = (tuple(target.e), tuple(target.k), target.omega_units)
    matches = []
    for spec in _candidate_specs(orientation, target.e, degree):
        predicted = predict_invariants(spec)
        if (predicted.e, predicted.k, predicted.omega_units) != wanted:
            continue
        matches.append(spec)
        if len(matches) >= 400:
            break
    for spec in sorted(matches, key=lambda s: _vertex_conditioning(s, target.e)):
        if measure_wrapping_rational(spec).values == w.values:
            _REALIZE_CACHE[key] = spec
            return spec
    raise ConstructionError(
        f"no rational representative found for e={target.e}, k={target.k}, "
        f"omega_units={target.omega_units} (degree {degree})"
    )
