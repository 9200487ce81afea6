"""Serialization of classes, reports, field grids, and domain pictures.

JSON output is deterministic: sorted keys, plain floats, no timestamps.
Class JSON accepts either the invariant triple form
{"e": [1,1,1], "k": [1,1,1], "omega_units": 3} or the wrapping form
{"w": {"+++": 1, ...}}.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .geometry import stereographic_inverse
from .topology import (
    SECTORS,
    OctantTopology,
    WrappingNumbers,
    classify,
    delta_invariant,
    infimum_energy,
    invariants_from_wrapping,
    sector_name,
    wrapping_from_invariants,
)

__all__ = [
    "class_to_dict",
    "class_from_dict",
    "classification_report",
    "dump_json",
    "field_grid_csv",
    "domain_svg",
]


def class_to_dict(t: OctantTopology, w: WrappingNumbers | None = None) -> dict:
    if w is None:
        w = wrapping_from_invariants(t)
    return {
        "e": list(t.e),
        "k": list(t.k),
        "omega_units": t.omega_units,
        "w": w.as_dict(),
    }


def class_from_dict(data: dict) -> tuple:
    """Parse a class from JSON; returns (topology, wrapping)."""
    if "w" in data and "e" not in data:
        w_in = data["w"]
        values = tuple(int(w_in[sector_name(s)]) for s in SECTORS)
        w = WrappingNumbers(values)
        t = invariants_from_wrapping(w)
        return t, w
    t = OctantTopology(tuple(data["e"]), tuple(data["k"]), int(data["omega_units"]))
    w = wrapping_from_invariants(t)
    if "w" in data:
        given = tuple(int(data["w"][sector_name(s)]) for s in SECTORS)
        if given != w.values:
            raise ValueError("wrapping numbers inconsistent with (e, k, omega)")
    return t, w


def classification_report(t: OctantTopology) -> dict:
    w = wrapping_from_invariants(t)
    c = classify(w, t)
    delta = delta_invariant(w, c)
    energy = infimum_energy(w, c)
    report = {
        "class": class_to_dict(t, w),
        "kind": c.kind,
        "chi": c.chi,
        "delta": delta,
        "energy_pi_units": energy,
        "energy_text": f"{energy} pi",
        "abelian_pi_units": w.total_absolute(),
    }
    if c.kind == "nonconformal":
        report["sigma_plus"] = sector_name(c.sigma_plus)
        report["sigma_minus"] = sector_name(c.sigma_minus)
    return report


def dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _fmt(x: float) -> str:
    return "%.12g" % x


def field_grid_csv(sampled_map, resolution: int = 64) -> str:
    """Grid dump on Q: u, v, Re K, Im K, nu_x, nu_y, nu_z, subdomain_tag."""
    axis = (np.arange(resolution) + 0.5) / resolution
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    w = (uu + 1j * vv).ravel()
    inside = np.abs(w) <= 1.0
    w = w[inside]
    values = np.asarray(sampled_map.evaluate(w), dtype=complex)
    nu = stereographic_inverse(values)
    tags = sampled_map.subdomain_tags(w)
    lines = ["u,v,re_k,im_k,nu_x,nu_y,nu_z,subdomain_tag"]
    finite = np.where(np.isfinite(values), values, 0.0)
    for i in range(len(w)):
        re_k = _fmt(finite[i].real) if np.isfinite(values[i]) else "inf"
        im_k = _fmt(finite[i].imag) if np.isfinite(values[i]) else "inf"
        lines.append(
            ",".join(
                [
                    _fmt(w[i].real),
                    _fmt(w[i].imag),
                    re_k,
                    im_k,
                    _fmt(nu[i, 0]),
                    _fmt(nu[i, 1]),
                    _fmt(nu[i, 2]),
                    str(tags[i]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


_SECTOR_COLORS = {
    "+++": "#1f77b4", "++-": "#aec7e8", "+-+": "#ff7f0e", "+--": "#ffbb78",
    "-++": "#2ca02c", "-+-": "#98df8a", "--+": "#d62728", "---": "#ff9896",
}


def domain_svg(sampled_map, resolution: int = 96, size: int = 480) -> str:
    """Static picture of Q colored by the image sector, with seam circles."""
    cell = size / resolution
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    axis = (np.arange(resolution) + 0.5) / resolution
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    w = (uu + 1j * vv).ravel()
    inside = np.abs(w) <= 1.0
    values = np.full(w.shape, np.nan, dtype=complex)
    values[inside] = sampled_map.evaluate(w[inside])
    nu = stereographic_inverse(np.where(np.isfinite(values), values, 0.0))
    for i in range(len(w)):
        if not inside[i]:
            continue
        if np.isfinite(values[i]):
            sec = tuple(1 if v > 0 else -1 for v in nu[i])
        else:
            sec = (-1, -1, -1)
        color = _SECTOR_COLORS[sector_name(sec)]
        x = w[i].real * size - cell / 2
        y = size - w[i].imag * size - cell / 2
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell:.2f}" height="{cell:.2f}" '
            f'fill="{color}"/>'
        )
    # domain outline
    arc = ", ".join(
        f"{math.cos(p) * size:.1f} {size - math.sin(p) * size:.1f}"
        for p in np.linspace(0, math.pi / 2, 40)
    )
    parts.append(
        f'<path d="M 0 {size} L {size} {size} L ' + arc.replace(",", " L") +
        f' L 0 {size} Z" fill="none" stroke="black" stroke-width="1.5"/>'
    )
    # seam circles of the vertex charts
    spec = getattr(sampled_map, "metadata", None)
    stacks = getattr(spec, "stacks", None) if spec is not None else None
    if stacks:
        from .geometry import relocate

        for ax, st in stacks.items():
            for radius in list(st.seams()) + [st.epsilon, 2 * st.epsilon]:
                pts = relocate(ax, radius * np.exp(1j * np.linspace(0, math.pi / 2, 60)))
                path = " L ".join(
                    f"{p.real * size:.2f} {size - p.imag * size:.2f}" for p in pts
                )
                parts.append(
                    f'<path d="M {path}" fill="none" stroke="black" '
                    f'stroke-width="0.4" opacity="0.6"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
