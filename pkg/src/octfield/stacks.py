"""Quarter-sphere stacks: nested annulus maps inserted near octant vertices.

A stack with L layers lives on the chart disc |u| <= epsilon of its vertex.
Layer m occupies the annulus 2 rho_{m-1} <= |u| <= rho_m with radii
rho_m = epsilon^(L+1-m) (rho_0 = 0), and maps it over a pair of adjacent
sectors: odd layers conformally with one sign of covering, even layers
anticonformally with the other.  Between consecutive layers the interpolation
annuli rho_n <= |u| <= 2 rho_n blend the neighbors, reciprocally after odd
layers (where moduli are large) and linearly after even ones (moduli small).

Variants implement the modified stacks of the special tabulated case, whose
first ``special_layers`` layers use same-orientation formulas; ``conf_flip``
and ``anti_flip`` rotate the covered sector pairs by z -> -z for the
general-sign construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .topology import SECTORS

__all__ = ["QuarterSphereStack", "stack_degree_table", "PERMUTATIONS"]

# sector permutations induced by the vertex rotations: gamma_j maps the
# pre-relocation sector tau onto p_j(tau)
PERMUTATIONS = {
    "x": lambda s: (s[2], s[0], s[1]),
    "y": lambda s: (s[1], s[2], s[0]),
    "z": lambda s: (s[0], s[1], s[2]),
}
_INVERSE_AXIS = {"x": "y", "y": "x", "z": "z"}


@dataclass(frozen=True)
class QuarterSphereStack:
    layers: int
    epsilon: float
    variant: str = "standard"  # standard | case2c_x | case2c_y
    special_layers: int = 0
    conf_flip: int = 1
    anti_flip: int = 1
    anti_first: bool = False  # mirror alternation for negative-kink classes

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("a stack needs at least one layer")
        if not 0 < self.epsilon < 0.125:
            raise ValueError("epsilon must lie in (0, 1/8)")
        if self.variant not in ("standard", "case2c_x", "case2c_y"):
            raise ValueError(f"unknown stack variant {self.variant}")
        if self.special_layers % 2 or not 0 <= self.special_layers <= self.layers:
            raise ValueError("special_layers must be even and at most the layer count")
        if self.variant == "standard" and self.special_layers:
            raise ValueError("standard stacks have no special layers")
        if self.variant != "standard" and self.anti_first:
            raise ValueError("variant stacks use the standard alternation")
        if self.conf_flip not in (1, -1) or self.anti_flip not in (1, -1):
            raise ValueError("flips must be +-1")

    def radius(self, m: int) -> float:
        """rho_m = epsilon^(L+1-m); rho_0 = 0."""
        if m == 0:
            return 0.0
        return self.epsilon ** (self.layers + 1 - m)

    def layer_is_conformal(self, m: int) -> bool:
        return (m % 2 == 1) != self.anti_first

    @property
    def top_is_conformal(self) -> bool:
        """Conformal top layers have large moduli at the collar seam, so the
        bulk there must be near a pole (edge sign -1); anticonformal tops pair
        with a bulk zero (edge sign +1)."""
        return self.layer_is_conformal(self.layers)

    def seams(self) -> tuple:
        """All annulus boundaries inside (0, epsilon]: 2 rho_{m-1} and rho_m."""
        out = []
        for m in range(1, self.layers + 1):
            if m > 1:
                out.append(2 * self.radius(m - 1))
            out.append(self.radius(m))
        return tuple(sorted(set(out)))

    # -- layer and interpolant formulas ------------------------------------

    def layer_value(self, m: int, u):
        """Map of layer m evaluated at chart points (valid on 2rho_{m-1} <= |u| <= rho_m)."""
        if not 1 <= m <= self.layers:
            raise ValueError(f"layer {m} outside stack of {self.layers}")
        u = np.asarray(u, dtype=complex)
        root = math.sqrt(self.epsilon)
        special = m <= self.special_layers
        if m % 2 and special:
            if self.variant == "case2c_y":
                return np.conj(u) / (root * self.radius(m))
        if m % 2 == 0 and special:
            if self.variant == "case2c_x":
                with np.errstate(divide="ignore", invalid="ignore"):
                    return self.radius(m - 1) / (root * u)
            with np.errstate(divide="ignore", invalid="ignore"):
                return self.radius(m - 1) / (root * np.conj(u))
        if self.layer_is_conformal(m):
            return self.conf_flip * (-u) / (root * self.radius(m))
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.anti_flip * self.radius(m - 1) / (root * np.conj(u))

    def interpolant_value(self, n: int, u):
        """Blend between layers n and n+1 on rho_n <= |u| <= 2 rho_n."""
        if not 1 <= n <= self.layers - 1:
            raise ValueError(f"interpolant {n} outside stack of {self.layers}")
        u = np.asarray(u, dtype=complex)
        s = (np.abs(u) - self.radius(n)) / self.radius(n)
        a = self.layer_value(n, u)
        b = self.layer_value(n + 1, u)
        # reciprocal blending where the adjacent layer moduli are large
        # (conformal side), linear where they are small
        return blend(a, b, s, odd=self.layer_is_conformal(n))

    def evaluate(self, u):
        """Full stack map on the chart disc |u| <= epsilon.

        Annulus membership uses a relative tolerance so points that land a
        rounding error past a seam still take the adjacent formula (the
        formulas agree at seams, so the choice is immaterial).
        """
        u = np.asarray(u, dtype=complex)
        scalar = np.ndim(u) == 0
        u = np.atleast_1d(u)
        r = np.abs(u)
        tol = 1 + 1e-9
        if (r > self.epsilon * tol).any():
            raise ValueError("stack evaluated outside its chart disc")
        out = np.empty(u.shape, dtype=complex)
        out[:] = np.nan
        for n in range(1, self.layers):
            mask = (r > self.radius(n)) & (r < 2 * self.radius(n))
            if mask.any():
                out[mask] = self.interpolant_value(n, u[mask])
        for m in range(1, self.layers + 1):
            mask = (r >= 2 * self.radius(m - 1) / tol) & (r <= self.radius(m) * tol)
            if mask.any():
                out[mask] = self.layer_value(m, u[mask])
        if np.isnan(out).any():
            raise AssertionError("stack annuli failed to cover the chart disc")
        return complex(out[0]) if scalar else out

    def subdomain_tag(self, u):
        u = np.atleast_1d(np.asarray(u, dtype=complex))
        r = np.abs(u)
        tags = np.empty(u.shape, dtype=object)
        for m in range(1, self.layers + 1):
            mask = (r >= 2 * self.radius(m - 1)) & (r <= self.radius(m))
            tags[mask] = f"annulus({m})"
        for n in range(1, self.layers):
            mask = (r > self.radius(n)) & (r < 2 * self.radius(n))
            tags[mask] = f"interp({n})"
        return tags


def blend(a, b, s, odd: bool):
    """Switching-function blend: reciprocal for odd seams (large moduli),
    linear for even seams (small moduli)."""
    if odd:
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = (1 - s) / a + s / b
            out = 1.0 / inv
        out = np.where(inv == 0, np.inf + 0j, out)
        # endpoints where one side dominates entirely
        out = np.where(s == 0, a, out)
        out = np.where(s == 1, b, out)
        return out
    return (1 - s) * a + s * b


def _pre_relocation_table(stack: QuarterSphereStack) -> dict:
    """Covering contribution of each layer in the vertex chart, in wrapping
    convention (conformal coverings count -1, anticonformal +1)."""
    table: dict = {}

    def add(pair_xy, value):
        for sz in (1, -1):
            sector = (pair_xy[0], pair_xy[1], sz)
            table[sector] = table.get(sector, 0) + value

    for m in range(1, stack.layers + 1):
        special = m <= stack.special_layers
        if m % 2 and special and stack.variant == "case2c_y":
            add((1, -1), +1)  # anticonformal, covers (+ - pm) positively
        elif m % 2 == 0 and special and stack.variant == "case2c_x":
            add((1, -1), -1)  # conformal inversion, covers (+ - pm) negatively
        elif m % 2 == 0 and special and stack.variant == "case2c_y":
            add((1, 1), +1)
        elif stack.layer_is_conformal(m):
            add((-stack.conf_flip, -stack.conf_flip), -1)
        else:
            add((stack.anti_flip, stack.anti_flip), +1)
    return table


def stack_degree_table(stack: QuarterSphereStack, axis: str) -> dict:
    """Wrapping-number contribution of the relocated stack in every sector.

    The relocation gamma_j maps the chart sector tau onto p_j(tau), so the
    contribution at sector sigma is the chart table at p_j^{-1}(sigma).
    """
    if axis not in PERMUTATIONS:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    pre = _pre_relocation_table(stack)
    inv = PERMUTATIONS[_INVERSE_AXIS[axis]]
    return {sector: pre.get(inv(sector), 0) for sector in SECTORS}
