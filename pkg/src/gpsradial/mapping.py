"""Algebraic map between the reference interval and the radial half-line.

The map

    r(x) = L (1 + x) / (1 - x + alpha),      alpha = 2 L / r_max,

takes [-1, 1] bijectively onto [0, r_max], clustering points near the
origin where Coulomb-like potentials vary fastest.  The pair (r_max, alpha)
is the user-facing parameterization; L is derived.  The curvature potential
v_m that a general change of variables adds to the transformed Hamiltonian,

    v_m = [3 r''^2 - 2 r''' r'] / (8 r'^4),

vanishes identically for this particular map, which keeps the discrete
operator free of extra diagonal terms; it is still evaluated and added
unconditionally so that the cancellation is exercised rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RadialMap",
    "map_r",
    "map_derivatives",
    "mapping_potential",
    "curvature_potential",
    "radius_to_x",
]


@dataclass(frozen=True)
class RadialMap:
    """Algebraic radial map parameterized by box radius and steepness.

    Attributes
    ----------
    r_max : float
        Practical box radius R in atomic units; r(+1) = R.
    alpha : float
        Dimensionless steepness; smaller values crowd nodes toward r = 0.
    """

    r_max: float
    alpha: float

    def __post_init__(self):
        if not (self.r_max > 0.0):
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if not (self.alpha > 0.0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def map_length(self) -> float:
        """Length scale L = alpha * r_max / 2."""
        return self.alpha * self.r_max / 2.0


def _check_domain(x) -> np.ndarray:
    x = np.asarray(x)
    if np.any(x < -1.0) or np.any(x > 1.0):
        raise ValueError("map argument must lie in [-1, 1]")
    return x


def map_r(rmap: RadialMap, x):
    """Radius r(x) = L (1 + x) / (1 - x + alpha); r(-1) = 0, r(+1) = r_max."""
    x = _check_domain(x)
    return rmap.map_length * (1.0 + x) / (1.0 - x + rmap.alpha)


def map_derivatives(rmap: RadialMap, x):
    """First three derivatives of the map: (r', r'', r''').

    With u = 1 - x + alpha these are L(2+alpha)/u^2, 2L(2+alpha)/u^3 and
    6L(2+alpha)/u^4.  r' is strictly positive on the domain.
    """
    x = _check_domain(x)
    u = 1.0 - x + rmap.alpha
    c = rmap.map_length * (2.0 + rmap.alpha)
    rp = c / u**2
    rpp = 2.0 * c / u**3
    rppp = 6.0 * c / u**4
    return rp, rpp, rppp


def curvature_potential(rp, rpp, rppp):
    """Extra diagonal term [3 r''^2 - 2 r''' r'] / (8 r'^4) for a general map."""
    return (3.0 * rpp * rpp - 2.0 * rppp * rp) / (8.0 * rp**4)


def mapping_potential(rmap: RadialMap, x):
    """Curvature potential v_m(x) of the map; identically zero for this family."""
    rp, rpp, rppp = map_derivatives(rmap, x)
    return curvature_potential(rp, rpp, rppp)


def radius_to_x(rmap: RadialMap, r):
    """Inverse map x(r) = [r (1 + alpha) - L] / (r + L) for r in [0, r_max]."""
    r = np.asarray(r)
    if np.any(r < 0.0):
        raise ValueError("radius must be nonnegative")
    length = rmap.map_length
    return (r * (1.0 + rmap.alpha) - length) / (r + length)
