"""Radial potentials: Hulthen, Yukawa and the Coulomb limit.

All quantities are in atomic units.  The two screened families

    v(r) = -Z s exp(-s r) / (1 - exp(-s r))    (Hulthen, screening s)
    v(r) = -Z exp(-s r) / r                    (Yukawa, screening s)

both reduce to the Coulomb potential -Z/r as s -> 0 and satisfy the
pointwise ordering v_coulomb <= v_hulthen <= v_yukawa at equal screening,
which transfers to the bound-state energies.  The charge enters only
through the exact scaling E(Z, s) = Z^2 E(1, s/Z).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Family",
    "PotentialSpec",
    "ChannelSpec",
    "evaluate",
    "effective_potential",
    "scale_energy",
    "ELL_LETTERS",
    "state_label",
    "parse_state_label",
]

# spectroscopic letter sequence; "j" is skipped by convention
ELL_LETTERS = "spdfghiklm"


class Family(str, Enum):
    HULTHEN = "hulthen"
    YUKAWA = "yukawa"
    COULOMB = "coulomb"


@dataclass(frozen=True)
class PotentialSpec:
    """One member of the screened-Coulomb catalog.

    Attributes
    ----------
    family : Family
        Potential family.
    charge : float
        Nuclear charge Z > 0.
    screening : float
        Screening parameter (delta or lambda); must be 0 for Coulomb.
    """

    family: Family
    charge: float = 1.0
    screening: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (self.charge > 0.0):
            raise ValueError(f"charge must be positive, got {self.charge}")
        if self.screening < 0.0:
            raise ValueError(f"screening must be nonnegative, got {self.screening}")
        if self.family is Family.COULOMB and self.screening != 0.0:
            raise ValueError("the Coulomb potential has no screening parameter")


@dataclass(frozen=True)
class ChannelSpec:
    """A potential together with an angular momentum channel."""

    potential: PotentialSpec
    ell: int

    def __post_init__(self):
        if not isinstance(self.ell, (int, np.integer)) or self.ell < 0:
            raise ValueError(f"ell must be a nonnegative integer, got {self.ell!r}")

    def label(self, n: int) -> str:
        return state_label(n, self.ell)


def state_label(n: int, ell: int) -> str:
    """Spectroscopic label, e.g. (10, 9) -> '10m'."""
    if ell >= len(ELL_LETTERS):
        return f"{n}(l={ell})"
    return f"{n}{ELL_LETTERS[ell]}"


def parse_state_label(label: str) -> tuple[int, int]:
    """Parse '17s' -> (17, 0).  Raises ValueError on malformed labels."""
    label = label.strip().lower()
    head = label.rstrip(ELL_LETTERS)
    letter = label[len(head):]
    if not head.isdigit() or len(letter) != 1:
        raise ValueError(f"malformed state label {label!r}")
    n = int(head)
    ell = ELL_LETTERS.index(letter)
    if ell >= n:
        raise ValueError(f"label {label!r} has ell >= n")
    return n, ell


def evaluate(potential: PotentialSpec, r):
    """Potential value v(r) for r > 0.

    The Hulthen form is computed as Z s exp(-s r) / expm1(-s r), which is
    free of the 0/0 cancellation of the textbook expression for s r -> 0;
    zero screening falls back to the Coulomb limit for both families.
    """
    r = np.asarray(r)
    if np.any(r <= 0.0):
        raise ValueError("potential evaluation requires r > 0")
    z = potential.charge
    s = potential.screening
    if potential.family is Family.COULOMB or s == 0.0:
        return -z / r
    if potential.family is Family.YUKAWA:
        return -z * np.exp(-s * r) / r
    # Hulthen: expm1(-s r) = exp(-s r) - 1 < 0, so the sign comes out right
    sr = s * r
    return z * s * np.exp(-sr) / np.expm1(-sr)


def effective_potential(channel: ChannelSpec, r):
    """Effective radial potential l(l+1)/(2 r^2) + v(r)."""
    r = np.asarray(r)
    if np.any(r <= 0.0):
        raise ValueError("effective potential requires r > 0")
    ell = channel.ell
    return ell * (ell + 1) / (2.0 * r * r) + evaluate(channel.potential, r)


def scale_energy(energy_z1: float, charge: float) -> float:
    """Charge scaling E(Z, s) = Z^2 E(1, s/Z).

    ``energy_z1`` must have been computed at unit charge with the screening
    divided by Z for the identity to apply.
    """
    if not (charge > 0.0):
        raise ValueError(f"charge must be positive, got {charge}")
    return charge * charge * energy_z1
