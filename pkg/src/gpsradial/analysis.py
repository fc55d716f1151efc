"""Closed-form oracles, convergence scanning and screening sweeps.

The Hulthen potential has exact l=0 energies

    E_n = -(2 - n^2 s)^2 / (8 n^2),        n^2 < 2/s,

which the solver must reproduce to near machine precision; the s-state
threshold s_c = 2/n^2 follows from the zero of that expression.  For l > 0
only an approximate closed-form threshold estimate exists, implemented
verbatim as

    s_c ~ 1 / [n sqrt(2) + 0.1645 l + 0.0983 l/n]^2.

Note that this estimate disagrees with the tabulated reference thresholds
by a large factor even at l = 0 (it gives 0.5 for the ground state where
the exact value is 2); it is exposed as printed, side by side with the
reference values, rather than silently corrected.

Box convergence is diagnosed by re-solving on an increasing r_max schedule
and counting stable decimal places between successive runs.  Energies are
reported with their decimal expansions truncated toward zero, never
rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_DOWN

import numpy as np

from .operator import BoundState, solve_channel
from .potentials import ChannelSpec, Family, PotentialSpec, state_label

__all__ = [
    "UnboundStateError",
    "DEFAULT_R_MAX_SCHEDULE",
    "ConvergenceReport",
    "SweepResult",
    "hulthen_exact_s",
    "critical_screening_estimate",
    "s_state_critical",
    "truncate_digits",
    "stable_decimals",
    "converge_r_max",
    "sweep_screening",
]

# the box radii the convergence narrative exercises
DEFAULT_R_MAX_SCHEDULE = (200.0, 300.0, 500.0, 800.0, 1200.0, 2000.0, 3000.0, 5000.0)

_MAX_STABLE_DIGITS = 20


class UnboundStateError(ValueError):
    """The requested state is not bound at the given screening."""


def hulthen_exact_s(n: int, delta: float) -> float:
    """Exact Hulthen l=0 energy -(2 - n^2 delta)^2 / (8 n^2).

    Raises UnboundStateError when n^2 >= 2/delta (the state has crossed
    the threshold).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not (delta > 0.0):
        raise ValueError(f"delta must be positive, got {delta}")
    if n * n >= 2.0 / delta:
        raise UnboundStateError(
            f"no bound {n}s state at delta = {delta} (threshold 2/n^2 = {2.0 / (n * n)})"
        )
    t = 2.0 - n * n * delta
    return -(t * t) / (8.0 * n * n)


def critical_screening_estimate(n: int, ell: int) -> float:
    """Approximate critical screening 1/[n sqrt(2) + 0.1645 l + 0.0983 l/n]^2.

    Implemented exactly as printed; see the module docstring for the known
    discrepancy against tabulated thresholds.
    """
    if n < 1 or not (0 <= ell < n):
        raise ValueError(f"require n >= 1 and 0 <= ell < n, got n={n}, ell={ell}")
    root = n * math.sqrt(2.0) + 0.1645 * ell + 0.0983 * ell / n
    return 1.0 / (root * root)


def s_state_critical(n: int) -> float:
    """Exact Hulthen s-state threshold 2/n^2."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 2.0 / (n * n)


def truncate_digits(value: float, digits: int) -> str:
    """Fixed-point decimal string truncated toward zero at ``digits``
    significant figures.

    Operates on the shortest round-trip decimal form of ``value`` and pads
    with zeros when that form is shorter than requested, so the output
    always carries exactly ``digits`` significant figures.  Truncation
    never rounds: -0.99999 at 3 digits is "-0.999".
    """
    if digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits}")
    if not math.isfinite(value):
        return repr(float(value))
    if value == 0.0:
        return "0." + "0" * (digits - 1)
    d = Decimal(repr(float(value)))
    target = d.adjusted() - digits + 1
    q = d.quantize(Decimal((0, (1,), target)), rounding=ROUND_DOWN)
    return format(q, "f")


def stable_decimals(a: float, b: float) -> int:
    """Number of agreeing decimal places between a and b.

    Counts the length of the common prefix of the two fixed-point decimal
    expansions after the decimal point (leading zeros included), with both
    expansions truncated rather than rounded.  Sign disagreement or a
    non-finite input gives 0.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        return 0
    if a == b:
        return _MAX_STABLE_DIGITS
    if (a < 0.0) != (b < 0.0) and (a != 0.0 and b != 0.0):
        return 0
    sa = _fixed_decimals(abs(a))
    sb = _fixed_decimals(abs(b))
    if sa[0] != sb[0]:  # integer parts differ
        return 0
    count = 0
    for ca, cb in zip(sa[1], sb[1]):
        if ca != cb:
            break
        count += 1
    return count


def _fixed_decimals(v: float) -> tuple[str, str]:
    """(integer part, first _MAX_STABLE_DIGITS decimals, truncated)."""
    d = Decimal(repr(float(v))).quantize(
        Decimal((0, (1,), -_MAX_STABLE_DIGITS)), rounding=ROUND_DOWN
    )
    text = format(d, "f")
    whole, _, frac = text.partition(".")
    return whole, frac.ljust(_MAX_STABLE_DIGITS, "0")


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Energies of tracked states across an r_max schedule.

    ``energies[i, k]`` is the energy of state k at ``r_max_values[i]`` (NaN
    when the state was not found or failed validation there).
    ``pair_decimals[i, k]`` counts the stable decimal places between rows i
    and i+1.  ``stable_digits`` holds the headline per-state count between
    the two largest radii, ``recommended_r_max`` the smallest radius whose
    refinement confirmed ``target_digits`` stable decimals, and
    ``converged_energy`` the energy of that confirming refinement.
    """

    potential: PotentialSpec
    states: tuple[tuple[int, int], ...]
    r_max_values: tuple[float, ...]
    target_digits: int
    energies: np.ndarray = field(repr=False)
    pair_decimals: np.ndarray = field(repr=False)
    stable_digits: tuple[int, ...]
    converged: tuple[bool, ...]
    recommended_r_max: tuple[float, ...]
    converged_energy: tuple[float, ...]
    issues: tuple[str, ...]

    def labels(self) -> tuple[str, ...]:
        return tuple(state_label(n, ell) for n, ell in self.states)


def converge_r_max(
    potential,
    states,
    r_max_schedule=DEFAULT_R_MAX_SCHEDULE,
    target_digits: int = 11,
    order: int = 200,
    alpha: float = 25.0,
) -> ConvergenceReport:
    """Scan the box radius and report per-state digit stability.

    Parameters
    ----------
    potential : PotentialSpec or ChannelSpec
        Potential definition (a channel's angular momentum is ignored; the
        tracked states carry their own).
    states : sequence of (n, ell)
        States to track through the scan.
    r_max_schedule : sequence of float
        Strictly increasing box radii.
    target_digits : int
        Stable decimal places that count as converged.

    Unbound or unvalidated states at a given radius are flagged, not fatal.
    """
    if isinstance(potential, ChannelSpec):
        potential = potential.potential
    states = tuple((int(n), int(ell)) for n, ell in states)
    for n, ell in states:
        if not 0 <= ell < n:
            raise ValueError(f"invalid state (n={n}, ell={ell})")
    schedule = tuple(float(r) for r in r_max_schedule)
    if len(schedule) == 0 or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("r_max schedule must be nonempty and strictly increasing")

    energies = np.full((len(schedule), len(states)), np.nan)
    issues: list[str] = []
    by_ell: dict[int, int] = {}
    for n, ell in states:
        by_ell[ell] = max(by_ell.get(ell, 0), n)
    for i, r_max in enumerate(schedule):
        found: dict[tuple[int, int], float] = {}
        for ell, max_n in sorted(by_ell.items()):
            solved, msgs = solve_channel(
                potential.family, potential.screening, ell, max_n,
                r_max=r_max, order=order, alpha=alpha,
                charge=potential.charge, on_mismatch="skip",
            )
            for s in solved:
                found[(s.n, s.ell)] = s.energy
            for m in msgs:
                issues.append(f"r_max={r_max:g}: {m}")
        for k, key in enumerate(states):
            if key in found:
                energies[i, k] = found[key]
            else:
                issues.append(
                    f"r_max={r_max:g}: state {state_label(*key)} not found"
                )

    pair = np.zeros((max(len(schedule) - 1, 0), len(states)), dtype=int)
    for i in range(pair.shape[0]):
        for k in range(len(states)):
            pair[i, k] = stable_decimals(energies[i, k], energies[i + 1, k])

    stable: list[int] = []
    conv: list[bool] = []
    rec: list[float] = []
    best: list[float] = []
    for k in range(len(states)):
        stable.append(int(pair[-1, k]) if pair.shape[0] else 0)
        hit = next(
            (i for i in range(pair.shape[0]) if pair[i, k] >= target_digits), None
        )
        conv.append(hit is not None)
        if hit is not None:
            rec.append(schedule[hit])
            best.append(float(energies[hit + 1, k]))
        else:
            rec.append(schedule[-1])
            best.append(float(energies[-1, k]))
    return ConvergenceReport(
        potential=potential,
        states=states,
        r_max_values=schedule,
        target_digits=int(target_digits),
        energies=energies,
        pair_decimals=pair,
        stable_digits=tuple(stable),
        converged=tuple(conv),
        recommended_r_max=tuple(rec),
        converged_energy=tuple(best),
        issues=tuple(issues),
    )


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Bound levels across a screening sweep (the level-diagram data).

    ``levels[i]`` lists (label, n, ell, energy) for every bound state with
    n <= n_max at ``screening_values[i]``, ordered by (n, ell); states
    pushed past threshold are simply absent.
    """

    family: Family
    n_max: int
    screening_values: tuple[float, ...]
    levels: tuple[tuple[tuple[str, int, int, float], ...], ...]

    def energy(self, screening_index: int, n: int, ell: int):
        for label, sn, sell, e in self.levels[screening_index]:
            if sn == n and sell == ell:
                return e
        return None


def sweep_screening(
    family,
    n_max: int,
    screening_values,
    r_max: float = 500.0,
    order: int = 200,
    alpha: float = 25.0,
    charge: float = 1.0,
) -> SweepResult:
    """Solve every l-channel up to n_max across a screening grid."""
    family = Family(family)
    values = tuple(float(s) for s in screening_values)
    if len(values) == 0:
        raise ValueError("screening grid must be nonempty")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    levels = []
    for s in values:
        row = []
        for ell in range(n_max):
            solved, _ = solve_channel(
                family, s, ell, n_max, r_max=r_max, order=order,
                alpha=alpha, charge=charge, on_mismatch="skip",
            )
            row.extend((st.label, st.n, st.ell, st.energy) for st in solved)
        row.sort(key=lambda item: (item[1], item[2]))
        levels.append(tuple(row))
    return SweepResult(
        family=family, n_max=int(n_max), screening_values=values,
        levels=tuple(levels),
    )
