"""Discrete radial Hamiltonian assembly, eigensolve and state extraction.

The radial equation

    [-1/2 d^2/dr^2 + l(l+1)/(2 r^2) + v(r)] psi(r) = E psi(r)

is discretized on the mapped Legendre-Gauss-Lobatto grid.  Substituting
psi(r(x)) = sqrt(r'(x)) f(x) turns the kinetic energy into the reference
form (1/2) int f'^2 dx plus the diagonal curvature potential v_m (zero for
the algebraic map); evaluating the remaining integrals with the grid's own
quadrature makes the mass matrix diagonal, and in the scaled variables

    A_j = sqrt(r'(x_j)) psi(r(x_j)) / P_N(x_j)

the problem becomes a real symmetric standard eigenproblem

    sum_j [ -1/2 S_kj / (r'_k r'_j) + delta_kj (v_eff(r_j) + v_m(x_j)) ] A_j
        = E A_k,            k, j = 1 .. N-1,

where S is the symmetrized cardinal second-derivative block (see
``collocation.symmetrized_d2``).  Restricting to interior nodes imposes
psi(0) = psi(r_max) = 0.  The Gauss-Lobatto weights satisfy
w_j P_N(x_j)^2 = const, so the l2 norm of an A-vector equals the
quadrature norm of its wavefunction up to one global factor and
eigenvectors convert to normalized states without extra integrals.

Eigenvalues below the bound-state threshold are refined by an
extended-precision Rayleigh quotient against the longdouble assembly of the
same matrix, which removes the O(eps * ||H||) floor of the dense solver and
is what pushes the energies to 13-14 significant digits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .collocation import CollocationGrid, build_grid
from .mapping import RadialMap, curvature_potential, map_derivatives, map_r
from .potentials import ChannelSpec, Family, PotentialSpec, state_label

__all__ = [
    "BOUND_THRESHOLD",
    "DiscreteHamiltonian",
    "BoundState",
    "AssemblyError",
    "SolverError",
    "LabelingError",
    "PartialSpectrumWarning",
    "assemble",
    "eigensolve",
    "extract_states",
    "solve_channel",
]

# eigenvalues above -BOUND_THRESHOLD are treated as discretized continuum
BOUND_THRESHOLD = 1e-12

_RESIDUAL_CONTRACT = 1e-10
_ORTHONORMALITY_CONTRACT = 1e-10


class AssemblyError(RuntimeError):
    """Raised when the Hamiltonian cannot be built (non-finite potential)."""


class SolverError(RuntimeError):
    """Raised when the dense eigensolver fails or breaks its contracts."""


class LabelingError(RuntimeError):
    """Raised when a state's node count contradicts its quantum numbers."""


class PartialSpectrumWarning(UserWarning):
    """Fewer bound states were found than requested."""


@dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    """Symmetric interior-node Hamiltonian for one (potential, l) channel.

    Attributes
    ----------
    channel : ChannelSpec
        Potential family, charge, screening and angular momentum.
    grid_order : int
        Collocation order N; the matrix has size (N-1, N-1).
    rmap : RadialMap
        Radial map used for the assembly.
    matrix : ndarray
        Symmetric float64 matrix over the interior nodes, atomic units.
    asymmetry : float
        max |H - H^T| of the assembled matrix (zero by construction).
    """

    channel: ChannelSpec
    grid_order: int
    rmap: RadialMap
    matrix: np.ndarray = field(repr=False)
    asymmetry: float
    grid: CollocationGrid = field(repr=False)
    matrix_ld: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class BoundState:
    """One normalized bound eigenstate.

    ``psi_samples`` holds the reduced radial wavefunction at the interior
    grid radii ``r_samples``, normalized so the quadrature of psi^2 over r
    is 1 and signed so psi > 0 as r -> 0+.  ``nodes`` counts the strict
    sign changes and always equals n - ell - 1.
    """

    energy: float
    n: int
    ell: int
    nodes: int
    r_samples: np.ndarray = field(repr=False)
    psi_samples: np.ndarray = field(repr=False)
    grid: CollocationGrid = field(repr=False)
    rmap: RadialMap = field(repr=False)

    @property
    def label(self) -> str:
        return state_label(self.n, self.ell)


def _effective_potential_ld(channel: ChannelSpec, r: np.ndarray) -> np.ndarray:
    """Effective potential evaluated in the dtype of r (longdouble capable)."""
    pot = channel.potential
    z = r.dtype.type(pot.charge)
    s = r.dtype.type(pot.screening)
    ell = channel.ell
    cent = ell * (ell + 1) / (2.0 * r * r)
    if pot.family is Family.COULOMB or pot.screening == 0.0:
        return cent - z / r
    if pot.family is Family.YUKAWA:
        return cent - z * np.exp(-s * r) / r
    sr = s * r
    return cent + z * s * np.exp(-sr) / np.expm1(-sr)


def assemble(
    channel: ChannelSpec,
    grid: CollocationGrid,
    rmap: RadialMap,
    d2_variant: str = "cardinal",
) -> DiscreteHamiltonian:
    """Assemble the symmetric interior-node Hamiltonian.

    Parameters
    ----------
    channel, grid, rmap
        Problem definition: potential/angular channel, collocation grid,
        radial map.
    d2_variant : {"cardinal", "as-printed"}
        "cardinal" (default) uses the exact cardinal-function second
        derivatives in the scaled basis.  "as-printed" reproduces a
        variant sometimes seen in print that folds extra map-derivative
        factors and a different diagonal prefactor into the reference
        matrix; it is retained only as a diagnostic and is numerically
        wrong (see the README numerical notes).

    Raises
    ------
    AssemblyError
        If the potential is non-finite at any interior node.
    """
    n = grid.order
    x = grid.nodes_ld[1:-1]
    r = map_r(rmap, x)
    rp, rpp, rppp = map_derivatives(rmap, x)
    v = _effective_potential_ld(channel, r) + curvature_potential(rp, rpp, rppp)
    bad = ~np.isfinite(v.astype(np.float64))
    if np.any(bad):
        j = int(np.argmax(bad)) + 1
        raise AssemblyError(
            f"non-finite potential at interior node {j} (r = {float(r[j - 1]):.6g})"
        )
    if d2_variant == "cardinal":
        kinetic = -0.5 * grid.sym_d2_ld / np.multiply.outer(rp, rp)
    elif d2_variant == "as-printed":
        # literal transcription of the printed formula: off-diagonal
        # 1/(x_j - x_k)^2 and diagonal (N+1)(N+2)/(6 (1-x_j)^2), each already
        # carrying 1/r' factors, then scaled by 1/r' again
        dx = x[:, None] - x[None, :]
        np.fill_diagonal(dx, 1.0)
        d2 = 1.0 / (rp[:, None] * dx * dx * rp[None, :])
        np.fill_diagonal(d2, (n + 1) * (n + 2) / (6.0 * (1.0 - x) ** 2 * rp * rp))
        kinetic = -0.5 * d2 / np.multiply.outer(rp, rp)
    else:
        raise ValueError(f"unknown d2_variant {d2_variant!r}")
    h_ld = kinetic + np.diag(v)
    h = h_ld.astype(np.float64)
    h.flags.writeable = False
    asymmetry = float(np.max(np.abs(h - h.T)))
    return DiscreteHamiltonian(
        channel=channel,
        grid_order=n,
        rmap=rmap,
        matrix=h,
        asymmetry=asymmetry,
        grid=grid,
        matrix_ld=h_ld,
    )


def eigensolve(h: DiscreteHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of the discrete Hamiltonian, ascending.

    Returns
    -------
    values : ndarray, shape (N-1,)
        Eigenvalues in ascending order.  Values below the bound-state
        threshold are polished by an extended-precision Rayleigh quotient.
    vectors : ndarray, shape (N-1, N-1)
        Orthonormal eigenvectors as columns, matching ``values``.

    Raises
    ------
    SolverError
        On LAPACK failure, or if the residual / orthonormality contracts
        (1e-10 relative) are violated.
    """
    try:
        values, vectors = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise SolverError(f"dense symmetric eigensolver failed: {exc}") from exc

    polish = values < 1e-3
    if np.any(polish):
        v_ld = vectors[:, polish].astype(np.longdouble)
        hv = h.matrix_ld @ v_ld
        num = np.sum(v_ld * hv, axis=0)
        den = np.sum(v_ld * v_ld, axis=0)
        values = values.copy()
        values[polish] = (num / den).astype(np.float64)
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    norm = max(np.max(np.abs(values)), np.finfo(np.float64).tiny)
    residual = np.linalg.norm(h.matrix @ vectors - vectors * values, axis=0)
    worst = float(np.max(residual) / norm)
    if worst > _RESIDUAL_CONTRACT:
        raise SolverError(f"eigenpair residual {worst:.3e} exceeds contract")
    gram = vectors.T @ vectors
    ortho = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
    if ortho > _ORTHONORMALITY_CONTRACT:
        raise SolverError(f"eigenvector orthonormality defect {ortho:.3e}")
    return values, vectors


def _count_sign_changes(psi: np.ndarray) -> int:
    """Strict sign changes of psi, ignoring samples below a relative floor."""
    floor = 1e-10 * np.max(np.abs(psi))
    live = psi[np.abs(psi) > floor]
    if live.size < 2:
        return 0
    return int(np.sum(np.signbit(live[:-1]) != np.signbit(live[1:])))


def _extract(
    h: DiscreteHamiltonian,
    eigenpairs: tuple[np.ndarray, np.ndarray],
    max_n: int,
    on_mismatch: str,
) -> tuple[list[BoundState], list[str]]:
    values, vectors = eigenpairs
    grid, rmap = h.grid, h.rmap
    ell = h.channel.ell
    x = grid.nodes_ld[1:-1]
    r = map_r(rmap, x).astype(np.float64)
    rp = map_derivatives(rmap, x)[0].astype(np.float64)
    pn = grid.legendre_at_nodes[1:-1]
    w = grid.weights[1:-1]
    sqrt_rp = np.sqrt(rp)

    bound = np.flatnonzero(values < -BOUND_THRESHOLD)
    states: list[BoundState] = []
    issues: list[str] = []
    requested = max(max_n - ell, 0)
    for k, idx in enumerate(bound):
        n = ell + 1 + k
        if n > max_n:
            break
        # eigenvector components are the scaled coefficients
        # A_j = sqrt(r'_j) psi_j / P_N(x_j); invert and normalize
        psi = pn * vectors[:, idx] / sqrt_rp
        norm = np.sqrt(np.dot(w, rp * psi * psi))
        psi = psi / norm
        lead = np.flatnonzero(np.abs(psi) > 1e-8 * np.max(np.abs(psi)))[0]
        if psi[lead] < 0.0:
            psi = -psi
        nodes = _count_sign_changes(psi)
        if nodes != n - ell - 1:
            msg = (
                f"state {state_label(n, ell)}: counted {nodes} radial nodes, "
                f"expected {n - ell - 1}; box too small or level too close to "
                f"threshold at r_max = {rmap.r_max:g}"
            )
            if on_mismatch == "raise":
                raise LabelingError(msg)
            issues.append(msg)
            continue
        psi.flags.writeable = False
        states.append(
            BoundState(
                energy=float(values[idx]),
                n=n,
                ell=ell,
                nodes=nodes,
                r_samples=r,
                psi_samples=psi,
                grid=grid,
                rmap=rmap,
            )
        )
    if len(states) < requested:
        msg = (
            f"found {len(states)} bound state(s) in the l={ell} channel, "
            f"requested up to n={max_n}"
        )
        if on_mismatch == "raise":
            warnings.warn(msg, PartialSpectrumWarning, stacklevel=3)
        else:
            issues.append(msg)
    return states, issues


def extract_states(
    h: DiscreteHamiltonian,
    eigenpairs: tuple[np.ndarray, np.ndarray],
    max_n: int,
) -> list[BoundState]:
    """Package the bound part of the spectrum as labeled, normalized states.

    Eigenvalues below -1e-12 are kept; the k-th kept state is assigned
    n = ell + 1 + k and validated against its radial node count.

    Raises
    ------
    LabelingError
        If a state's node count contradicts the assignment (the state is
        unconverged: box too small or level too close to threshold).

    Warns
    -----
    PartialSpectrumWarning
        If fewer bound states exist than ``max_n`` requests.
    """
    states, _ = _extract(h, eigenpairs, max_n, on_mismatch="raise")
    return states


def solve_channel(
    family,
    screening: float,
    ell: int,
    max_n: int,
    r_max: float = 500.0,
    order: int = 200,
    alpha: float = 25.0,
    charge: float = 1.0,
    on_mismatch: str = "raise",
) -> tuple[tuple[BoundState, ...], tuple[str, ...]]:
    """Assemble, solve and extract one channel; results are memoized.

    Thin front door used by the scanners, sweeps and the CLI.  Returns the
    extracted states along with any node-count diagnostics (empty when
    ``on_mismatch="raise"``).
    """
    return _solve_channel_cached(
        Family(family), float(screening), int(ell), int(max_n),
        float(r_max), int(order), float(alpha), float(charge), on_mismatch,
    )


@lru_cache(maxsize=1024)
def _solve_channel_cached(family, screening, ell, max_n, r_max, order, alpha,
                          charge, on_mismatch):
    channel = ChannelSpec(
        PotentialSpec(family=family, charge=charge, screening=screening), ell=ell
    )
    grid = build_grid(order)
    rmap = RadialMap(r_max=r_max, alpha=alpha)
    h = assemble(channel, grid, rmap)
    pairs = eigensolve(h)
    states, issues = _extract(h, pairs, max_n, on_mismatch=on_mismatch)
    return tuple(states), tuple(issues)
