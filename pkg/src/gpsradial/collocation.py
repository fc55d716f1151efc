"""Legendre-Gauss-Lobatto collocation grids on the reference interval [-1, 1].

The grid of polynomial order N consists of the endpoints -1, +1 together with
the N-1 roots of P_N', the derivative of the Legendre polynomial of degree N.
Interpolation through these nodes uses the cardinal basis

    g_j(x) = -[N(N+1) P_N(x_j)]^{-1} (1 - x^2) P_N'(x) / (x - x_j),

which satisfies g_j(x_k) = delta_jk.  This module provides the nodes, the
Gauss-Lobatto quadrature weights

    w_j = 2 / [N(N+1) P_N(x_j)^2],

the matrix of cardinal second derivatives g_j''(x_k) (exact differentiation
for polynomials of degree <= N), and the symmetrized variant of that matrix
obtained by absorbing the P_N(x_j) factors into the coefficient vector, which
is the form the radial Hamiltonian assembly consumes.

Nodes are found by Newton iteration on P_N' in extended precision; the
public arrays are float64, while the extended-precision internals are kept
on the grid object for downstream high-accuracy assembly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "CollocationGrid",
    "build_grid",
    "cardinal_d2",
    "symmetrized_d2",
    "quadrature",
    "barycentric_weights",
]

_NEWTON_MAX_ITER = 200


def legendre_pair(order: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate (P_{order-1}, P_order) at x by the three-term recurrence.

    (k+1) P_{k+1}(x) = (2k+1) x P_k(x) - k P_{k-1}(x).  Stable on [-1, 1];
    the dtype of ``x`` (float64 or longdouble) is preserved.
    """
    x = np.asarray(x)
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, order):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p_prev, p


def legendre_derivatives(order: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (P_N, P_N', P_N'') at strictly interior points x.

    P_N' comes from the derivative identity
        (x^2 - 1) P_N'(x) = N [x P_N(x) - P_{N-1}(x)]
    and P_N'' from Legendre's differential equation
        (1 - x^2) P_N'' = 2 x P_N' - N(N+1) P_N.
    Both rearrangements divide by 1 - x^2, hence the interior restriction.
    """
    n = order
    p_prev, p = legendre_pair(n, x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    d2p = (2.0 * x * dp - n * (n + 1) * p) / (1.0 - x * x)
    return p, dp, d2p


def _interior_nodes(order: int, dtype=np.longdouble) -> np.ndarray:
    """Roots of P_N' by Newton iteration from Chebyshev-like initial guesses."""
    n = order
    j = np.arange(1, n)
    x = (-np.cos(np.pi * j / n)).astype(dtype)
    eps = np.finfo(dtype).eps
    for _ in range(_NEWTON_MAX_ITER):
        _, dp, d2p = legendre_derivatives(n, x)
        step = dp / d2p
        x = x - step
        if np.max(np.abs(step)) < 4.0 * eps:
            break
    else:
        raise RuntimeError(f"node search did not converge for order {n}")
    # one clean-up sweep, then enforce the exact reflection symmetry
    _, dp, d2p = legendre_derivatives(n, x)
    x = x - dp / d2p
    x = 0.5 * (x - x[::-1])
    return x


@dataclass(frozen=True, eq=False)
class CollocationGrid:
    """Order-N Legendre-Gauss-Lobatto grid with differentiation machinery.

    Attributes
    ----------
    order : int
        Polynomial order N; the grid has N+1 nodes.
    nodes : ndarray, shape (N+1,)
        Strictly increasing nodes, nodes[0] = -1, nodes[-1] = +1.
    weights : ndarray, shape (N+1,)
        Gauss-Lobatto quadrature weights, summing to 2.
    legendre_at_nodes : ndarray, shape (N+1,)
        P_N evaluated at the nodes.
    d2_reference : ndarray, shape (N+1, N+1)
        Entry (k, j) is g_j''(x_k), the second derivative of the j-th
        cardinal function at node k.  Row sums vanish (the cardinal set
        resolves constants exactly).
    """

    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    legendre_at_nodes: np.ndarray = field(repr=False)
    d2_reference: np.ndarray = field(repr=False)
    # extended-precision internals used by the Hamiltonian assembly
    nodes_ld: np.ndarray = field(repr=False)
    legendre_ld: np.ndarray = field(repr=False)
    weights_ld: np.ndarray = field(repr=False)
    sym_d2_ld: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.order + 1


def _cardinal_second_derivative(nodes: np.ndarray, pn: np.ndarray, order: int) -> np.ndarray:
    """Matrix G with G[k, j] = g_j''(x_k) from closed forms.

    For interior rows k and j != k,
        g_j''(x_k) = -2 P_N(x_k) / [P_N(x_j) (x_k - x_j)^2].
    Endpoint rows (x_k = +-1) follow from the Taylor expansion of
    (1 - x^2) P_N' at the endpoint:
        g_j''(e) = P_N'(e) / [P_N(x_j) (e - x_j)]
                   - 2 P_N(e) / [P_N(x_j) (e - x_j)^2].
    Diagonals close each row to zero sum, which is exact because the
    cardinal functions form a partition of unity.
    """
    n = order
    x = nodes
    p = pn
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    g = -2.0 * p[:, None] / (p[None, :] * dx * dx)
    dp_end = {0: ((-1.0) ** (n - 1)) * n * (n + 1) / 2.0, n: n * (n + 1) / 2.0}
    for row in (0, n):
        s = x[row] - x
        s[row] = 1.0
        g[row, :] = dp_end[row] / (p * s) - 2.0 * p[row] / (p * s * s)
    np.fill_diagonal(g, 0.0)
    np.fill_diagonal(g, -g.sum(axis=1))
    return g


def _symmetrized_interior_d2(nodes: np.ndarray, order: int) -> np.ndarray:
    """Interior block of the P_N-conjugated second-derivative matrix.

    Conjugating G by diag(P_N(x_j)) symmetrizes it; on the interior nodes
    the entries collapse to
        -2 / (x_k - x_j)^2          (k != j)
        -N(N+1) / [3 (1 - x_j^2)]   (k == j).
    """
    n = order
    x = nodes[1:-1]
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    s = -2.0 / (dx * dx)
    np.fill_diagonal(s, -n * (n + 1) / (3.0 * (1.0 - x * x)))
    return s


@lru_cache(maxsize=64)
def build_grid(order: int) -> CollocationGrid:
    """Build the order-N Legendre-Gauss-Lobatto collocation grid.

    Parameters
    ----------
    order : int
        Polynomial order N >= 2.

    Returns
    -------
    CollocationGrid
        Immutable grid; results are cached per order.

    Raises
    ------
    ValueError
        If ``order`` is smaller than 2.
    """
    if not isinstance(order, (int, np.integer)) or order < 2:
        raise ValueError(f"grid order must be an integer >= 2, got {order!r}")
    n = int(order)
    x_int = _interior_nodes(n)
    one = np.longdouble(1.0)
    x_ld = np.concatenate(([-one], x_int, [one]))
    p_ld = np.empty_like(x_ld)
    p_ld[0] = (-one) ** n
    p_ld[-1] = one
    _, p_ld[1:-1] = legendre_pair(n, x_int)
    w_ld = 2.0 / (n * (n + 1) * p_ld * p_ld)
    d2 = _cardinal_second_derivative(x_ld, p_ld, n).astype(np.float64)
    sym = _symmetrized_interior_d2(x_ld, n)
    arrays = dict(
        nodes=x_ld.astype(np.float64),
        weights=w_ld.astype(np.float64),
        legendre_at_nodes=p_ld.astype(np.float64),
        d2_reference=d2,
        nodes_ld=x_ld,
        legendre_ld=p_ld,
        weights_ld=w_ld,
        sym_d2_ld=sym,
    )
    for a in arrays.values():
        a.flags.writeable = False
    return CollocationGrid(order=n, **arrays)


def cardinal_d2(grid: CollocationGrid) -> np.ndarray:
    """Matrix of cardinal-function second derivatives at the nodes.

    Applying it to samples of a polynomial of degree <= N reproduces the
    second derivative exactly (up to rounding); rows sum to zero.
    """
    return grid.d2_reference


def symmetrized_d2(grid: CollocationGrid) -> np.ndarray:
    """Symmetric interior second-derivative block in the scaled basis.

    This is the (N-1) x (N-1) matrix acting on coefficients c_j =
    f(x_j)/P_N(x_j); it equals diag(P)^-1 G diag(P) restricted to the
    interior and is exactly symmetric.  Shape (N-1, N-1), float64.
    """
    return grid.sym_d2_ld.astype(np.float64)


def quadrature(grid: CollocationGrid, samples: np.ndarray) -> float:
    """Gauss-Lobatto approximation to the integral of f over [-1, 1].

    ``samples`` must hold f at all N+1 nodes.  Exact for polynomials of
    degree <= 2N-1.
    """
    samples = np.asarray(samples)
    if samples.shape != (grid.size,):
        raise ValueError(
            f"expected {grid.size} samples for an order-{grid.order} grid, "
            f"got shape {samples.shape}"
        )
    return float(np.dot(grid.weights, samples))


def barycentric_weights(grid: CollocationGrid) -> np.ndarray:
    """Barycentric interpolation weights for the grid nodes.

    Up to a common factor, lambda_0 = (-1)^N, lambda_N = 1 and
    lambda_j = 1 / P_N(x_j) for interior j; the common factor cancels in
    the barycentric formula.
    """
    lam = np.empty(grid.size)
    lam[0] = (-1.0) ** grid.order
    lam[-1] = 1.0
    lam[1:-1] = 1.0 / grid.legendre_at_nodes[1:-1]
    return lam / np.max(np.abs(lam))


def barycentric_interpolate(
    grid: CollocationGrid, values: np.ndarray, x_out: np.ndarray
) -> np.ndarray:
    """Evaluate the degree-N cardinal interpolant of node ``values`` at ``x_out``.

    Exact at the nodes by construction (coincident points are returned
    directly rather than through the 0/0 limit).
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (grid.size,):
        raise ValueError("values must be sampled on the full node set")
    x_out = np.atleast_1d(np.asarray(x_out, dtype=np.float64))
    lam = barycentric_weights(grid)
    diff = x_out[:, None] - grid.nodes[None, :]
    hit = diff == 0.0
    exact = hit.any(axis=1)
    diff[hit] = 1.0
    c = lam / diff
    out = (c @ values) / c.sum(axis=1)
    if np.any(exact):
        idx = np.argmax(hit[exact], axis=1)
        out[exact] = values[idx]
    return out
