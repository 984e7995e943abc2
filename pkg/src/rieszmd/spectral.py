"""Chebyshev collocation primitives.

Nodes, Clenshaw-Curtis weights, the differentiation matrix and barycentric
interpolation on the Chebyshev-Gauss-Lobatto points ``cos(m*pi/N)``. Every
routine that takes an interval ``(lower, upper)`` uses the affine map

    t = upper * (1 + l) / 2 + lower * (1 - l) / 2,

so node 0 sits at ``upper`` and node N at ``lower``. Reversed intervals are
allowed and flip the sign of integrals.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.fft

from rieszmd.errors import DimensionError, InvalidResolutionError, OutOfRangeError


@dataclass(frozen=True, eq=False)
class SpectralWorkspace:
    """Precomputed Chebyshev data for polynomial degree ``N`` (N+1 nodes)."""

    N: int
    nodes: np.ndarray
    cc_weights: np.ndarray
    diff_matrix: np.ndarray
    bary_weights: np.ndarray

    def mapped_nodes(self, lower: float, upper: float) -> np.ndarray:
        return map_nodes(self.nodes, lower, upper)


@dataclass(frozen=True, eq=False)
class ChebCoefficients:
    """Coefficients ``c_0..c_N`` of an interpolant in the basis T_n."""

    coeffs: np.ndarray

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def values(self) -> np.ndarray:
        """Values of the expansion at the Chebyshev nodes (inverse transform)."""
        return chebyshev_values(self.coeffs)


def map_nodes(nodes: np.ndarray, lower: float, upper: float) -> np.ndarray:
    return upper * (1.0 + nodes) / 2.0 + lower * (1.0 - nodes) / 2.0


def _chebyshev_nodes(N: int) -> np.ndarray:
    # sine form keeps the node set exactly antisymmetric: l[N-m] == -l[m]
    m = np.arange(N + 1)
    return np.sin(np.pi * (N - 2 * m) / (2 * N))


def _clenshaw_curtis_weights(N: int) -> np.ndarray:
    theta = np.pi * np.arange(N + 1) / N
    w = np.zeros(N + 1)
    interior = theta[1:-1]
    v = np.ones(N - 1)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N**2 - 1)
        for k in range(1, N // 2):
            v -= 2.0 * np.cos(2 * k * interior) / (4 * k**2 - 1)
        v -= np.cos(N * interior) / (N**2 - 1)
    else:
        w[0] = w[N] = 1.0 / N**2
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * interior) / (4 * k**2 - 1)
    w[1:-1] = 2.0 * v / N
    return w


def _differentiation_matrix(nodes: np.ndarray) -> np.ndarray:
    N = len(nodes) - 1
    c = np.ones(N + 1)
    c[0] = c[N] = 2.0
    c *= (-1.0) ** np.arange(N + 1)
    dx = nodes[:, None] - nodes[None, :]
    D = np.outer(c, 1.0 / c) / (dx + np.eye(N + 1))
    # negative-sum trick: rows annihilate constants exactly
    D -= np.diag(D.sum(axis=1))
    return D


@functools.lru_cache(maxsize=64)
def make_workspace(N: int) -> SpectralWorkspace:
    """Build (and cache) the Chebyshev workspace for degree ``N >= 2``."""
    if int(N) != N or N < 2:
        raise InvalidResolutionError(f"resolution N must be an integer >= 2, got {N!r}")
    N = int(N)
    nodes = _chebyshev_nodes(N)
    bary = np.ones(N + 1)
    bary[0] = bary[N] = 0.5
    bary *= (-1.0) ** np.arange(N + 1)
    arrays = [nodes, _clenshaw_curtis_weights(N), _differentiation_matrix(nodes), bary]
    for arr in arrays:
        arr.flags.writeable = False
    return SpectralWorkspace(N, *arrays)


def _check_length(values: np.ndarray, ws: SpectralWorkspace) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape[0] != ws.N + 1:
        raise DimensionError(f"expected {ws.N + 1} node values, got {values.shape[0]}")
    return values


def integrate(values, lower: float, upper: float, ws: SpectralWorkspace) -> float:
    """Clenshaw-Curtis integral over ``[lower, upper]`` of values sampled at mapped nodes."""
    values = _check_length(values, ws)
    return 0.5 * (upper - lower) * float(ws.cc_weights @ values)


def differentiate(values, lower: float, upper: float, ws: SpectralWorkspace) -> np.ndarray:
    """Derivative at the mapped nodes.

    Evaluated as ``sum_j D_ij (v_j - v_i)``, which equals ``D @ v`` because the
    rows of ``D`` sum to zero, but is exact for constants and does not lose
    digits to a large common offset.
    """
    values = _check_length(values, ws)
    spread = values[None, :] - values[:, None]
    return (2.0 / (upper - lower)) * (ws.diff_matrix * spread).sum(axis=1)


def interpolation_matrix(
    points, lower: float, upper: float, ws: SpectralWorkspace, *, slack: float = 0.0
) -> np.ndarray:
    """Matrix ``B`` with ``B @ values`` = interpolant evaluated at ``points``.

    Points within ``slack * |upper - lower|`` outside the interval are clamped
    onto it; anything further out raises :class:`OutOfRangeError`.
    """
    points = np.atleast_1d(np.asarray(points, dtype=float))
    lo, hi = min(lower, upper), max(lower, upper)
    tol = slack * (hi - lo)
    if np.any(points < lo - tol) or np.any(points > hi + tol) or np.any(np.isnan(points)):
        bad = points[(points < lo - tol) | (points > hi + tol) | np.isnan(points)][0]
        raise OutOfRangeError(f"point {bad!r} outside interpolation interval [{lo!r}, {hi!r}]")
    points = np.clip(points, lo, hi)

    x = ws.mapped_nodes(lower, upper)
    diff = points[:, None] - x[None, :]
    # closer than rounding resolution counts as a hit; a subnormal gap would
    # otherwise overflow the barycentric quotient
    hit = np.abs(diff) <= np.finfo(float).eps * (hi - lo)
    rows_hit = hit.any(axis=1)
    diff[hit] = 1.0
    C = ws.bary_weights[None, :] / diff
    B = C / C.sum(axis=1, keepdims=True)
    if rows_hit.any():
        B[rows_hit] = hit[rows_hit].astype(float)
    return B


def barycentric_eval(values, lower: float, upper: float, ws: SpectralWorkspace, x):
    """Evaluate the degree-N interpolant at ``x`` (scalar or array).

    Extrapolation is refused. A point that coincides exactly with a mapped node
    returns the stored value.
    """
    values = _check_length(values, ws)
    scalar = np.ndim(x) == 0
    out = interpolation_matrix(x, lower, upper, ws) @ values
    return float(out[0]) if scalar else out


def chebyshev_coefficients(values) -> ChebCoefficients:
    """Coefficients of the interpolant through values at ``cos(m*pi/N)``."""
    values = np.asarray(values, dtype=float)
    N = values.shape[0] - 1
    if N < 1:
        raise DimensionError("need at least two node values")
    c = scipy.fft.dct(values, type=1) / N
    c[0] /= 2.0
    c[N] /= 2.0
    return ChebCoefficients(c)


def chebyshev_values(coeffs) -> np.ndarray:
    """Inverse of :func:`chebyshev_coefficients`."""
    c = np.array(coeffs, dtype=float)
    N = c.shape[0] - 1
    c[1:N] /= 2.0
    return scipy.fft.dct(c, type=1)


def resolution_indicator(coeffs: ChebCoefficients, tail: int) -> float:
    """Largest of the last ``tail`` coefficient magnitudes relative to the largest overall."""
    c = np.abs(np.asarray(coeffs.coeffs if isinstance(coeffs, ChebCoefficients) else coeffs))
    if not 1 <= tail <= len(c) - 1:
        raise DimensionError(f"tail must lie in [1, {len(c) - 1}], got {tail}")
    top = c.max()
    if top == 0.0:
        return 0.0
    return float(c[-tail:].max() / top)
