"""Rational orders, the three-domain partition of the real line and functions on it.

The real line is split at ``a < 0 < b``. Domain II is ``[a, b]`` in the plain
coordinate ``x``. Domains I (``x < a``) and III (``x > b``) use the local
parameters

    xi_minus = (-x)**(-1/q),    xi_plus = x**(-1/q),

so that ``xi = 0`` is the point at infinity, and store the rescaled traces
``u(x) * |x|**(1 + alpha)`` which stay finite there.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from rieszmd.errors import DimensionError, InvalidOrderError, OutOfRangeError, PartitionError
from rieszmd.spectral import SpectralWorkspace, barycentric_eval, make_workspace, map_nodes

MAX_DENOMINATOR = 128


class Domain(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class RationalOrder:
    """Order ``alpha = p/q`` with coprime ``0 < p < q <= 128``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if int(p) != p or int(q) != q:
            raise InvalidOrderError(f"p and q must be integers, got {p!r}/{q!r}")
        if not 0 < p < q:
            raise InvalidOrderError(f"order must satisfy 0 < p < q, got {p}/{q}")
        if math.gcd(p, q) != 1:
            raise InvalidOrderError(f"p and q must be coprime, got {p}/{q}")
        if q > MAX_DENOMINATOR:
            raise InvalidOrderError(f"denominator {q} exceeds supported maximum {MAX_DENOMINATOR}")

    @property
    def alpha(self) -> float:
        return self.p / self.q

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    @classmethod
    def parse(cls, text) -> RationalOrder:
        """Parse ``"p/q"``, a :class:`~fractions.Fraction` or a decimal such as ``0.8``.

        Decimals are converted to lowest terms; a non-reduced ``"p/q"`` is
        rejected so that a typo does not silently change the grid.
        """
        if isinstance(text, RationalOrder):
            return text
        if isinstance(text, Fraction):
            return cls(text.numerator, text.denominator)
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            frac = Fraction(repr(float(text))).limit_denominator(MAX_DENOMINATOR)
            return cls(frac.numerator, frac.denominator)
        s = str(text).strip()
        if "/" in s:
            num, _, den = s.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError:
                raise InvalidOrderError(f"cannot parse order {text!r}; expected p/q") from None
            return cls(p, q)
        try:
            value = float(s)
        except ValueError:
            raise InvalidOrderError(f"cannot parse order {text!r}; expected p/q") from None
        return cls.parse(value)

    def half(self) -> RationalOrder:
        h = self.fraction / 2
        return RationalOrder(h.numerator, h.denominator)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class DomainPartition:
    """Boundaries ``a < 0 < b``, near-boundary threshold ``delta`` and per-domain degrees."""

    a: float
    b: float
    delta: float
    N_I: int
    N_II: int
    N_III: int

    def __post_init__(self):
        if not self.a < 0 < self.b:
            raise PartitionError(f"need a < 0 < b, got a={self.a!r}, b={self.b!r}")
        bound = min(-self.a, self.b, 1.0) / 2
        if not 0 < self.delta <= bound:
            raise PartitionError(f"delta must lie in (0, {bound!r}] for a={self.a!r}, b={self.b!r}; got {self.delta!r}")
        for name in ("N_I", "N_II", "N_III"):
            n = getattr(self, name)
            if int(n) != n or n < 2:
                raise PartitionError(f"{name} must be an integer >= 2, got {n!r}")

    @classmethod
    def uniform(cls, a: float, b: float, N: int, delta: float = 1e-2) -> DomainPartition:
        return cls(float(a), float(b), float(delta), N, N, N)

    def reflected(self) -> DomainPartition:
        return DomainPartition(-self.b, -self.a, self.delta, self.N_III, self.N_II, self.N_I)

    def gamma(self, xi: float) -> float:
        """Split factor ``min(1/(2 xi), 1/delta)`` used for small local parameters."""
        if xi == 0:
            return 1.0 / self.delta
        return min(0.5 / xi, 1.0 / self.delta)


@dataclass(frozen=True)
class TriDomainGrid:
    partition: DomainPartition
    order: RationalOrder

    @property
    def tau_minus(self) -> float:
        """Domain-I local parameter at ``x = a``."""
        return (-self.partition.a) ** (-1.0 / self.order.q)

    @property
    def tau_plus(self) -> float:
        """Domain-III local parameter at ``x = b``."""
        return self.partition.b ** (-1.0 / self.order.q)

    def workspace(self, domain: Domain) -> SpectralWorkspace:
        P = self.partition
        return make_workspace({Domain.I: P.N_I, Domain.II: P.N_II, Domain.III: P.N_III}[domain])

    def interval(self, domain: Domain) -> tuple[float, float]:
        """Coordinate interval ``(lower, upper)`` of a domain."""
        if domain is Domain.I:
            return 0.0, self.tau_minus
        if domain is Domain.II:
            return self.partition.a, self.partition.b
        return 0.0, self.tau_plus

    def nodes(self, domain: Domain) -> np.ndarray:
        return map_nodes(self.workspace(domain).nodes, *self.interval(domain))

    @property
    def xi_minus_nodes(self) -> np.ndarray:
        return self.nodes(Domain.I)

    @property
    def x_nodes(self) -> np.ndarray:
        return self.nodes(Domain.II)

    @property
    def xi_plus_nodes(self) -> np.ndarray:
        return self.nodes(Domain.III)

    @property
    def sizes(self) -> tuple[int, int, int]:
        P = self.partition
        return P.N_I + 1, P.N_II + 1, P.N_III + 1

    @property
    def size(self) -> int:
        return sum(self.sizes)

    def slices(self) -> dict[Domain, slice]:
        nI, nII, nIII = self.sizes
        return {
            Domain.I: slice(0, nI),
            Domain.II: slice(nI, nI + nII),
            Domain.III: slice(nI + nII, nI + nII + nIII),
        }

    def reflected(self) -> TriDomainGrid:
        return TriDomainGrid(self.partition.reflected(), self.order)

    @property
    def is_symmetric(self) -> bool:
        P = self.partition
        return P.a == -P.b and P.N_I == P.N_III

    def reflection_permutation(self) -> np.ndarray:
        """Index array ``r`` with ``stack(reflect(u)) == stack(u)[r]``."""
        sl = self.slices()
        idx = np.arange(self.size)
        return np.concatenate([idx[sl[Domain.III]], idx[sl[Domain.II]][::-1], idx[sl[Domain.I]]])

    def physical_x(self, domain: Domain, coord) -> np.ndarray:
        """Physical ``x`` for local coordinates; ``xi = 0`` maps to ``-inf``/``+inf``."""
        coord = np.asarray(coord, dtype=float)
        if domain is Domain.II:
            return coord
        q = self.order.q
        with np.errstate(divide="ignore", over="ignore"):
            x = coord ** (-float(q))
        return -x if domain is Domain.I else x

    def check_coordinate(self, domain: Domain, coord: float) -> None:
        lo, hi = self.interval(domain)
        if not lo <= coord <= hi:
            raise OutOfRangeError(f"coordinate {coord!r} outside domain {domain.value} interval [{lo!r}, {hi!r}]")


@dataclass(frozen=True, eq=False)
class TriDomainFunction:
    """Node values of a function on the compactified real line.

    ``uI``/``uIII`` hold ``u(x)|x|^(1+alpha)`` at the domain-I/III local
    parameter nodes (last entry is the point at infinity), ``uII`` holds
    ``u(x)`` at the domain-II nodes (first entry is ``x = b``).
    """

    grid: TriDomainGrid
    uI: np.ndarray
    uII: np.ndarray
    uIII: np.ndarray

    def __post_init__(self):
        for dom, name in ((Domain.I, "uI"), (Domain.II, "uII"), (Domain.III, "uIII")):
            arr = np.asarray(getattr(self, name), dtype=float)
            expected = self.grid.workspace(dom).N + 1
            if arr.shape != (expected,):
                raise DimensionError(f"{name} must have {expected} entries, got shape {arr.shape}")
            object.__setattr__(self, name, arr)

    def trace(self, domain: Domain) -> np.ndarray:
        return {Domain.I: self.uI, Domain.II: self.uII, Domain.III: self.uIII}[domain]

    def stack(self) -> np.ndarray:
        return np.concatenate([self.uI, self.uII, self.uIII])

    @classmethod
    def from_stack(cls, grid: TriDomainGrid, vec) -> TriDomainFunction:
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (grid.size,):
            raise DimensionError(f"stacked vector must have {grid.size} entries, got shape {vec.shape}")
        sl = grid.slices()
        return cls(grid, vec[sl[Domain.I]].copy(), vec[sl[Domain.II]].copy(), vec[sl[Domain.III]].copy())

    @classmethod
    def zeros(cls, grid: TriDomainGrid) -> TriDomainFunction:
        return cls.from_stack(grid, np.zeros(grid.size))

    @classmethod
    def from_callables(
        cls,
        grid: TriDomainGrid,
        f: Callable[[np.ndarray], np.ndarray],
        trace_minus: Callable[[np.ndarray], np.ndarray],
        trace_plus: Callable[[np.ndarray], np.ndarray] | None = None,
    ) -> TriDomainFunction:
        """Sample ``f`` on domain II and the given trace functions (of the local parameter) on I/III.

        ``trace_plus`` defaults to ``trace_minus``, which is right for even ``f``.
        """
        trace_plus = trace_minus if trace_plus is None else trace_plus
        return cls(
            grid,
            np.asarray(trace_minus(grid.xi_minus_nodes), dtype=float),
            np.asarray(f(grid.x_nodes), dtype=float),
            np.asarray(trace_plus(grid.xi_plus_nodes), dtype=float),
        )

    def reflected(self) -> TriDomainFunction:
        """The function ``x -> u(-x)`` on the reflected grid."""
        return TriDomainFunction(self.grid.reflected(), self.uIII.copy(), self.uII[::-1].copy(), self.uI.copy())

    def even_part(self) -> TriDomainFunction:
        """``(u(x) + u(-x)) / 2``; needs a reflection-symmetric grid."""
        if not self.grid.is_symmetric:
            raise PartitionError("the even part needs a grid symmetric about x = 0")
        far = 0.5 * (self.uI + self.uIII)
        return TriDomainFunction(self.grid, far, 0.5 * (self.uII + self.uII[::-1]), far.copy())

    def odd_size(self) -> float:
        """Largest ``|u(x) - u(-x)|`` over the stored values (symmetric grids only)."""
        if not self.grid.is_symmetric:
            raise PartitionError("the parity check needs a grid symmetric about x = 0")
        return float(max(np.abs(self.uII - self.uII[::-1]).max(), np.abs(self.uI - self.uIII).max()))

    def matching_mismatch(self) -> float:
        """Trace mismatch at ``x = a`` and ``x = b``, relative to the largest stored value."""
        P, alpha = self.grid.partition, self.grid.order.alpha
        left = abs(self.uI[0] - self.uII[-1] * (-P.a) ** (1 + alpha))
        right = abs(self.uIII[0] - self.uII[0] * P.b ** (1 + alpha))
        scale = max(np.abs(self.stack()).max(), np.finfo(float).tiny)
        return float(max(left, right) / scale)

    def check(self, warn_above: float = 1e-8, reject_above: float = 1e-4) -> None:
        if not np.all(np.isfinite(self.stack())):
            raise ValueError("trace values must be finite (including the points at infinity)")
        mismatch = self.matching_mismatch()
        if mismatch > reject_above:
            raise ValueError(f"traces do not match at the domain boundaries (relative mismatch {mismatch:.3e})")
        if mismatch > warn_above:
            warnings.warn(f"trace mismatch {mismatch:.3e} at the domain boundaries", stacklevel=2)

    def evaluate(self, domain: Domain, coord) -> float | np.ndarray:
        """Barycentric interpolant of the stored trace of ``domain`` at local coordinate(s)."""
        lo, hi = self.grid.interval(domain)
        return barycentric_eval(self.trace(domain), lo, hi, self.grid.workspace(domain), coord)

    def at(self, x) -> np.ndarray:
        """Physical values ``u(x)`` at arbitrary real ``x`` (``+-inf`` give 0)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return evaluate_physical(self.grid, self.stack(), x)


def evaluate_physical(grid: TriDomainGrid, stacked: np.ndarray, x: np.ndarray, *, scaled_traces: bool = True) -> np.ndarray:
    """Evaluate a tri-domain node vector at physical points ``x``.

    ``stacked`` holds rescaled traces in domains I/III (as in
    :class:`TriDomainFunction`); they are converted back with ``|x|^-(1+alpha)``.
    """
    P, order = grid.partition, grid.order
    sl = grid.slices()
    out = np.zeros_like(x, dtype=float)
    mid = (x >= P.a) & (x <= P.b)
    left = (x < P.a) & np.isfinite(x)
    right = (x > P.b) & np.isfinite(x)
    if mid.any():
        out[mid] = barycentric_eval(stacked[sl[Domain.II]], P.a, P.b, grid.workspace(Domain.II), x[mid])
    for mask, dom, sign in ((left, Domain.I, -1.0), (right, Domain.III, 1.0)):
        if not mask.any():
            continue
        ax = sign * x[mask]
        xi = np.minimum(ax ** (-1.0 / order.q), grid.interval(dom)[1])
        vals = barycentric_eval(stacked[sl[dom]], *grid.interval(dom), grid.workspace(dom), xi)
        out[mask] = vals * ax ** (-(1.0 + order.alpha)) if scaled_traces else vals
    return out
