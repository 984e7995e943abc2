r"""Fractional derivative on the whole real line via Riesz integrals.

.. math::

    D^\alpha u(x) = C_\alpha \, \partial_x \big(I^-(x) - I^+(x)\big), \qquad
    C_\alpha = \frac{1}{2\Gamma(1-\alpha)\sin((1-\alpha)\pi/2)},

    I^-(x) = \int_{-\infty}^x \frac{u(y)}{(x-y)^\alpha} dy, \qquad
    I^+(x) = \int_x^\infty \frac{u(y)}{(y-x)^\alpha} dy.

For every query point ``I^-`` is split into sub-integrals whose integrands are
smooth after substitutions of the form ``y = x - t^q`` (near the singular
endpoint) and ``y = -t^{-q}`` (near infinity); each piece is integrated with
Clenshaw-Curtis and the trace it needs is barycentrically interpolated. ``I^+``
is obtained from ``I^-`` of the reflected function ``u(-x)``.

Because all of this is linear in the node values, the engine produces row
vectors; :func:`assemble_operator` stacks them into a dense matrix.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from rieszmd.errors import NumericalDomainError
from rieszmd.spectral import chebyshev_coefficients, interpolation_matrix, map_nodes, resolution_indicator
from rieszmd.tridomain import Domain, RationalOrder, TriDomainFunction, TriDomainGrid

# arguments of traces may leave their interval by a few ulps after substitution
_SLACK = 1e-12
TAIL_WARN = 1e-10


def prefactor(order: RationalOrder | float) -> float:
    """``1 / (2 Gamma(1-alpha) sin((1-alpha) pi/2))``."""
    alpha = order.alpha if isinstance(order, RationalOrder) else float(order)
    return 1.0 / (2.0 * math.gamma(1.0 - alpha) * math.sin((1.0 - alpha) * math.pi / 2.0))


def _power_gap(top: float, xi: float, q: int) -> float:
    """``top**q - xi**q`` without cancellation when ``xi`` is close to ``top``."""
    if xi <= 0.5 * top:
        return top**q - xi**q
    k = np.arange(q)
    return (top - xi) * float(np.sum(top ** (q - 1 - k) * xi**k))


def _kernel(xi: float, t, q: int, p: int, k: int, e: float, mode: str):
    """``q t^k (xi^q + t^q)^e`` (mode ``"sum"``), ``(xi^q - t^q)^e`` (``"xi>t"``) or
    ``(t^q - xi^q)^e`` (``"t>xi"``), where ``k + q e = p - 1``.

    Such kernels are homogeneous of degree ``p - 1`` in ``(xi, t)``, so they are
    evaluated as ``m^(p-1)`` times ratios bounded by 1 with ``m = max(xi, t)``;
    forming ``xi^q`` directly underflows for large ``q``.
    """
    t = np.asarray(t, dtype=float)
    m = np.maximum(xi, t)
    safe = np.where(m > 0, m, 1.0)
    rt, rx = t / safe, xi / safe
    if mode == "sum":
        inner = rx**q + rt**q
    elif mode == "xi>t":
        inner = rx**q - rt**q
    else:
        inner = rt**q - rx**q
    out = q * safe ** (p - 1) * rt**k * inner**e
    # both variables at 0: the limit of q m^(p-1)
    return np.where(m > 0, out, q * 0.0 ** (p - 1))


class Piece(NamedTuple):
    name: str
    source: Domain
    lower: float
    upper: float
    argument: object  # t -> trace argument
    weight: object  # t -> integrand factor multiplying the trace


def _minus_pieces(grid: TriDomainGrid, domain: Domain, s: float) -> Iterator[Piece]:
    """Sub-integrals of ``I^-`` at local coordinate ``s`` of ``domain``.

    In domains I and III the common factor ``xi^p`` is left out.
    """
    P, order = grid.partition, grid.order
    p, q, alpha = order.p, order.q, order.alpha
    a, b, delta = P.a, P.b, P.delta
    ta, tb = grid.tau_minus, grid.tau_plus
    inv_q = 1.0 / q

    if domain is Domain.I:
        xi = s
        h = xi * 2.0**-inv_q
        yield Piece("I1-", Domain.I, 0.0, h, lambda t: t, lambda t: _kernel(xi, t, q, p, 2 * p - 1, -alpha, "xi>t"))
        yield Piece(
            "I2-",
            Domain.I,
            0.0,
            h,
            lambda t: xi * (1.0 - (t / xi) ** q) ** inv_q,
            lambda t: _kernel(xi, t, q, p, q - p - 1, 2 * alpha - 1, "xi>t"),
        )
        return

    if domain is Domain.II:
        x = s
        yield Piece("I3-", Domain.II, 0.0, (x - a) ** inv_q, lambda t: x - t**q, lambda t: q * t ** (q - p - 1))

        def far(t):
            return q * t ** (2 * p - 1) * (1.0 + x * t**q) ** -alpha

        if x < a + delta:
            yield Piece("I4a-", Domain.I, 0.0, ta * 2.0**-inv_q, lambda t: t, far)
            yield Piece(
                "I4b-",
                Domain.I,
                (1.0 - x / (2 * a)) ** inv_q,
                max((x - a) / -a, 0.0) ** inv_q,
                lambda r: ((r**q - 1.0) / x) ** inv_q,
                lambda r: (q / x) * ((r**q - 1.0) / x) ** (2 * alpha - 1) * r ** (q - p - 1),
            )
        else:
            yield Piece("I4-", Domain.I, 0.0, ta, lambda t: t, far)
        return

    xi = s
    xq = xi**q
    # tb^q - xi^q, i.e. (x - b) / (b x); shared by I6s and I7 so both see the same x
    gap = max(_power_gap(tb, xi, q), 0.0)
    small = xi < delta
    split = min(P.gamma(xi) * xi, ta), min(P.gamma(xi) * xi, tb)

    # sources in domain I (y < a)
    def w5(t):
        return _kernel(xi, t, q, p, 2 * p - 1, -alpha, "sum")

    if small:
        yield Piece("I5a-", Domain.I, 0.0, split[0], lambda t: t, w5)
        yield Piece("I5b-", Domain.I, split[0], ta, lambda t: t, w5)
    else:
        yield Piece("I5-", Domain.I, 0.0, ta, lambda t: t, w5)

    # sources in domain II
    if xi > tb - delta and xi > 0.5 * tb:
        yield Piece(
            "I6s-",
            Domain.II,
            (b * gap) ** inv_q,
            (1.0 - xq * a) ** inv_q,
            lambda t: (1.0 - t**q) / xq,
            lambda t: (q / xq) * t ** (q - p - 1),
        )
    else:
        yield Piece("I6-", Domain.II, a, b, lambda y: y, lambda y: (1.0 - xq * y) ** -alpha)

    # sources in domain III between b and x
    def w7(t):
        return _kernel(xi, t, q, p, q - p - 1, 2 * alpha - 1, "sum")

    def arg7(t):
        m = np.maximum(xi, t)
        safe = np.where(m > 0, m, 1.0)
        return m * ((xi / safe) ** q + (t / safe) ** q) ** inv_q

    if small:
        yield Piece("I7a-", Domain.III, 0.0, max(_power_gap(split[1], xi, q), 0.0) ** inv_q, arg7, w7)
        yield Piece(
            "I7b-",
            Domain.III,
            split[1],
            tb,
            lambda eta: eta,
            lambda eta: _kernel(xi, eta, q, p, 2 * p - 1, -alpha, "t>xi"),
        )
    else:
        yield Piece("I7-", Domain.III, 0.0, gap**inv_q, arg7, w7)


def _rows_from_pieces(grid: TriDomainGrid, domain: Domain, pieces) -> dict[Domain, np.ndarray]:
    ws = grid.workspace(domain)
    rows = {d: np.zeros(grid.workspace(d).N + 1) for d in Domain}
    for piece in pieces:
        if piece.upper == piece.lower:
            continue
        t = map_nodes(ws.nodes, piece.lower, piece.upper)
        with np.errstate(all="ignore"):
            w = 0.5 * (piece.upper - piece.lower) * ws.cc_weights * piece.weight(t)
            args = piece.argument(t)
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(args))):
            raise NumericalDomainError(piece.name, f"domain {domain.value}, coordinate range [{piece.lower!r}, {piece.upper!r}]")
        lo, hi = grid.interval(piece.source)
        B = interpolation_matrix(args, lo, hi, grid.workspace(piece.source), slack=_SLACK)
        rows[piece.source] += w @ B
    return rows


def minus_row(grid: TriDomainGrid, domain: Domain, coord: float, *, scaled: bool = False) -> np.ndarray:
    """Stacked row ``r`` with ``r @ u.stack()`` equal to ``I^-`` at the query.

    With ``scaled=True`` (domains I/III only) the row returns ``I^- / xi^p``.
    """
    grid.check_coordinate(domain, coord)
    rows = _rows_from_pieces(grid, domain, _minus_pieces(grid, domain, float(coord)))
    row = np.concatenate([rows[Domain.I], rows[Domain.II], rows[Domain.III]])
    if domain is not Domain.II and not scaled:
        row *= float(coord) ** grid.order.p
    return row


def _reflect_query(domain: Domain, coord: float) -> tuple[Domain, float]:
    if domain is Domain.II:
        return Domain.II, -coord
    return (Domain.III if domain is Domain.I else Domain.I), coord


def plus_row(grid: TriDomainGrid, domain: Domain, coord: float, *, scaled: bool = False) -> np.ndarray:
    """Stacked row for ``I^+`` at the query (via ``I^-`` of the reflected function)."""
    grid.check_coordinate(domain, coord)
    rdom, rcoord = _reflect_query(domain, coord)
    rrow = minus_row(grid.reflected(), rdom, rcoord, scaled=scaled)
    row = np.empty_like(rrow)
    row[grid.reflection_permutation()] = rrow
    return row


def riesz_minus(u: TriDomainFunction, domain: Domain, coord: float, *, scaled: bool = False) -> float:
    """``I^-(x) = int_{-inf}^x u(y) (x-y)^-alpha dy`` at a local coordinate of ``domain``.

    In domains I and III the value carries the factor ``xi^p``; pass
    ``scaled=True`` to get ``I^- / xi^p`` instead, which is finite at ``xi = 0``.
    """
    return float(minus_row(u.grid, domain, coord, scaled=scaled) @ u.stack())


def riesz_plus(u: TriDomainFunction, domain: Domain, coord: float, *, scaled: bool = False) -> float:
    """``I^+(x) = int_x^inf u(y) (y-x)^-alpha dy``; see :func:`riesz_minus`."""
    return float(plus_row(u.grid, domain, coord, scaled=scaled) @ u.stack())


@dataclass(frozen=True)
class RieszParts:
    value_minus: float
    value_plus: float
    scaled: bool

    def unscaled(self, xi: float, p: int) -> tuple[float, float]:
        if not self.scaled:
            return self.value_minus, self.value_plus
        f = xi**p
        return self.value_minus * f, self.value_plus * f


def riesz_parts(u: TriDomainFunction, domain: Domain, coord: float, *, scaled: bool = False) -> RieszParts:
    scaled = scaled and domain is not Domain.II
    return RieszParts(riesz_minus(u, domain, coord, scaled=scaled), riesz_plus(u, domain, coord, scaled=scaled), scaled)


def _minus_matrix(grid: TriDomainGrid) -> np.ndarray:
    rows = []
    for dom in Domain:
        for s in grid.nodes(dom):
            rows.append(minus_row(grid, dom, float(s), scaled=dom is not Domain.II))
    return np.array(rows)


@functools.lru_cache(maxsize=8)
def riesz_difference_matrix(grid: TriDomainGrid) -> np.ndarray:
    """Matrix mapping stacked node values to ``I^- - I^+`` (divided by ``xi^p`` in domains I/III)."""
    minus = _minus_matrix(grid)
    refl = grid.reflected()
    rminus = minus if grid.is_symmetric and refl == grid else _minus_matrix(refl)
    perm = grid.reflection_permutation()
    plus = np.empty_like(rminus)
    plus[np.ix_(perm, perm)] = rminus
    out = minus - plus
    out.flags.writeable = False
    return out


@functools.lru_cache(maxsize=8)
def assemble_operator(grid: TriDomainGrid) -> np.ndarray:
    """Dense matrix ``M`` with ``M @ u.stack()`` = D^alpha u in the scaled convention.

    Rows for domain II give ``D^alpha u(x)``; rows for domains I/III give
    ``|x|^(1+alpha) D^alpha u``, which is finite at infinity.
    """
    F = riesz_difference_matrix(grid)
    C = prefactor(grid.order)
    p, q = grid.order.p, grid.order.q
    sl = grid.slices()
    M = np.empty_like(F)
    for dom in Domain:
        ws = grid.workspace(dom)
        lo, hi = grid.interval(dom)
        Fd = F[sl[dom]]
        dF = (2.0 / (hi - lo)) * (ws.diff_matrix @ Fd)
        if dom is Domain.II:
            M[sl[dom]] = C * dF
        else:
            xi = grid.nodes(dom)
            sign = 1.0 if dom is Domain.I else -1.0
            M[sl[dom]] = sign * (C / q) * (p * Fd + xi[:, None] * dF)
    M.flags.writeable = False
    return M


@dataclass(frozen=True, eq=False)
class FractionalDerivative:
    """``D^alpha u`` at all grid nodes.

    ``scaled`` is the stacked vector in the scaled convention (domains I/III
    multiplied by ``|x|^(1+alpha)``); ``values`` holds plain ``D^alpha u`` and
    is exactly 0 at the points at infinity.
    """

    grid: TriDomainGrid
    scaled: np.ndarray

    def part(self, domain: Domain, *, scaled: bool = True) -> np.ndarray:
        return (self.scaled if scaled else self.values)[self.grid.slices()[domain]]

    @property
    def values(self) -> np.ndarray:
        g, out = self.grid, self.scaled.copy()
        sl = g.slices()
        expo = g.order.p + g.order.q
        for dom in (Domain.I, Domain.III):
            out[sl[dom]] *= g.nodes(dom) ** expo
        return out

    def as_function(self) -> TriDomainFunction:
        return TriDomainFunction.from_stack(self.grid, self.scaled)

    def at(self, x) -> np.ndarray:
        from rieszmd.tridomain import evaluate_physical

        return evaluate_physical(self.grid, self.scaled, np.atleast_1d(np.asarray(x, dtype=float)))


def trace_tails(u: TriDomainFunction, tail: int = 5) -> dict[str, float]:
    """Chebyshev tail indicator of each stored trace."""
    return {dom.value: resolution_indicator(chebyshev_coefficients(u.trace(dom)), tail) for dom in Domain}


def fractional_derivative(u: TriDomainFunction, *, check_resolution: bool = True) -> FractionalDerivative:
    if check_resolution:
        for name, tail in trace_tails(u).items():
            if tail > TAIL_WARN:
                warnings.warn(f"trace in domain {name} is under-resolved (Chebyshev tail {tail:.2e})", stacklevel=2)
    return FractionalDerivative(u.grid, assemble_operator(u.grid) @ u.stack())


def evaluate_u_anywhere(u: TriDomainFunction, domain: Domain, coord) -> float | np.ndarray:
    """Interpolated trace of ``domain`` at a local coordinate (out of range is an error)."""
    return u.evaluate(domain, coord)
