"""Builtin test functions, their far-field traces and known fractional derivatives.

Traces are written directly in the local parameter ``xi`` so that they can be
evaluated at ``xi = 0`` and for large ``q`` without overflowing ``x = xi^-q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from rieszmd.tridomain import RationalOrder, TriDomainFunction, TriDomainGrid


@dataclass(frozen=True)
class BuiltinFunction:
    name: str
    f: Callable[[np.ndarray], np.ndarray]
    # trace(xi, order) = f(x) |x|^(1+alpha) with |x| = xi^-q; the function is even
    trace: Callable[[np.ndarray, RationalOrder], np.ndarray]

    def sample(self, grid: TriDomainGrid) -> TriDomainFunction:
        def tr(xi):
            return self.trace(np.asarray(xi, dtype=float), grid.order)

        return TriDomainFunction.from_callables(grid, self.f, tr)


def lorentz(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 + x**2)


def _lorentz_trace(xi, order):
    p, q = order.p, order.q
    return xi ** (q - p) / (1.0 + xi ** (2 * q))


def gauss(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2))


def _gauss_trace(xi, order):
    p, q = order.p, order.q
    out = np.zeros_like(xi)
    pos = xi > 0
    with np.errstate(over="ignore", divide="ignore"):
        out[pos] = np.exp(-(xi[pos] ** (-2.0 * q)) - (q + p) * np.log(xi[pos]))
    return out


def powerlaw_factory(order: RationalOrder):
    """``(1 + x^2)^(-(1+alpha)/2)``, decaying exactly like ``|x|^-(1+alpha)``."""
    expo = -(1.0 + order.alpha) / 2.0

    def f(x):
        return (1.0 + np.asarray(x, dtype=float) ** 2) ** expo

    return f


def _powerlaw_trace(xi, order):
    return (1.0 + xi ** (2 * order.q)) ** (-(1.0 + order.alpha) / 2.0)


def benjamin_ono_profile(x):
    """Solitary wave ``4/(1+x^2)`` of the Benjamin-Ono equation."""
    x = np.asarray(x, dtype=float)
    out = 4.0 / (1.0 + x**2)
    return float(out) if out.ndim == 0 else out


def _benjamin_ono_trace(xi, order):
    return 4.0 * _lorentz_trace(xi, order)


LORENTZ = BuiltinFunction("lorentz", lorentz, _lorentz_trace)
GAUSS = BuiltinFunction("gauss", gauss, _gauss_trace)
BENJAMIN_ONO = BuiltinFunction("benjamin-ono", benjamin_ono_profile, _benjamin_ono_trace)


def powerlaw(order: RationalOrder) -> BuiltinFunction:
    return BuiltinFunction("powerlaw", powerlaw_factory(order), _powerlaw_trace)


def builtin(name: str, order: RationalOrder) -> BuiltinFunction:
    if name == "lorentz":
        return LORENTZ
    if name == "gauss":
        return GAUSS
    if name == "powerlaw":
        return powerlaw(order)
    if name in ("benjamin-ono", "bo"):
        return BENJAMIN_ONO
    raise KeyError(f"unknown builtin function {name!r}")


def lorentz_half_derivative(x):
    """Closed form of ``D^(1/2) 1/(1+x^2)``: ``sqrt(pi)/4 ((1-ix)^-3/2 + (1+ix)^-3/2)``."""
    x = np.asarray(x, dtype=float)
    z = (1.0 - 1j * x) ** -1.5 + (1.0 + 1j * x) ** -1.5
    return math.sqrt(math.pi) / 4.0 * z.real


def lorentz_half_derivative_scaled(xi):
    """``|x|^(3/2) D^(1/2) 1/(1+x^2)`` as a function of ``xi = |x|^(-1/2)``."""
    xi = np.asarray(xi, dtype=float)
    z = (xi**2 - 1j) ** -1.5 + (xi**2 + 1j) ** -1.5
    return math.sqrt(math.pi) / 4.0 * z.real


def gauss_half_derivative_at_zero() -> float:
    """``D^(1/2) exp(-x^2)`` at ``x = 0``: ``4^(3/4) Gamma(3/4) / (2 sqrt(pi))``."""
    return 4.0**0.75 * math.gamma(0.75) / (2.0 * math.sqrt(math.pi))


def closed_form(name: str, order: RationalOrder):
    """Closed-form derivative (plain, scaled) pair if one is known, else ``None``."""
    if name == "lorentz" and (order.p, order.q) == (1, 2):
        return lorentz_half_derivative, lorentz_half_derivative_scaled
    return None
