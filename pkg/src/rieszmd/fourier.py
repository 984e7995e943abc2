"""DFT-on-the-torus baseline for the fractional derivative, and its error tooling.

The torus is ``x in L[-pi, pi]`` sampled at ``x_n = -pi L + n h``,
``n = 1..N_FFT``; the derivative multiplies the DFT by ``|k|^alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from rieszmd.errors import ConvergenceError, InvalidGridError
from rieszmd.functions import lorentz, lorentz_half_derivative
from rieszmd.tridomain import TriDomainFunction


@dataclass(frozen=True)
class TorusGrid:
    L: float
    nfft: int

    def __post_init__(self):
        n = self.nfft
        if int(n) != n or n < 2 or (int(n) & (int(n) - 1)) != 0:
            raise InvalidGridError(f"N_FFT must be a power of two, got {n!r}")
        if not self.L > 0:
            raise InvalidGridError(f"L must be positive, got {self.L!r}")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.L / self.nfft

    @property
    def x(self) -> np.ndarray:
        return -math.pi * self.L + np.arange(1, self.nfft + 1) * self.h

    @property
    def k(self) -> np.ndarray:
        """Wavenumbers in FFT storage order (the Nyquist mode appears as ``-N/(2L)``)."""
        return np.fft.fftfreq(self.nfft, d=1.0 / self.nfft) / self.L


def _check_power_of_two(n: int) -> None:
    if n < 2 or (n & (n - 1)) != 0:
        raise InvalidGridError(f"sample count must be a power of two, got {n}")


def fourier_multiplier(values, symbol: np.ndarray, *, imag_tol: float = 1e-10) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    out = np.fft.ifft(symbol * np.fft.fft(values))
    scale = max(np.abs(values).max(), np.finfo(float).tiny)
    leak = np.abs(out.imag).max()
    if leak > imag_tol * scale:
        raise ArithmeticError(f"imaginary residue {leak:.3e} in a real transform; symbol is not even")
    return out.real


def fft_fractional_derivative(values, alpha: float, grid: TorusGrid) -> np.ndarray:
    """Inverse DFT of ``|k|^alpha`` times the DFT of ``values``."""
    values = np.asarray(values, dtype=float)
    _check_power_of_two(values.shape[0])
    if values.shape[0] != grid.nfft:
        raise InvalidGridError(f"expected {grid.nfft} samples, got {values.shape[0]}")
    return fourier_multiplier(values, np.abs(grid.k) ** alpha)


def dft_coefficients(values) -> np.ndarray:
    """Normalized DFT magnitudes ``|u_hat_k| / N`` ordered by increasing ``k``."""
    values = np.asarray(values, dtype=float)
    return np.fft.fftshift(np.abs(np.fft.fft(values))) / values.shape[0]


def lorentz_error(L: float, nfft: int, alpha: float = 0.5) -> float:
    """L-infinity error of the DFT derivative of ``1/(1+x^2)`` against the closed form."""
    if alpha != 0.5:
        raise ValueError("the closed form is only available for alpha = 1/2")
    grid = TorusGrid(L, nfft)
    x = grid.x
    return float(np.abs(fft_fractional_derivative(lorentz(x), alpha, grid) - lorentz_half_derivative(x)).max())


TABLE1_NFFT = (2**12, 2**13, 2**14, 2**15)
TABLE1_L = (1e2, 1e3, 1e4, 1e5)


@dataclass
class Table1:
    by_nfft: list[tuple[int, float]] = field(default_factory=list)
    by_L: list[tuple[float, float]] = field(default_factory=list)


def table1_sweep(
    alpha: float = 0.5,
    *,
    L_fixed: float = 1000.0,
    nfft_values=TABLE1_NFFT,
    nfft_fixed: int = 2**19,
    L_values=TABLE1_L,
) -> Table1:
    """Lorentz DFT errors over ``N_FFT`` at fixed ``L`` and over ``L`` at fixed ``N_FFT``."""
    table = Table1()
    for n in nfft_values:
        table.by_nfft.append((n, lorentz_error(L_fixed, n, alpha)))
    for L in L_values:
        table.by_L.append((L, lorentz_error(L, nfft_fixed, alpha)))
    return table


@dataclass
class Comparison:
    max_difference: float
    x: np.ndarray
    multidomain: np.ndarray
    dft: np.ndarray
    dft_coefficients: np.ndarray


def compare_methods(u: TriDomainFunction, grid: TorusGrid, *, samples=None, chunk: int = 8192) -> Comparison:
    """Multi-domain ``D^alpha u`` against the DFT result at the torus samples.

    ``samples`` are the values of ``u`` at ``grid.x``; by default they are
    interpolated from ``u`` itself so both methods see the same function.
    """
    from rieszmd.riesz import fractional_derivative

    x = grid.x
    if samples is None:
        samples = np.concatenate([u.at(x[i : i + chunk]) for i in range(0, len(x), chunk)])
    dft = fft_fractional_derivative(samples, u.grid.order.alpha, grid)
    result = fractional_derivative(u, check_resolution=False)
    md = np.concatenate([result.at(x[i : i + chunk]) for i in range(0, len(x), chunk)])
    return Comparison(float(np.abs(md - dft).max()), x, md, dft, dft_coefficients(dft))


def trig_interpolate(values, grid: TorusGrid, points, *, chunk: int = 256) -> np.ndarray:
    """Evaluate the band-limited trigonometric interpolant of torus samples at arbitrary points."""
    values = np.asarray(values, dtype=float)
    n = grid.nfft
    coef = np.fft.rfft(values) / n
    k = np.arange(coef.shape[0]) / grid.L
    weights = np.full(coef.shape[0], 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0  # Nyquist mode, taken as a cosine
    x0 = grid.x[0]
    points = np.atleast_1d(np.asarray(points, dtype=float))
    out = np.empty(points.shape[0])
    for i in range(0, points.shape[0], chunk):
        phase = np.exp(1j * np.outer(points[i : i + chunk] - x0, k))
        out[i : i + chunk] = (phase * (weights * coef)).real.sum(axis=1)
    return out


@dataclass
class DFTSoliton:
    grid: TorusGrid
    values: np.ndarray
    iterations: int
    increment: float

    def __call__(self, x) -> np.ndarray:
        """Trigonometric interpolant; outside the torus the decaying tail is continued as
        ``Q(+-pi L) (pi L / |x|)^(1+alpha)`` (constant rescaled trace)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        edge = math.pi * self.grid.L
        inside = np.abs(x) <= edge
        out = np.empty_like(x)
        out[inside] = trig_interpolate(self.values, self.grid, x[inside])
        if (~inside).any():
            tail = float(self.values[-1])
            out[~inside] = tail * (edge / np.abs(x[~inside])) ** (1.0 + self.alpha)
        return out

    alpha: float = 0.0


def dft_soliton(
    alpha: float,
    *,
    c: float = 1.0,
    kappa: float = 0.5,
    n_power: int = 2,
    L: float = 100.0,
    nfft: int = 2**16,
    tol: float = 1e-13,
    max_iter: int = 2000,
    initial=None,
) -> DFTSoliton:
    """Solitary wave of ``c Q + D^alpha Q - kappa Q^n = 0`` on the torus (Petviashvili iteration)."""
    grid = TorusGrid(L, nfft)
    x = grid.x
    symbol = c + np.abs(np.fft.rfftfreq(nfft, d=1.0 / nfft) / L) ** alpha
    Q = np.asarray(initial(x) if initial is not None else 2.0 * c / kappa / (1.0 + x**2), dtype=float)
    gamma = n_power / (n_power - 1.0)
    Qh = np.fft.rfft(Q)
    increment = np.inf
    for it in range(1, max_iter + 1):
        Nh = np.fft.rfft(kappa * Q**n_power)
        stab = np.vdot(symbol * Qh, Qh).real / np.vdot(Nh, Qh).real
        Qh_new = stab**gamma * Nh / symbol
        Q_new = np.fft.irfft(Qh_new, n=nfft)
        increment = float(np.abs(Q_new - Q).max())
        Q, Qh = Q_new, Qh_new
        if increment < tol * max(1.0, np.abs(Q).max()):
            return DFTSoliton(grid, Q, it, increment, alpha)
    raise ConvergenceError(f"Petviashvili iteration did not converge (last increment {increment:.3e})")
