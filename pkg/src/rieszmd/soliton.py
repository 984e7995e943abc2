"""Solitary waves of ``c Q + D^alpha Q - kappa Q^n = 0`` on the tri-domain grid.

Newton's method with GMRES for the linear solves. The unknowns are the
stacked node values (rescaled traces in domains I/III); the residual in those
domains is multiplied by ``|x|^(1+alpha)`` so that it stays finite at infinity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse.linalg as spla

from rieszmd.errors import InvalidOrderError, PartitionError
from rieszmd.functions import benjamin_ono_profile
from rieszmd.riesz import assemble_operator, trace_tails
from rieszmd.spectral import integrate
from rieszmd.tridomain import (
    Domain,
    DomainPartition,
    RationalOrder,
    TriDomainFunction,
    TriDomainGrid,
    evaluate_physical,
)

log = logging.getLogger(__name__)

CRITICAL_ALPHA = 1.0 / 3.0


@dataclass(frozen=True)
class SolitonProblem:
    order: RationalOrder
    partition: DomainPartition
    c: float = 1.0
    kappa: float = 0.5
    n_power: int = 2

    def __post_init__(self):
        if self.order.alpha <= CRITICAL_ALPHA:
            raise InvalidOrderError(f"solitary waves need alpha > 1/3, got {self.order}")
        if not self.c > 0:
            raise ValueError(f"wave speed c must be positive, got {self.c!r}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa!r}")
        if int(self.n_power) != self.n_power or self.n_power < 2:
            raise ValueError(f"n_power must be an integer >= 2, got {self.n_power!r}")

    @property
    def grid(self) -> TriDomainGrid:
        return TriDomainGrid(self.partition, self.order)


def _physical_factor(grid: TriDomainGrid) -> np.ndarray:
    """Vector ``w`` with ``u.stack() * w`` the plain values ``u(x)`` (0 at infinity)."""
    w = np.ones(grid.size)
    sl = grid.slices()
    expo = grid.order.p + grid.order.q
    for dom in (Domain.I, Domain.III):
        w[sl[dom]] = grid.nodes(dom) ** expo
    return w


def residual(problem: SolitonProblem, Q: TriDomainFunction) -> np.ndarray:
    """Stacked residual, scaled by ``|x|^(1+alpha)`` in domains I/III."""
    grid = problem.grid
    v = Q.stack()
    phys = v * _physical_factor(grid)
    return problem.c * v + assemble_operator(grid) @ v - problem.kappa * v * phys ** (problem.n_power - 1)


def jacobian_apply(problem: SolitonProblem, Q: TriDomainFunction, v) -> np.ndarray:
    grid = problem.grid
    v = np.asarray(v, dtype=float)
    phys = Q.stack() * _physical_factor(grid)
    n = problem.n_power
    return problem.c * v + assemble_operator(grid) @ v - n * problem.kappa * phys ** (n - 1) * v


def jacobian_matrix(problem: SolitonProblem, Q: TriDomainFunction) -> np.ndarray:
    grid = problem.grid
    phys = Q.stack() * _physical_factor(grid)
    n = problem.n_power
    J = assemble_operator(grid).copy()
    J[np.diag_indices_from(J)] += problem.c - n * problem.kappa * phys ** (n - 1)
    return J


@dataclass
class GMRESResult:
    x: np.ndarray
    iterations: int
    converged: bool
    relative_residual: float


def gmres(
    apply: Callable[[np.ndarray], np.ndarray] | np.ndarray,
    rhs,
    tol: float = 1e-13,
    max_iter: int = 500,
    restart: int = 50,
    x0=None,
) -> GMRESResult:
    """Restarted GMRES; returns the last iterate with ``converged=False`` on failure."""
    rhs = np.asarray(rhs, dtype=float)
    n = rhs.shape[0]
    if isinstance(apply, np.ndarray):
        A = spla.aslinearoperator(apply)
    else:
        A = spla.LinearOperator((n, n), matvec=apply, dtype=float)
    if not np.any(rhs):
        return GMRESResult(np.zeros(n), 0, True, 0.0)
    count = 0

    def tick(_):
        nonlocal count
        count += 1

    restart = min(restart, n)
    cycles = max(1, math.ceil(max_iter / restart))
    x, _info = spla.gmres(A, rhs, x0=x0, rtol=tol, atol=0.0, restart=restart, maxiter=cycles,
                          callback=tick, callback_type="pr_norm")
    rel = float(np.linalg.norm(A.matvec(x) - rhs) / np.linalg.norm(rhs))
    # scipy's own stopping test uses an updated residual; judge on the true one
    return GMRESResult(x, count, rel <= tol * 10, rel)


@dataclass
class ConvergenceRecord:
    residual_norms: list[float] = field(default_factory=list)
    gmres_iterations: list[int] = field(default_factory=list)
    gmres_residuals: list[float] = field(default_factory=list)  # relative, per linear solve
    converged: bool = False
    final_tail: dict[str, float] = field(default_factory=dict)
    message: str = ""

    @property
    def newton_iterations(self) -> int:
        return len(self.gmres_iterations)

    def to_dict(self) -> dict:
        return {
            "residual_norms": self.residual_norms,
            "gmres_iterations": self.gmres_iterations,
            "gmres_residuals": self.gmres_residuals,
            "newton_iterations": self.newton_iterations,
            "converged": self.converged,
            "final_tail": self.final_tail,
            "message": self.message,
        }


def newton_solve(
    problem: SolitonProblem,
    Q0: TriDomainFunction,
    tol: float = 1e-10,
    max_newton: int = 20,
    *,
    gmres_tol: float = 1e-13,
    gmres_max_iter: int = 500,
    gmres_restart: int = 50,
) -> tuple[TriDomainFunction, ConvergenceRecord]:
    """Plain Newton iteration (no damping) with GMRES linear solves.

    Stops when ``||F||_inf <= tol``; aborts if the residual grows three steps
    in a row.
    """
    grid = problem.grid
    if Q0.grid != grid:
        raise PartitionError("initial iterate lives on a different grid than the problem")
    record = ConvergenceRecord()
    v = Q0.stack().copy()
    Q = Q0
    F = residual(problem, Q)
    record.residual_norms.append(float(np.abs(F).max()))
    growth = 0
    while record.residual_norms[-1] > tol:
        if record.newton_iterations >= max_newton:
            record.message = f"no convergence after {max_newton} Newton steps"
            break
        J = jacobian_matrix(problem, Q)
        sol = gmres(J, -F, tol=gmres_tol, max_iter=gmres_max_iter, restart=gmres_restart)
        if not sol.converged:
            log.warning("GMRES stopped at relative residual %.2e; continuing with an approximate step",
                        sol.relative_residual)
        v = v + sol.x
        Q = TriDomainFunction.from_stack(grid, v)
        F = residual(problem, Q)
        norm = float(np.abs(F).max())
        growth = growth + 1 if norm > record.residual_norms[-1] else 0
        record.residual_norms.append(norm)
        record.gmres_iterations.append(sol.iterations)
        record.gmres_residuals.append(sol.relative_residual)
        log.info("Newton step %d: residual %.3e (%d GMRES iterations)", record.newton_iterations, norm, sol.iterations)
        if not np.isfinite(norm) or growth >= 3:
            record.message = "diverging: residual grew in three consecutive steps" if growth >= 3 else "non-finite residual"
            break
    record.converged = record.residual_norms[-1] <= tol
    record.final_tail = trace_tails(Q)
    return Q, record


def transfer(u: TriDomainFunction, grid: TriDomainGrid) -> TriDomainFunction:
    """Re-represent ``u`` on another grid (other order and/or partition).

    Domain-II values are interpolated; far-field traces become
    ``u(x)|x|^(1+alpha_new)``. Where the new point lies in the old far field
    this is ``trace_old * |x|^(alpha_new - alpha_old)``, so lowering the order
    sends the new trace to 0 at infinity.
    """
    old = u.grid
    if grid == old:
        return u
    a_old, b_old = old.partition.a, old.partition.b
    an, ao = grid.order.alpha, old.order.alpha
    stacked = u.stack()
    uII = evaluate_physical(old, stacked, grid.x_nodes)
    traces = {}
    for dom, sign in ((Domain.I, -1.0), (Domain.III, 1.0)):
        xi = grid.nodes(dom)
        out = np.empty_like(xi)
        pos = xi > 0
        with np.errstate(over="ignore"):
            ax = xi[pos] ** (-float(grid.order.q))
        inside = ax <= (-a_old if sign < 0 else b_old)
        idx = np.flatnonzero(pos)
        if inside.any():
            xs = sign * ax[inside]
            out[idx[inside]] = evaluate_physical(old, stacked, xs) * ax[inside] ** (1.0 + an)
        far = ~inside
        if far.any():
            xi_old = np.minimum(xi[pos][far] ** (grid.order.q / old.order.q), old.interval(dom)[1])
            tr = u.evaluate(dom, xi_old)
            out[idx[far]] = tr * xi[pos][far] ** (grid.order.q * (ao - an))
        zero = ~pos
        if zero.any():
            if an < ao:
                out[zero] = 0.0
            elif an == ao:
                out[zero] = u.trace(dom)[-1]
            else:
                out[zero] = out[pos][np.argmin(xi[pos])]
        traces[dom] = out
    return TriDomainFunction(grid, traces[Domain.I], uII, traces[Domain.III])


def continuation_seed(Q: TriDomainFunction, grid: TriDomainGrid) -> TriDomainFunction:
    """Seed for the order of ``grid`` built from a solution at another order.

    A soliton decays like ``C |x|^(-1-alpha)`` with ``C`` continuous in alpha,
    so the far-field trace, not the physical value, is what carries over.
    :func:`transfer` keeps physical values, which sends the trace at infinity
    to 0 when alpha drops. The transferred profile is multiplied by
    ``(1 + x^2)^((alpha_old - alpha_new) / 2)``, which is about 1 in the core
    and restores the old trace at infinity.
    """
    v = transfer(Q, grid)
    d = Q.grid.order.alpha - grid.order.alpha
    if d == 0.0:
        return v
    q = grid.order.q
    uII = v.uII * (1.0 + grid.x_nodes**2) ** (0.5 * d)
    traces = {}
    for dom in (Domain.I, Domain.III):
        xi = grid.nodes(dom)
        out = v.trace(dom).copy()
        pos = xi > 0
        # log(1 + x^2) with x = xi^-q, written to avoid overflow
        log_f = d * (-q * np.log(xi[pos])) + 0.5 * d * np.log1p(xi[pos] ** (2 * q))
        out[pos] *= np.exp(log_f)
        out[~pos] = Q.trace(dom)[-1]
        traces[dom] = out
    return TriDomainFunction(grid, traces[Domain.I], uII, traces[Domain.III])


def secant_seed(older: TriDomainFunction, newer: TriDomainFunction, grid: TriDomainGrid) -> TriDomainFunction:
    """Linear extrapolation in alpha from two solutions at different orders."""
    a0, a1, a2 = older.grid.order.alpha, newer.grid.order.alpha, grid.order.alpha
    s1 = continuation_seed(newer, grid).stack()
    s0 = continuation_seed(older, grid).stack()
    return TriDomainFunction.from_stack(grid, s1 + (a2 - a1) / (a1 - a0) * (s1 - s0))


@dataclass
class TraceResult:
    solutions: list[TriDomainFunction]
    records: list[ConvergenceRecord]
    completed: bool

    @property
    def orders(self) -> list[RationalOrder]:
        return [s.grid.order for s in self.solutions]


def trace_alpha(
    orders: Sequence[RationalOrder],
    partitions: Sequence[DomainPartition] | DomainPartition,
    c: float = 1.0,
    tol: float = 1e-10,
    *,
    kappa: float = 0.5,
    n_power: int = 2,
    initial: TriDomainFunction | None = None,
    max_newton: int = 20,
    on_step: Callable[[TriDomainFunction, ConvergenceRecord], None] | None = None,
    symmetric_seed: bool = True,
) -> TraceResult:
    """Continuation in alpha.

    Without ``initial`` the first solve starts from the Benjamin-Ono profile
    (rescaled to speed ``c``). The next seed comes from the previous solution
    (:func:`continuation_seed`); after that each seed is extrapolated from the
    last two (:func:`secant_seed`). Stops at the first non-converged step.

    The Jacobian is singular along the translation mode ``Q'``, so rounding
    leaves a small odd component in every solution, and it compounds over a
    long trace. With ``symmetric_seed`` each seed is replaced by its even
    part on symmetric grids; Newton itself stays unconstrained.
    """
    orders = [RationalOrder.parse(o) for o in orders]
    if isinstance(partitions, DomainPartition):
        partitions = [partitions] * len(orders)
    if len(partitions) != len(orders):
        raise ValueError("need one partition per order")
    for prev, nxt in zip(orders, orders[1:]):
        if not nxt.alpha < prev.alpha:
            raise InvalidOrderError("the alpha schedule must be strictly decreasing")
    result = TraceResult([], [], False)
    current, previous = initial, None
    for order, partition in zip(orders, partitions):
        problem = SolitonProblem(order, partition, c=c, kappa=kappa, n_power=n_power)
        grid = problem.grid
        if current is None:
            Q0 = benjamin_ono_initial(grid, c=c, kappa=kappa)
        elif previous is None:
            Q0 = continuation_seed(current, grid)
        else:
            Q0 = secant_seed(previous, current, grid)
        if symmetric_seed and grid.is_symmetric:
            Q0 = Q0.even_part()
        Q, record = newton_solve(problem, Q0, tol=tol, max_newton=max_newton)
        result.solutions.append(Q)
        result.records.append(record)
        if on_step is not None:
            on_step(Q, record)
        if not record.converged:
            return result
        previous, current = current, Q
    result.completed = True
    return result


def resolve_on(
    Q: TriDomainFunction,
    partition: DomainPartition,
    *,
    c: float = 1.0,
    kappa: float = 0.5,
    n_power: int = 2,
    tol: float = 1e-10,
    max_newton: int = 20,
    symmetric_seed: bool = True,
) -> tuple[TriDomainFunction, ConvergenceRecord]:
    """Re-solve a converged profile on another partition at the same order."""
    problem = SolitonProblem(Q.grid.order, partition, c=c, kappa=kappa, n_power=n_power)
    Q0 = transfer(Q, problem.grid)
    if symmetric_seed and problem.grid.is_symmetric:
        Q0 = Q0.even_part()
    return newton_solve(problem, Q0, tol=tol, max_newton=max_newton)


def walk_to_partition(
    Q: TriDomainFunction,
    target: DomainPartition,
    *,
    ratio: float = 1.5,
    c: float = 1.0,
    kappa: float = 0.5,
    n_power: int = 2,
    tol: float = 1e-10,
    max_newton: int = 20,
) -> tuple[TriDomainFunction, list[ConvergenceRecord]]:
    """Move a converged profile to ``target`` through intermediate partitions.

    ``a`` and ``b`` change geometrically by at most ``ratio`` per re-solve;
    intermediate steps use the target's degrees and ``delta`` (clipped to each
    partition). A single large jump can leave Newton stalled just above the
    tolerance at small orders. Stops at the first non-converged step.
    """
    P = Q.grid.partition
    steps = max(1, math.ceil(max(abs(math.log(target.a / P.a)), abs(math.log(target.b / P.b))) / math.log(ratio)))
    records = []
    for i in range(1, steps + 1):
        if i == steps:
            part = target
        else:
            a = P.a * (target.a / P.a) ** (i / steps)
            b = P.b * (target.b / P.b) ** (i / steps)
            delta = min(target.delta, min(-a, b, 1.0) / 2)
            part = DomainPartition(a, b, delta, target.N_I, target.N_II, target.N_III)
        Q, record = resolve_on(Q, part, c=c, kappa=kappa, n_power=n_power, tol=tol, max_newton=max_newton)
        records.append(record)
        if not record.converged:
            break
    return Q, records


# (order, b = -a, N per domain, delta); tested down to 5/13 with c = 1, kappa = 1/2.
# Large denominators make the far-field maps x = xi^-q very stiff, so the
# intermediate orders keep q small. Each step changes alpha by <= 0.05 and
# shrinks the partition no more than about twofold.
TRACE_SCHEDULE: tuple[tuple[str, float, int, float], ...] = (
    ("9/10", 1.0, 200, 1e-2),
    ("4/5", 1.0, 200, 1e-2),
    ("7/10", 1.0, 200, 1e-2),
    ("3/5", 0.5, 200, 1e-2),
    ("11/20", 0.3, 256, 1e-2),
    ("1/2", 0.2, 256, 1e-2),
    ("12/25", 0.1, 256, 1e-2),
    ("6/13", 0.07, 256, 1e-2),
    ("4/9", 0.05, 256, 1e-2),
    ("3/7", 0.03, 256, 5e-3),
    ("5/12", 0.02, 256, 5e-3),
    ("7/17", 0.015, 256, 5e-3),
    ("9/22", 0.012, 256, 5e-3),
    ("2/5", 0.01, 256, 5e-3),
    ("9/23", 5e-3, 400, 1e-3),
    ("7/18", 5e-3, 400, 1e-3),
    ("5/13", 3e-3, 400, 1e-3),
)


def schedule_to(alpha, schedule=TRACE_SCHEDULE) -> tuple[list[RationalOrder], list[DomainPartition]]:
    """Prefix of ``schedule`` ending at ``alpha`` (which must appear in it)."""
    target = RationalOrder.parse(alpha)
    orders, partitions = [], []
    for label, b, N, delta in schedule:
        order = RationalOrder.parse(label)
        orders.append(order)
        partitions.append(DomainPartition.uniform(-b, b, N, delta))
        if order == target:
            return orders, partitions
    raise InvalidOrderError(f"alpha = {target} is not on the trace schedule")


def benjamin_ono_initial(grid: TriDomainGrid, c: float = 1.0, kappa: float = 0.5) -> TriDomainFunction:
    """Benjamin-Ono soliton of ``c Q + H Q_x = kappa Q^2`` sampled on ``grid``.

    ``Q(x) = (c / 2 kappa) * 4 / (1 + (c x)^2)``; its traces are written in the
    local parameter to avoid overflow for large ``q``.
    """
    p, q = grid.order.p, grid.order.q
    amp = c / (2.0 * kappa)

    def trace(xi):
        return amp * 4.0 * xi ** (q - p) / (xi ** (2 * q) + c**2)

    def f(x):
        return amp * benjamin_ono_profile(c * np.asarray(x))

    return TriDomainFunction.from_callables(grid, f, trace)


def transfer_callable(f: Callable[[np.ndarray], np.ndarray], grid: TriDomainGrid, far_limit: float = 0.0) -> TriDomainFunction:
    """Sample a plain function of ``x``; traces are ``f(x)|x|^(1+alpha)`` with ``far_limit`` at infinity."""
    alpha, q = grid.order.alpha, grid.order.q
    traces = {}
    for dom, sign in ((Domain.I, -1.0), (Domain.III, 1.0)):
        xi = grid.nodes(dom)
        out = np.full_like(xi, far_limit)
        pos = xi > 0
        with np.errstate(over="ignore"):
            ax = xi[pos] ** (-float(q))
        out[pos] = np.asarray(f(sign * ax), dtype=float) * ax ** (1.0 + alpha)
        traces[dom] = out
    return TriDomainFunction(grid, traces[Domain.I], np.asarray(f(grid.x_nodes), dtype=float), traces[Domain.III])


def rescale_soliton(Q: TriDomainFunction, c_new: float, c_old: float = 1.0) -> TriDomainFunction:
    """Profile for speed ``c_new`` from one for ``c_old`` via ``Q_c(z) = c Q(z c^(1/alpha))``.

    The partition, including ``delta``, is shrunk by ``lam^(1/alpha)`` with
    ``lam = c_new/c_old`` so that node values carry over one to one. Keeping
    ``delta`` fixed instead would change the near-boundary quadrature splits
    relative to the partition and cost accuracy when it widens.
    """
    lam = c_new / c_old
    if lam == 1.0:
        return Q
    grid = Q.grid
    P, alpha = grid.partition, grid.order.alpha
    s = lam ** (1.0 / alpha)
    a, b = P.a / s, P.b / s
    delta = min(P.delta / s, min(-a, b, 1.0) / 2)
    new = TriDomainGrid(DomainPartition(a, b, delta, P.N_I, P.N_II, P.N_III), grid.order)
    far = lam ** (-1.0 / alpha)
    return TriDomainFunction(new, far * Q.uI, lam * Q.uII, far * Q.uIII)


def _far_integral(values: np.ndarray, grid: TriDomainGrid, dom: Domain, power: int) -> float:
    lo, hi = grid.interval(dom)
    xi = grid.nodes(dom)
    return grid.order.q * integrate(values * xi ** power, lo, hi, grid.workspace(dom))


def mass(u: TriDomainFunction) -> float:
    """``int u^2 dx`` with Clenshaw-Curtis in every domain."""
    g = u.grid
    p, q = g.order.p, g.order.q
    total = integrate(u.uII**2, *g.interval(Domain.II), g.workspace(Domain.II))
    for dom in (Domain.I, Domain.III):
        total += _far_integral(u.trace(dom) ** 2, g, dom, q + 2 * p - 1)
    return total


def cubic_integral(u: TriDomainFunction) -> float:
    g = u.grid
    p, q = g.order.p, g.order.q
    total = integrate(u.uII**3, *g.interval(Domain.II), g.workspace(Domain.II))
    for dom in (Domain.I, Domain.III):
        total += _far_integral(u.trace(dom) ** 3, g, dom, 2 * q + 3 * p - 1)
    return total


def half_derivative_energy(u: TriDomainFunction, order: RationalOrder | None = None) -> float:
    """``1/2 int |D^(alpha/2) u|^2 dx`` where alpha defaults to the grid order."""
    from rieszmd.riesz import fractional_derivative

    order = u.grid.order if order is None else order
    half = order.half()
    g = TriDomainGrid(u.grid.partition, half)
    d = fractional_derivative(transfer(u, g), check_resolution=False).as_function()
    return 0.5 * mass(d)


def hamiltonian(u: TriDomainFunction, order: RationalOrder | None = None) -> float:
    """``int (1/2 |D^(alpha/2) u|^2 - u^3/6) dx``."""
    return half_derivative_energy(u, order) - cubic_integral(u) / 6.0
