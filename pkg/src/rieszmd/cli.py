"""Command-line front end and file formats.

Commands: ``fracderiv``, ``compare-fft``, ``soliton`` and ``trace``. Each
accepts ``--config file.json`` whose keys mirror the long flag names
(``n_power`` for ``--n-power``); flags given on the command line win.
Exit status is 0 on success, 1 for bad input and 2 for numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
import warnings
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from rieszmd.errors import ConvergenceError, NumericalDomainError, RieszError, SampledFunctionError
from rieszmd.fourier import TorusGrid, compare_methods, dft_soliton, table1_sweep
from rieszmd.functions import builtin, closed_form, gauss_half_derivative_at_zero
from rieszmd.riesz import FractionalDerivative, fractional_derivative, trace_tails
from rieszmd.soliton import (
    TRACE_SCHEDULE,
    ConvergenceRecord,
    SolitonProblem,
    benjamin_ono_initial,
    hamiltonian,
    mass,
    newton_solve,
    residual,
    resolve_on,
    trace_alpha,
    transfer,
    transfer_callable,
    walk_to_partition,
)
from rieszmd.spectral import chebyshev_coefficients
from rieszmd.tridomain import Domain, DomainPartition, RationalOrder, TriDomainFunction, TriDomainGrid

log = logging.getLogger("rieszmd")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2
MAX_NFFT = 2**22
COMMANDS = ("fracderiv", "compare-fft", "soliton", "trace")


class UsageError(RieszError, ValueError):
    pass


class NumericalFailure(RieszError, RuntimeError):
    pass


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    command: str
    alpha: str | None = None
    func: str | None = None
    input: str | None = None
    a: float | None = None
    b: float | None = None
    N: int | None = None
    delta: float | None = None
    c: float = 1.0
    kappa: float = 0.5
    n_power: int = 2
    tol: float = 1e-10
    max_newton: int = 20
    L: float = 1000.0
    nfft: int = 2**17
    alphas: list[str] | None = None
    table1: bool = False
    initial: str = "dft"
    out: str = "out"

    def order(self) -> RationalOrder:
        return parse_order(self.alpha)

    def partition(self) -> DomainPartition:
        return DomainPartition.uniform(self.a, self.b, self.N, self.delta)

    def validate(self) -> None:
        """Re-check numeric constraints up front so mistakes fail before any work."""
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.alpha is not None:
            self.order()
        if None not in (self.a, self.b, self.N, self.delta):
            self.partition()
        if self.nfft > MAX_NFFT:
            raise UsageError(f"--nfft {self.nfft} exceeds the memory guard of 2^22 = {MAX_NFFT}")
        TorusGrid(self.L, self.nfft)
        if not self.c > 0 or not self.kappa > 0:
            raise UsageError("--c and --kappa must be positive")
        if int(self.n_power) != self.n_power or self.n_power < 2:
            raise UsageError("--n-power must be an integer >= 2")
        if not self.tol > 0 or self.max_newton < 1:
            raise UsageError("--tol must be positive and --max-newton at least 1")
        if self.alphas is not None:
            for a in self.alphas:
                parse_order(a)


_COMMAND_DEFAULTS = {
    "fracderiv": dict(alpha="1/2", func="lorentz", a=-2.0, b=2.0, N=200, delta=1e-2),
    "compare-fft": dict(alpha="2/5", func="powerlaw", a=-2.0, b=2.0, N=200, delta=1e-2),
    "soliton": dict(alpha="4/5", a=-1.0, b=1.0, N=200, delta=1e-2),
    "trace": dict(alpha="2/5"),
}


def parse_order(text) -> RationalOrder:
    """``p/q`` as given; decimals are reduced to lowest terms with a notice."""
    s = str(text).strip()
    order = RationalOrder.parse(s)
    if "/" not in s:
        log.warning("alpha %s read as %s", s, order)
    return order


def load_config(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("the config file must hold a single JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve_config(command: str, cli: dict, file_values: dict | None = None) -> RunConfig:
    """Merge command defaults, config-file values and explicit flags (in that order)."""
    known = {f.name for f in fields(RunConfig)}
    defaults = _COMMAND_DEFAULTS.get(command, {})
    given: dict = {}
    extra = {}
    for source in (file_values or {}, {k: v for k, v in cli.items() if v is not None}):
        for key, value in source.items():
            if key in ("command", "config", "verbose"):
                continue
            if key in known:
                given[key] = value
            else:
                extra[key] = value
    if extra:
        raise UsageError(f"unknown configuration keys: {', '.join(sorted(extra))}")
    if given.get("input") and "func" not in given:
        given["func"] = "file"
    merged = {**defaults, **given}
    if isinstance(merged.get("alphas"), str):
        merged["alphas"] = [s for s in merged["alphas"].split(",") if s.strip()]
    cfg = RunConfig(command=command, **merged)
    if cfg.alpha is not None:
        cfg.alpha = str(parse_order(cfg.alpha))
    if cfg.alphas is not None:
        cfg.alphas = [str(parse_order(a)) for a in cfg.alphas]
    for name in ("a", "b", "delta", "c", "kappa", "tol", "L"):
        value = getattr(cfg, name)
        if value is not None:
            setattr(cfg, name, float(value))
    for name in ("N", "n_power", "max_newton", "nfft"):
        value = getattr(cfg, name)
        if value is not None:
            if float(value) != int(value):
                raise UsageError(f"--{name.replace('_', '-')} must be an integer")
            setattr(cfg, name, int(value))
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# file formats

def save_sampled_function(u: TriDomainFunction, path: str | Path) -> None:
    P, order = u.grid.partition, u.grid.order
    doc = {
        "p": order.p,
        "q": order.q,
        "a": P.a,
        "b": P.b,
        "delta": P.delta,
        "N_I": P.N_I,
        "N_II": P.N_II,
        "N_III": P.N_III,
        "uI": u.uI.tolist(),
        "uII": u.uII.tolist(),
        "uIII": u.uIII.tolist(),
    }
    Path(path).write_text(json.dumps(doc))


def load_sampled_function(path: str | Path) -> TriDomainFunction:
    """Read a tri-domain sample document and check its boundary matching."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SampledFunctionError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SampledFunctionError(f"{path} is not valid JSON: {exc}") from None
    required = ("p", "q", "a", "b", "N_I", "N_II", "N_III", "uI", "uII", "uIII")
    if not isinstance(doc, dict) or any(k not in doc for k in required):
        missing = [k for k in required if not isinstance(doc, dict) or k not in doc]
        raise SampledFunctionError(f"sample document lacks fields: {', '.join(missing)}")
    try:
        order = RationalOrder(int(doc["p"]), int(doc["q"]))
        a, b = float(doc["a"]), float(doc["b"])
        delta = float(doc.get("delta", min(1e-2, min(-a, b, 1.0) / 2)))
        partition = DomainPartition(a, b, delta, int(doc["N_I"]), int(doc["N_II"]), int(doc["N_III"]))
        u = TriDomainFunction(
            TriDomainGrid(partition, order),
            np.asarray(doc["uI"], dtype=float),
            np.asarray(doc["uII"], dtype=float),
            np.asarray(doc["uIII"], dtype=float),
        )
        u.check()
    except (TypeError, ValueError) as exc:
        raise SampledFunctionError(f"{path}: {exc}") from None
    return u


def _fmt(v: float) -> str:
    return f"{v + 0.0:.17g}"  # no "-0"


def _domain_rows(u: TriDomainFunction, deriv: FractionalDerivative | None):
    g = u.grid
    expo = g.order.p + g.order.q
    sl = g.slices()
    scaled = deriv.scaled if deriv is not None else None
    plain = deriv.values if deriv is not None else None
    for dom in (Domain.I, Domain.II, Domain.III):
        coords = g.nodes(dom)
        stored = u.trace(dom)
        for i, s in enumerate(coords):
            if dom is Domain.II:
                x, value = _fmt(s), stored[i]
            elif s == 0:
                x, value = ("-inf" if dom is Domain.I else "inf"), 0.0
            else:
                x = _fmt(-(s ** -float(g.order.q)) if dom is Domain.I else s ** -float(g.order.q))
                value = stored[i] * s**expo
            row = [dom.name, _fmt(s), x, _fmt(value)]
            if deriv is not None:
                k = sl[dom].start + i
                row += [_fmt(plain[k]), _fmt(scaled[k])]
            else:
                row += ["", ""]
            yield row


def write_function_csv(path: str | Path, u: TriDomainFunction, deriv: FractionalDerivative | None = None) -> None:
    """One row per node. ``u`` and ``Dalpha_u`` are plain values (0 at infinity);
    ``scaled_Dalpha_u`` is ``|x|^(1+alpha) D^alpha u`` in domains I/III."""
    header = "domain,local_coordinate,x_or_inf,u,Dalpha_u,scaled_Dalpha_u"
    lines = [header] + [",".join(row) for row in _domain_rows(u, deriv)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_coefficients_csv(path: str | Path, u: TriDomainFunction) -> None:
    """Chebyshev coefficients of the stored values per domain."""
    lines = ["domain,n,coefficient"]
    for dom in (Domain.I, Domain.II, Domain.III):
        coeffs = chebyshev_coefficients(u.trace(dom)).coeffs
        lines += [f"{dom.name},{n},{_fmt(c)}" for n, c in enumerate(coeffs)]
    Path(path).write_text("\n".join(lines) + "\n")


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (RationalOrder, Domain)):
        return str(obj) if isinstance(obj, RationalOrder) else obj.name
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _partition_doc(P: DomainPartition) -> dict:
    return {"a": P.a, "b": P.b, "delta": P.delta, "N_I": P.N_I, "N_II": P.N_II, "N_III": P.N_III}


# ---------------------------------------------------------------------------
# commands

def _input_function(cfg: RunConfig) -> tuple[TriDomainFunction, str]:
    if cfg.func == "file" or cfg.input:
        if not cfg.input:
            raise UsageError("--func file needs --input path")
        return load_sampled_function(cfg.input), "file"
    order = cfg.order()
    try:
        fn = builtin(cfg.func, order)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    grid = TriDomainGrid(cfg.partition(), order)
    return fn.sample(grid), fn.name


def cmd_fracderiv(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    u, name = _input_function(cfg)
    t1 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = fractional_derivative(u)
    t2 = time.perf_counter()
    g = u.grid
    report: dict = {
        "command": "fracderiv",
        "function": name,
        "alpha": str(g.order),
        "partition": _partition_doc(g.partition),
        "input_tails": trace_tails(u),
        "output_tails": trace_tails(result.as_function()),
        "warnings": [str(w.message) for w in caught],
        "timings": {"setup_s": t1 - t0, "derivative_s": t2 - t1},
    }
    exact = closed_form(name, g.order) if name != "file" else None
    if exact is not None:
        plain, _ = exact
        errors = {}
        for dom in (Domain.I, Domain.II, Domain.III):
            x = g.physical_x(dom, g.nodes(dom))
            ref = np.where(np.isfinite(x), plain(np.where(np.isfinite(x), x, 0.0)), 0.0)
            errors[dom.name] = float(np.abs(result.part(dom, scaled=False) - ref).max())
        report["closed_form_error"] = errors
        report["max_closed_form_error"] = max(errors.values())
    if name == "gauss" and (g.order.p, g.order.q) == (1, 2):
        value = float(result.at(0.0)[0])
        report["value_at_zero"] = value
        report["error_at_zero"] = abs(value - gauss_half_derivative_at_zero())
    out = _out_dir(cfg)
    write_function_csv(out / "derivative.csv", u, result)
    write_coefficients_csv(out / "derivative_coefficients.csv", result.as_function())
    _write_json(out / "report.json", report)
    if "max_closed_form_error" in report:
        log.info("max closed-form error %.3e", report["max_closed_form_error"])
    return EXIT_OK


def cmd_compare_fft(cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    report: dict = {"command": "compare-fft", "L": cfg.L, "nfft": cfg.nfft}
    if cfg.table1:
        t0 = time.perf_counter()
        table = table1_sweep(0.5)
        lines = ["sweep,L,nfft,error"]
        lines += [f"nfft,1000,{n},{_fmt(e)}" for n, e in table.by_nfft]
        lines += [f"L,{_fmt(L)},{2**19},{_fmt(e)}" for L, e in table.by_L]
        (out / "table1.csv").write_text("\n".join(lines) + "\n")
        report["table1"] = {"by_nfft": table.by_nfft, "by_L": table.by_L, "seconds": time.perf_counter() - t0}
    if cfg.func:
        u, name = _input_function(cfg)
        torus = TorusGrid(cfg.L, cfg.nfft)
        t0 = time.perf_counter()
        samples = None if name == "file" else builtin(name, u.grid.order).f(torus.x)
        cmp = compare_methods(u, torus, samples=samples)
        report.update(
            function=name,
            alpha=str(u.grid.order),
            partition=_partition_doc(u.grid.partition),
            max_difference=cmp.max_difference,
            seconds=time.perf_counter() - t0,
        )
        np.savetxt(
            out / "comparison.csv",
            np.column_stack([cmp.x, cmp.multidomain, cmp.dft, cmp.multidomain - cmp.dft]),
            delimiter=",", fmt="%.17g", header="x,multidomain,dft,difference", comments="",
        )
        k = np.fft.fftshift(torus.k)
        np.savetxt(out / "dft_coefficients.csv", np.column_stack([k, cmp.dft_coefficients]),
                   delimiter=",", fmt="%.17g", header="k,abs_coefficient", comments="")
        log.info("max |multi-domain - DFT| = %.3e", cmp.max_difference)
    _write_json(out / "report.json", report)
    return EXIT_OK


def _solution_report(problem: SolitonProblem, Q: TriDomainFunction, record: ConvergenceRecord) -> dict:
    F = residual(problem, Q)
    doc = {
        "alpha": str(problem.order),
        "c": problem.c,
        "kappa": problem.kappa,
        "n_power": problem.n_power,
        "partition": _partition_doc(problem.partition),
        "record": record.to_dict(),
        "residual_inf": float(np.abs(F).max()),
        "peak": float(Q.at(0.0)[0]),
        "mass": mass(Q),
    }
    if Q.grid.is_symmetric:
        doc["odd_part"] = Q.odd_size()
    if problem.n_power == 2:
        doc["hamiltonian"] = hamiltonian(Q)
    return doc


def _persist_solution(directory: Path, problem: SolitonProblem, Q: TriDomainFunction, record: ConvergenceRecord) -> dict:
    directory.mkdir(parents=True, exist_ok=True)
    deriv = fractional_derivative(Q, check_resolution=False)
    write_function_csv(directory / "solution.csv", Q, deriv)
    write_coefficients_csv(directory / "coefficients.csv", Q)
    save_sampled_function(Q, directory / "solution.json")
    doc = _solution_report(problem, Q, record)
    _write_json(directory / "convergence.json", doc)
    return doc


def _initial_iterate(cfg: RunConfig, problem: SolitonProblem) -> TriDomainFunction:
    grid = problem.grid
    if cfg.initial == "benjamin-ono":
        return benjamin_ono_initial(grid, c=cfg.c, kappa=cfg.kappa)
    if cfg.initial == "dft":
        sol = dft_soliton(problem.order.alpha, c=cfg.c, kappa=cfg.kappa, n_power=cfg.n_power)
        edge = math.pi * sol.grid.L
        far = float(sol.values[-1]) * edge ** (1.0 + problem.order.alpha)
        return transfer_callable(sol, grid, far_limit=far)
    if cfg.initial == "trace":
        # continue in alpha on the schedule's partitions, then move to the requested partition
        orders, partitions = _schedule_above(problem.order)
        orders.append(problem.order)
        partitions.append(partitions[-1] if partitions else problem.partition)
        res = trace_alpha(orders, partitions, c=cfg.c, kappa=cfg.kappa, n_power=cfg.n_power, tol=cfg.tol,
                          max_newton=cfg.max_newton)
        if not res.completed:
            raise NumericalFailure(f"continuation toward alpha = {problem.order} stopped at {res.orders[-1]}")
        Q, records = walk_to_partition(res.solutions[-1], problem.partition, c=cfg.c, kappa=cfg.kappa,
                                       n_power=cfg.n_power, tol=cfg.tol, max_newton=cfg.max_newton)
        if not records[-1].converged:
            raise NumericalFailure(f"moving the alpha = {problem.order} profile to the requested partition failed")
        return Q
    return transfer(load_sampled_function(cfg.initial), grid)


def _schedule_above(order: RationalOrder):
    orders, partitions = [], []
    for label, b, N, delta in TRACE_SCHEDULE:
        o = RationalOrder.parse(label)
        if o.alpha <= order.alpha:
            break
        orders.append(o)
        partitions.append(DomainPartition.uniform(-b, b, N, delta))
    return orders, partitions


def cmd_soliton(cfg: RunConfig) -> int:
    problem = SolitonProblem(cfg.order(), cfg.partition(), c=cfg.c, kappa=cfg.kappa, n_power=cfg.n_power)
    Q0 = _initial_iterate(cfg, problem)
    t0 = time.perf_counter()
    Q, record = newton_solve(problem, Q0, tol=cfg.tol, max_newton=cfg.max_newton)
    doc = _persist_solution(_out_dir(cfg), problem, Q, record)
    log.info("alpha %s: %d Newton steps, residual %.3e (%.1f s)", problem.order,
             record.newton_iterations, doc["residual_inf"], time.perf_counter() - t0)
    if not record.converged:
        log.error("Newton did not converge: %s", record.message or "tolerance not reached")
        return EXIT_NUMERICAL
    return EXIT_OK


def _trace_plan(cfg: RunConfig) -> tuple[list[RationalOrder], list[DomainPartition], DomainPartition | None]:
    """Orders and partitions for ``trace``, plus an optional final partition."""
    explicit = cfg.a is not None or cfg.b is not None
    if explicit and None in (cfg.a, cfg.b):
        raise UsageError("give both --a and --b")
    if cfg.alphas:
        orders = [parse_order(a) for a in cfg.alphas]
        if not explicit:
            raise UsageError("an explicit --alphas list needs --a/--b (and optionally --N/--delta)")
        P = DomainPartition.uniform(cfg.a, cfg.b, cfg.N or 200, cfg.delta or 1e-2)
        return orders, [P] * len(orders), None
    target = cfg.order()
    orders, partitions = [], []
    for label, b, N, delta in TRACE_SCHEDULE:
        o = RationalOrder.parse(label)
        if o.alpha < target.alpha:
            break
        orders.append(o)
        partitions.append(DomainPartition.uniform(-b, b, N, delta))
    if not orders or orders[-1] != target:
        raise UsageError(
            f"alpha = {target} is not on the built-in schedule; pass --alphas with an explicit list"
        )
    final = None
    if explicit:
        final = DomainPartition.uniform(cfg.a, cfg.b, cfg.N or partitions[-1].N_II, cfg.delta or partitions[-1].delta)
        if final == partitions[-1]:
            final = None
    return orders, partitions, final


def cmd_trace(cfg: RunConfig) -> int:
    orders, partitions, final = _trace_plan(cfg)
    out = _out_dir(cfg)
    summary: list[dict] = []
    t0 = time.perf_counter()

    def persist(Q: TriDomainFunction, record: ConvergenceRecord) -> None:
        step = len(summary)
        problem = SolitonProblem(Q.grid.order, Q.grid.partition, c=cfg.c, kappa=cfg.kappa, n_power=cfg.n_power)
        name = f"step_{step:02d}_{Q.grid.order.p}_{Q.grid.order.q}"
        doc = _persist_solution(out / name, problem, Q, record)
        doc["directory"] = name
        doc["elapsed_s"] = time.perf_counter() - t0
        summary.append(doc)
        _write_json(out / "trace.json", {"steps": summary, "completed": False})
        log.info("alpha %s (b = %g): %d Newton steps, residual %.3e", Q.grid.order, Q.grid.partition.b,
                 record.newton_iterations, doc["residual_inf"])

    result = trace_alpha(orders, partitions, c=cfg.c, tol=cfg.tol, kappa=cfg.kappa, n_power=cfg.n_power,
                         max_newton=cfg.max_newton, on_step=persist)
    completed = result.completed
    if completed and final is not None:
        Q, record = resolve_on(result.solutions[-1], final, c=cfg.c, kappa=cfg.kappa, n_power=cfg.n_power,
                               tol=cfg.tol, max_newton=cfg.max_newton)
        persist(Q, record)
        completed = record.converged
    _write_json(out / "trace.json", {"steps": summary, "completed": completed})
    if not completed:
        log.error("trace halted at alpha = %s", summary[-1]["alpha"] if summary else orders[0])
        return EXIT_NUMERICAL
    return EXIT_OK


_HANDLERS = {
    "fracderiv": cmd_fracderiv,
    "compare-fft": cmd_compare_fft,
    "soliton": cmd_soliton,
    "trace": cmd_trace,
}


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rieszmd", description="Fractional derivatives on the real line and solitary waves.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="JSON file with default values for the flags")
        p.add_argument("--alpha", help="order p/q (decimals are reduced to lowest terms)")
        p.add_argument("--a", type=float, help="left boundary of the central domain (< 0)")
        p.add_argument("--b", type=float, help="right boundary of the central domain (> 0)")
        p.add_argument("--N", type=int, help="polynomial degree in every domain")
        p.add_argument("--delta", type=float, help="near-boundary threshold")
        p.add_argument("--out", help="output directory (default: out)")

    def solver(p):
        p.add_argument("--c", type=float, help="wave speed")
        p.add_argument("--kappa", type=float, help="nonlinearity coefficient")
        p.add_argument("--n-power", dest="n_power", type=int, help="nonlinearity power n >= 2")
        p.add_argument("--tol", type=float, help="Newton tolerance on the max-norm residual")
        p.add_argument("--max-newton", dest="max_newton", type=int, help="Newton step limit")

    p = sub.add_parser("fracderiv", help="fractional derivative of a builtin or sampled function")
    common(p)
    p.add_argument("--func", help="lorentz, gauss, powerlaw or file")
    p.add_argument("--input", help="sampled function document (JSON)")

    p = sub.add_parser("compare-fft", help="DFT baseline: Table-1 sweeps and method comparison")
    common(p)
    p.add_argument("--func", help="function compared against the DFT result (default powerlaw)")
    p.add_argument("--input", help="sampled function document (JSON)")
    p.add_argument("--L", type=float, help="torus half-length factor: x in L[-pi, pi]")
    p.add_argument("--nfft", type=int, help="number of DFT modes (power of two, at most 2^22)")
    p.add_argument("--table1", action="store_true", default=None, help="also run the Lorentz error sweeps")

    p = sub.add_parser("soliton", help="solitary wave at one order by Newton-GMRES")
    common(p)
    solver(p)
    p.add_argument("--initial", help="dft, benjamin-ono, trace, or a sampled function document")

    p = sub.add_parser("trace", help="continuation of solitary waves toward small orders")
    common(p)
    solver(p)
    p.add_argument("--alphas", help="comma-separated decreasing orders (default: built-in schedule to --alpha)")
    return parser


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--a -1e-3`` into ``--a=-1e-3``; argparse only accepts plain negative decimals."""
    out: list[str] = []
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt is not None and nxt.startswith("-"):
            try:
                float(nxt)
            except ValueError:
                pass
            else:
                out.append(f"{tok}={nxt}")
                next(it)
                continue
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_negative_values(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s",
                        stream=sys.stderr)
    try:
        file_values = load_config(args.config) if args.config else {}
        cfg = resolve_config(args.command, vars(args), file_values)
        return _HANDLERS[cfg.command](cfg)
    except (NumericalDomainError, ConvergenceError, NumericalFailure, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        log.error("error: %s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
