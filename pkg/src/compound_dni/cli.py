"""Command-line front end.

Examples::

    compound-dni cdf --freq none --sev gpd:1,1 --z 999 --n0 2 --cycles 100
    compound-dni quantile --freq poisson:100 --sev lognormal:0,2 --q 0.999 --method all
    compound-dni tail-demo --example 2 --cycles 50
    compound-dni bench 3b --scale desk
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import baselines, dni, risk
from .models import GPD, CompoundModel, Lognormal, NegBinomial, Poisson, SingleLoss
from .tailcases import even_derivatives, tail_case

DEFAULT_SEED = 20080101
PILOT_SIMS = 100_000
METHODS = ("dni", "mc", "fft")


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------- #
# model grammar
# --------------------------------------------------------------------------- #


def _numbers(text: str, count: int, what: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad numbers in {what} spec {text!r}") from None
    if len(vals) != count:
        raise UsageError(f"{what} spec needs {count} parameter(s), got {text!r}")
    return vals


def parse_frequency(text: str):
    name, _, args = text.strip().lower().partition(":")
    try:
        if name == "none":
            return SingleLoss()
        if name == "poisson":
            return Poisson(*_numbers(args, 1, "poisson"))
        if name == "negbinomial":
            return NegBinomial(*_numbers(args, 2, "negbinomial"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown frequency {text!r}; use poisson:<lam>, negbinomial:<p>,<m> or none")


def parse_severity(text: str):
    name, _, args = text.strip().lower().partition(":")
    try:
        if name == "lognormal":
            return Lognormal(*_numbers(args, 2, "lognormal"))
        if name == "gpd":
            return GPD(*_numbers(args, 2, "gpd"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown severity {text!r}; use lognormal:<mu>,<sigma> or gpd:<xi>,<beta>")


def parse_model(freq: str, sev: str, cf_tol: float = 1e-13) -> CompoundModel:
    return CompoundModel(parse_frequency(freq), parse_severity(sev), cf_tol)


# --------------------------------------------------------------------------- #
# reports
# --------------------------------------------------------------------------- #


@dataclass
class Report:
    command: str
    model: dict | None
    method: str
    params: dict
    value: float | None
    errors: dict = field(default_factory=lambda: {"quad": None, "tail": None, "propagation": None, "stderr": None})
    work: dict = field(default_factory=lambda: {"cf_evals": None, "cpu_ms": None})
    seed: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        keys = {"command", "model", "method", "params", "value", "errors", "work", "seed"}
        if set(data) != keys:
            raise ValueError(f"report keys must be {sorted(keys)}")
        return cls(**data)


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def emit_json(reports: list[Report]) -> str:
    body = [_clean(r.to_dict()) for r in reports]
    return json.dumps(body[0] if len(body) == 1 else body, indent=2)


def parse_json(text: str) -> list[Report]:
    data = json.loads(text)
    items = data if isinstance(data, list) else [data]
    return [Report.from_dict(item) for item in items]


def emit_csv(reports: list[Report]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["command", "freq", "sev", "method", "value", "quad", "tail", "propagation", "stderr", "cf_evals", "cpu_ms", "seed"])
    for r in reports:
        m = r.model or {}
        e = r.errors
        w.writerow([r.command, m.get("freq", ""), m.get("sev", ""), r.method, _fmt(r.value), _fmt(e["quad"]), _fmt(e["tail"]),
                    _fmt(e["propagation"]), _fmt(e["stderr"]), _fmt(r.work["cf_evals"]), _fmt(r.work["cpu_ms"]), _fmt(r.seed)])
    return buf.getvalue()


def emit_table(reports: list[Report]) -> str:
    lines = []
    for r in reports:
        head = f"{r.command} [{r.method}]"
        if r.model:
            head += f"  freq={r.model['freq']}  sev={r.model['sev']}"
        lines.append(head)
        lines.append(f"  {'value':<22s}{_fmt(r.value)}")
        for k, v in r.errors.items():
            if v is not None:
                lines.append(f"  {'err.' + k:<22s}{_fmt(v)}")
        for k, v in r.work.items():
            if v is not None:
                lines.append(f"  {k:<22s}{_fmt(v)}")
        for k, v in r.params.items():
            lines.append(f"  {k:<22s}{v}")
    return "\n".join(lines)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float):
        return f"{x:.17g}" if math.isfinite(x) else str(x)
    return str(x)


def _display(x) -> str:
    return "" if x is None or not math.isfinite(x) else f"{x:.5g}"


# --------------------------------------------------------------------------- #
# single computations
# --------------------------------------------------------------------------- #


def _config(args) -> dni.DniConfig:
    return dni.DniConfig(n0=args.n0, N=args.cycles, m=args.m, tail_order=args.tail_order)


def _model_info(args) -> dict:
    return {"freq": args.freq, "sev": args.sev}


def _fft_h(args, model, q) -> float:
    if args.h != "auto":
        return float(args.h)
    return auto_bandwidth(model, q, args.fft_n, args.seed)


def auto_bandwidth(model: CompoundModel, q: float, n: int, seed: int) -> float:
    """2 h~ from a rough quantile guess: the GPD scaling law or a small MC pilot."""
    sev = model.severity
    if isinstance(sev, GPD):
        hint = risk.gpd_quantile_scaling(sev.xi, sev.beta, max(model.frequency.mean(), 1e-12), q)
    else:
        hint = float(np.quantile(baselines.simulate_losses(model, PILOT_SIMS, seed), q))
    hint = max(hint, float(sev.quantile(q)) if isinstance(model.frequency, SingleLoss) else hint, 1e-12)
    return baselines.fft_bandwidth(hint, n)[1]


def _lattice(model, h, n):
    return baselines.fft_compound(model.frequency, baselines.fft_discretize(model.severity, h, n))


def _lattice_cdf(pmf, z: float) -> float:
    # uniform spread of each cell over its rounding cell
    pos = z / pmf.h + 0.5
    j = min(int(math.floor(pos)), pmf.n)
    below = float(np.sum(pmf.masses[:j]))
    if j < pmf.n:
        below += (pos - j) * pmf.masses[j]
    return below


def run_single(args, method: str) -> Report:
    model = parse_model(args.freq, args.sev, args.cf_tol)
    cmd = args.command
    rep = Report(cmd, _model_info(args), method, {}, None)
    t0 = time.process_time()
    errors = rep.errors
    if method == "dni":
        cfg = _config(args)
        rep.params = {"n0": cfg.n0, "N": cfg.N, "m": cfg.m, "tail_order": cfg.tail_order}
        if cmd == "cdf":
            res = dni.invert_cdf(model, args.z, cfg)
            dg, df, dt = dni.error_budget(model, cfg, res)
            rep.value, errors["quad"], errors["tail"], errors["propagation"] = res.value, dg, dt, df
            rep.work["cf_evals"] = res.cf_evaluations
            rep.params["z"] = args.z
        elif cmd == "pdf":
            res = dni.invert_pdf(model, args.z, cfg)
            rep.value, errors["tail"], errors["propagation"] = res.value, res.tail_error, res.propagation_bound
            rep.work["cf_evals"] = res.cf_evaluations
            rep.params["z"] = args.z
        elif cmd == "quantile":
            res = risk.converged_quantile(model, args.q, cfg)
            rep.value = res.Q_q
            if len(res.history) > 1:
                errors["quad"] = abs(res.history[-1][2] - res.history[-2][2])
            rep.params.update(q=args.q, refinements=[list(h) for h in res.history], df_evaluations=res.df_evaluations)
        elif cmd == "cvar":
            qr = risk.converged_quantile(model, args.q, cfg)
            res = risk.cvar(model, args.q, quantile_result=qr)
            rep.value = res.cvar
            rep.params.update(q=args.q, quantile=res.Q_q, mean=res.mean)
        elif cmd == "exceedance":
            rep.value = risk.exceedance_above(model, args.L, cfg)
            rep.params["L"] = args.L
    elif method == "mc":
        rep.seed = args.seed
        rep.params = {"n_sims": args.n_sims}
        if cmd in ("quantile", "cvar"):
            est = baselines.mc_estimate(model, args.q, args.n_sims, args.seed)
            if cmd == "quantile":
                rep.value, errors["stderr"] = est.quantile_estimate, est.quantile_stderr
            else:
                rep.value, errors["stderr"] = est.cvar_estimate, est.cvar_stderr
            rep.params["q"] = args.q
        else:
            zs = baselines.simulate_losses(model, args.n_sims, args.seed)
            if cmd == "cdf":
                p = float(np.mean(zs <= args.z))
                rep.value, errors["stderr"] = p, math.sqrt(p * (1 - p) / zs.size)
                rep.params["z"] = args.z
            elif cmd == "pdf":
                rep.value = baselines._density_at(zs, args.z)
                rep.params["z"] = args.z
            elif cmd == "exceedance":
                ex = np.where(zs > args.L, zs, 0.0)
                rep.value, errors["stderr"] = float(ex.mean()), float(ex.std(ddof=1) / math.sqrt(zs.size))
                rep.params["L"] = args.L
    elif method == "fft":
        q = args.q if args.q is not None else 0.999
        h = _fft_h(args, model, q)
        rep.params = {"h": h, "n": args.fft_n}
        if cmd in ("quantile", "cvar"):
            est = baselines.fft_estimate(model, args.q, h, args.fft_n)
            rep.value = est.quantile_estimate if cmd == "quantile" else est.cvar_estimate
            if est.failed and (cmd == "cvar" or est.aliased):
                rep.params["failed"] = est.reason
            rep.params["q"] = args.q
        else:
            pmf = _lattice(model, h, args.fft_n)
            if cmd == "cdf":
                rep.value = _lattice_cdf(pmf, args.z)
                rep.params["z"] = args.z
            elif cmd == "pdf":
                j = int(round(args.z / h))
                rep.value = float(pmf.masses[j] / h) if j < pmf.n else 0.0
                rep.params["z"] = args.z
            elif cmd == "exceedance":
                cdf = _lattice_cdf(pmf, args.L)
                _, cv = baselines.lattice_quantile_cvar(pmf, cdf, risk.compound_mean(model))
                rep.value = (1.0 - cdf) * cv
                rep.params["L"] = args.L
    rep.work["cpu_ms"] = round(1000 * (time.process_time() - t0), 3)
    return rep


def run_tail_demo(args) -> Report:
    case = tail_case(args.example, args.alpha)
    N = args.cycles
    out = {}
    for order in (0, 1, 2):
        val, _ = dni.truncated_oscillatory_integral(case.G, dni.DniConfig(n0=args.n0, N=N, m=args.m, tail_order=order))
        out[order] = val
    b = 2 * N * math.pi
    series = [(-1) ** k * d for k, d in enumerate(even_derivatives(case, b, 3), start=1)]
    rel = {k: (v - case.exact) / case.exact for k, v in out.items()}
    params = {
        "example": args.example,
        "integrand": case.name,
        "N": N,
        "n0": args.n0,
        "exact": case.exact,
        "truncated": out[0],
        "truncated_rel_error": rel[0],
        "one_point": out[1],
        "one_point_rel_error": rel[1],
        "curvature": out[2],
        "curvature_rel_error": rel[2],
        "series_terms": series,
    }
    chosen = args.tail_order
    return Report("tail-demo", None, "dni", params, out[chosen],
                  {"quad": None, "tail": abs(rel[chosen]), "propagation": None, "stderr": None})


# --------------------------------------------------------------------------- #
# bench
# --------------------------------------------------------------------------- #

BENCH_COLUMNS = ["case_id", "method", "params", "estimate", "display", "err_or_stderr", "cpu_ms", "seed", "status"]

LN = Lognormal(0.0, 2.0)
GPD11 = GPD(1.0, 1.0)
SCALES = {
    "desk": {"n_sims": 10**7, "fft_n": 2**20, "max_freq": 1e4},
    "full": {"n_sims": 10**8, "fft_n": 2**22, "max_freq": 1e6},
}
POISSON_LAMBDAS = (0.1, 1, 10, 100, 1000, 1e4, 1e5, 1e6)
NB_SIZES = (1, 10, 100, 1000, 1e4, 1e5)
MC_DRAW_BUDGET = 1e11


@dataclass
class BenchRow:
    case_id: str
    method: str
    params: str
    estimate: float
    err: float | None
    cpu_ms: float | None
    seed: int | None
    status: str = "ok"


def _mc_sims(model: CompoundModel, cap: int) -> int:
    # the heaviest cases get fewer paths so a run stays within a fixed draw budget
    per_path = max(model.frequency.mean(), 1.0)
    return int(min(cap, max(10**5, MC_DRAW_BUDGET / per_path)))


def _timed(fn):
    t0 = time.process_time()
    out = fn()
    return out, 1000 * (time.process_time() - t0)


def _cases(table: str, scale: dict):
    lim = scale["max_freq"]
    if table in ("3a", "3b", "6"):
        cases = [("SS", CompoundModel(SingleLoss(), LN))] if table != "6" else []
        cases += [(f"poisson:{lam:g}", CompoundModel(Poisson(lam), LN)) for lam in POISSON_LAMBDAS if lam <= lim]
        return cases
    if table == "4":
        return [("SS", CompoundModel(SingleLoss(), GPD11))] + [
            (f"poisson:{lam:g}", CompoundModel(Poisson(lam), GPD11)) for lam in POISSON_LAMBDAS if lam <= lim
        ]
    if table in ("5a", "5b", "7"):
        return [(f"negbinomial:0.1,{m:g}", CompoundModel(NegBinomial(0.1, m), LN)) for m in NB_SIZES if m <= lim]
    raise UsageError(f"unknown table {table!r}")


def _bench_cells(table: str, scale_name: str, seed: int):
    """(method, cell) pairs; each cell is a zero-argument callable returning BenchRows."""
    scale = SCALES[scale_name]
    cells = []
    if table in ("1", "2"):
        sev, z, exact, grids, fft_h = (
            (LN, 483.216412, None, [(2, 100), (4, 100), (8, 200), (16, 400)], 0.1)
            if table == "1"
            else (GPD11, 999.0, 0.999, [(2, 100), (2, 200), (4, 400), (4, 800)], 0.5)
        )
        model = CompoundModel(SingleLoss(), sev)
        truth = float(sev.cdf(z)) if exact is None else exact
        case = "lognormal" if table == "1" else "gpd"
        for n0, N in grids:
            def cell(n0=n0, N=N):
                res, ms = _timed(lambda: dni.invert_cdf(model, z, dni.DniConfig(n0=n0, N=N)))
                return [BenchRow(case, "dni", f"n0={n0};N={N}", res.value, abs(res.value - truth) / truth, ms, None)]
            cells.append(("dni", cell))

        def mc_cell():
            zs, ms = _timed(lambda: baselines.simulate_losses(model, scale["n_sims"], seed))
            p = float(np.mean(zs <= z))
            return [BenchRow(case, "mc", f"n_sims={zs.size}", p, abs(p - truth) / truth, ms, seed)]

        def fft_cell():
            pmf, ms = _timed(lambda: _lattice(model, fft_h, scale["fft_n"]))
            p = _lattice_cdf(pmf, z)
            return [BenchRow(case, "fft", f"h={fft_h:g};n={scale['fft_n']}", p, abs(p - truth) / truth, ms, None)]

        return cells + [("mc", mc_cell), ("fft", fft_cell)]

    q = 0.999
    for case_id, model in _cases(table, scale):
        if table in ("3b", "5b"):
            def cell(model=model, case_id=case_id):
                rows, prev = [], None
                for n0, N in [(1, 50), (2, 100), (4, 200), (8, 400)]:
                    warm = prev
                    res, ms = _timed(lambda: risk.quantile(model, q, dni.DniConfig(n0=n0, N=N), warm_start=warm))
                    change = None if prev is None else abs(res.Q_q - prev) / res.Q_q
                    rows.append(BenchRow(case_id, "dni", f"n0={n0};N={N}", res.Q_q, change, ms, None))
                    prev = res.Q_q
                return rows
            cells.append(("dni", cell))
            continue

        want_cvar = table in ("6", "7")

        def dni_cell(model=model, case_id=case_id):
            qr, ms = _timed(lambda: risk.converged_quantile(model, q))
            change = abs(qr.history[-1][2] - qr.history[-2][2]) / qr.Q_q if len(qr.history) > 1 else None
            params = f"n0={qr.config.n0};N={qr.config.N}"
            if not want_cvar:
                return [BenchRow(case_id, "dni", params, qr.Q_q, change, ms, None)]
            cv, ms2 = _timed(lambda: risk.cvar(model, q, quantile_result=qr))
            return [BenchRow(case_id, "dni", params + f";L={qr.Q_q:.6g}", cv.cvar, None, ms + ms2, None)]

        def mc_cell(model=model, case_id=case_id):
            n = _mc_sims(model, scale["n_sims"])
            est, ms = _timed(lambda: baselines.mc_estimate(model, q, n, seed))
            if want_cvar:
                return [BenchRow(case_id, "mc", f"n_sims={n}", est.cvar_estimate, est.cvar_stderr, ms, seed)]
            return [BenchRow(case_id, "mc", f"n_sims={n}", est.quantile_estimate, est.quantile_stderr, ms, seed)]

        def fft_cell(model=model, case_id=case_id):
            n = scale["fft_n"]
            h2 = auto_bandwidth(model, q, n, seed)
            rows = []
            for h in (h2 / 2, h2):
                h = float(f"{h:.6g}")
                est, ms = _timed(lambda: baselines.fft_estimate(model, q, h, n))
                value = est.cvar_estimate if want_cvar else est.quantile_estimate
                status = "ok"
                if est.failed and (want_cvar or est.aliased or math.isnan(value)):
                    status = "failed: " + est.reason
                rows.append(BenchRow(case_id, "fft", f"h={h:g};n={n}", value, None, ms, seed, status))
            return rows

        cells += [("dni", dni_cell), ("mc", mc_cell), ("fft", fft_cell)]
    return cells


def _guard(cell):
    try:
        return cell()
    except Exception as exc:  # a failed cell is reported, not fatal
        return [BenchRow("?", "?", "", math.nan, None, None, None, f"failed: {type(exc).__name__}: {exc}")]


def run_bench(table: str, scale: str, seed: int, workers: int = 1, timing: bool = False, methods=METHODS) -> str:
    cells = [cell for method, cell in _bench_cells(table, scale, seed) if method in methods]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            groups = list(pool.map(_guard, cells))
    else:
        groups = [_guard(c) for c in cells]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    for rows in groups:
        for r in rows:
            w.writerow([r.case_id, r.method, r.params, _fmt(float(r.estimate)), _display(float(r.estimate)),
                        _fmt(None if r.err is None else float(r.err)),
                        _fmt(round(r.cpu_ms, 1)) if timing and r.cpu_ms is not None else "",
                        _fmt(r.seed), r.status])
    return buf.getvalue()


# --------------------------------------------------------------------------- #
# argument parsing
# --------------------------------------------------------------------------- #


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="compound-dni", description="Compound loss distributions by direct numerical inversion.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_model=True):
        if needs_model:
            sp.add_argument("--freq", default="none", help="poisson:<lam> | negbinomial:<p>,<m> | none")
            sp.add_argument("--sev", required=True, help="lognormal:<mu>,<sigma> | gpd:<xi>,<beta>")
            sp.add_argument("--method", default="dni", choices=METHODS + ("all",))
        sp.add_argument("--n0", type=int, default=1, help="initial subdivisions per pi-cycle")
        sp.add_argument("--cycles", type=int, default=50, help="number of full periods before the tail")
        sp.add_argument("--tail-order", type=int, default=1, choices=(0, 1, 2))
        sp.add_argument("--m", type=int, default=7, help="Gauss order (7 or 15)")
        sp.add_argument("--cf-tol", type=float, default=1e-13)
        sp.add_argument("--n-sims", type=int, default=10**6)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--fft-n", type=int, default=2**20)
        sp.add_argument("--h", default="auto", help="FFT bandwidth or 'auto'")
        sp.add_argument("--output", default="table", choices=("table", "csv", "json"))

    for name, target in (("cdf", "--z"), ("pdf", "--z"), ("quantile", "--q"), ("cvar", "--q"), ("exceedance", "--L")):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument(target, type=float, required=True, dest=target.lstrip("-"))
        for other in {"--z", "--q", "--L"} - {target}:
            sp.set_defaults(**{other.lstrip("-"): None})

    sp = sub.add_parser("tail-demo")
    common(sp, needs_model=False)
    sp.add_argument("--example", type=int, required=True, choices=(1, 2, 3))
    sp.add_argument("--alpha", type=float, default=None)
    sp.set_defaults(n0=256, tail_order=1)

    sp = sub.add_parser("bench")
    sp.add_argument("table", choices=("1", "2", "3a", "3b", "4", "5a", "5b", "6", "7"))
    sp.add_argument("--scale", default="desk", choices=tuple(SCALES))
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--method", default="all", choices=METHODS + ("all",))
    sp.add_argument("--timing", action="store_true", help="fill the cpu_ms column (breaks byte-identical output)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench":
            methods = METHODS if args.method == "all" else (args.method,)
            sys.stdout.write(run_bench(args.table, args.scale, args.seed, args.workers, args.timing, methods))
            return 0
        if args.command == "tail-demo":
            reports = [run_tail_demo(args)]
        else:
            methods = METHODS if args.method == "all" else (args.method,)
            reports = [run_single(args, m) for m in methods]
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    out = {"json": emit_json, "csv": emit_csv, "table": emit_table}[args.output](reports)
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
