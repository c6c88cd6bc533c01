"""Command-line entry point: ``sysrisk <command> CONFIG [options]``.

Exit status: 0 success, 1 domain or hypothesis error (including a failed
``validate``), 2 I/O or usage error.  CSV goes to standard output unless
``--out`` is given, in which case a ``<out>.manifest.json`` lists what was
written.  ``SYSRISK_WORKERS`` sets the default worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import asymptotics as asym
from .config import load_config, validate
from .errors import DomainError, HypothesisError, UndefinedEstimateError
from .estimators import DEFAULT_BOOTSTRAP, empirical_tail, systemic_table
from .simulator import BatchResult, default_workers, run_batch

logger = logging.getLogger("sysrisk")


class InputOutputError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    config_path: str
    seed: Optional[int] = None
    n: Optional[int] = None
    outputs: List[str] = field(default_factory=list)
    wall_time: float = 0.0

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2) + "\n")


def fmt(value) -> str:
    """Six significant digits, the fixed number format of every CSV."""
    return f"{float(value):.6g}"


def _float_list(text: str) -> List[float]:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a nonempty comma-separated list of numbers")
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _load(path: str):
    try:
        return load_config(path)
    except FileNotFoundError as exc:
        raise InputOutputError(f"config not found: {path}") from exc
    except OSError as exc:
        raise InputOutputError(f"cannot read config {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise InputOutputError(f"malformed config {path}: {exc!r}") from exc


def _csv(header: List[str], rows: List[List]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(text: str, args, manifest: RunManifest, started: float) -> None:
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    try:
        out.write_text(text)
        manifest.outputs.append(str(out))
        manifest.wall_time = time.perf_counter() - started
        manifest.write(out.with_name(out.name + ".manifest.json"))
    except OSError as exc:
        raise InputOutputError(f"cannot write {out}: {exc}") from exc


def _batch_for(args, config) -> BatchResult:
    if getattr(args, "batch", None):
        try:
            batch = BatchResult.load(args.batch)
        except OSError as exc:
            raise InputOutputError(f"cannot read batch {args.batch}: {exc}") from exc
        return batch
    return run_batch(config, args.n, args.seed, args.workers)


# --- commands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    config = _load(args.config)
    report = validate(config, need_ses_mes=args.need_sesmes)
    print(report)
    return 0 if report.ok else 1


def asymptotic_tail_rows(config, xs, t):
    return [[x, asym.tail_asymptotic(config, x, t)] for x in xs]


def asymptotic_q_rows(config, qs, t):
    d = config.d
    header = (["q", "var_q"] + [f"ses_{k + 1}" for k in range(d)] + [f"mes_{k + 1}" for k in range(d)]
              + [f"mes_over_ses_{k + 1}" for k in range(d)])
    rows = []
    for q in qs:
        rep = asym.report(config, x=1.0, q=q, t=t)
        rows.append([q, rep.var_q, *rep.ses, *rep.mes, *(rep.mes / rep.ses)])
    return header, rows


def cmd_asymptotic(args) -> int:
    started = time.perf_counter()
    config = _load(args.config)
    t = config.horizon_t if args.t is None else args.t
    if args.x is not None:
        text = _csv(["x", "tail_asymptotic"], asymptotic_tail_rows(config, args.x, t))
    else:
        header, rows = asymptotic_q_rows(config, args.q, t)
        text = _csv(header, rows)
    _emit(text, args, RunManifest("asymptotic", args.config), started)
    return 0


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    config = _load(args.config)
    out = Path(args.out)
    if not out.parent.exists():
        raise InputOutputError(f"output directory does not exist: {out.parent}")
    batch = run_batch(config, args.n, args.seed, args.workers)
    try:
        written = batch.save(out)
        sidecar = written.with_name(written.name + ".json")
        manifest = RunManifest("simulate", args.config, args.seed, args.n, [str(written), str(sidecar)])
        manifest.wall_time = time.perf_counter() - started
        manifest.write(written.with_name(written.name + ".manifest.json"))
    except OSError as exc:
        raise InputOutputError(f"cannot write batch to {out}: {exc}") from exc
    print(f"wrote {batch.n} replications to {written} (digest {batch.digest()[:16]}, "
          f"{batch.wall_time:.1f}s)")
    return 0


def compare_tail_rows(config, batch: BatchResult, xs, t):
    rows = []
    for x in xs:
        theory = asym.tail_asymptotic(config, x, t)
        emp = empirical_tail(batch.d_total, x)
        rows.append([x, theory, emp.value, emp.std_error, emp.value / theory])
    return rows


def cmd_compare_tail(args) -> int:
    started = time.perf_counter()
    config = _load(args.config)
    batch = _batch_for(args, config)
    rows = compare_tail_rows(config, batch, args.x, config.horizon_t)
    text = _csv(["x", "theoretical", "empirical", "empirical_se", "ratio"], rows)
    _emit(text, args, RunManifest("compare-tail", args.config, batch.seed, batch.n), started)
    return 0


def compare_systemic_rows(config, batch: BatchResult, qs, lines, n_boot, seed):
    table = systemic_table(batch.z, batch.d_total, qs, n_boot=n_boot, seed=seed)
    weights = asym.total_weight(config, config.horizon_t)
    rows = []
    for k in lines:
        for j, q in enumerate(table.qs):
            ses_th = asym.ses_asymptotic(config, k, float(q), config.horizon_t, weights)
            mes_th = asym.mes_asymptotic(config, k, float(q), config.horizon_t, weights)
            rows.append([k + 1, float(q), table.ses[k, j], table.ses_se[k, j], ses_th,
                         table.mes[k, j], table.mes_se[k, j], mes_th, int(table.n_exceed[j])])
    return rows


def cmd_compare_systemic(args) -> int:
    started = time.perf_counter()
    config = _load(args.config)
    if args.k is not None and not 1 <= args.k <= config.d:
        raise _UsageError(f"--k must be between 1 and {config.d}")
    start, stop, count = args.q_grid
    count = int(count)
    if count < 1:
        raise _UsageError("--q-grid count must be positive")
    qs = [round(q, 10) for q in np.linspace(start, stop, count)]
    for q in qs:
        if not 0 < q < 1:
            raise DomainError(f"q must lie in (0, 1), got {q}")
    asym._check_alpha(config.alpha)
    batch = _batch_for(args, config)
    lines = range(config.d) if args.k is None else [args.k - 1]
    rows = compare_systemic_rows(config, batch, qs, lines, args.n_boot, args.seed)
    header = ["k", "q", "ses_emp", "ses_se", "ses_theory", "mes_emp", "mes_se", "mes_theory", "n_exceed"]
    _emit(_csv(header, rows), args, RunManifest("compare-systemic", args.config, batch.seed, batch.n), started)
    return 0


class _UsageError(Exception):
    pass


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sysrisk", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a config against the model hypotheses")
    p.add_argument("config")
    p.add_argument("--need-sesmes", action="store_true", help="also require alpha > 1")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("asymptotic", help="evaluate the closed-form approximations")
    p.add_argument("config")
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--x", type=_float_list, help="comma-separated thresholds")
    grid.add_argument("--q", type=_float_list, help="comma-separated probability levels")
    p.add_argument("--t", type=float, default=None, help="horizon (default: config horizon_t)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_asymptotic)

    def sim_opts(p, need_out=False):
        p.add_argument("--n", type=int, default=500_000)
        p.add_argument("--seed", type=int, default=20240601)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", required=need_out, default=None)

    p = sub.add_parser("simulate", help="simulate and persist a batch")
    p.add_argument("config")
    sim_opts(p, need_out=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare-tail", help="empirical vs asymptotic P(D_t > x)")
    p.add_argument("config")
    p.add_argument("--x", type=_float_list, required=True)
    p.add_argument("--batch", default=None, help="reuse a persisted batch instead of simulating")
    sim_opts(p)
    p.set_defaults(func=cmd_compare_tail)

    p = sub.add_parser("compare-systemic", help="empirical vs asymptotic SES/MES over a q grid")
    p.add_argument("config")
    p.add_argument("--q-grid", nargs=3, type=float, metavar=("START", "STOP", "COUNT"),
                   default=(0.99, 0.999, 10))
    p.add_argument("--k", type=int, default=None, help="1-based line index (default: all lines)")
    p.add_argument("--n-boot", type=int, default=DEFAULT_BOOTSTRAP)
    p.add_argument("--batch", default=None, help="reuse a persisted batch instead of simulating")
    sim_opts(p)
    p.set_defaults(func=cmd_compare_systemic)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", None) is None and hasattr(args, "workers"):
        args.workers = default_workers()
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except InputOutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, HypothesisError, UndefinedEstimateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
