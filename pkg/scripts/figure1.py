"""Empirical vs asymptotic SES and MES over q = 0.990, 0.991, ..., 0.999.

Writes a long-format CSV; ``--plot file.png`` also draws the four panels
(needs matplotlib, the ``plot`` extra).

    python3 scripts/figure1.py [--n 500000] [--seed 20240601] [--out results/figure1.csv] [--plot results/figure1.png]
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from sysrisk.cli import compare_systemic_rows
from sysrisk.config import load_config
from sysrisk.simulator import run_batch

ROOT = Path(__file__).resolve().parents[1]
HEADER = ["k", "q", "ses_emp", "ses_se", "ses_theory", "mes_emp", "mes_se", "mes_theory", "n_exceed"]


def plot(rows, path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.array(rows, dtype=float)
    lines = sorted(set(data[:, 0].astype(int)))
    fig, axes = plt.subplots(2, len(lines), figsize=(5 * len(lines), 7), squeeze=False)
    for col, k in enumerate(lines):
        sub = data[data[:, 0] == k]
        for row, (name, emp, se, th) in enumerate([("SES", 2, 3, 4), ("MES", 5, 6, 7)]):
            ax = axes[row, col]
            ax.errorbar(sub[:, 1], sub[:, emp], yerr=sub[:, se], fmt="o", ms=3, label="empirical")
            ax.plot(sub[:, 1], sub[:, th], "-", label="asymptotic")
            ax.set_title(f"{name}, line {k}")
            ax.set_xlabel("q")
            ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=str(ROOT / "configs" / "paper.toml"))
    parser.add_argument("--n", type=int, default=500_000)
    parser.add_argument("--seed", type=int, default=20240601)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--n-boot", type=int, default=200)
    parser.add_argument("--out", default=str(ROOT / "results" / "figure1.csv"))
    parser.add_argument("--plot", default=None)
    args = parser.parse_args()

    config = load_config(args.config)
    batch = run_batch(config, args.n, args.seed, args.workers)
    qs = [round(q, 10) for q in np.linspace(0.99, 0.999, 10)]
    rows = compare_systemic_rows(config, batch, qs, range(config.d), args.n_boot, args.seed)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for r in rows:
            writer.writerow([r[0]] + [f"{v:.6g}" for v in r[1:8]] + [r[8]])
    print(f"wrote {out}")
    if args.plot:
        plot(rows, Path(args.plot))
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()
