#!/usr/bin/env python3
"""Plot the CSV artifacts produced by the wpt CLI.

Reads sweep_power.csv, sweep_tones.csv and ripple.csv from an artifact
directory (whichever of them exist) and writes one PNG per sweep next to
the inputs. Rows whose error column is non-empty are skipped with a note.

Usage:
    python3 scripts/plot_sweeps.py [artifact_dir] [--dpi 150]
"""

import argparse
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

METHOD_STYLES = {
    "scp_qclp": dict(color="tab:blue", marker="o"),
    "mrt": dict(color="tab:orange", marker="s"),
    "single_tone": dict(color="tab:green", marker="^"),
    "equal_power": dict(color="tab:red", marker="v"),
}


def load(path: pathlib.Path) -> pd.DataFrame | None:
    if not path.is_file():
        return None
    df = pd.read_csv(path)
    if "error" in df.columns:
        bad = df["error"].notna() & (df["error"].astype(str).str.strip() != "")
        if bad.any():
            for _, row in df[bad].iterrows():
                print(f"note: skipping errored row in {path.name}: {row['error']}")
            df = df[~bad]
    return df


def plot_method_sweep(df: pd.DataFrame, x: str, xlabel: str, title: str,
                      out: pathlib.Path, dpi: int, logx: bool) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for method, group in df.groupby("method"):
        group = group.sort_values(x)
        style = METHOD_STYLES.get(method, dict(marker="."))
        ax.plot(group[x], group["p_out_w"] * 1e6, label=method,
                markersize=4, **style)
    if logx:
        ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("DC output power (uW)")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    print(f"wrote {out}")


def plot_ripple(df: pd.DataFrame, out: pathlib.Path, dpi: int) -> None:
    fig, ax1 = plt.subplots(figsize=(6.0, 4.2))
    ax1.plot(df["c_rl_over_t"], df["ripple_fraction"] * 100,
             color="tab:blue", marker="o", label="peak-to-peak ripple")
    ax1.set_xlabel("C R_L / T")
    ax1.set_ylabel("ripple (% of mean)", color="tab:blue")
    ax1.grid(True, alpha=0.3)
    ax2 = ax1.twinx()
    ax2.plot(df["c_rl_over_t"], df["relative_gap"] * 100,
             color="tab:orange", marker="s", label="gap to steady-state model")
    ax2.set_ylabel("|mean - model| / model (%)", color="tab:orange")
    ax1.set_title("Transient ripple vs output capacitance")
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    print(f"wrote {out}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("artifact_dir", nargs="?", default="artifacts",
                        type=pathlib.Path)
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args()
    if not args.artifact_dir.is_dir():
        print(f"error: {args.artifact_dir} is not a directory", file=sys.stderr)
        return 1

    made_any = False
    power = load(args.artifact_dir / "sweep_power.csv")
    if power is not None and not power.empty:
        plot_method_sweep(power, "p_t_w", "transmit power budget (W)",
                          "DC output vs transmit power",
                          args.artifact_dir / "sweep_power.png", args.dpi,
                          logx=True)
        made_any = True

    tones = load(args.artifact_dir / "sweep_tones.csv")
    if tones is not None and not tones.empty:
        plot_method_sweep(tones, "n_tones", "number of tones",
                          "DC output vs tone count",
                          args.artifact_dir / "sweep_tones.png", args.dpi,
                          logx=True)
        made_any = True

    ripple = load(args.artifact_dir / "ripple.csv")
    if ripple is not None and not ripple.empty:
        plot_ripple(ripple, args.artifact_dir / "ripple.png", args.dpi)
        made_any = True

    if not made_any:
        print(f"error: no sweep CSVs found in {args.artifact_dir}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
