#!/usr/bin/env python3
"""Static figures from the toolkit's CSV outputs.

Three figure kinds, each reading one CSV produced by the main package's
CLI (the only coupling is the file format):

  roots      complex-eigenvalue scatter, computed vs predicted markers,
             annotated with the worst |Re(z) * Im(z)^2 + 1|
  resolvent  ||P(i*lambda)^{-1}|| against lambda on log-log axes with a
             slope-1 guide line
  decay      energy against time on log-log axes with the fitted power law

Usage:
  plots.py --kind roots --in roots.csv --out roots.svg [--manifest m.json]

Rendering is a pure function of the CSV bytes and the options:
timestamps are disabled and the SVG hash salt is pinned, so reruns are
byte-identical.  Schema mismatches and empty inputs exit with code 2.
"""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "wentzell-disk-plots"

import matplotlib.pyplot as plt  # noqa: E402

SCHEMAS = {
    "roots": ["n", "k", "re_lambda", "im_lambda", "re_z", "im_z",
              "residual", "certified", "pred_re", "pred_im", "abs_err"],
    "resolvent": ["lambda", "n_max", "grid_n", "norm", "flag_singular"],
    "decay": ["t", "E", "E1", "dissipated"],
}


class SchemaError(ValueError):
    pass


def load_rows(path: Path, kind: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in SCHEMAS[kind] if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing} for kind '{kind}'")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_title(manifest_path: Path | None, csv_path: Path, fallback: str) -> str:
    path = manifest_path
    if path is None:
        sibling = csv_path.parent / "manifest.json"
        path = sibling if sibling.exists() else None
    if path is None:
        return fallback
    try:
        manifest = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError):
        return fallback
    cfg = manifest.get("config", {})
    bits = [f"{k}={cfg[k]}" for k in ("n", "k_max", "grid", "n_max") if k in cfg]
    version = manifest.get("artifact_version", "")
    suffix = f" [{', '.join(bits)}]" if bits else ""
    return f"{fallback}{suffix} (v{version})" if version else fallback + suffix


def render_roots(rows: list[dict], title: str, out: Path) -> None:
    re_z = [float(r["re_z"]) for r in rows]
    im_z = [float(r["im_z"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.scatter(im_z, re_z, s=22, marker="o", color="tab:blue",
               label="computed eigenvalues", zorder=3)
    preds = [(float(r["pred_re"]), float(r["pred_im"]))
             for r in rows if r["pred_re"]]
    if preds:
        # prediction is in the lambda plane; z = i*lambda
        ax.scatter([p[0] for p in preds], [-p[1] for p in preds], s=60,
                   marker="o", facecolors="none", edgecolors="tab:red",
                   label="closed-form prediction", zorder=2)
    worst = max((abs(float(r["re_z"]) * float(r["im_z"]) ** 2 + 1.0)
                 for r in rows), default=float("nan"))
    ax.annotate(f"max |Re z · (Im z)² + 1| = {worst:.2e}",
                xy=(0.03, 0.05), xycoords="axes fraction", fontsize=9)
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.set_xlabel("Im z (frequency)")
    ax.set_ylabel("Re z (decay rate)")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    save(fig, out)


def render_resolvent(rows: list[dict], title: str, out: Path) -> None:
    pts = [(float(r["lambda"]), float(r["norm"])) for r in rows
           if r["flag_singular"] != "true" and r["norm"] != "inf"]
    if not pts:
        raise SchemaError("no finite resolvent samples to plot")
    lams = [p[0] for p in pts]
    norms = [p[1] for p in pts]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.loglog(lams, norms, ".", ms=4, color="tab:blue", label="samples")
    top = max(norms)
    lam_top = lams[norms.index(top)]
    guide = [top * (l / lam_top) for l in lams]
    ax.loglog(lams, guide, "--", color="tab:red", lw=1.0,
              label="slope-1 guide")
    ax.set_xlabel("lambda")
    ax.set_ylabel("resolvent norm")
    ax.set_title(title)
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    save(fig, out)


def render_decay(rows: list[dict], title: str, out: Path) -> None:
    pts = [(float(r["t"]), float(r["E"])) for r in rows
           if float(r["t"]) > 0 and float(r["E"]) > 0]
    if len(pts) < 3:
        raise SchemaError("need at least 3 positive (t, E) samples")
    ts = [p[0] for p in pts]
    es = [p[1] for p in pts]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.loglog(ts, es, "-", color="tab:blue", lw=1.2, label="E(t)")
    # window power-law fit, same convention as the toolkit's fit_decay
    lo, hi = max(10.0, ts[0]), min(1000.0, ts[-1])
    sel = [(t, e) for t, e in pts if lo <= t <= hi]
    if len(sel) >= 3:
        xs = [math.log(t) for t, _ in sel]
        ys = [math.log(e) for _, e in sel]
        n = len(xs)
        xbar, ybar = sum(xs) / n, sum(ys) / n
        slope = (sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
                 / sum((x - xbar) ** 2 for x in xs))
        c = math.exp(ybar - slope * xbar)
        fitted = [c * t ** slope for t, _ in sel]
        ax.loglog([t for t, _ in sel], fitted, "--", color="tab:red", lw=1.0,
                  label=f"fit: t^{slope:.2f}")
    ax.set_xlabel("t")
    ax.set_ylabel("E")
    ax.set_title(title)
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    save(fig, out)


def save(fig, out: Path) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix.lower() == ".svg":
        fig.savefig(out, metadata={"Date": None})
    else:
        fig.savefig(out)
    plt.close(fig)


RENDERERS = {
    "roots": render_roots,
    "resolvent": render_resolvent,
    "decay": render_decay,
}

TITLES = {
    "roots": "Pencil eigenvalues on the damped disk",
    "resolvent": "Resolvent norm along the imaginary axis",
    "decay": "Energy decay",
}


def render(kind: str, input_csv: Path, output_path: Path,
           manifest: Path | None = None) -> None:
    rows = load_rows(input_csv, kind)
    title = load_title(manifest, input_csv, TITLES[kind])
    RENDERERS[kind](rows, title, output_path)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", choices=sorted(RENDERERS), required=True)
    parser.add_argument("--in", dest="input_csv", type=Path, required=True)
    parser.add_argument("--out", dest="output_path", type=Path, required=True)
    parser.add_argument("--manifest", type=Path, default=None)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        render(args.kind, args.input_csv, args.output_path, args.manifest)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
