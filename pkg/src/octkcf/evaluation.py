"""OTB-style benchmark harness: sequence loading, metrics, reports."""

import csv
import json
import logging
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from octkcf.features import BoundingBox, load_gray
from octkcf.tracker import Tracker, TrackerConfig

log = logging.getLogger(__name__)

PRECISION_THRESHOLDS = np.arange(51, dtype=float)
SUCCESS_THRESHOLDS = np.linspace(0.0, 1.0, 21)
IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png", ".bmp", ".tif", ".tiff", ".pgm", ".ppm"}
FRAME_FIELDS = [
    "frame", "pred_x", "pred_y", "pred_w", "pred_h", "gt_x", "gt_y", "gt_w", "gt_h",
    "cle", "iou", "peak", "zscore", "gate", "redetect",
]
SUMMARY_FIELDS = [
    "sequence", "config", "frames", "evaluated", "mean_cle", "precision20", "success50",
    "auc", "redetections", "error",
]


class DataError(Exception):
    """Bad or missing benchmark data."""


@dataclass
class Sequence:
    name: str
    frames: list
    ground_truth: list  # BoundingBox or None for annotation gaps
    attributes: tuple = ()

    @property
    def init_box(self):
        return self.ground_truth[0]


# -- loading -----------------------------------------------------------------


def parse_box(line, lineno=0, source="<groundtruth>"):
    """Parse one ``x,y,w,h`` line (commas, tabs or spaces).

    Non-finite values or non-positive sizes mark an annotation gap (None).
    """
    parts = [p for p in re.split(r"[,\s]+", line.strip()) if p]
    if len(parts) != 4:
        raise DataError(f"{source}:{lineno}: expected 4 values, got {line.strip()!r}")
    try:
        x, y, w, h = (float(p) for p in parts)
    except ValueError:
        raise DataError(f"{source}:{lineno}: unparseable box {line.strip()!r}") from None
    if not all(math.isfinite(v) for v in (x, y, w, h)) or w <= 0 or h <= 0:
        return None
    return BoundingBox(x, y, w, h)


def _frame_key(path):
    digits = re.findall(r"\d+", path.stem)
    return (int(digits[-1]) if digits else math.inf, path.name)


def load_sequence(seq_dir, gt_file="groundtruth_rect.txt", name=None):
    seq_dir = Path(seq_dir)
    img_dir = seq_dir / "img"
    gt_path = seq_dir / gt_file
    if not img_dir.is_dir():
        raise DataError(f"missing frame directory {img_dir}")
    if not gt_path.is_file():
        raise DataError(f"missing ground truth {gt_path}")
    frames = sorted(
        (p for p in img_dir.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES), key=_frame_key
    )
    if not frames:
        raise DataError(f"no image frames in {img_dir}")
    boxes = [
        parse_box(line, n, str(gt_path))
        for n, line in enumerate(gt_path.read_text().splitlines(), 1)
        if line.strip()
    ]
    if not boxes or boxes[0] is None:
        raise DataError(f"{gt_path}: first ground-truth box is missing or invalid")
    if len(boxes) != len(frames):
        log.warning(
            "%s: %d frames but %d ground-truth boxes; truncating to %d",
            seq_dir.name, len(frames), len(boxes), min(len(frames), len(boxes)),
        )
        n = min(len(frames), len(boxes))
        frames, boxes = frames[:n], boxes[:n]
    return Sequence(name=name or seq_dir.name, frames=frames, ground_truth=boxes)


def discover_sequences(root):
    """All OTB-layout sequences under ``root`` sorted by name.

    Directories with several annotations (groundtruth_rect.1.txt, ...) yield
    one sequence per file, named ``<dir>-<n>``.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"dataset root {root} is not a directory")
    found = []
    for d in sorted(p for p in root.iterdir() if p.is_dir()):
        if not (d / "img").is_dir():
            continue
        if (d / "groundtruth_rect.txt").is_file():
            found.append(load_sequence(d))
            continue
        for gt in sorted(d.glob("groundtruth_rect.*.txt")):
            tag = gt.name.split(".")[1]
            found.append(load_sequence(d, gt.name, name=f"{d.name}-{tag}"))
    if not found:
        raise DataError(f"no sequences found under {root}")
    return sorted(found, key=lambda s: s.name)


# -- metrics -----------------------------------------------------------------


def cle(a, b):
    (ax, ay), (bx, by) = a.center, b.center
    return math.hypot(ax - bx, ay - by)


def iou(a, b):
    iw = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    ih = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.w * a.h + b.w * b.h - inter)


def precision_curve(cles):
    cles = np.asarray(cles, dtype=float)
    if cles.size == 0:
        raise ValueError("no center errors")
    return (cles[None, :] <= PRECISION_THRESHOLDS[:, None]).mean(axis=1)


def success_curve(ious):
    """Fraction of frames with IoU above each threshold.

    The last threshold (1.0) counts exact overlaps so that a perfect
    trajectory scores 1 everywhere.
    """
    ious = np.asarray(ious, dtype=float)
    if ious.size == 0:
        raise ValueError("no overlaps")
    curve = (ious[None, :] > SUCCESS_THRESHOLDS[:, None]).mean(axis=1)
    curve[-1] = (ious >= 1.0).mean()
    return curve


def auc(curve):
    return float(np.mean(curve))


@dataclass
class EvalRecord:
    cle: np.ndarray
    iou: np.ndarray
    precision: np.ndarray
    success: np.ndarray
    auc: float
    fps: float = 0.0

    @property
    def precision20(self):
        return float(self.precision[20])

    @property
    def success50(self):
        return float(self.success[10])


def evaluate(pred_boxes, gt_boxes, fps=0.0):
    """Metrics over frames that have ground truth."""
    pairs = [(p, g) for p, g in zip(pred_boxes, gt_boxes) if g is not None]
    if not pairs:
        raise ValueError("no annotated frames to evaluate")
    cles = np.array([cle(p, g) for p, g in pairs])
    ious = np.array([iou(p, g) for p, g in pairs])
    success = success_curve(ious)
    return EvalRecord(cles, ious, precision_curve(cles), success, auc(success), fps)


# -- running -----------------------------------------------------------------


@dataclass
class SequenceResult:
    sequence: Sequence
    config: TrackerConfig
    boxes: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    record: EvalRecord | None = None
    error: str | None = None


def track_sequence(seq, cfg, frame_loader=load_gray):
    """Run one tracker over a sequence. Only tracker calls are timed."""
    tracker = Tracker(cfg)
    boxes, diags = [], []
    elapsed = 0.0
    for n, path in enumerate(seq.frames):
        frame = frame_loader(path)
        t0 = time.perf_counter()
        if n == 0:
            box = tracker.init(frame, seq.init_box)
        else:
            box = tracker.update(frame)
        elapsed += time.perf_counter() - t0
        boxes.append(box)
        diags.append(tracker.diagnostics)
    fps = len(boxes) / elapsed if elapsed > 0 else float("inf")
    return SequenceResult(seq, cfg, boxes, diags, evaluate(boxes, seq.ground_truth, fps))


def _run_one(seq, cfg):
    try:
        return track_sequence(seq, cfg)
    except Exception as exc:  # per-sequence failures are recorded, not fatal
        log.error("%s [%s] failed: %s", seq.name, cfg.name, exc)
        return SequenceResult(seq, cfg, error=f"{type(exc).__name__}: {exc}")


@dataclass
class BenchmarkReport:
    configs: list
    results: list  # SequenceResult, ordered by (sequence name, config order)

    def for_config(self, cfg_name):
        return [r for r in self.results if r.config.name == cfg_name]

    def aggregate(self, cfg_name):
        """Mean of per-sequence curves over successful sequences (OTB style)."""
        recs = [r.record for r in self.for_config(cfg_name) if r.record is not None]
        if not recs:
            return None
        precision = np.mean([r.precision for r in recs], axis=0)
        success = np.mean([r.success for r in recs], axis=0)
        total_frames = sum(len(r.cle) for r in recs)
        total_time = sum(len(r.cle) / r.fps for r in recs if r.fps > 0)
        fps = total_frames / total_time if total_time > 0 else float("inf")
        return EvalRecord(
            np.concatenate([r.cle for r in recs]), np.concatenate([r.iou for r in recs]),
            precision, success, auc(success), fps,
        )


def config_names(cfgs):
    names = [c.name for c in cfgs]
    if len(set(names)) != len(names):
        raise ValueError(f"benchmark configs need distinct modes, got {names}")
    return names


def run_benchmark(sequences, cfgs, jobs=1):
    if not sequences or not cfgs:
        raise ValueError("need at least one sequence and one config")
    config_names(cfgs)
    tasks = [(seq, cfg) for seq in sorted(sequences, key=lambda s: s.name) for cfg in cfgs]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, *zip(*tasks)))
    else:
        results = [_run_one(seq, cfg) for seq, cfg in tasks]
    return BenchmarkReport(list(cfgs), results)


# -- output ------------------------------------------------------------------


def _fmt(v, digits=6):
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.{digits}f}"


def write_sequence_csv(path, result):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    seq = result.sequence
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FRAME_FIELDS)
        for n, (box, gt) in enumerate(zip(result.boxes, seq.ground_truth)):
            diag = result.diagnostics[n] or {}
            row = [n + 1, *(_fmt(v, 3) for v in box.as_tuple())]
            if gt is None:
                row += ["", "", "", "", "", ""]
            else:
                row += [*(_fmt(v, 3) for v in gt.as_tuple()), _fmt(cle(box, gt)), _fmt(iou(box, gt))]
            row += [
                _fmt(diag.get("peak")), _fmt(diag.get("zscore")),
                _fmt(bool(diag.get("gate", False))), _fmt(bool(diag.get("redetect", False))),
            ]
            w.writerow(row)


def _summary_row(name, cfg_name, n_frames, rec, redetections, error=""):
    if rec is None:
        return [name, cfg_name, n_frames, 0, "", "", "", "", redetections, error]
    return [
        name, cfg_name, n_frames, len(rec.cle), _fmt(float(np.mean(rec.cle))),
        _fmt(rec.precision20), _fmt(rec.success50), _fmt(rec.auc), redetections, error,
    ]


def _svg_plot(path, xs, curves, title, xlabel, ylabel):
    """Minimal static SVG line chart; no timestamps, so output is reproducible."""
    width, height, pad = 480, 360, 50
    colors = ["#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd"]
    x0, x1 = float(xs[0]), float(xs[-1])

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - y * (height - 2 * pad)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="25" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{py(0):.1f}" x2="{width - pad}" y2="{py(0):.1f}" stroke="black"/>',
        f'<line x1="{pad}" y1="{py(0):.1f}" x2="{pad}" y2="{py(1):.1f}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="15" y="{height / 2:.1f}" font-size="12" '
        f'transform="rotate(-90 15 {height / 2:.1f})" text-anchor="middle">{ylabel}</text>',
    ]
    for frac in (0.0, 0.5, 1.0):
        out.append(f'<text x="{pad - 8}" y="{py(frac) + 4:.1f}" text-anchor="end" font-size="10">{frac:g}</text>')
        xv = x0 + frac * (x1 - x0)
        out.append(f'<text x="{px(xv):.1f}" y="{py(0) + 15:.1f}" text-anchor="middle" font-size="10">{xv:g}</text>')
    for i, (label, ys) in enumerate(curves.items()):
        color = colors[i % len(colors)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        out.append(
            f'<text x="{width - pad - 5}" y="{pad + 15 * (i + 1)}" text-anchor="end" '
            f'font-size="11" fill="{color}">{label} [{auc(ys):.3f}]</text>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")


def write_report(report, out_dir):
    """results/<seq>/<config>.csv, summary.csv, curves/*, timing.json.

    timing.json holds the wall-clock FPS and is the only output that differs
    between identical runs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = config_names(report.configs)
    timing = {}
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_FIELDS)
        for r in report.results:
            redets = sum(1 for d in r.diagnostics if d and d.get("redetect"))
            w.writerow(_summary_row(
                r.sequence.name, r.config.name, len(r.sequence.frames), r.record, redets,
                r.error or "",
            ))
            if r.record is not None:
                write_sequence_csv(out / r.sequence.name / f"{r.config.name}.csv", r)
                timing.setdefault(r.config.name, {})[r.sequence.name] = r.record.fps
        for name in names:
            agg = report.aggregate(name)
            n_frames = sum(len(r.sequence.frames) for r in report.for_config(name))
            redets = sum(
                1 for r in report.for_config(name) for d in r.diagnostics if d and d.get("redetect")
            )
            w.writerow(_summary_row("ALL", name, n_frames, agg, redets))
            if agg is not None:
                timing.setdefault(name, {})["ALL"] = agg.fps

    curves_dir = out / "curves"
    curves_dir.mkdir(exist_ok=True)
    aggs = {n: report.aggregate(n) for n in names}
    aggs = {n: a for n, a in aggs.items() if a is not None}
    for kind, xs, xlabel in (
        ("precision", PRECISION_THRESHOLDS, "location error threshold (px)"),
        ("success", SUCCESS_THRESHOLDS, "overlap threshold"),
    ):
        with open(curves_dir / f"{kind}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["threshold", *aggs])
            for i, x in enumerate(xs):
                w.writerow([_fmt(x, 2), *(_fmt(getattr(a, kind)[i]) for a in aggs.values())])
        _svg_plot(
            curves_dir / f"{kind}.svg", xs, {n: getattr(a, kind) for n, a in aggs.items()},
            f"{kind} plot", xlabel, "fraction of frames",
        )
    (out / "timing.json").write_text(json.dumps(timing, indent=2, sort_keys=True) + "\n")
    return out


def read_summary(out_dir):
    """Aggregate ("ALL") rows of a written report, plus FPS from timing.json."""
    out = Path(out_dir)
    summary = out / "summary.csv"
    if not summary.is_file():
        raise DataError(f"no summary.csv in {out}")
    timing_path = out / "timing.json"
    timing = json.loads(timing_path.read_text()) if timing_path.is_file() else {}
    rows = []
    with open(summary, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["sequence"] != "ALL":
                continue
            rows.append({
                "config": row["config"],
                "precision20": float(row["precision20"]) if row["precision20"] else float("nan"),
                "auc": float(row["auc"]) if row["auc"] else float("nan"),
                "fps": timing.get(row["config"], {}).get("ALL", float("nan")),
            })
    return rows


def format_table(rows):
    """Tracker / Precision / Success rate / Speed table, values in percent."""
    lines = [f"{'Tracker':<10}{'Precision':>12}{'Success rate':>15}{'Speed (FPS)':>14}"]
    for r in rows:
        lines.append(
            f"{r['config'].upper():<10}{100 * r['precision20']:>12.1f}"
            f"{100 * r['auc']:>15.1f}{r['fps']:>14.1f}"
        )
    return "\n".join(lines)


def report_rows(report):
    rows = []
    for name in config_names(report.configs):
        agg = report.aggregate(name)
        if agg is None:
            rows.append({"config": name, "precision20": float("nan"), "auc": float("nan"),
                         "fps": float("nan")})
        else:
            rows.append({"config": name, "precision20": agg.precision20, "auc": agg.auc,
                         "fps": agg.fps})
    return rows
