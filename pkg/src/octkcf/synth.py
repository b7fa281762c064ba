"""Deterministic synthetic sequences with known ground truth.

A textured square moves over a flat background. Frames can be blanked
(target hidden) to simulate a full occlusion.
"""

import argparse
from pathlib import Path

import numpy as np
from PIL import Image

from octkcf.features import BoundingBox

BACKGROUND = 0.5


# 4x4 block intensities with no repeating period, so no shifted copy of the
# target matches itself.
BLOCKS = np.array(
    [
        [0.90, 0.20, 0.60, 0.10],
        [0.30, 0.80, 0.10, 0.70],
        [0.60, 0.10, 0.90, 0.40],
        [0.20, 0.70, 0.30, 0.95],
    ]
)


def block_target(size=32):
    reps = -(-size // BLOCKS.shape[0])
    return np.kron(BLOCKS, np.ones((reps, reps)))[:size, :size]


def render(frame_size, box, target, background=BACKGROUND):
    width, height = frame_size
    frame = np.full((height, width), background)
    x0, y0 = int(round(box.x)), int(round(box.y))
    th, tw = target.shape
    ys = slice(max(y0, 0), min(y0 + th, height))
    xs = slice(max(x0, 0), min(x0 + tw, width))
    if ys.stop <= ys.start or xs.stop <= xs.start:
        return frame
    frame[ys, xs] = target[ys.start - y0 : ys.stop - y0, xs.start - x0 : xs.stop - x0]
    return frame


def moving_square(
    n_frames=60,
    frame_size=(240, 160),
    start=(40, 64),
    velocity=(2, 0),
    target_size=32,
    blank=(),
):
    """Frames and ground-truth boxes for a square moving at constant velocity.

    ``blank`` lists 1-based frame numbers where the target is not drawn.
    """
    target = block_target(target_size)
    frames, boxes = [], []
    blank = set(blank)
    for n in range(1, n_frames + 1):
        x = start[0] + velocity[0] * (n - 1)
        y = start[1] + velocity[1] * (n - 1)
        box = BoundingBox(float(x), float(y), float(target_size), float(target_size))
        if n in blank:
            frames.append(np.full((frame_size[1], frame_size[0]), BACKGROUND))
        else:
            frames.append(render(frame_size, box, target))
        boxes.append(box)
    return frames, boxes


def write_otb(seq_dir, frames, boxes):
    """Write frames and boxes in the OTB layout (img/0001.png, groundtruth_rect.txt)."""
    seq_dir = Path(seq_dir)
    (seq_dir / "img").mkdir(parents=True, exist_ok=True)
    for n, frame in enumerate(frames, 1):
        pixels = np.clip(np.rint(frame * 255), 0, 255).astype(np.uint8)
        Image.fromarray(pixels, mode="L").save(seq_dir / "img" / f"{n:04d}.png")
    lines = [f"{b.x:g},{b.y:g},{b.w:g},{b.h:g}" for b in boxes]
    (seq_dir / "groundtruth_rect.txt").write_text("\n".join(lines) + "\n")
    return seq_dir


SCENARIOS = {
    "synth_static": dict(n_frames=50, velocity=(0, 0)),
    "synth_cv": dict(n_frames=60, velocity=(2, 0)),
    "synth_occlusion": dict(n_frames=60, velocity=(2, 0), blank=range(30, 36)),
}


def write_fixtures(root, names=None):
    root = Path(root)
    for name in names or SCENARIOS:
        write_otb(root / name, *moving_square(**SCENARIOS[name]))
    return root


def main(argv=None):
    ap = argparse.ArgumentParser(description="write synthetic OTB-layout sequences")
    ap.add_argument("out", help="dataset root to create")
    ap.add_argument("--only", nargs="*", choices=sorted(SCENARIOS))
    args = ap.parse_args(argv)
    write_fixtures(args.out, args.only)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
