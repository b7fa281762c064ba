"""Per-frame tracking loop for plain KCF and OCT-KCF."""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from octkcf import kcf
from octkcf.features import BoundingBox, FeatureExtractor, make_label, window_size
from octkcf.kcf import detect, fit
from octkcf.oct import OctConfig, ResponseStats, is_drifting, solve_oct_alpha, stats_update, z_score
from octkcf.redetect import coarse_search, fine_localize, polar_candidates
from octkcf.spectral import fft2

MODES = ("kcf", "oct_kcf")


@dataclass(frozen=True)
class TrackerConfig:
    lam: float = 1e-4
    s: float = 1000.0
    kernel_sigma: float = 0.5
    t_g: float = 1.6
    n_r: int = 5
    n_t: int = 16
    search_scale: float = 1.5
    warmup_frames: int = 7
    cell_size: int = 4
    feature_mode: str = "fhog"
    mode: str = "oct_kcf"
    kcf_rate: float = 0.02
    redetect_radius_factor: float = 1.0
    label_sigma_factor: float = 0.1
    # redetection only relocates when a candidate beats the drifting detection
    redetect_requires_improvement: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mode", normalize_mode(self.mode))
        positive = ("lam", "kernel_sigma", "t_g", "n_r", "n_t", "search_scale",
                    "warmup_frames", "cell_size", "redetect_radius_factor", "label_sigma_factor")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.s < 0:
            raise ValueError(f"s must be non-negative, got {self.s!r}")
        if not 0.0 <= self.kcf_rate <= 1.0:
            raise ValueError(f"kcf_rate must be in [0, 1], got {self.kcf_rate!r}")
        # validates feature_mode / cell_size pairing
        FeatureExtractor(self.feature_mode, self.cell_size)

    @property
    def name(self):
        return self.mode.replace("_", "-")

    def oct(self):
        return OctConfig(s=self.s, lam=self.lam, t_g=self.t_g)


def normalize_mode(mode):
    m = str(mode).strip().lower().replace("-", "_")
    if m not in MODES:
        raise ValueError(f"unknown tracker mode {mode!r}; expected kcf or oct-kcf")
    return m


@dataclass(frozen=True)
class TrackerState:
    model: kcf.FilterModel
    stats: ResponseStats
    current_box: BoundingBox
    frame_index: int
    cfg: TrackerConfig
    window: tuple  # search window (w, h) in pixels
    frame_size: tuple  # (W, H)
    last_redetect_frame: int | None = None


def _as_frame(frame):
    frame = np.asarray(frame, dtype=float)
    if frame.ndim != 2:
        raise ValueError(f"expected a grayscale frame, got shape {frame.shape}")
    return frame


def _extractor(cfg):
    return FeatureExtractor(cfg.feature_mode, cfg.cell_size)


def init(frame, box, cfg=None):
    """Train the initial model on the window around ``box``."""
    cfg = cfg or TrackerConfig()
    frame = _as_frame(frame)
    height, width = frame.shape
    box = box.clamped(width, height)
    extractor = _extractor(cfg)
    window = window_size((box.w, box.h), cfg.search_scale, cfg.cell_size)
    x = extractor(frame, box.center, window)
    bandwidth = cfg.label_sigma_factor * math.sqrt(box.w * box.h) / cfg.cell_size
    y = make_label(x.shape[2], x.shape[1], bandwidth)
    model = fit(x, fft2(y), cfg.lam, cfg.kernel_sigma)
    return TrackerState(
        model=model,
        stats=ResponseStats(warmup=max(1, cfg.warmup_frames - 1)),
        current_box=box,
        frame_index=1,
        cfg=cfg,
        window=window,
        frame_size=(width, height),
    )


def _update_model(model, x, cfg, t):
    if cfg.mode == "kcf":
        new_alpha = kcf.train(x, model.label_spectrum, cfg.lam, cfg.kernel_sigma)
        return kcf.kcf_update(model, new_alpha, x, cfg.kcf_rate)
    rho = OctConfig.rho(t)
    alpha = solve_oct_alpha(
        kcf.kernel_spectrum(x, cfg.kernel_sigma), model.label_spectrum, model.alpha_hat,
        cfg.lam, cfg.s,
    )
    return replace(model, appearance=(1 - rho) * model.appearance + rho * x, alpha_hat=alpha)


def track_frame(state, frame):
    """Consume one frame; returns (new_state, box, diagnostics)."""
    frame = _as_frame(frame)
    height, width = frame.shape
    if (width, height) != state.frame_size:
        raise ValueError(f"frame size {(width, height)} differs from {state.frame_size}")
    cfg = state.cfg
    extractor = _extractor(cfg)
    t = state.frame_index + 1
    prev = state.current_box
    size = (prev.w, prev.h)

    det = detect(state.model, extractor(frame, prev.center, state.window))
    peak = det.peak_value
    dx, dy = det.peak_offset
    center = (prev.center[0] + dx * cfg.cell_size, prev.center[1] + dy * cfg.cell_size)
    z = z_score(state.stats, peak)
    drift = cfg.mode == "oct_kcf" and is_drifting(state.stats, peak, cfg.t_g)

    last_redetect = state.last_redetect_frame
    relocated = False
    if drift:
        last_redetect = t
        grid = polar_candidates(
            prev.center, cfg.redetect_radius_factor * max(size), cfg.n_r, cfg.n_t
        )
        coarse_center, coarse_peak = coarse_search(
            state.model, frame, grid, state.window, extractor
        )
        if coarse_peak > peak or not cfg.redetect_requires_improvement:
            fine_box, fine_det = fine_localize(
                state.model, frame, coarse_center, state.window, extractor, size
            )
            center = fine_box.center
            peak = fine_det.peak_value
            relocated = True

    box = BoundingBox.from_center(center, size).clamped(width, height)
    if drift and not relocated:
        # the gate rejected this frame's sample and nothing better was found
        model = state.model
    else:
        model = _update_model(state.model, extractor(frame, box.center, state.window), cfg, t)
    stats = stats_update(state.stats, peak)

    new_state = replace(
        state, model=model, stats=stats, current_box=box, frame_index=t,
        last_redetect_frame=last_redetect,
    )
    diagnostics = {
        "frame": t,
        "peak": peak,
        "zscore": z,
        "gate": drift,
        "redetect": drift,
        "relocated": relocated,
    }
    return new_state, box, diagnostics


@dataclass
class Tracker:
    """Stateful convenience wrapper around :func:`init` / :func:`track_frame`."""

    cfg: TrackerConfig = field(default_factory=TrackerConfig)
    state: TrackerState | None = None
    diagnostics: dict | None = None

    def init(self, frame, box):
        self.state = init(frame, box, self.cfg)
        self.diagnostics = None
        return self.state.current_box

    def update(self, frame):
        if self.state is None:
            raise RuntimeError("call init() before update()")
        self.state, box, self.diagnostics = track_frame(self.state, frame)
        return box

