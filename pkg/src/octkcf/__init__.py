"""KCF and OCT-KCF visual object tracking."""

from octkcf.features import BoundingBox
from octkcf.tracker import Tracker, TrackerConfig, TrackerState, init, track_frame

__all__ = [
    "BoundingBox",
    "Tracker",
    "TrackerConfig",
    "TrackerState",
    "init",
    "track_frame",
]

__version__ = "0.1.0"
