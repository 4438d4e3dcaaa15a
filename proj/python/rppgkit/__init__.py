"""Remote photoplethysmography heart-rate extraction."""

import json

from . import _core
from ._core import RppgError, estimate_yaw, moving_average, welch_psd

__all__ = [
    "RppgError",
    "cli",
    "estimate_yaw",
    "evaluate",
    "extract",
    "moving_average",
    "welch_psd",
]


def extract(frames, payload, landmarks, config=None):
    """Run the pipeline on a frame stream and landmark file; returns the report dict."""
    text = json.dumps(config) if config else ""
    return json.loads(_core.extract(str(frames), str(payload), str(landmarks), text))


def evaluate(estimates, ground_truth):
    """estimates and ground_truth map subject -> bpm."""
    return json.loads(_core.evaluate(dict(estimates), dict(ground_truth)))


def cli(*args):
    """Returns (exit_code, stdout, stderr)."""
    return _core.cli([str(a) for a in args])
