"""Engine configuration: encoder knobs, match tolerances, binarization.

Config files are simple ``key=value`` lines ('#' starts a comment).  The
recognized keys, one per tolerance:

    delta_d, l_min, e_res, dot_max          encoder
    delta_l, delta_alpha, delta_a, delta_b,
    delta_phi, delta_beta, delta_gamma,
    delta_pt                                matching
    threshold                               binarization
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .encoder import EncoderConfig
from .matcher import MatchTolerances

__all__ = ["EngineConfig", "load_config", "parse_config"]


@dataclass(frozen=True)
class EngineConfig:
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    tolerances: MatchTolerances = field(default_factory=MatchTolerances)
    threshold: int = 128


_ENCODER_KEYS = {
    "delta_d": ("dd", float),
    "l_min": ("l_min", float),
    "e_res": ("e_res", float),
    "dot_max": ("dot_max", int),
}
_TOL_KEYS = {
    "delta_l": "dl",
    "delta_alpha": "dalpha",
    "delta_a": "da",
    "delta_b": "db",
    "delta_phi": "dphi",
    "delta_beta": "dbeta",
    "delta_gamma": "dgamma",
    "delta_pt": "dpt",
}


def parse_config(text: str) -> EngineConfig:
    cfg = EngineConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _ENCODER_KEYS:
            attr, conv = _ENCODER_KEYS[key]
            val = conv(value)
            if val <= 0:
                raise ValueError(f"line {lineno}: {key} must be positive")
            cfg = replace(cfg, encoder=replace(cfg.encoder, **{attr: val}))
        elif key in _TOL_KEYS:
            val = float(value)
            if val <= 0:
                raise ValueError(f"line {lineno}: {key} must be positive")
            cfg = replace(
                cfg, tolerances=replace(cfg.tolerances, **{_TOL_KEYS[key]: val})
            )
        elif key == "threshold":
            val = int(value)
            if not 0 <= val <= 255:
                raise ValueError(f"line {lineno}: threshold must be in [0, 255]")
            cfg = replace(cfg, threshold=val)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    return cfg


def load_config(path) -> EngineConfig:
    with open(path) as fh:
        return parse_config(fh.read())
