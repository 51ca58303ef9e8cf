"""Experiment configuration: defaults, flat key-value files, and hashing.

The on-disk format is one ``key = value`` pair per line; blank lines and lines
starting with ``#`` are ignored.  Lists are comma separated and numeric ranges
may be written ``start..stop`` or ``start..stop..step`` (inclusive ends).
Command-line flags override file values, which override the recorded defaults.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional


def parse_number_list(text: str) -> List[float]:
    """Parse '1,2,3', '-10..5', or '-10..5..0.5' into a float list."""
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        parts = text.split("..")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad range syntax {text!r}")
        start, stop = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
        if step <= 0:
            raise ValueError("range step must be positive")
        out = []
        x = start
        while x <= stop + 1e-9:
            out.append(round(x, 12))
            x += step
        return out
    return [float(tok) for tok in text.split(",") if tok.strip()]


def parse_int_list(text: str) -> List[int]:
    vals = parse_number_list(text)
    out = []
    for v in vals:
        if abs(v - round(v)) > 1e-9:
            raise ValueError(f"expected integers, got {v}")
        out.append(int(round(v)))
    return out


@dataclass
class ExperimentConfig:
    """All tunables of the command-line experiments, with recorded defaults."""

    experiment: str = ""
    m: int = 10
    n: int = 60
    beta: Optional[float] = None
    snr_db: List[float] = field(default_factory=lambda: [-10.0, -8.0, -6.0,
                                                         -4.0, -2.0, 0.0, 2.0])
    snr_grid: List[float] = field(default_factory=lambda: [float(v) for v in
                                                           range(-10, 6)])
    rho: Optional[float] = None
    scn: Optional[float] = None
    mu: Optional[float] = None
    scn_list: List[float] = field(default_factory=lambda: [1.5, 2.0, 2.5])
    rho_list: List[float] = field(default_factory=lambda: [
        0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7])
    epsilon: float = 3.5
    m_range: List[int] = field(default_factory=lambda: list(range(1, 12)))
    case: str = "case1"
    h1_model: str = "sum"
    regime: str = "sig-white"
    sweep: str = "snr"
    n_trials: int = 1000
    seed: int = 12345
    convention: str = "spectrum-ratio"
    workers: int = 1
    output: Optional[str] = None
    plot: bool = False
    simulate: bool = False
    grid_points: int = 2000
    grid_max: Optional[float] = None
    bins: int = 60
    lmax: Optional[float] = None

    def effective_beta(self) -> float:
        """Dimension ratio M / N, taken from ``beta`` when set explicitly."""
        if self.beta is not None:
            return self.beta
        return self.m / self.n

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_serialize(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        cfg = cls()
        cfg.apply_pairs(_parse_pairs(text))
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def apply_pairs(self, pairs: dict) -> None:
        names = {f.name: f for f in dataclasses.fields(self)}
        for key, raw in pairs.items():
            if key not in names:
                raise ValueError(f"unknown config key {key!r}")
            setattr(self, key, _deserialize(raw, self, key))

    def config_hash(self) -> str:
        """Hash of the experiment-defining keys.

        Execution details (worker count, output destination, plotting) are
        excluded so reruns of the same experiment are byte-identical however
        they are scheduled or stored.
        """
        skip = {"workers", "output", "plot"}
        lines = [f"{f.name} = {_serialize(getattr(self, f.name))}"
                 for f in dataclasses.fields(self) if f.name not in skip]
        digest = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
        return digest[:12]


def _serialize(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ",".join(_serialize(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _deserialize(raw: str, cfg: ExperimentConfig, key: str):
    raw = raw.strip()
    default = getattr(ExperimentConfig(), key)
    f_type = next(f.type for f in dataclasses.fields(cfg) if f.name == key)
    if raw == "":
        return None if "Optional" in str(f_type) else default
    if isinstance(default, bool):
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"bad boolean for {key}: {raw!r}")
    if isinstance(default, list):
        if default and isinstance(default[0], int):
            return parse_int_list(raw)
        return parse_number_list(raw)
    if isinstance(default, int) and not isinstance(default, bool):
        return int(raw)
    if isinstance(default, float) or "float" in str(f_type):
        return float(raw)
    if isinstance(default, str) or default is None:
        # Optional float/int fields default to None; sniff numerics
        if "float" in str(f_type):
            return float(raw)
        if "int" in str(f_type):
            return int(raw)
        return raw
    return raw


def _parse_pairs(text: str) -> dict:
    pairs = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        pairs[key.strip()] = value.strip()
    return pairs
