"""Deterministic CSV/JSON output, run manifests and vortex config files."""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .geometry import GreensChoice
from .vortex import VortexConfig

SIG_DIGITS = 9


def fmt(v: Any) -> str:
    """Locale-independent text for one CSV cell."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v == 0.0:
            return "0"  # drops the sign of -0.0
        return f"{v:.{SIG_DIGITS}g}"
    if v is None:
        return ""
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, (list, tuple)):
        return ";".join(fmt(x) for x in v)
    return str(v)


def jsonable(obj: Any) -> Any:
    """Plain JSON-ready structure with floats rounded to SIG_DIGITS digits."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return fmt(v)
        return 0.0 if v == 0.0 else float(f"{v:.{SIG_DIGITS}g}")
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@dataclass
class RunManifest:
    command: str
    parameters: dict[str, Any]
    tool_version: str
    outputs: list[str] = field(default_factory=list)

    def write(self, directory: Path) -> Path:
        return write_text(directory / f"{self.command}_manifest.json", dumps(self))


def config_to_dict(c: VortexConfig) -> dict[str, Any]:
    return {
        "lambda": c.lam,
        "greens": c.greens.value,
        "vortices": [
            {"re": float(z.real), "im": float(z.imag), "kappa": float(k)}
            for z, k in zip(c.positions, c.vorticities)
        ],
    }


def config_from_dict(d: dict[str, Any]) -> VortexConfig:
    try:
        lam = float(d["lambda"])
        vs = d["vortices"]
        z = np.array([complex(float(v["re"]), float(v["im"])) for v in vs])
        k = np.array([float(v.get("kappa", 1.0)) for v in vs])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed vortex config: {exc}") from exc
    return VortexConfig(lam, z, k, GreensChoice.parse(d.get("greens", "background")))


def load_config(path: str | Path) -> VortexConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
