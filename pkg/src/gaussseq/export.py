"""File formats: canonical JSON, sequence CSV + JSON sidecar, profile CSV."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .report import VerificationReport
from .sequences import Family, PolyphaseSequence, SequenceSet

__all__ = [
    "canonical_json",
    "emit_report",
    "load_report",
    "write_sequence",
    "read_sequence",
    "write_set",
    "emit_profile",
    "read_profile",
    "SEQUENCE_SCHEMA_ID",
]

SEQUENCE_SCHEMA_ID = "gaussseq.sequence/1"


def _fmt_float(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {v!r} cannot be written as JSON")
    s = format(v, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _encode(obj: Any) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """Sorted keys, no whitespace, reals at 17 significant digits."""
    return _encode(obj) + "\n"


def _write_text(path: Path | str, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def emit_report(report: VerificationReport | list[VerificationReport], path, include_timing=False) -> Path:
    if isinstance(report, list):
        payload: Any = [r.to_dict(include_timing) for r in report]
    else:
        payload = report.to_dict(include_timing)
    return _write_text(path, canonical_json(payload))


def load_report(path) -> VerificationReport | list[VerificationReport]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, list):
        return [VerificationReport.from_dict(d) for d in data]
    return VerificationReport.from_dict(data)


def write_sequence(seq: PolyphaseSequence, path, params: dict | None = None) -> tuple[Path, Path]:
    """Write ``<path>`` as CSV (t, re, im) and ``<path>.json`` as metadata sidecar."""
    path = Path(path)
    lines = ["t,re,im"]
    for t, v in enumerate(seq.samples):
        lines.append(f"{t},{_fmt_float(v.real)},{_fmt_float(v.imag)}")
    csv_path = _write_text(path, "\n".join(lines) + "\n")
    meta = dict(seq.metadata(), schema=SEQUENCE_SCHEMA_ID, params=params or {})
    side = _write_text(path.with_suffix(path.suffix + ".json"), canonical_json(meta))
    return csv_path, side


def read_sequence(path) -> PolyphaseSequence:
    path = Path(path)
    meta = json.loads(path.with_suffix(path.suffix + ".json").read_text(encoding="utf-8"))
    if meta.get("schema") != SEQUENCE_SCHEMA_ID:
        raise ValueError(f"{path}: unsupported sidecar schema {meta.get('schema')!r}")
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if [int(r["t"]) for r in rows] != list(range(len(rows))):
        raise ValueError(f"{path}: sample indices are not 0..L-1")
    samples = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    if samples.size != meta["modulus"]:
        raise ValueError(f"{path}: {samples.size} samples but modulus {meta['modulus']}")
    return PolyphaseSequence(meta["modulus"], meta["root"], Family(meta["family"]), samples)


def write_set(sset: SequenceSet, directory) -> list[Path]:
    """One CSV + sidecar per member and a ``set.json`` manifest."""
    directory = Path(directory)
    written = []
    for seq in sset.members:
        csv_path, _ = write_sequence(seq, directory / f"{sset.kind.value}_r{seq.root}.csv", sset.params)
        written.append(csv_path)
    manifest = {
        "schema": "gaussseq.set/1",
        "kind": sset.kind.value,
        "params": sset.params,
        "roots": sset.roots,
        "laz": None if sset.laz is None else {"z_x": sset.laz.z_x, "z_y": sset.laz.z_y},
        "small_modulus": sset.small_modulus,
        "files": [p.name for p in written],
    }
    written.append(_write_text(directory / "set.json", canonical_json(manifest)))
    return written


def emit_profile(rows: Iterable[tuple[int, int, complex]], path) -> Path:
    """CSV with columns tau, nu, re, im, magnitude."""
    lines = ["tau,nu,re,im,magnitude"]
    for tau, nu, v in rows:
        v = complex(v)
        lines.append(f"{int(tau)},{int(nu)},{_fmt_float(v.real)},{_fmt_float(v.imag)},{_fmt_float(abs(v))}")
    return _write_text(path, "\n".join(lines) + "\n")


def read_profile(path) -> list[tuple[int, int, complex]]:
    with Path(path).open(newline="") as fh:
        return [
            (int(r["tau"]), int(r["nu"]), complex(float(r["re"]), float(r["im"])))
            for r in csv.DictReader(fh)
        ]
