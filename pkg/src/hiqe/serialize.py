"""Deterministic JSON and CSV output with 17 significant digits per number."""

from __future__ import annotations

import csv
import json
import math

import numpy as np


def format_number(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    return format(x, ".16e")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [_encode(v, indent, level + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + end + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{format_number(obj.real)}, {format_number(obj.imag)}]"
    if isinstance(obj, (float, np.floating)):
        return format_number(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written as ``%.16e``; key order is preserved."""
    return _encode(obj, indent, 0) + "\n"


def write_csv(fh, header, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_number(v) for v in row])


def write_coefficients_csv(fh, samples):
    rows = ((s.t, s.coeffs.omega0, s.coeffs.omega_x, s.coeffs.omega_y, s.coeffs.omega_z, s.source)
            for s in samples)
    write_csv(fh, ["t", "omega_0", "omega_x", "omega_y", "omega_z", "source"], rows)


def write_trajectory_csv(fh, trajectory, populations: dict | None = None):
    """Columns ``t, norm`` followed by amplitude re/im pairs or named populations."""
    if populations:
        header = ["t", "norm"] + [f"p_{name}" for name in populations]
        cols = list(populations.values())
        rows = ([t, n] + [c[i] for c in cols] for i, (t, n) in enumerate(zip(trajectory.times, trajectory.norms)))
    else:
        dim = trajectory.states.shape[1]
        header = ["t", "norm"] + [f"{part}_{k}" for k in range(dim) for part in ("re", "im")]
        rows = ([t, n] + [x for z in psi for x in (z.real, z.imag)]
                for t, n, psi in zip(trajectory.times, trajectory.norms, trajectory.states))
    write_csv(fh, header, rows)
