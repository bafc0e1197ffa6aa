"""Real parameter schedules on ``[0, tau]`` with analytic derivatives.

A schedule declares one of the angles driving a unitary path (frame angles or
spectral phases). Evaluation accepts scalars or numpy arrays of times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUNDARY_TOL = 1e-12
KINDS = ("constant", "linear", "smooth", "polynomial")


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    """A parameter schedule.

    ``params`` depends on ``kind``:

    * ``constant``: ``(value,)``
    * ``linear`` and ``smooth``: ``(start, end)``; ``smooth`` follows a
      sine-squared ramp with zero slope at both ends
    * ``polynomial``: coefficients ``c_k`` of ``sum_k c_k (t / tau)**k``
    """

    kind: str
    params: tuple
    tau: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ScheduleError(f"unknown schedule kind {self.kind!r}")
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "tau", float(self.tau))
        if not (np.isfinite(self.tau) and self.tau > 0):
            raise ScheduleError(f"tau must be positive and finite, got {self.tau}")
        if not all(np.isfinite(params)):
            raise ScheduleError("schedule parameters must be finite")
        expected = {"constant": 1, "linear": 2, "smooth": 2}.get(self.kind)
        if expected is not None and len(params) != expected:
            raise ScheduleError(f"{self.kind} schedule takes {expected} parameters, got {len(params)}")
        if self.kind == "polynomial" and not params:
            raise ScheduleError("polynomial schedule needs at least one coefficient")

    @classmethod
    def constant(cls, value, tau):
        return cls("constant", (value,), tau)

    @classmethod
    def linear(cls, start, end, tau):
        return cls("linear", (start, end), tau)

    @classmethod
    def smooth(cls, start, end, tau):
        return cls("smooth", (start, end), tau)

    @classmethod
    def polynomial(cls, coeffs, tau):
        return cls("polynomial", tuple(coeffs), tau)

    def _check_time(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t > self.tau):
            raise ScheduleError(f"time outside [0, {self.tau!r}]")
        return t

    def evaluate(self, t):
        t = self._check_time(t)
        p = self.params
        if self.kind == "constant":
            out = np.full_like(t, p[0])
        elif self.kind == "linear":
            out = p[0] + (p[1] - p[0]) * (t / self.tau)
        elif self.kind == "smooth":
            out = p[0] + (p[1] - p[0]) * np.sin(0.5 * np.pi * t / self.tau) ** 2
        else:
            out = np.polynomial.polynomial.polyval(t / self.tau, p)
        return out if out.ndim else float(out)

    def derivative(self, t):
        t = self._check_time(t)
        p = self.params
        if self.kind == "constant":
            out = np.zeros_like(t)
        elif self.kind == "linear":
            out = np.full_like(t, (p[1] - p[0]) / self.tau)
        elif self.kind == "smooth":
            out = (p[1] - p[0]) * 0.5 * np.pi / self.tau * np.sin(np.pi * t / self.tau)
        else:
            dp = np.polynomial.polynomial.polyder(p) if len(p) > 1 else [0.0]
            out = np.polynomial.polynomial.polyval(t / self.tau, dp) / self.tau
        return out if out.ndim else float(out)

    __call__ = evaluate

    @property
    def start(self) -> float:
        return self.evaluate(0.0)

    @property
    def end(self) -> float:
        return self.evaluate(self.tau)

    def to_dict(self) -> dict:
        p = self.params
        if self.kind == "constant":
            return {"kind": "constant", "value": p[0]}
        if self.kind == "polynomial":
            return {"kind": "polynomial", "coeffs": list(p)}
        return {"kind": self.kind, "from": p[0], "to": p[1]}

    @classmethod
    def from_dict(cls, data: dict, tau: float) -> "Schedule":
        """Parse a JSON fragment; ``tau`` comes from the enclosing run config."""
        try:
            kind = data["kind"]
            if kind == "constant":
                params = (data["value"],)
            elif kind in ("linear", "smooth"):
                params = (data["from"], data["to"])
            elif kind == "polynomial":
                params = tuple(data["coeffs"])
            else:
                raise ScheduleError(f"unknown schedule kind {kind!r}")
        except (KeyError, TypeError) as exc:
            raise ScheduleError(f"malformed schedule fragment {data!r}") from exc
        return cls(kind, params, tau)


@dataclass(frozen=True)
class BoundarySpec:
    value_at_0: float
    value_at_tau: float


def evaluate(s: Schedule, t):
    return s.evaluate(t)


def derivative(s: Schedule, t):
    return s.derivative(t)


def check_boundaries(s: Schedule, b: BoundarySpec, tol: float = BOUNDARY_TOL) -> bool:
    return abs(s.start - b.value_at_0) <= tol and abs(s.end - b.value_at_tau) <= tol
