"""Uniform check reports shared by every validator in the package."""
from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass
class CheckReport:
    """Result of one numerical check.

    ``passed`` is derived from ``residual < tol``; a composite report also
    requires every child to pass.  NaN residuals always fail.
    """

    check: str
    residual: float
    tol: float
    witness: Any = None
    ms: float = 0.0
    details: list[CheckReport] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        own = (not math.isnan(self.residual)) and self.residual < self.tol
        return own and all(d.passed for d in self.details)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "residual": _finite(self.residual),
            "tol": self.tol,
            "pass": self.passed,
            "witness": _jsonable(self.witness),
            "ms": round(self.ms, 3),
        }

    def flatten(self) -> list[CheckReport]:
        """The report followed by its children, depth first."""
        out = [self]
        for d in self.details:
            out.extend(d.flatten())
        return out

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.check}: residual={self.residual:.3e} tol={self.tol:.1e}"


def composite(name: str, parts: list[CheckReport], tol: float, ms: float = 0.0) -> CheckReport:
    """Aggregate child reports: residual is the worst child residual."""
    worst = max(parts, key=_key, default=None)
    if worst is None:
        return CheckReport(name, 0.0, tol, None, ms, [])
    return CheckReport(name, worst.residual, tol, {"worst": worst.check, "at": worst.witness}, ms, list(parts))


def _key(r: CheckReport) -> float:
    return math.inf if math.isnan(r.residual) else r.residual


def _finite(x: float) -> float | None:
    """NaN and infinities have no JSON spelling; they become null (and the check fails)."""
    x = float(x)
    return x if math.isfinite(x) else None


def _jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return None if math.isnan(obj) else obj
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    try:
        import numpy as np

        if isinstance(obj, np.generic):
            return _jsonable(obj.item())
        if isinstance(obj, np.ndarray):
            return _jsonable(obj.tolist())
    except ImportError:  # pragma: no cover
        pass
    return str(obj)


@contextmanager
def timer() -> Iterator[list[float]]:
    """Yields a one-element list that receives elapsed milliseconds."""
    box = [0.0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = (time.perf_counter() - t0) * 1e3


def max_abs(x) -> float:
    import numpy as np

    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x)))
