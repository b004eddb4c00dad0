"""Decay envelopes for |phi_lambda| and empirical ratio sweeps against them."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .space import GrassmannianSpace, SphericalWeight, TorusPoint, shell_arrays
from .spherical import phi_batch

MIN_SHELLS = 8


class BoundKind(str, Enum):
    GENERAL_PQ_STRICT = "general_pq_strict"
    GENERAL_PQ_EQUAL = "general_pq_equal"
    REGULAR = "regular"
    FLAT_INTERIOR = "flat_interior"
    MINUS_ONE = "minus_one"
    PRIOR_REGULAR = "prior_regular"


def _check_space(kind: BoundKind, space: GrassmannianSpace):
    if kind is BoundKind.GENERAL_PQ_STRICT and space.p == space.q:
        raise ValueError("kind/space mismatch: general_pq_strict needs p > q")
    if kind is BoundKind.GENERAL_PQ_EQUAL and space.p != space.q:
        raise ValueError("kind/space mismatch: general_pq_equal needs p = q")
    if kind is BoundKind.MINUS_ONE and space.p == space.q:
        raise ValueError("kind/space mismatch: minus_one needs p > q")


def check_point(kind: BoundKind, space: GrassmannianSpace, point: TorusPoint):
    """Raise unless the point belongs to the class the bound is stated for."""
    kind = BoundKind(kind)
    _check_space(kind, space)
    if kind in (BoundKind.REGULAR, BoundKind.PRIOR_REGULAR):
        ok = point.is_regular
    elif kind in (BoundKind.GENERAL_PQ_STRICT, BoundKind.GENERAL_PQ_EQUAL):
        ok = not point.in_normalizer
    elif kind is BoundKind.FLAT_INTERIOR:
        ok = len(point.blocks) == 1 and not point.all_minus_one and not point.all_plus_one
    else:
        ok = point.all_minus_one
    if not ok:
        raise ValueError(f"kind/space mismatch: point does not fit bound {kind.value}")


def envelope_array(kind: BoundKind, space: GrassmannianSpace, n: np.ndarray) -> np.ndarray:
    """Envelope with unit constant for a (count, q) array of n-vectors."""
    kind = BoundKind(kind)
    _check_space(kind, space)
    n = np.asarray(n, dtype=float).reshape(-1, space.q)
    p, q, r = space.p, space.q, space.r
    j = np.arange(1, q + 1, dtype=float)
    if kind is BoundKind.GENERAL_PQ_STRICT:
        return np.prod((n[:, :-1] + 1) ** -1.0, axis=1)
    if kind is BoundKind.GENERAL_PQ_EQUAL:
        return np.prod((n[:, :-1] + 1) ** -0.5, axis=1)
    if kind is BoundKind.REGULAR:
        return np.prod((n + 1) ** (-p + j - 0.5), axis=1)
    if kind is BoundKind.FLAT_INTERIOR:
        head = np.prod((n[:, :-1] + r) ** (-p + q - 0.5), axis=1)
        return head * (n[:, -1] + 1) ** float(-p + q)
    if kind is BoundKind.MINUS_ONE:
        return np.prod((n + r) ** float(-p + q), axis=1)
    return np.prod((n + 1) ** (-p + q / 2.0), axis=1)


def envelope(kind: BoundKind, space: GrassmannianSpace, w: SphericalWeight) -> float:
    return float(envelope_array(kind, space, np.array([w.n]))[0])


def slope_estimate(shell_maxima, shells=None) -> float:
    """Least-squares slope of log(value) against log(shell); zero shells skipped.

    ``shells`` defaults to 1..len(shell_maxima).
    """
    values = np.asarray(shell_maxima, dtype=float)
    shells = np.arange(1, values.size + 1) if shells is None else np.asarray(shells, float)
    keep = (values > 0) & (shells > 0)
    if np.count_nonzero(keep) < MIN_SHELLS:
        raise ValueError(f"insufficient data: need {MIN_SHELLS} nonzero shells, "
                         f"got {np.count_nonzero(keep)}")
    slope, _ = np.polyfit(np.log(shells[keep]), np.log(values[keep]), 1)
    return float(slope)


@dataclass
class RatioSweepReport:
    kind: BoundKind
    space: dict
    point: dict
    n_max: int
    shells: list[int]
    max_ratio_per_shell: list[float]
    overall_sup: float
    log_log_slope: float

    def to_dict(self) -> dict:
        return {
            "kind": BoundKind(self.kind).value,
            "space": self.space,
            "point": self.point,
            "n_max": self.n_max,
            "shells": list(self.shells),
            "max_ratio_per_shell": [float(v) for v in self.max_ratio_per_shell],
            "overall_sup": float(self.overall_sup),
            "log_log_slope": float(self.log_log_slope),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RatioSweepReport":
        return cls(BoundKind(d["kind"]), d["space"], d["point"], d["n_max"], list(d["shells"]),
                   list(d["max_ratio_per_shell"]), d["overall_sup"], d["log_log_slope"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["shell", "max_ratio"])
        for s, v in zip(self.shells, self.max_ratio_per_shell):
            writer.writerow([s, f"{v:.17g}"])
        return buf.getvalue()


def ratio_sweep(kind: BoundKind, space: GrassmannianSpace, point: TorusPoint, n_max: int,
                threads: int = 1) -> RatioSweepReport:
    """Shell maxima of |phi_lambda(point)| / envelope over n_1 <= n_max."""
    kind = BoundKind(kind)
    check_point(kind, space, point)
    shells = shell_arrays(space, n_max)

    def shell_max(item):
        _, n = item
        ratio = np.abs(phi_batch(space, point, n)) / envelope_array(kind, space, n)
        return float(np.max(ratio))

    items = list(shells.items())
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        maxima = list(pool.map(shell_max, items))
    shell_ids = [s for s, _ in items]
    return RatioSweepReport(kind, space.to_dict(), point.to_dict(), n_max, shell_ids, maxima,
                            max(maxima), slope_estimate(maxima, shell_ids))
