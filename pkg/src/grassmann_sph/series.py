"""Truncated spectral series sum_lambda d_lambda (1 + kappa_lambda)^s |phi_lambda(a)|^{2k}.

Shell N collects the weights with n_1 = N. Convergence is judged from the
log-log decay exponent of the shell sums over the last half of the shells:
a summable tail needs exponent < -1.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import MIN_SHELLS, slope_estimate
from .space import GrassmannianSpace, TorusPoint, casimir_array, degree_surrogate_array, \
    shell_arrays
from .spherical import phi_batch

VERDICT_MARGIN = 0.15
DEGREE_NOTE = ("d_lambda is the restricted-root degree surrogate; it matches the true "
               "degree up to bounded factors, which cannot change a verdict")


@dataclass
class SeriesReport:
    space: dict
    point: dict
    k: int
    s: Fraction
    n_max: int
    shells: list[int]
    partial_sums: list[float]
    shell_sums: list[float]
    tail_exponent: float
    verdict: str
    normalizer: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "point": self.point,
            "k": self.k,
            "s": str(self.s),
            "n_max": self.n_max,
            "shells": list(self.shells),
            "partial_sums": [float(v) for v in self.partial_sums],
            "shell_sums": [float(v) for v in self.shell_sums],
            "tail_exponent": None if math.isnan(self.tail_exponent) else self.tail_exponent,
            "verdict": self.verdict,
            "normalizer": self.normalizer,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SeriesReport":
        tail = d["tail_exponent"]
        return cls(d["space"], d["point"], d["k"], Fraction(d["s"]), d["n_max"],
                   list(d["shells"]), list(d["partial_sums"]), list(d["shell_sums"]),
                   math.nan if tail is None else tail, d["verdict"], d["normalizer"],
                   list(d["notes"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["shell", "shell_sum", "partial_sum"])
        for row in zip(self.shells, self.shell_sums, self.partial_sums):
            writer.writerow([row[0], f"{row[1]:.17g}", f"{row[2]:.17g}"])
        return buf.getvalue()


def verdict_for(tail_exponent: float, margin: float = VERDICT_MARGIN) -> str:
    if math.isnan(tail_exponent):
        return "inconclusive"
    if tail_exponent < -1 - margin:
        return "converging"
    if tail_exponent >= -1 + margin:
        return "diverging"
    return "inconclusive"


@dataclass
class _ShellData:
    shell: int
    degree: np.ndarray
    casimir: np.ndarray
    abs_phi: np.ndarray


def _shell_data(space, point, n_max, threads) -> list[_ShellData]:
    shells = shell_arrays(space, n_max)

    def compute(item):
        shell, n = item
        return _ShellData(shell, degree_surrogate_array(space, n), casimir_array(space, n),
                          np.abs(phi_batch(space, point, n)))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(compute, shells.items()))


def _report(space, point, k, s, n_max, data) -> SeriesReport:
    s = Fraction(s)
    shell_sums = []
    for d in data:
        terms = d.degree * d.abs_phi ** (2 * k)
        if s:
            terms = terms * (1 + d.casimir) ** float(s)
        shell_sums.append(float(np.sum(terms)))
    partial = np.cumsum(shell_sums).tolist()
    shells = [d.shell for d in data]
    half = len(shells) // 2
    try:
        tail = slope_estimate(shell_sums[half:], shells[half:])
    except ValueError:
        tail = math.nan
    return SeriesReport(space.to_dict(), point.to_dict(), k, s, n_max, shells, partial,
                        shell_sums, tail, verdict_for(tail), notes=[DEGREE_NOTE])


def _normalizer_report(space, point, k, s, n_max) -> SeriesReport:
    return SeriesReport(space.to_dict(), point.to_dict(), k, Fraction(s), n_max, [], [], [],
                        math.nan, "diverging", normalizer=True,
                        notes=["normalizer point: every convolution power is singular; "
                               "series not computed"])


def series_sweep(space: GrassmannianSpace, point: TorusPoint, k: int, s=0, n_max: int = 60,
                 threads: int = 1) -> SeriesReport:
    if k < 1:
        raise ValueError("k must be >= 1")
    if Fraction(s) < 0:
        raise ValueError("s must be >= 0")
    if point.in_normalizer:
        return _normalizer_report(space, point, k, s, n_max)
    return _report(space, point, k, s, n_max, _shell_data(space, point, n_max, threads))


class InconclusiveError(ValueError):
    pass


def k_min_search(space: GrassmannianSpace, point: TorusPoint, s=0, k_cap: int = 8,
                 n_max: int = 60, threads: int = 1):
    """Smallest k <= k_cap whose series is judged converging, or None.

    Termwise the series is non-increasing in k, so the first converging k
    settles the search.
    """
    if k_cap < 1:
        raise ValueError("k_cap must be >= 1")
    if point.in_normalizer:
        return None
    data = _shell_data(space, point, n_max, threads)
    for k in range(1, k_cap + 1):
        verdict = _report(space, point, k, s, n_max, data).verdict
        if verdict == "converging":
            return k
        if verdict == "inconclusive":
            raise InconclusiveError(f"inconclusive at boundary: k={k} is neither "
                                    f"converging nor diverging")
    return None


@dataclass(frozen=True)
class ThresholdRecord:
    """Smallest integers strictly above the published sufficient exponents.

    k_main: any non-normalizer point; k_regular: regular points; k_prior: the
    earlier regular-point bound; k_sobolev / k_sobolev_general: H^s versions
    for regular / arbitrary non-normalizer points.
    """

    k_main: int
    k_regular: int
    k_prior: int
    k_sobolev: int
    k_sobolev_general: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _above(x) -> int:
    return math.floor(x) + 1


def thresholds(space: GrassmannianSpace, s=0) -> ThresholdRecord:
    p, q = space.p, space.q
    s = Fraction(s)
    if p > q:
        k_main = _above(max(p, 2 * (p - q) + 3))
        k_regular = 2
        k_sob_general = _above(max(s + p, 2 * (p - q) + 3))
    else:
        k_main = _above(max(2 * p, 6))
        k_regular = 3
        k_sob_general = _above(max(2 * s + 2 * p, 6))
    k_prior = _above(Fraction(1 + math.comb(p + q, 2) + 2 * s, 2 * p - q))
    k_sobolev = _above((p + s) / (p - Fraction(1, 2)))
    return ThresholdRecord(k_main, k_regular, k_prior, k_sobolev, k_sob_general)
