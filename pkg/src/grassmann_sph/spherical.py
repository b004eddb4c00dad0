"""Zonal spherical functions phi_lambda(exp iX) on SU(p+q)/S(U(p) x U(q)).

phi_lambda is the Berezin-Karpelevich quotient

    C_pq det(P~_{n_j}(x_k)) / (prod_{j<k} (x_j - x_k) (N_j - N_k)),

with x_k = cos 2t_k and N_j = n_j (n_j + r). When nodes coincide the
quotient is read as a limit. Three float evaluators cover the cases
(distinct nodes, block-confluent nodes, all nodes at -1) and an exact
divided-difference evaluator certifies them.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .jacobi import jacobi_table, normalized_jacobi, normalized_jacobi_derivative, \
    normalized_taylor_table
from .space import GrassmannianSpace, SphericalWeight, TorusPoint, enumerate_weights, \
    identity_point, point_from_nodes

NEAR_CONFLUENT_GAP = 1e-6

PATHS = ("generic", "confluent", "minus_one", "oracle")


class ConditionWarning(UserWarning):
    pass


def c_pq(space: GrassmannianSpace) -> int:
    """2^{q(q-1)/2} prod_{j<q} j! (j+p-q)^{q-j}."""
    p, q = space.p, space.q
    value = 2 ** (q * (q - 1) // 2)
    for j in range(1, q):
        value *= factorial(j) * (j + p - q) ** (q - j)
    return value


def weight_denominator(n, r: int) -> int:
    """prod_{j<k} (N_j - N_k), N_j = n_j (n_j + r)."""
    big = [v * (v + r) for v in n]
    out = 1
    for j in range(len(big)):
        for k in range(j + 1, len(big)):
            out *= big[j] - big[k]
    return out


def _weight_denominator_array(n: np.ndarray, r: int) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    big = n * (n + r)
    out = np.ones(n.shape[0])
    for j in range(n.shape[1]):
        for k in range(j + 1, n.shape[1]):
            out *= big[:, j] - big[:, k]
    return out


def exact_det(matrix) -> Fraction:
    """Determinant of a square matrix of Fractions by Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in matrix]
    size = len(a)
    det = Fraction(1)
    for col in range(size):
        pivot = next((i for i in range(col, size) if a[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, size):
            factor = a[i][col] * inv
            if factor:
                row_i, row_c = a[i], a[col]
                for j in range(col, size):
                    row_i[j] -= factor * row_c[j]
    return det


# -- calibration -------------------------------------------------------------

@dataclass(frozen=True)
class CalibrationRecord:
    """Constants fixed by the phi_lambda(identity) = 1 anchor.

    ``confluent_constant`` multiplies C_pq det(P~_{n_j}^{(k-1)}(x)) / prod(N_j - N_k)
    in the fully confluent limit. ``hermite_sign`` is the same constant for
    derivative columns scaled by 1/i!, and is always +-1.
    """

    p: int
    q: int
    samples: int
    confluent_constant: Fraction
    hermite_sign: int
    candidates: dict = field(default_factory=dict)
    matches: tuple[str, ...] = ()
    minus_one_kappa: Fraction | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "samples": self.samples,
            "confluent_constant": str(self.confluent_constant),
            "hermite_sign": self.hermite_sign,
            "candidates": {k: str(v) for k, v in self.candidates.items()},
            "matches": list(self.matches),
            "minus_one_kappa": None if self.minus_one_kappa is None else str(self.minus_one_kappa),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CalibrationRecord":
        kappa = d.get("minus_one_kappa")
        return cls(d["p"], d["q"], d["samples"], Fraction(d["confluent_constant"]),
                   d["hermite_sign"], {k: Fraction(v) for k, v in d["candidates"].items()},
                   tuple(d["matches"]), None if kappa is None else Fraction(kappa))


def _derivative_matrix_exact(space, n, node, scaled):
    a = space.gap
    return [[normalized_jacobi_derivative(a, nj, k, node) / (factorial(k) if scaled else 1)
             for k in range(space.q)] for nj in n]


def _closed_form_base(space, n) -> Fraction:
    value = Fraction((-1) ** sum(n))
    for nj in n:
        value /= comb(nj + space.gap, nj)
    return value


def calibrate_constants(space: GrassmannianSpace, sample_weights) -> CalibrationRecord:
    """Fix the fully confluent constant from phi_lambda(identity) = 1, exactly.

    Each sample weight implies a constant; they must agree. The record lists
    which closed-form candidates the calibrated value matches.
    """
    sample_weights = list(sample_weights)
    if not sample_weights:
        raise ValueError("calibration needs at least one sample weight")
    q = space.q
    cpq = c_pq(space)
    implied = set()
    for w in sample_weights:
        raw = exact_det(_derivative_matrix_exact(space, w.n, Fraction(1), scaled=False))
        raw /= weight_denominator(w.n, space.r)
        implied.add(1 / (cpq * raw))
    if len(implied) != 1:
        raise ValueError(f"inconsistent calibration: sample weights imply {sorted(implied)}")
    constant = implied.pop()

    sign = Fraction((-1) ** (q * (q - 1) // 2))
    prod_fact = math.prod(factorial(k) for k in range(1, q))
    candidates = {
        "sign/(q-1)!": sign / factorial(q - 1),
        "sign/prod k!": sign / prod_fact,
        "sign/(q-1)! with C_pq absorbed": sign / factorial(q - 1) / cpq,
        "sign/prod k! with C_pq absorbed": sign / prod_fact / cpq,
    }
    matches = tuple(name for name, value in candidates.items() if value == constant)
    hermite = constant * prod_fact
    if abs(hermite) != 1:
        raise ValueError(f"inconsistent calibration: scaled-column constant {hermite} is not +-1")

    kappa = None
    if space.p > space.q:
        kappas = set()
        for w in sample_weights:
            det = exact_det(_derivative_matrix_exact(space, w.n, Fraction(-1), scaled=True))
            value = cpq * hermite * det / weight_denominator(w.n, space.r)
            kappas.add(value / _closed_form_base(space, w.n))
        if len(kappas) != 1:
            raise ValueError(f"inconsistent calibration: closed-form constants {sorted(kappas)}")
        kappa = kappas.pop()

    return CalibrationRecord(space.p, q, len(sample_weights), constant, int(hermite),
                             candidates, matches, kappa)


def default_samples(space: GrassmannianSpace) -> list[SphericalWeight]:
    return list(enumerate_weights(space, space.q + 1))


@functools.lru_cache(maxsize=None)
def _calibration_cached(space: GrassmannianSpace) -> CalibrationRecord:
    return calibrate_constants(space, default_samples(space))


def get_calibration(space: GrassmannianSpace) -> CalibrationRecord:
    """Per-space calibration, computed once and shared read-only."""
    return _calibration_cached(space)


# -- requests ----------------------------------------------------------------

@dataclass(frozen=True)
class EvalRequest:
    space: GrassmannianSpace
    weight: SphericalWeight
    point: TorusPoint
    mode: str = "auto"

    def __post_init__(self):
        if self.mode not in ("auto", "generic", "confluent", "oracle"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.weight.q != self.space.q or self.point.q != self.space.q:
            raise ValueError("weight and point must have q entries")

    @classmethod
    def at_nodes(cls, space, weight, nodes, mode="auto") -> "EvalRequest":
        """Request at nodes x_k = cos 2t_k given directly (exact when rational)."""
        return cls(space, weight, point_from_nodes(space, nodes), mode)


@dataclass(frozen=True)
class EvalResult:
    value: float | Fraction
    path_taken: str
    condition_estimate: float
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        value = self.value
        return {
            "value": str(value) if isinstance(value, Fraction) else float(value),
            "path_taken": self.path_taken,
            "condition_estimate": self.condition_estimate,
            "warnings": list(self.warnings),
        }


# -- batched float kernels ---------------------------------------------------

def _min_gap(nodes) -> float:
    nodes = np.sort(np.asarray(nodes, dtype=float))
    return float(np.min(np.diff(nodes))) if nodes.size > 1 else math.inf


def generic_batch(space: GrassmannianSpace, nodes, n: np.ndarray) -> np.ndarray:
    """Quotient at distinct float nodes for a (count, q) array of n-vectors."""
    nodes = np.asarray(nodes, dtype=float)
    n = np.asarray(n, dtype=np.int64).reshape(-1, space.q)
    if n.size == 0:
        return np.zeros(0)
    n_max = int(n.max())
    a = space.gap
    table = jacobi_table(n_max, a, 0, nodes)
    table /= np.array([float(comb(m + a, m)) for m in range(n_max + 1)])[:, None]
    det = np.linalg.det(table[n])
    vand = 1.0
    for j in range(space.q):
        for k in range(j + 1, space.q):
            vand *= nodes[j] - nodes[k]
    return c_pq(space) * det / (vand * _weight_denominator_array(n, space.r))


def confluent_batch(space: GrassmannianSpace, block_nodes, n: np.ndarray,
                    sign: int | None = None) -> np.ndarray:
    """Block-confluent limit with Taylor columns P~^(i)(y_b)/i!, i < block size."""
    if sign is None:
        sign = get_calibration(space).hermite_sign
    n = np.asarray(n, dtype=np.int64).reshape(-1, space.q)
    if n.size == 0:
        return np.zeros(0)
    n_max = int(n.max())
    columns = [normalized_taylor_table(space.gap, n_max, size, float(y))
               for y, size in block_nodes]
    table = np.concatenate(columns, axis=1)
    det = np.linalg.det(table[n])
    cross = 1.0
    for b, (yb, lb) in enumerate(block_nodes):
        for yc, lc in block_nodes[b + 1:]:
            cross *= (float(yc) - float(yb)) ** (lb * lc)
    return sign * c_pq(space) * det / (cross * _weight_denominator_array(n, space.r))


def minus_one_batch(space: GrassmannianSpace, n: np.ndarray) -> np.ndarray:
    """kappa (-1)^{sum n} / prod binom(n_j + p - q, n_j)."""
    if space.p == space.q:
        raise ValueError("normalizer point: all cos 2t = -1 with p = q")
    kappa = get_calibration(space).minus_one_kappa
    n = np.asarray(n, dtype=np.int64).reshape(-1, space.q)
    a = space.gap
    sign = np.where(n.sum(axis=1) % 2 == 0, 1.0, -1.0)
    binoms = np.ones(n.shape[0])
    for j in range(space.q):
        binoms *= np.array([float(comb(int(v) + a, int(v))) for v in n[:, j]])
    return float(kappa) * sign / binoms


def _collapse(nodes, gap):
    """Group sorted float nodes whose neighbours are closer than gap."""
    order = np.argsort(nodes)
    groups = [[order[0]]]
    for i in order[1:]:
        if nodes[i] - nodes[groups[-1][-1]] < gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [(float(np.mean(nodes[g])), len(g)) for g in groups]


def choose_path(space: GrassmannianSpace, point: TorusPoint) -> str:
    if not point.is_confluent:
        return "generic"
    if point.all_minus_one and space.p > space.q:
        return "minus_one"
    return "confluent"


def phi_batch(space: GrassmannianSpace, point: TorusPoint, n: np.ndarray,
              path: str | None = None) -> np.ndarray:
    """phi_lambda(point) for many weights, using the automatic routing."""
    path = path or choose_path(space, point)
    if path == "generic":
        nodes = point.nodes
        if _min_gap(nodes) < NEAR_CONFLUENT_GAP:
            return confluent_batch(space, _collapse(nodes, NEAR_CONFLUENT_GAP), n)
        return generic_batch(space, nodes, n)
    if path == "minus_one":
        return minus_one_batch(space, n)
    if path == "confluent":
        return confluent_batch(space, point.block_nodes(), n)
    raise ValueError(f"unknown path {path!r}")


# -- single evaluations --------------------------------------------------------

def eval_generic(req: EvalRequest) -> EvalResult:
    point = req.point
    if point.is_confluent:
        raise ValueError("confluent point: generic quotient needs distinct cos 2t")
    gap = _min_gap(point.nodes)
    notes = ()
    if gap < NEAR_CONFLUENT_GAP:
        notes = (f"condition: minimal node gap {gap:.3g} below {NEAR_CONFLUENT_GAP:g}",)
        warnings.warn(notes[0], ConditionWarning, stacklevel=2)
    value = generic_batch(req.space, point.nodes, np.array([req.weight.n]))[0]
    return EvalResult(float(value), "generic", 1.0 / gap, notes)


def eval_confluent(req: EvalRequest) -> EvalResult:
    point = req.point
    value = confluent_batch(req.space, point.block_nodes(), np.array([req.weight.n]))[0]
    cond = math.inf if point.is_confluent else 1.0 / _min_gap(point.nodes)
    return EvalResult(float(value), "confluent", cond)


def eval_minus_one_closed_form(req: EvalRequest) -> EvalResult:
    if not req.point.all_minus_one:
        raise ValueError("closed form needs cos 2t_k = -1 for every k")
    if req.space.p == req.space.q:
        raise ValueError("normalizer point: all cos 2t = -1 with p = q")
    value = minus_one_batch(req.space, np.array([req.weight.n]))[0]
    return EvalResult(float(value), "minus_one", math.inf)


def eval_auto(req: EvalRequest) -> EvalResult:
    """Route to generic, the -1 closed form, or the confluent path.

    Distinct float nodes closer than NEAR_CONFLUENT_GAP are evaluated both
    ways; the confluent value at the collapsed point is returned.
    """
    space, point = req.space, req.point
    path = choose_path(space, point)
    if path == "generic":
        gap = _min_gap(point.nodes)
        if gap < NEAR_CONFLUENT_GAP:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ConditionWarning)
                generic = eval_generic(req).value
            blocks = _collapse(point.nodes, NEAR_CONFLUENT_GAP)
            value = confluent_batch(space, blocks, np.array([req.weight.n]))[0]
            note = (f"condition: node gap {gap:.3g}; generic value {generic!r} "
                    f"replaced by confluent value at collapsed point")
            warnings.warn(note, ConditionWarning, stacklevel=2)
            return EvalResult(float(value), "confluent", math.inf, (note,))
        return eval_generic(req)
    if path == "minus_one":
        return eval_minus_one_closed_form(req)
    return eval_confluent(req)


def evaluate(req: EvalRequest) -> EvalResult:
    """Dispatch on ``req.mode``."""
    if req.mode == "generic":
        return eval_generic(req)
    if req.mode == "confluent":
        return eval_confluent(req)
    if req.mode == "oracle":
        return EvalResult(oracle_exact(req), "oracle", math.inf if req.point.is_confluent
                          else 1.0 / _min_gap(req.point.nodes))
    return eval_auto(req)


# -- exact oracle --------------------------------------------------------------

def _divided_differences(f, df, xs):
    """Newton divided differences f[x_0..x_k], k = 0..len-1, repeated nodes contiguous.

    df(i, x) must return the i-th derivative of f at x.
    """
    size = len(xs)
    table = [[None] * size for _ in range(size)]
    for i in range(size):
        table[i][i] = f(xs[i])
    for length in range(1, size):
        for i in range(size - length):
            j = i + length
            if xs[j] == xs[i]:
                table[i][j] = df(length, xs[i]) / factorial(length)
            else:
                table[i][j] = (table[i + 1][j] - table[i][j - 1]) / (xs[j] - xs[i])
    return [table[0][k] for k in range(size)]


def oracle_exact(req: EvalRequest) -> Fraction:
    """Exact rational phi_lambda via divided differences; needs rational cos 2t_k."""
    space, point = req.space, req.point
    if not point.exact:
        raise ValueError("irrational node: cos 2t is not rational; supply nodes directly")
    xs = [point.cosines[i] for block in point.blocks for i in block]
    a = space.gap
    rows = []
    for nj in req.weight.n:
        rows.append(_divided_differences(
            lambda x, nj=nj: normalized_jacobi(a, nj, x),
            lambda i, x, nj=nj: normalized_jacobi_derivative(a, nj, i, x),
            xs))
    q = space.q
    sign = (-1) ** (q * (q - 1) // 2)
    return c_pq(space) * sign * exact_det(rows) / weight_denominator(req.weight.n, space.r)


def phi_identity_exact(space: GrassmannianSpace, weight: SphericalWeight) -> Fraction:
    return oracle_exact(EvalRequest(space, weight, identity_point(space), "oracle"))
