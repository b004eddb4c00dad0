"""The Grassmannian SU(p+q)/S(U(p) x U(q)): roots, weights, torus points."""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

#: tolerance on cos 2t for float-valued torus angles
CONFLUENCE_TOL = 1e-12


class ConfluenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GrassmannianSpace:
    """Restricted root data of SU(p+q)/S(U(p) x U(q)).

    ``rho`` holds half the sum of the positive roots (with multiplicity)
    as coordinates in the e-basis.
    """

    p: int
    q: int
    r: int
    positive_roots: tuple[tuple[tuple[int, ...], int], ...]
    rho: tuple[Fraction, ...]

    @property
    def rank(self) -> int:
        return self.q

    @property
    def dim(self) -> int:
        return 2 * self.p * self.q

    @property
    def gap(self) -> int:
        return self.p - self.q

    @property
    def label(self) -> str:
        return f"SU({self.p}+{self.q})/S(U({self.p})xU({self.q}))"

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q}


def _unit(q, i, scale=1):
    v = [0] * q
    v[i] = scale
    return v


def make_space(p: int, q: int) -> GrassmannianSpace:
    if int(p) != p or int(q) != q or q < 2 or p < q:
        raise ValueError(f"invalid rank parameters: need p >= q >= 2, got p={p}, q={q}")
    p, q = int(p), int(q)
    roots = []
    for k in range(q):
        roots.append((tuple(_unit(q, k, 2)), 1))
    if p > q:
        for k in range(q):
            roots.append((tuple(_unit(q, k)), 2 * (p - q)))
    for i, j in itertools.combinations(range(q), 2):
        plus = _unit(q, i)
        plus[j] = 1
        minus = _unit(q, i)
        minus[j] = -1
        roots.append((tuple(plus), 2))
        roots.append((tuple(minus), 2))
    rho = [Fraction(0)] * q
    for vec, mult in roots:
        for i, c in enumerate(vec):
            rho[i] += Fraction(mult * c, 2)
    return GrassmannianSpace(p, q, p - q + 1, tuple(roots), tuple(rho))


@dataclass(frozen=True)
class SphericalWeight:
    """Highest spherical weight sum 2 m_j e_j, carried with n_j = m_j + q - j."""

    m: tuple[int, ...]
    n: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        m = tuple(int(v) for v in self.m)
        if any(v < 0 for v in m) or any(m[i] < m[i + 1] for i in range(len(m) - 1)):
            raise ValueError(f"m must be non-increasing and non-negative, got {m}")
        q = len(m)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", tuple(m[j] + q - 1 - j for j in range(q)))

    @classmethod
    def from_n(cls, n: Sequence[int]) -> "SphericalWeight":
        q = len(n)
        if any(n[i] <= n[i + 1] for i in range(q - 1)) or n[-1] < 0:
            raise ValueError(f"n must be strictly decreasing and non-negative, got {tuple(n)}")
        return cls(tuple(int(n[j]) - (q - 1 - j) for j in range(q)))

    @classmethod
    def zero(cls, q: int) -> "SphericalWeight":
        return cls((0,) * q)

    @property
    def q(self) -> int:
        return len(self.m)

    @property
    def coords(self) -> tuple[int, ...]:
        """lambda in the e-basis."""
        return tuple(2 * v for v in self.m)


def enumerate_weights(space: GrassmannianSpace, n_max: int) -> Iterator[SphericalWeight]:
    """All weights with n_1 <= n_max, lexicographically decreasing in n."""
    if n_max < space.q - 1:
        raise ValueError(f"n_max must be at least q-1 = {space.q - 1}")
    for n in itertools.combinations(range(n_max, -1, -1), space.q):
        yield SphericalWeight.from_n(n)


def weight_array(space: GrassmannianSpace, n_max: int) -> np.ndarray:
    """n-vectors of all weights with n_1 <= n_max, shape (count, q), enumeration order."""
    if n_max < space.q - 1:
        raise ValueError(f"n_max must be at least q-1 = {space.q - 1}")
    combos = list(itertools.combinations(range(n_max, -1, -1), space.q))
    return np.array(combos, dtype=np.int64).reshape(-1, space.q)


def shell_arrays(space: GrassmannianSpace, n_max: int) -> dict[int, np.ndarray]:
    """Weights grouped by n_1, each group in enumeration order."""
    arr = weight_array(space, n_max)
    return {int(s): arr[arr[:, 0] == s] for s in range(space.q - 1, n_max + 1)}


# -- torus points -----------------------------------------------------------

# cos(v pi) for the v in [0, 2) where it is rational
_RATIONAL_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): Fraction(0),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(1): Fraction(-1),
    Fraction(4, 3): Fraction(-1, 2),
    Fraction(3, 2): Fraction(0),
    Fraction(5, 3): Fraction(1, 2),
}


def exact_cos2(u: Fraction) -> Fraction | None:
    """cos(2 pi u) when it is rational, else None."""
    return _RATIONAL_COS.get((2 * Fraction(u)) % 2)


@dataclass(frozen=True)
class TorusPoint:
    """A point exp iX(t_1..t_q) with its confluence structure.

    Entries of ``t`` are ``Fraction`` (angle as a multiple of pi), ``float``
    (radians) or ``None`` when the point was built from nodes directly.
    ``cosines`` holds cos 2t_k, exact where possible. ``blocks`` are 0-based
    index groups with equal cos 2t, ordered by first index.
    """

    t: tuple
    cosines: tuple
    blocks: tuple[tuple[int, ...], ...]
    is_regular: bool
    in_normalizer: bool
    all_minus_one: bool
    all_plus_one: bool

    @property
    def q(self) -> int:
        return len(self.cosines)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.cosines)

    @property
    def nodes(self) -> np.ndarray:
        return np.array([float(c) for c in self.cosines])

    @property
    def is_confluent(self) -> bool:
        return any(len(b) > 1 for b in self.blocks)

    def block_nodes(self):
        """(node, size) per block, node being the block's representative cosine."""
        return [(self.cosines[b[0]], len(b)) for b in self.blocks]

    def to_dict(self) -> dict:
        def enc(v):
            if v is None:
                return None
            if isinstance(v, Fraction):
                return str(v)
            return float(v)

        return {
            "t": [enc(v) for v in self.t],
            "cosines": [enc(c) for c in self.cosines],
            "blocks": [list(b) for b in self.blocks],
            "is_regular": self.is_regular,
            "in_normalizer": self.in_normalizer,
            "all_minus_one": self.all_minus_one,
            "all_plus_one": self.all_plus_one,
        }


def parse_angle(token: str):
    """'num/den' or integer -> Fraction multiple of pi; '<decimal>f' -> float radians."""
    token = token.strip()
    if not token:
        raise ValueError("empty angle entry")
    if token.endswith(("f", "F")):
        return float(token[:-1])
    return Fraction(token)


def parse_point(text: str) -> list:
    """Parse '1/5,1/7' (multiples of pi) or '0.3f,0.1f' (radians) entries."""
    return [parse_angle(tok) for tok in text.split(",")]


def parse_nodes(text: str) -> list:
    """Parse comma-separated cosine values; rationals stay exact, 'f' suffix gives floats."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        out.append(float(tok[:-1]) if tok.endswith(("f", "F")) else Fraction(tok))
    return out


def _angle_float(t) -> float:
    return float(t) * math.pi if isinstance(t, Fraction) else float(t)


def _congruent_zero(value, modulus_pi: Fraction | float, tol: float) -> bool:
    # value: Fraction in units of pi (exact) or float radians
    if isinstance(value, Fraction):
        return (value / modulus_pi).denominator == 1
    ratio = value / (float(modulus_pi) * math.pi)
    return abs(ratio - round(ratio)) <= tol


def _same_class(tj, tk, cj, ck, tol) -> tuple[bool, bool]:
    """(equal, ambiguous) for two entries' cos 2t."""
    if isinstance(tj, Fraction) and isinstance(tk, Fraction):
        return ((tj - tk).denominator == 1 or (tj + tk).denominator == 1), False
    if isinstance(cj, Fraction) and isinstance(ck, Fraction):
        return cj == ck, False
    fj, fk = float(cj), float(ck)
    close = abs(fj - fk) <= tol * max(1.0, abs(fj), abs(fk))
    return close, close and fj != fk


def _build(space, t, cosines, tol, warn_ambiguous=True) -> TorusPoint:
    q = space.q
    if len(cosines) != q:
        raise ValueError(f"expected {q} torus entries, got {len(cosines)}")
    blocks: list[list[int]] = []
    ambiguous = False
    for k in range(q):
        for block in blocks:
            j = block[0]
            equal, amb = _same_class(t[j], t[k], cosines[j], cosines[k], tol)
            if equal:
                ambiguous |= amb
                block.append(k)
                break
        else:
            blocks.append([k])
    if ambiguous and warn_ambiguous:
        warnings.warn("ambiguous float confluence: cosines equal within tolerance "
                      "but not exactly", ConfluenceWarning, stacklevel=3)

    def at(c, target):
        if isinstance(c, Fraction):
            return c == target
        return abs(float(c) - target) <= tol

    plus = [at(c, 1) for c in cosines]
    minus = [at(c, -1) for c in cosines]
    is_regular = all(len(b) == 1 for b in blocks) and not any(plus) and not any(minus)

    if all(v is not None for v in t):
        in_normalizer = True
        for vec, _ in space.positive_roots:
            if all(isinstance(v, Fraction) for v in t):
                value = sum((c * v for c, v in zip(vec, t)), Fraction(0))
            else:
                value = sum(c * _angle_float(v) for c, v in zip(vec, t))
            if not _congruent_zero(value, Fraction(1), tol):
                in_normalizer = False
                break
    else:
        # alpha(X) = 0 mod pi for every root <=> all cos 2t = 1, or p = q and all = -1
        in_normalizer = all(plus) or (space.p == space.q and all(minus))

    return TorusPoint(tuple(t), tuple(cosines), tuple(tuple(b) for b in blocks),
                      is_regular, in_normalizer, all(minus), all(plus))


def classify_point(space: GrassmannianSpace, t, tol: float = CONFLUENCE_TOL) -> TorusPoint:
    """Classify t (a string, or a sequence of Fraction multiples of pi / float radians)."""
    if isinstance(t, str):
        t = parse_point(t)
    angles = []
    cosines = []
    for v in t:
        if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
            v = Fraction(v)
            c = exact_cos2(v)
            cosines.append(c if c is not None else math.cos(2 * math.pi * float(v)))
        else:
            v = float(v)
            cosines.append(math.cos(2 * v))
        angles.append(v)
    return _build(space, angles, cosines, tol)


def point_from_nodes(space: GrassmannianSpace, nodes, tol: float = CONFLUENCE_TOL) -> TorusPoint:
    """A torus point given directly by its cosines x_k = cos 2t_k (the node override)."""
    if isinstance(nodes, str):
        nodes = parse_nodes(nodes)
    cos = []
    for x in nodes:
        x = Fraction(x) if isinstance(x, (int, Fraction)) and not isinstance(x, bool) else float(x)
        if abs(float(x)) > 1:
            raise ValueError(f"node {x} outside [-1, 1]")
        cos.append(x)
    return _build(space, [None] * len(cos), cos, tol)


def identity_point(space: GrassmannianSpace) -> TorusPoint:
    return classify_point(space, [Fraction(0)] * space.q)


# -- degree and Casimir ------------------------------------------------------

def _pairing(vec, coords):
    return sum((c * x for c, x in zip(vec, coords)), Fraction(0))


def degree_surrogate(space: GrassmannianSpace, w: SphericalWeight) -> Fraction:
    """prod over positive roots of (<a, lambda+rho>/<a, rho>)^mult; equals 1 at lambda = 0."""
    shifted = [Fraction(l) + r for l, r in zip(w.coords, space.rho)]
    value = Fraction(1)
    for vec, mult in space.positive_roots:
        value *= (_pairing(vec, shifted) / _pairing(vec, space.rho)) ** mult
    return value


def degree_surrogate_array(space: GrassmannianSpace, n: np.ndarray) -> np.ndarray:
    """Float degree surrogate for a (count, q) array of n-vectors."""
    n = np.asarray(n, dtype=float)
    # lambda + rho = sum (2 n_j + r) e_j
    shifted = 2 * n + space.r
    rho = np.array([float(v) for v in space.rho])
    out = np.ones(n.shape[0])
    for vec, mult in space.positive_roots:
        vec = np.array(vec, dtype=float)
        out *= (shifted @ vec / (rho @ vec)) ** mult
    return out


def casimir(space: GrassmannianSpace, w: SphericalWeight) -> Fraction:
    """<lambda + 2 rho, lambda>."""
    lam = [Fraction(v) for v in w.coords]
    return sum((l * (l + 2 * r) for l, r in zip(lam, space.rho)), Fraction(0))


def casimir_array(space: GrassmannianSpace, n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    q = space.q
    lam = 2 * (n - (q - 1 - np.arange(q)))
    rho = np.array([float(v) for v in space.rho])
    return np.sum(lam * (lam + 2 * rho), axis=1)
