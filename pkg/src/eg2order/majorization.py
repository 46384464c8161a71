"""Vector majorization, T-transforms and chain-majorization paths.

Majorization uses the usual largest-first convention: ``y`` majorizes ``x``
when the sums agree and every prefix sum of ``sorted(y, reverse=True)`` is at
least the matching prefix sum of ``x``.

T-transform indices are 1-based, as in the matrix notation they model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from eg2order.core import DomainError

# comparisons are done with absolute tolerance TOL * max(1, |total|)
TOL = 1e-12


def _vector(v):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def prefix_sums(v):
    """Prefix sums of ``v`` sorted in nonincreasing order."""
    return np.cumsum(np.sort(_vector(v))[::-1])


def majorizes(y, x, tol=TOL):
    """True when ``y`` majorizes ``x``."""
    y, x = _vector(y), _vector(x)
    if y.shape != x.shape:
        raise ValueError(f"length mismatch: {y.size} vs {x.size}")
    py, px = prefix_sums(y), prefix_sums(x)
    slack = tol * max(1.0, abs(py[-1]), abs(px[-1]))
    if abs(py[-1] - px[-1]) > slack:
        return False
    return bool(np.all(py[:-1] >= px[:-1] - slack))


@dataclass(frozen=True)
class ParamMatrix:
    """2 x n matrix with the alphas in the first row and thetas in the second."""

    alphas: tuple
    thetas: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.alphas)
        t = tuple(float(v) for v in self.thetas)
        if len(a) != len(t):
            raise ValueError("rows must have equal length")
        if len(a) < 2:
            raise ValueError("need at least two columns")
        if not all(np.isfinite(v) and v > 0 for v in a + t):
            raise DomainError("matrix entries must be finite and > 0")
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "thetas", t)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != 2:
            raise ValueError(f"expected a 2 x n array, got shape {arr.shape}")
        return cls(tuple(arr[0]), tuple(arr[1]))

    @property
    def n(self):
        return len(self.alphas)

    def as_array(self):
        return np.array([self.alphas, self.thetas])

    def max_abs_diff(self, other):
        return float(np.max(np.abs(self.as_array() - other.as_array())))


def row_majorizes(a: ParamMatrix, b: ParamMatrix, tol=TOL):
    """Row majorization: each row of ``a`` majorizes the same row of ``b``."""
    if a.n != b.n:
        raise ValueError("shape mismatch")
    return majorizes(a.alphas, b.alphas, tol) and majorizes(a.thetas, b.thetas, tol)


def is_permutation_matrix(m, tol=TOL):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or not np.all(np.isfinite(m)):
        return False
    ones = np.abs(m - 1.0) <= tol
    zeros = np.abs(m) <= tol
    if not np.all(ones | zeros):
        return False
    return bool(np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1))


def is_doubly_stochastic(m, tol=TOL):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or not np.all(np.isfinite(m)):
        return False
    return bool(np.all(m >= -tol)
                and np.all(np.abs(m.sum(axis=0) - 1.0) <= tol)
                and np.all(np.abs(m.sum(axis=1) - 1.0) <= tol))


@dataclass(frozen=True)
class TTransform:
    """``w I + (1 - w) P`` where ``P`` swaps coordinates ``i`` and ``j`` (1-based)."""

    n: int
    i: int
    j: int
    w: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("order must be at least 2")
        if not (1 <= self.i <= self.n and 1 <= self.j <= self.n) or self.i == self.j:
            raise ValueError(f"need distinct indices in 1..{self.n}, got ({self.i}, {self.j})")
        if not (0.0 <= self.w <= 1.0):
            raise ValueError(f"weight must lie in [0, 1], got {self.w}")
        object.__setattr__(self, "w", float(self.w))

    @property
    def structure(self):
        return tuple(sorted((self.i, self.j)))


def t_transform_matrix(t: TTransform):
    swap = np.eye(t.n)
    a, b = t.i - 1, t.j - 1
    swap[[a, b]] = swap[[b, a]]
    return t.w * np.eye(t.n) + (1.0 - t.w) * swap


def _apply_one(arr, t):
    # right-multiplying by a T-transform only mixes columns i and j
    out = arr.copy()
    a, b = t.i - 1, t.j - 1
    out[:, a] = t.w * arr[:, a] + (1.0 - t.w) * arr[:, b]
    out[:, b] = (1.0 - t.w) * arr[:, a] + t.w * arr[:, b]
    return out


def apply_transforms(a: ParamMatrix, ts: Sequence[TTransform]):
    """``a @ T_1 @ ... @ T_k``."""
    arr = a.as_array()
    for t in ts:
        if t.n != a.n:
            raise ValueError(f"transform of order {t.n} applied to a matrix with {a.n} columns")
        arr = _apply_one(arr, t)
    return ParamMatrix.from_array(arr)


def _opposite_order(a: ParamMatrix, tol):
    al, th = np.asarray(a.alphas), np.asarray(a.thetas)
    prod = (al[:, None] - al[None, :]) * (th[:, None] - th[None, :])
    scale = max(1.0, float(np.max(al)) * float(np.max(th)))
    return bool(np.all(prod <= tol * scale))


def in_S_n(a: ParamMatrix, tol=TOL):
    """Positive entries with oppositely ordered rows."""
    return _opposite_order(a, tol)


def in_T_n(a: ParamMatrix, tol=TOL):
    """Oppositely ordered rows with every alpha >= 1."""
    return _opposite_order(a, tol) and all(v >= 1.0 - tol for v in a.alphas)


def recover_t_transform_2x2(a: ParamMatrix, b: ParamMatrix, tol=1e-10) -> Optional[float]:
    """Weight ``w`` with ``b = a (w I + (1 - w) P)`` for 2 x 2 matrices, or None."""
    if a.n != 2 or b.n != 2:
        raise ValueError("only defined for 2 x 2 matrices")
    A, B = a.as_array(), b.as_array()
    d = A[:, 0] - A[:, 1]
    if np.all(np.abs(d) <= tol):
        return 1.0 if np.allclose(A, B, rtol=0, atol=tol) else None
    # b[:,0] = w a[:,0] + (1-w) a[:,1]  =>  w = (b0 - a1) / (a0 - a1); use the best-conditioned row
    r = int(np.argmax(np.abs(d)))
    w = (B[r, 0] - A[r, 1]) / d[r]
    if w < -tol or w > 1 + tol:
        return None
    w = min(max(w, 0.0), 1.0)
    candidate = _apply_one(A, TTransform(2, 1, 2, w))
    if np.max(np.abs(candidate - B)) > tol * max(1.0, float(np.max(np.abs(B)))):
        return None
    return float(w)


@dataclass(frozen=True)
class ChainStep:
    transform: TTransform
    matrix: ParamMatrix
    member: bool


@dataclass(frozen=True)
class ChainReport:
    start: ParamMatrix
    start_member: bool
    target_set: str
    steps: tuple = field(default_factory=tuple)

    @property
    def final(self):
        return self.steps[-1].matrix if self.steps else self.start

    @property
    def all_members(self):
        """Start and every intermediate (all but the last product) are in the set."""
        return self.start_member and all(s.member for s in self.steps[:-1])

    @property
    def failed_step(self):
        """1-based index of the first intermediate outside the set, 0 for the start."""
        if not self.start_member:
            return 0
        for k, s in enumerate(self.steps[:-1], start=1):
            if not s.member:
                return k
        return None

    @property
    def same_structure(self):
        return len({s.transform.structure for s in self.steps}) <= 1


def verify_chain_path(a: ParamMatrix, ts: Sequence[TTransform], target_set="S"):
    """Apply ``ts`` stepwise and record membership of every product in S_n or T_n."""
    target_set = str(target_set).upper()
    if target_set not in ("S", "T"):
        raise ValueError("set must be 'S' or 'T'")
    member = in_S_n if target_set == "S" else in_T_n
    steps = []
    cur = a
    for t in ts:
        cur = apply_transforms(cur, [t])
        steps.append(ChainStep(t, cur, member(cur)))
    return ChainReport(a, member(a), target_set, tuple(steps))
