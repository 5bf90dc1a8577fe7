"""Cautious correction-pair storage and the two-loop recursion.

The buffer admits a pair (s, y) only when y's exceeds the cautious
threshold c_s * ||s||^2, which keeps every stored pair positively curved
and the implicit BFGS matrix positive definite for any positive seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np


@dataclass(frozen=True)
class UpdatePair:
    """One stored correction: step s, gradient difference y, rho = y's."""

    s: np.ndarray
    y: np.ndarray
    rho: float


class PairBuffer:
    """Ordered ring of at most ``capacity`` pairs, oldest first.

    ``capacity=None`` means unbounded memory; ``capacity=0`` admits the
    cautious check but never retains anything.
    """

    def __init__(self, capacity: int | None):
        if capacity is not None and capacity < 0:
            raise ValueError("capacity must be >= 0 or None")
        self.capacity = capacity
        self._pairs: list[UpdatePair] = []

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self) -> Iterator[UpdatePair]:
        return iter(self._pairs)

    @property
    def pairs(self) -> tuple[UpdatePair, ...]:
        return tuple(self._pairs)

    def append(self, pair: UpdatePair) -> None:
        if self.capacity == 0:
            return
        self._pairs.append(pair)
        if self.capacity is not None and len(self._pairs) > self.capacity:
            self._pairs.pop(0)


def maybe_store(buf: PairBuffer, s: np.ndarray, y: np.ndarray, c_s: float) -> bool:
    """Admit (s, y) iff y's > c_s * ||s||^2; returns the acceptance flag.

    Admission evicts the oldest pair when the buffer is at capacity.
    Rejection is a normal outcome, not an error.
    """
    if c_s <= 0:
        raise ValueError("c_s must be > 0")
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    rho = float(y @ s)
    accepted = rho > c_s * float(s @ s)
    if accepted:
        buf.append(UpdatePair(s=s.copy(), y=y.copy(), rho=rho))
    return accepted


def two_loop_direction(
    g: np.ndarray,
    buf: PairBuffer,
    seed_solve: Callable[[np.ndarray], np.ndarray],
) -> np.ndarray:
    """Quasi-Newton direction d = -(B)^(-1) g via the two-loop recursion.

    ``seed_solve`` applies the inverse of the seed matrix (exactly or
    approximately); the stored pairs supply the rank-two updates, oldest
    to newest. An empty buffer returns ``-seed_solve(g)`` unchanged.
    """
    pairs = buf.pairs
    q = np.asarray(g, dtype=float).copy()
    alphas = np.empty(len(pairs))
    for i in range(len(pairs) - 1, -1, -1):
        p = pairs[i]
        if p.rho <= 0:
            raise RuntimeError("stored pair with non-positive curvature")
        alphas[i] = (p.s @ q) / p.rho
        q -= alphas[i] * p.y
    r = seed_solve(q)
    for i, p in enumerate(pairs):
        beta = (p.y @ r) / p.rho
        r = r + (alphas[i] - beta) * p.s
    return -r
