"""Exact classical (local hidden variable) game value by exhaustive enumeration.

Deterministic strategies achieve the classical maximum, so enumerating all
``n_a^n_x * n_b^n_y`` response-function pairs is an exact oracle. A guard
keeps the enumeration tractable; all catalog games need at most 81 pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import RangeError, TooLargeError
from .games import GameSpec

ENUMERATION_GUARD = 10_000_000
TIE_ATOL = 1e-12


@dataclass(frozen=True)
class DeterministicStrategy:
    """A pair of response functions, input index -> output index."""

    f_a: tuple[int, ...]
    f_b: tuple[int, ...]


def strategy_value(spec: GameSpec, strategy: DeterministicStrategy) -> float:
    """Expected score sum_{x,y} pi(x,y) V(f_a(x), f_b(y) | x, y)."""
    if len(strategy.f_a) != spec.n_x or len(strategy.f_b) != spec.n_y:
        raise RangeError("response function length does not match the input sets")
    if any(not 0 <= a < spec.n_a for a in strategy.f_a):
        raise RangeError(f"Alice outputs {strategy.f_a} outside range(0, {spec.n_a})")
    if any(not 0 <= b < spec.n_b for b in strategy.f_b):
        raise RangeError(f"Bob outputs {strategy.f_b} outside range(0, {spec.n_b})")
    total = 0.0
    for x in range(spec.n_x):
        fa = strategy.f_a[x]
        for y in range(spec.n_y):
            total += spec.input_dist[x, y] * spec.predicate[x, y, fa, strategy.f_b[y]]
    return total


def classical_value(spec: GameSpec) -> tuple[float, list[DeterministicStrategy]]:
    """Maximum over deterministic strategies, with every maximizer.

    Enumeration order is lexicographic (Alice's function in the outer loop),
    so the maximizer list is deterministic. Ties within ``TIE_ATOL`` of the
    maximum are all reported.
    """
    count = spec.n_a ** spec.n_x * spec.n_b ** spec.n_y
    if count > ENUMERATION_GUARD:
        raise TooLargeError(
            f"{count} deterministic strategies exceed the guard of {ENUMERATION_GUARD}"
        )
    best = float("-inf")
    maximizers: list[DeterministicStrategy] = []
    for f_a in product(range(spec.n_a), repeat=spec.n_x):
        for f_b in product(range(spec.n_b), repeat=spec.n_y):
            s = DeterministicStrategy(f_a=f_a, f_b=f_b)
            value = strategy_value(spec, s)
            if value > best + TIE_ATOL:
                best = value
                maximizers = [s]
            elif value >= best - TIE_ATOL:
                maximizers.append(s)
                if value > best:
                    best = value
    return best, maximizers
