"""Pure-Python orbit kernels (reference implementation and fallback).

Vectors are tuples of integer numerators over a shared ``modulus``; a shift set
is a finite subgroup given by its elements in the same encoding.
"""
from __future__ import annotations

from typing import Iterable, Sequence

Vec = tuple[int, ...]


def orbit_min(vec: Sequence[int], shifts: Sequence[Sequence[int]], modulus: int) -> Vec:
    """Lexicographically least ``(vec + s) mod modulus`` over all shifts ``s``."""
    best: Vec | None = None
    for s in shifts:
        cand = tuple((a + b) % modulus for a, b in zip(vec, s))
        if best is None or cand < best:
            best = cand
    if best is None:
        return tuple(a % modulus for a in vec)
    return best


def batch_orbit_min(vecs: Iterable[Sequence[int]], shifts: Sequence[Sequence[int]], modulus: int) -> list[Vec]:
    return [orbit_min(v, shifts, modulus) for v in vecs]


def count_distinct_orbits(vecs: Iterable[Sequence[int]], shifts: Sequence[Sequence[int]], modulus: int) -> int:
    return len({orbit_min(v, shifts, modulus) for v in vecs})
