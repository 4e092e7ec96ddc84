"""Numerical divisor classes on a ruled surface X = P(E) over a curve of genus g.

A class ``s*C1 + b*f`` is stored as the pair ``(s, b)``; ``C1^2 = e = deg E``,
``C1.f = 1`` and ``f^2 = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeNotZero, ValidationError


@dataclass(frozen=True)
class NumClass:
    s: int
    b: int

    def __add__(self, other: NumClass) -> NumClass:
        return NumClass(self.s + other.s, self.b + other.b)

    def __sub__(self, other: NumClass) -> NumClass:
        return NumClass(self.s - other.s, self.b - other.b)

    def __mul__(self, k: int) -> NumClass:
        return NumClass(k * self.s, k * self.b)

    __rmul__ = __mul__


FIBER = NumClass(0, 1)
SECTION = NumClass(1, 0)


@dataclass(frozen=True)
class SurfaceContext:
    g: int
    e: int

    def __post_init__(self):
        if self.g < 2:
            raise ValidationError("base genus must be at least 2")

    def canonical(self) -> NumClass:
        """K_X = -2 C1 + (2g - 2 + e) f; reduces to (-2, 2g-2) when e = 0."""
        return NumClass(-2, 2 * self.g - 2 + self.e)


def intersect(ctx: SurfaceContext, d1: NumClass, d2: NumClass) -> int:
    return d1.s * d2.s * ctx.e + d1.s * d2.b + d2.s * d1.b


def selfint(ctx: SurfaceContext, d: NumClass) -> int:
    """``k^2 e + 2 k b`` for ``d = k C1 + b f``."""
    return intersect(ctx, d, d)


def _require_normalized(ctx: SurfaceContext) -> None:
    if ctx.e != 0:
        raise DegreeNotZero(f"needs a degree-0 bundle, got e = {ctx.e}")


def ksection_zero_selfint_condition(ctx: SurfaceContext, k: int, b: int) -> bool:
    """Whether the k-section ``k C1 + b f`` has zero self-intersection (e = 0)."""
    _require_normalized(ctx)
    if k < 1:
        raise ValidationError("k must be positive")
    return selfint(ctx, NumClass(k, b)) == 0


def ksection_genus(g: int, k: int) -> int:
    """Genus of a smooth k-section of zero self-intersection."""
    if k < 1:
        raise ValidationError("k must be positive")
    return k * g - k + 1


def adjunction_genus(ctx: SurfaceContext, d: NumClass) -> int:
    """Arithmetic genus from ``2p - 2 = D.(D + K_X)``."""
    twice = intersect(ctx, d, d + ctx.canonical()) + 2
    if twice % 2:
        raise ValidationError("adjunction produced an odd value")
    return twice // 2


def relative_canonical_triviality(ctx: SurfaceContext, k: int, b: int) -> bool:
    """Numerical shadow of O_D((k-2)C1 + b f) = O_D: ``D.((k-2)C1 + b f) == 0``."""
    _require_normalized(ctx)
    if k < 1:
        raise ValidationError("k must be positive")
    d = NumClass(k, b)
    return intersect(ctx, d, NumClass(k - 2, b)) == 0


def line_subbundle_correspondence(ctx: SurfaceContext, k: int, deg_l: int) -> dict:
    """The k-section class attached to a line subbundle ``L^{-1} -> S^k E`` with deg L = deg_l."""
    if k < 1:
        raise ValidationError("k must be positive")
    d = NumClass(k, deg_l)
    return {"class": {"s": d.s, "b": d.b}, "selfint": selfint(ctx, d)}
