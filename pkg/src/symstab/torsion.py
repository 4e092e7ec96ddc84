"""Exact arithmetic in (Q/Z)^n.

Torsion points of a Jacobian of genus g are modelled as vectors in (Q/Z)^{2g}.
Coordinates are exact rationals kept in the half-open interval [0, 1), so two
vectors are equal exactly when their coordinate tuples are equal.
"""
from __future__ import annotations

import contextlib
import contextvars
import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, ValidationError

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "SYMSTAB_BUDGET"

_budget_override: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "symstab_budget", default=None
)


def get_budget() -> int:
    """Current enumeration budget: explicit override, then env var, then default."""
    value = _budget_override.get()
    if value is not None:
        return value
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"{BUDGET_ENV} must be an integer, got {env!r}") from exc
    return DEFAULT_BUDGET


@contextlib.contextmanager
def budget(limit: int):
    """Temporarily set the enumeration budget."""
    if limit < 1:
        raise ValidationError("budget must be positive")
    token = _budget_override.set(limit)
    try:
        yield limit
    finally:
        _budget_override.reset(token)


def check_budget(size: int, limit: int | None = None) -> None:
    limit = get_budget() if limit is None else limit
    if size > limit:
        raise BudgetExceeded(size, limit)


class RatMod1:
    """A rational number reduced modulo 1, stored as coprime ``num/den``."""

    __slots__ = ("num", "den")

    num: int
    den: int

    def __init__(self, num: int | Fraction | str | RatMod1 = 0, den: int = 1):
        if isinstance(num, RatMod1):
            n, d = num.num, num.den
        elif isinstance(num, str):
            f = Fraction(num.strip())
            n, d = f.numerator, f.denominator
        elif isinstance(num, Fraction):
            if den != 1:
                raise TypeError("den is not accepted together with a Fraction")
            n, d = num.numerator, num.denominator
        else:
            if den == 0:
                raise ZeroDivisionError("denominator must be nonzero")
            if den < 0:
                num, den = -num, -den
            g = math.gcd(num, den)
            n, d = num // g, den // g
        object.__setattr__(self, "num", n % d)
        object.__setattr__(self, "den", d)

    def __setattr__(self, name, value):
        raise AttributeError("RatMod1 is immutable")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other: RatMod1) -> RatMod1:
        if not isinstance(other, RatMod1):
            return NotImplemented
        return RatMod1(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: RatMod1) -> RatMod1:
        if not isinstance(other, RatMod1):
            return NotImplemented
        return RatMod1(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> RatMod1:
        return RatMod1(-self.num, self.den)

    def __mul__(self, k: int) -> RatMod1:
        if not isinstance(k, int):
            return NotImplemented
        return RatMod1(self.num * k, self.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, RatMod1):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __lt__(self, other: RatMod1) -> bool:
        return self.num * other.den < other.num * self.den

    def __le__(self, other: RatMod1) -> bool:
        return self.num * other.den <= other.num * self.den

    def order(self) -> int:
        return self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"RatMod1({self.num}/{self.den})"


@dataclass(frozen=True)
class TorsionVector:
    """Element of (Q/Z)^rank with canonical coordinates."""

    coords: tuple[RatMod1, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValidationError("a torsion vector needs at least one coordinate")
        if not all(isinstance(c, RatMod1) for c in self.coords):
            object.__setattr__(self, "coords", tuple(RatMod1(c) for c in self.coords))

    @classmethod
    def of(cls, *values) -> TorsionVector:
        """Build from numbers or strings: ``TorsionVector.of("1/2", 0, Fraction(1, 3))``."""
        if len(values) == 1 and not isinstance(values[0], (int, str, Fraction, RatMod1)):
            values = tuple(values[0])
        return cls(tuple(RatMod1(Fraction(v) if isinstance(v, int) else v) for v in values))

    @classmethod
    def zero(cls, rank: int) -> TorsionVector:
        return cls(tuple(RatMod1(0) for _ in range(rank)))

    @classmethod
    def from_ints(cls, nums: Sequence[int], modulus: int) -> TorsionVector:
        return cls(tuple(RatMod1(n, modulus) for n in nums))

    @classmethod
    def basis(cls, rank: int, index: int, n: int) -> TorsionVector:
        """The vector with ``1/n`` at ``index`` and zeros elsewhere."""
        return cls(tuple(RatMod1(1 if i == index else 0, n) for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def _check(self, other: TorsionVector) -> None:
        if other.rank != self.rank:
            raise ValidationError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: TorsionVector) -> TorsionVector:
        if not isinstance(other, TorsionVector):
            return NotImplemented
        self._check(other)
        return TorsionVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: TorsionVector) -> TorsionVector:
        if not isinstance(other, TorsionVector):
            return NotImplemented
        self._check(other)
        return TorsionVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> TorsionVector:
        return TorsionVector(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> TorsionVector:
        if not isinstance(k, int):
            return NotImplemented
        return TorsionVector(tuple(a * k for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.num == 0 for c in self.coords)

    def order(self) -> int:
        return math.lcm(*(c.den for c in self.coords))

    def key(self) -> tuple[Fraction, ...]:
        """Sort key: coordinates as exact values, compared lexicographically."""
        return tuple(c.value for c in self.coords)

    def __lt__(self, other: TorsionVector) -> bool:
        return self.key() < other.key()

    def to_ints(self, modulus: int) -> tuple[int, ...]:
        """Numerators over a common ``modulus`` (which must be a multiple of the order)."""
        out = []
        for c in self.coords:
            q, r = divmod(modulus, c.den)
            if r:
                raise ValidationError(f"modulus {modulus} is not a multiple of {c.den}")
            out.append(c.num * q)
        return tuple(out)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str | int]) -> TorsionVector:
        if isinstance(data, str):
            data = [s for s in data.split(",")]
        if not isinstance(data, (list, tuple)) or not data:
            raise ValidationError(f"expected a nonempty list of rationals, got {data!r}")
        try:
            return cls(tuple(RatMod1(Fraction(x) if isinstance(x, int) else str(x)) for x in data))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rational in {data!r}: {exc}") from exc

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"TorsionVector{self}"


def order(v: TorsionVector) -> int:
    """Least n >= 1 with n*v = 0."""
    return v.order()


def torsion_count(rank: int, n: int) -> int:
    """Size of the n-torsion subgroup of (Q/Z)^rank."""
    if rank < 1 or n < 1:
        raise ValidationError("rank and n must be positive")
    return n**rank


def enumerate_torsion(rank: int, n: int, limit: int | None = None) -> Iterator[TorsionVector]:
    """Yield every n-torsion vector once, in lexicographic order of coordinate values."""
    check_budget(torsion_count(rank, n), limit)
    steps = [RatMod1(i, n) for i in range(n)]
    for combo in itertools.product(steps, repeat=rank):
        yield TorsionVector(combo)


def subgroup_closure(generators: Iterable[TorsionVector], rank: int | None = None) -> frozenset[TorsionVector]:
    """All elements of the finite subgroup generated by ``generators``."""
    gens = list(generators)
    if rank is None:
        if not gens:
            raise ValidationError("rank is required when there are no generators")
        rank = gens[0].rank
    for gvec in gens:
        if gvec.rank != rank:
            raise ValidationError("all generators must share one rank")
    bound = math.prod(gvec.order() for gvec in gens) if gens else 1
    check_budget(bound)
    elements = {TorsionVector.zero(rank)}
    for gvec in gens:
        if gvec in elements:
            continue
        multiples = [gvec * i for i in range(gvec.order())]
        elements = {e + m for e in elements for m in multiples}
    return frozenset(elements)


def subgroup_membership(v: TorsionVector, generators: Sequence[TorsionVector]) -> bool:
    """True iff v lies in the subgroup generated by ``generators``."""
    for gvec in generators:
        v._check(gvec)
    return v in subgroup_closure(generators, rank=v.rank)


def transform(matrix: Sequence[Sequence[int]], v: TorsionVector) -> TorsionVector:
    """Apply an integer matrix to v (homomorphism of (Q/Z)^n)."""
    if len(matrix[0]) != v.rank:
        raise ValidationError("matrix width does not match vector rank")
    out = []
    for row in matrix:
        acc = RatMod1(0)
        for coef, c in zip(row, v.coords):
            if coef:
                acc = acc + c * coef
        out.append(acc)
    return TorsionVector(tuple(out))
