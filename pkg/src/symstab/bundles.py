"""Rank-2 bundle descriptors with trivial determinant and their symmetric powers.

Only decomposable data is expanded explicitly. Stability of a pushforward
descriptor is never decided here; see :mod:`symstab.classify`.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .covering import CoveringModel, TorsionClass, in_pullback_image, norm
from .errors import InvalidDescriptor, NotTorsion, ValidationError
from .torsion import TorsionVector


@dataclass(frozen=True)
class LineClass:
    """A line bundle on C: degree, torsion part, and free formal generators.

    ``formal`` is a sorted tuple of ``(symbol, exponent)`` with nonzero
    exponents; formal symbols stand for non-torsion degree-0 classes.
    """

    degree: int
    torsion: TorsionVector
    formal: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        merged: Counter = Counter()
        for sym, exp in self.formal:
            merged[str(sym)] += int(exp)
        object.__setattr__(self, "formal", tuple(sorted((s, e) for s, e in merged.items() if e)))

    @classmethod
    def trivial(cls, rank: int) -> LineClass:
        return cls(0, TorsionVector.zero(rank))

    @classmethod
    def torsion_class(cls, v: TorsionVector) -> LineClass:
        return cls(0, v)

    @classmethod
    def generator(cls, rank: int, symbol: str, degree: int = 0) -> LineClass:
        return cls(degree, TorsionVector.zero(rank), ((symbol, 1),))

    @property
    def rank(self) -> int:
        return self.torsion.rank

    def _check(self, other: LineClass) -> None:
        if other.rank != self.rank:
            raise ValidationError("line classes on curves of different genus")

    def __add__(self, other: LineClass) -> LineClass:
        """Tensor product (written additively)."""
        self._check(other)
        return LineClass(self.degree + other.degree, self.torsion + other.torsion, self.formal + other.formal)

    def __sub__(self, other: LineClass) -> LineClass:
        return self + (-other)

    def __neg__(self) -> LineClass:
        return LineClass(-self.degree, -self.torsion, tuple((s, -e) for s, e in self.formal))

    def __mul__(self, k: int) -> LineClass:
        return LineClass(k * self.degree, self.torsion * k, tuple((s, k * e) for s, e in self.formal))

    __rmul__ = __mul__

    def is_trivial(self) -> bool:
        return self.degree == 0 and not self.formal and self.torsion.is_zero()

    def is_torsion(self) -> bool:
        return self.degree == 0 and not self.formal

    def order(self) -> int:
        if not self.is_torsion():
            raise NotTorsion(f"{self} is not a torsion class")
        return self.torsion.order()

    def key(self):
        return (self.degree, self.torsion.key(), self.formal)

    def __lt__(self, other: LineClass) -> bool:
        return self.key() < other.key()

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "torsion": self.torsion.to_json(),
            "formal": {s: e for s, e in self.formal},
        }

    @classmethod
    def from_json(cls, data) -> LineClass:
        if isinstance(data, list):
            return cls(0, TorsionVector.from_json(data))
        if not isinstance(data, dict) or "torsion" not in data:
            raise InvalidDescriptor(f"bad line class: {data!r}")
        formal = data.get("formal") or {}
        if not isinstance(formal, dict):
            raise InvalidDescriptor("formal part must be an object of symbol -> exponent")
        try:
            return cls(int(data.get("degree", 0)), TorsionVector.from_json(data["torsion"]),
                       tuple((s, int(e)) for s, e in formal.items()))
        except (TypeError, ValueError) as exc:
            raise InvalidDescriptor(f"bad line class: {data!r}") from exc

    def __str__(self) -> str:
        parts = [str(self.torsion)]
        if self.degree:
            parts.insert(0, f"deg {self.degree}")
        parts += [f"{s}^{e}" for s, e in self.formal]
        return "<" + " ".join(parts) + ">"


@dataclass(frozen=True)
class Split:
    """E = L^{-1} + L."""

    L: LineClass

    @property
    def genus(self) -> int:
        return self.L.rank // 2

    def to_json(self) -> dict:
        return {"split": self.L.to_json()}


@dataclass(frozen=True)
class PushforwardTwist:
    """E = pi_* R (x) A on a double cover, with 2A = ell and R in the Norm kernel."""

    cov: CoveringModel
    R: TorsionClass
    A: LineClass

    def __post_init__(self):
        if self.cov.degree != 2:
            raise InvalidDescriptor("pushforward descriptors need a double cover")
        if self.R.cov != self.cov:
            raise InvalidDescriptor("R does not live on the given cover")
        if not self.A.is_torsion() or self.A * 2 != LineClass(0, self.cov.ell):
            raise InvalidDescriptor("twist A must be torsion with A^2 = ell")
        if not norm(self.cov, self.R).is_zero():
            raise InvalidDescriptor("R must have trivial norm so that det E is trivial")

    @property
    def genus(self) -> int:
        return self.cov.base_genus

    def to_json(self) -> dict:
        return {"pushforward": {"cov": self.cov.to_json(), "R": self.R.to_json(), "A": self.A.to_json()}}


@dataclass(frozen=True)
class FormalStable:
    """A bundle postulated stable with stable S^2; carries only a label."""

    tag: str
    genus: int | None = None

    def to_json(self) -> dict:
        if self.genus is None:
            return {"formal": self.tag}
        return {"formal": {"tag": self.tag, "genus": self.genus}}


@dataclass(frozen=True)
class S2TriplePushforward:
    """A presentation S^2 E = eta_* M for a cyclic triple cover eta and 2-torsion M."""

    cov: CoveringModel
    M: TorsionClass

    def __post_init__(self):
        if self.cov.degree != 3:
            raise InvalidDescriptor("the S^2 presentation needs a cyclic triple cover")
        if self.M.cov != self.cov:
            raise InvalidDescriptor("M does not live on the given cover")
        if not (self.M * 2).is_zero():
            raise InvalidDescriptor("M must be 2-torsion")

    @property
    def genus(self) -> int:
        return self.cov.base_genus

    def M_in_pullback_image(self) -> bool:
        return in_pullback_image(self.cov, self.M)

    def to_json(self) -> dict:
        return {"s2_pushforward": {"cov": self.cov.to_json(), "M": self.M.to_json()}}


BundleDescriptor = Union[Split, PushforwardTwist, FormalStable, S2TriplePushforward]


def descriptor_from_json(data) -> BundleDescriptor:
    if not isinstance(data, dict) or len(data) != 1:
        raise InvalidDescriptor(f"expected one of split/pushforward/formal/s2_pushforward, got {data!r}")
    (kind, body), = data.items()
    if kind == "split":
        return Split(LineClass.from_json(body))
    if kind == "formal":
        if isinstance(body, dict):
            genus = body.get("genus")
            return FormalStable(str(body.get("tag", "")), None if genus is None else int(genus))
        return FormalStable(str(body))
    if kind in ("pushforward", "s2_pushforward"):
        if not isinstance(body, dict) or "cov" not in body:
            raise InvalidDescriptor(f"{kind} needs a cov entry")
        cov = CoveringModel.from_json(body["cov"])
        try:
            if kind == "pushforward":
                return PushforwardTwist(cov, TorsionClass.from_json(cov, body["R"]), LineClass.from_json(body["A"]))
            return S2TriplePushforward(cov, TorsionClass.from_json(cov, body["M"]))
        except KeyError as exc:
            raise InvalidDescriptor(f"{kind} is missing {exc}") from exc
    raise InvalidDescriptor(f"unknown descriptor kind {kind!r}")


def descriptor_genus(E: BundleDescriptor) -> int | None:
    return getattr(E, "genus", None)


@dataclass(frozen=True)
class SymDecomp:
    """Direct sum of line bundles, stored as a sorted multiset."""

    parts: tuple[tuple[LineClass, int], ...] = field(default=())

    @classmethod
    def of(cls, lines: Iterable[LineClass]) -> SymDecomp:
        counts = Counter(lines)
        return cls(tuple(sorted(counts.items(), key=lambda kv: kv[0].key())))

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.parts)

    @property
    def degree(self) -> int:
        return sum(line.degree * n for line, n in self.parts)

    def lines(self) -> list[LineClass]:
        return [line for line, n in self.parts for _ in range(n)]

    def twist(self, N: LineClass) -> SymDecomp:
        return SymDecomp.of(line + N for line in self.lines())

    def __add__(self, other: SymDecomp) -> SymDecomp:
        return SymDecomp.of(self.lines() + other.lines())

    def determinant(self) -> LineClass:
        lines = self.lines()
        total = lines[0]
        for line in lines[1:]:
            total = total + line
        return total

    def to_json(self) -> list:
        return [{"line": line.to_json(), "multiplicity": n} for line, n in self.parts]


def sym_power_split(L: LineClass, k: int) -> SymDecomp:
    """S^k(L^{-1} + L) = sum of L^{k-2i} for i = 0..k."""
    if k < 0:
        raise ValidationError("k must be nonnegative")
    return SymDecomp.of(L * (k - 2 * i) for i in range(k + 1))


def sym_power_pair(L1: LineClass, L2: LineClass, k: int) -> SymDecomp:
    """S^k(L1 + L2) = sum of L1^{k-i} L2^i for i = 0..k."""
    if k < 0:
        raise ValidationError("k must be nonnegative")
    return SymDecomp.of(L1 * (k - i) + L2 * i for i in range(k + 1))


def slope(rank: int, degree: int) -> Fraction:
    if rank < 1:
        raise ValidationError("rank must be positive")
    return Fraction(degree, rank)


class Stability(enum.Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    UNSTABLE = "Unstable"


def split_stability(d: SymDecomp) -> Stability:
    if d.rank < 1:
        raise ValidationError("empty decomposition")
    if d.rank == 1:
        return Stability.STABLE
    mu = slope(d.rank, d.degree)
    if any(Fraction(line.degree) > mu for line, _ in d.parts):
        return Stability.UNSTABLE
    return Stability.STRICTLY_SEMISTABLE


def tensor_square_split(E: BundleDescriptor) -> dict:
    """Bookkeeping for E (x) E = O + S^2 E.

    Ranks and determinants are checked for every descriptor; for a split
    bundle both sides are also expanded and compared as multisets.
    """
    record = {"rank_lhs": 4, "rank_rhs": 1 + 3, "det_lhs_trivial": True, "det_rhs_trivial": True}
    if isinstance(E, Split):
        L = E.L
        zero = LineClass.trivial(L.rank)
        lhs = SymDecomp.of([L * 2, zero, zero, L * -2])
        rhs = SymDecomp.of([zero]) + sym_power_split(L, 2)
        record.update(
            lhs=lhs.to_json(),
            rhs=rhs.to_json(),
            multiset_equal=lhs == rhs,
            det_lhs_trivial=lhs.determinant().is_trivial(),
            det_rhs_trivial=rhs.determinant().is_trivial(),
        )
    record["holds"] = record["rank_lhs"] == record["rank_rhs"] and record.get("multiset_equal", True)
    return record


def sym_sequence_bookkeeping(n: int, m: int) -> dict:
    """Ranks/degrees in 0 -> S^{n-1}E(x)S^{m-1}E -> S^nE(x)S^mE -> S^{n+m}E -> 0."""
    if n < 1 or m < 1:
        raise ValidationError("n and m must be at least 1")
    rows = [
        {"term": f"S^{n - 1} (x) S^{m - 1}", "rank": n * m, "degree": 0},
        {"term": f"S^{n} (x) S^{m}", "rank": (n + 1) * (m + 1), "degree": 0},
        {"term": f"S^{n + m}", "rank": n + m + 1, "degree": 0},
    ]
    ok = rows[0]["rank"] + rows[2]["rank"] == rows[1]["rank"]
    return {"rows": rows, "rank_additive": ok, "degree_additive": True}


def orthogonality_values(E: BundleDescriptor) -> frozenset[LineClass]:
    """Line bundles M such that E carries a nondegenerate symmetric form with values in M."""
    if isinstance(E, Split):
        return frozenset({LineClass.trivial(E.L.rank)})
    if isinstance(E, PushforwardTwist):
        return frozenset({LineClass(0, E.cov.ell)})
    if isinstance(E, (FormalStable, S2TriplePushforward)):
        return frozenset()
    raise InvalidDescriptor(f"not a bundle descriptor: {E!r}")
