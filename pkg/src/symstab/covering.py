"""Unramified cyclic coverings B -> C at the level of torsion points.

The torsion of J^0(B) is presented as a quotient

    (Q/Z)^{2g}  x  (Q/Z)^{prym_rank}   /   K,     K = {(d, psi(d)) : d in H},

where the first factor is pulled back from C and the second is the Prym block.
For a double cover, ``H`` is the index-2 subgroup of J_2(C) whose pullbacks
land in the identity component of the Norm kernel, and ``psi`` records which
Prym 2-torsion point each of them becomes. The model is fixed in coordinates
where the defining class is ``(1/m, 0, ..., 0)`` and transported back to the
caller's coordinates by an integer unimodular change of basis.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

from . import kernels
from .errors import (
    NotDoubleCover,
    NotTwoTorsion,
    TrivialClass,
    UnsupportedDegree,
    ValidationError,
)
from .torsion import RatMod1, TorsionVector, check_budget, enumerate_torsion, transform

SUPPORTED_DEGREES = (2, 3)


class PrymLocation(enum.Enum):
    NOT_IN_PRYM = "NotInPrym"
    PRYM0 = "Prym0"
    PRYM1 = "Prym1"


def aligning_matrix(c: list[int], m: int) -> tuple[list[list[int]], list[list[int]]]:
    """Unimodular ``U`` (with inverse) such that ``U @ c == e_1 (mod m)``.

    ``c`` holds the numerators of an order-``m`` class over denominator ``m``;
    ``m`` must be prime.
    """
    n = len(c)
    v = [x % m for x in c]
    if not any(v):
        raise ValidationError("cannot align the zero class")
    if math.gcd(*v) != 1:
        # entries share a factor d < m coprime to m; shifting one entry by m fixes gcd
        v[0] += m
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Uinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def sub_row(i: int, j: int, q: int) -> None:
        # v_i -= q v_j ; U row_i -= q row_j ; Uinv col_j += q col_i
        v[i] -= q * v[j]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]
        for row in Uinv:
            row[j] += q * row[i]

    while sum(1 for x in v if x) > 1:
        j = min((i for i in range(n) if v[i]), key=lambda i: abs(v[i]))
        for i in range(n):
            if i != j and v[i]:
                sub_row(i, j, v[i] // v[j])
    j = next(i for i in range(n) if v[i])
    if j != 0:
        v[0], v[j] = v[j], v[0]
        U[0], U[j] = U[j], U[0]
        for row in Uinv:
            row[0], row[j] = row[j], row[0]
    if v[0] == -1:
        v[0] = 1
        U[0] = [-a for a in U[0]]
        for row in Uinv:
            row[0] = -row[0]
    assert v[0] == 1
    return U, Uinv


@dataclass(frozen=True)
class CoveringModel:
    """Torsion-level model of the unramified cyclic cover defined by ``ell``."""

    base_genus: int
    degree: int
    ell: TorsionVector
    cover_genus: int = field(init=False)
    prym_rank: int = field(init=False)
    _U: tuple = field(init=False, repr=False, compare=False)
    _Uinv: tuple = field(init=False, repr=False, compare=False)
    _H: tuple = field(init=False, repr=False, compare=False)
    _shift_cache: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        g, m = self.base_genus, self.degree
        if g < 2:
            raise ValidationError("base genus must be at least 2")
        if m not in SUPPORTED_DEGREES:
            raise UnsupportedDegree(f"cyclic covers of degree {m} are not modelled")
        if self.ell.rank != 2 * g:
            raise ValidationError(f"defining class must have rank {2 * g}")
        if self.ell.order() != m:
            raise ValidationError(f"defining class must have order exactly {m}")
        object.__setattr__(self, "cover_genus", m * (g - 1) + 1)
        object.__setattr__(self, "prym_rank", 2 * (m - 1) * (g - 1))
        U, Uinv = aligning_matrix(list(self.ell.to_ints(m)), m)
        object.__setattr__(self, "_U", tuple(tuple(r) for r in U))
        object.__setattr__(self, "_Uinv", tuple(tuple(r) for r in Uinv))
        # H in aligned coordinates: m-torsion with last coordinate 0
        check_budget(m ** (2 * g - 1))
        H = []
        for head in itertools.product(range(m), repeat=2 * g - 1):
            aligned = TorsionVector.from_ints(head + (0,), m)
            H.append(transform(self._Uinv, aligned))
        object.__setattr__(self, "_H", tuple(sorted(H)))

    @property
    def base_rank(self) -> int:
        return 2 * self.base_genus

    @property
    def H(self) -> tuple[TorsionVector, ...]:
        """Elements of the gluing subgroup's base projection, sorted."""
        return self._H

    def align(self, a: TorsionVector) -> TorsionVector:
        return transform(self._U, a)

    def in_H(self, a: TorsionVector) -> bool:
        if (a * self.degree).is_zero() is False:
            return False
        return self.align(a).coords[-1].num == 0

    def psi(self, a: TorsionVector) -> TorsionVector:
        """Prym-block image of ``a`` in H (only meaningful on H)."""
        aligned = self.align(a).coords
        g = self.base_genus
        body = list(aligned[1 : 2 * g - 1])
        body += [RatMod1(0)] * (self.prym_rank - len(body))
        return TorsionVector(tuple(body))

    def gluing(self) -> tuple[tuple[TorsionVector, TorsionVector], ...]:
        """The subgroup K = {(d, psi(d)) : d in H}."""
        return tuple((d, self.psi(d)) for d in self._H)

    def shifts(self, modulus: int) -> tuple[tuple[int, ...], ...]:
        cached = self._shift_cache.get(modulus)
        if cached is None:
            cached = tuple(d.to_ints(modulus) + p.to_ints(modulus) for d, p in self.gluing())
            self._shift_cache[modulus] = cached
        return cached

    def zero(self) -> TorsionClass:
        return TorsionClass(self, TorsionVector.zero(self.base_rank), TorsionVector.zero(self.prym_rank))

    def make_class(self, base: TorsionVector, prym: TorsionVector) -> TorsionClass:
        """Class of ``pullback(base) + prym`` in canonical form."""
        if base.rank != self.base_rank or prym.rank != self.prym_rank:
            raise ValidationError(
                f"expected ranks ({self.base_rank}, {self.prym_rank}), got ({base.rank}, {prym.rank})"
            )
        N = math.lcm(self.degree, base.order(), prym.order())
        vec = base.to_ints(N) + prym.to_ints(N)
        best = kernels.orbit_min(vec, self.shifts(N), N)
        r = self.base_rank
        return TorsionClass(
            self, TorsionVector.from_ints(best[:r], N), TorsionVector.from_ints(best[r:], N)
        )

    def to_json(self) -> dict:
        return {"genus": self.base_genus, "degree": self.degree, "ell": self.ell.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> CoveringModel:
        try:
            g = int(data["genus"])
            m = int(data.get("degree", 2))
            ell = TorsionVector.from_json(data["ell"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad covering descriptor: {data!r}") from exc
        return make_cyclic_cover(g, ell, m)

    def __str__(self) -> str:
        return f"CoveringModel(g={self.base_genus}, m={self.degree}, ell={self.ell})"


@dataclass(frozen=True)
class TorsionClass:
    """A torsion point of J^0(cover), always held in canonical form.

    Build instances with :meth:`CoveringModel.make_class` (or the helpers here);
    the constructor trusts its arguments.
    """

    cov: CoveringModel
    base: TorsionVector
    prym: TorsionVector

    def _same(self, other: TorsionClass) -> None:
        if other.cov != self.cov:
            raise ValidationError("classes live on different coverings")

    def __add__(self, other: TorsionClass) -> TorsionClass:
        self._same(other)
        return self.cov.make_class(self.base + other.base, self.prym + other.prym)

    def __sub__(self, other: TorsionClass) -> TorsionClass:
        self._same(other)
        return self.cov.make_class(self.base - other.base, self.prym - other.prym)

    def __neg__(self) -> TorsionClass:
        return self.cov.make_class(-self.base, -self.prym)

    def __mul__(self, k: int) -> TorsionClass:
        return self.cov.make_class(self.base * k, self.prym * k)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.base.is_zero() and self.prym.is_zero()

    def order(self) -> int:
        bound = math.lcm(self.base.order(), self.prym.order(), self.cov.degree)
        for n in sorted(d for d in range(1, bound + 1) if bound % d == 0):
            if (self * n).is_zero():
                return n
        raise AssertionError("unreachable: bound annihilates the class")

    def key(self):
        return self.base.key() + self.prym.key()

    def __lt__(self, other: TorsionClass) -> bool:
        return self.key() < other.key()

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "prym": self.prym.to_json()}

    @classmethod
    def from_json(cls, cov: CoveringModel, data: dict) -> TorsionClass:
        try:
            base = TorsionVector.from_json(data["base"])
            prym = TorsionVector.from_json(data["prym"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad torsion class: {data!r}") from exc
        return cov.make_class(base, prym)

    def __str__(self) -> str:
        return f"[{self.base} | {self.prym}]"

    def __repr__(self) -> str:
        return f"TorsionClass{self}"


def make_cyclic_cover(g: int, ell: TorsionVector, m: int) -> CoveringModel:
    if m not in SUPPORTED_DEGREES:
        raise UnsupportedDegree(f"cyclic covers of degree {m} are not modelled")
    if ell.rank != 2 * g:
        raise ValidationError(f"defining class must have rank 2g = {2 * g}, got {ell.rank}")
    if ell.is_zero():
        raise TrivialClass("the trivial class defines the trivial covering")
    if ell.order() != m:
        if m == 2:
            raise NotTwoTorsion(f"{ell} has order {ell.order()}, not 2")
        raise ValidationError(f"{ell} has order {ell.order()}, not {m}")
    return CoveringModel(g, m, ell)


def make_double_cover(g: int, ell: TorsionVector) -> CoveringModel:
    """Double cover attached to a nontrivial 2-torsion class."""
    if ell.rank != 2 * g:
        raise ValidationError(f"defining class must have rank 2g = {2 * g}, got {ell.rank}")
    if ell.is_zero():
        raise TrivialClass("a nontrivial unramified double covering needs ell != 0")
    if ell.order() != 2:
        raise NotTwoTorsion(f"{ell} has order {ell.order()}, not 2")
    return CoveringModel(g, 2, ell)


def standard_ell(g: int, m: int = 2) -> TorsionVector:
    return TorsionVector.basis(2 * g, 0, m)


def pullback(cov: CoveringModel, a: TorsionVector) -> TorsionClass:
    return cov.make_class(a, TorsionVector.zero(cov.prym_rank))


def norm(cov: CoveringModel, x: TorsionClass) -> TorsionVector:
    """Norm down to C; on the presentation this is ``m * base``."""
    if x.cov != cov:
        raise ValidationError("class does not belong to this covering")
    return x.base * cov.degree


def _require_double(cov: CoveringModel) -> None:
    if cov.degree != 2:
        raise NotDoubleCover(f"operation needs a double cover, got degree {cov.degree}")


def involution(cov: CoveringModel, x: TorsionClass) -> TorsionClass:
    """Deck involution: fixes pulled-back classes, inverts the Prym block."""
    _require_double(cov)
    return cov.make_class(x.base, -x.prym)


def prym_location(cov: CoveringModel, x: TorsionClass) -> PrymLocation:
    _require_double(cov)
    if not norm(cov, x).is_zero():
        return PrymLocation.NOT_IN_PRYM
    return PrymLocation.PRYM0 if cov.in_H(x.base) else PrymLocation.PRYM1


def in_pullback_image(cov: CoveringModel, x: TorsionClass) -> bool:
    """Whether x is pulled back from C.

    For a double cover this happens exactly when the Prym part is 2-torsion;
    for degree 3, when the Prym part lies in ``psi(H)``.
    """
    if cov.degree == 2:
        return (x.prym * 2).is_zero()
    return pullback_preimage(cov, x) is not None


def pullback_preimage(cov: CoveringModel, x: TorsionClass) -> TorsionVector | None:
    """Some ``a`` with ``pullback(a) == x``, or None."""
    for d in cov.H:
        if cov.psi(d) == x.prym:
            return x.base - d
    return None


def pushforward_determinant(cov: CoveringModel, x: TorsionClass) -> TorsionVector:
    """det of the rank-2 pushforward: ``ell + Nm(x)``."""
    _require_double(cov)
    return cov.ell + norm(cov, x)


def _prym_candidates(cov: CoveringModel, n: int) -> Iterator[tuple[int, ...]]:
    """Integer encodings (modulus 2n) of representatives of the n-torsion of ker Nm."""
    N = 2 * n
    r, pr = cov.base_rank, cov.prym_rank
    check_budget(2**r * N**pr)
    base_reps = list(itertools.product(range(0, N, n), repeat=r))
    prym_reps = list(itertools.product(range(N), repeat=pr))
    H_ints = {d.to_ints(N) for d in cov.H}
    psi_of = {d.to_ints(N): cov.psi(d).to_ints(N) for d in cov.H}
    for a in base_reps:
        na = tuple(n * x % N for x in a)
        for p in prym_reps:
            np_ = tuple(n * x % N for x in p)
            # n * (a, p) must lie in K
            if na in H_ints and psi_of[na] == np_:
                yield a + p


def prym_torsion_count(cov: CoveringModel, n: int) -> int:
    """Number of classes with trivial norm killed by n (exhaustive, deduplicated)."""
    _require_double(cov)
    if n < 1:
        raise ValidationError("n must be positive")
    N = 2 * n
    return kernels.count_distinct_orbits(_prym_candidates(cov, n), cov.shifts(N), N)


def prym_torsion_classes(cov: CoveringModel, n: int) -> list[TorsionClass]:
    """Sorted list of the classes counted by :func:`prym_torsion_count`."""
    _require_double(cov)
    N = 2 * n
    reps = set(kernels.batch_orbit_min(_prym_candidates(cov, n), cov.shifts(N), N))
    r = cov.base_rank
    out = [
        TorsionClass(cov, TorsionVector.from_ints(v[:r], N), TorsionVector.from_ints(v[r:], N))
        for v in reps
    ]
    return sorted(out)


def prym_pullback_intersection(cov: CoveringModel) -> frozenset[TorsionClass]:
    """Pulled-back classes that lie in the Norm kernel."""
    _require_double(cov)
    out = set()
    # Nm(pullback(a)) = 2a vanishes only on J_2(C); scanning J_4 shows nothing else qualifies
    for a in enumerate_torsion(cov.base_rank, 4):
        x = pullback(cov, a)
        if norm(cov, x).is_zero():
            out.add(x)
    return frozenset(out)


def enumerate_classes(cov: CoveringModel, n: int) -> Iterator[TorsionClass]:
    """All classes of the cover killed by ``n``, each exactly once.

    Works in aligned coordinates: ``n*(a, p)`` must land in K, so the first
    ``2g-1`` coordinates of ``a`` are taken in ``[0, 1/2)`` (K absorbs the rest),
    the last one in ``J_n``, and ``p`` ranges over one solution plus ``J_n``.
    """
    if cov.degree != 2:
        raise NotDoubleCover("class enumeration is implemented for double covers")
    if n < 1:
        raise ValidationError("n must be positive")
    g = cov.base_genus
    N = 2 * n
    check_budget(n ** (4 * g - 2))
    for head in itertools.product(range(n), repeat=2 * g - 1):
        for last in range(0, N, 2):
            aligned = TorsionVector.from_ints(head + (last,), N)
            a = transform(cov._Uinv, aligned)
            # n*a = (h/2, ..., 0) in aligned form; p0 solves n*p0 = psi(n*a)
            target = cov.psi(a * n).to_ints(N)
            p0 = tuple(t // n for t in target)
            for q in itertools.product(range(0, N, 2), repeat=cov.prym_rank):
                p = TorsionVector.from_ints(tuple(x + y for x, y in zip(p0, q)), N)
                yield cov.make_class(a, p)
