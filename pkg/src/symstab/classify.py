"""Decision procedures for stability of symmetric powers S^k E.

Every verdict carries rule tags naming the implication that produced it. The
rules only fire on descriptor data they were stated for; anything else comes
back as ``Unknown`` with a reason instead of a guess.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .bundles import (
    BundleDescriptor,
    FormalStable,
    LineClass,
    PushforwardTwist,
    S2TriplePushforward,
    Split,
    Stability,
    split_stability,
    sym_power_split,
)
from .covering import (
    CoveringModel,
    in_pullback_image,
    involution,
    make_double_cover,
    prym_torsion_classes,
    prym_torsion_count,
    pullback,
    pullback_preimage,
    standard_ell,
)
from .errors import IncompleteInput, InvalidDescriptor, MissingPresentation, NotTorsion, ValidationError
from .torsion import TorsionVector, check_budget, enumerate_torsion

RULE_SPLIT = "decomposable-bundle-never-stable"
RULE_PUSHFORWARD_SPLIT = "pushforward-splits-iff-pulled-back"
RULE_PUSHFORWARD_ORTHOGONAL = "twisted-pushforward-is-orthogonal"
RULE_ORTHOGONAL = "orthogonal-iff-S2-strictly-semistable"
RULE_ASSUMED = "postulated-stable"
RULE_LINE_K3 = "S3-line-iff-prym-J6-minus-J2"
RULE_LINE_2K = "line-subbundle-from-2k-torsion"
RULE_QUOTIENT_ORDER = "line-quotient-order-divides-2(k-1)"
RULE_KSECTION_ORDER = "k-section-torsion-divides-2(k-1)(k-2)"
RULE_UPWARD = "destabilization-propagates-upward"
RULE_DOWNWARD = "line-destabilization-propagates-downward"
RULE_S2_FORCES_S3 = "S2-semistable-forces-rank2-in-S3"
RULE_TRIPLE = "S3-rank2-iff-triple-cover-pushforward"
RULE_TRIPLE_S4 = "triple-cover-S4-line-quotients"
RULE_TRIPLE_S2 = "triple-pushforward-stable-iff-not-pulled-back"
RULE_GATE = "powers-up-to-6-decide-all"
RULE_ETALE = "etale-trivial-iff-torsion"
RULE_FINITE = "finite-iff-higher-power-unstable"


class Status(enum.Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    NOT_STABLE = "NotStable"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class StabilityVerdict:
    status: Status
    k: int | None = None
    witness: dict | None = None
    reason: str | None = None
    rules: tuple[str, ...] = ()
    scope: str = "all-subbundles"

    @property
    def is_stable(self) -> bool:
        return self.status is Status.STABLE

    @property
    def line_certified(self) -> bool:
        return bool(self.witness) and self.witness.get("kind") == "line"

    def to_json(self) -> dict:
        out = {"status": self.status.value, "k": self.k, "scope": self.scope, "rules": list(self.rules)}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class MinimalKReport:
    order: int
    sufficient_k: int | None
    necessary_floor: int
    certificates: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "sufficient_k": self.sufficient_k,
            "necessary_floor": self.necessary_floor,
            "certificates": list(self.certificates),
        }


def _vec(v: TorsionVector) -> list[str]:
    return v.to_json()


def as_split(E: PushforwardTwist) -> Split | None:
    """The split form ``(a+A)^{-1} + (a+A)`` when ``R = pi^* a``; otherwise None."""
    a = pullback_preimage(E.cov, E.R) if in_pullback_image(E.cov, E.R) else None
    if a is None:
        return None
    return Split(LineClass(0, a) + E.A)


def _split_verdict(L: LineClass, k: int, rules: tuple[str, ...]) -> StabilityVerdict:
    decomp = sym_power_split(L, k)
    top = max(decomp.lines(), key=lambda line: line.key())
    witness = {"kind": "line", "subbundle": top.to_json(), "decomposition_rank": decomp.rank}
    if split_stability(decomp) is Stability.UNSTABLE:
        return StabilityVerdict(Status.NOT_STABLE, k, witness, rules=rules)
    return StabilityVerdict(Status.STRICTLY_SEMISTABLE, k, witness, rules=rules)


def s2_status(E: BundleDescriptor) -> StabilityVerdict:
    """Stability of S^2 E."""
    if isinstance(E, Split):
        return _split_verdict(E.L, 2, (RULE_SPLIT,))
    if isinstance(E, PushforwardTwist):
        split = as_split(E)
        witness = {"kind": "orthogonal", "values": _vec(E.cov.ell), "E_stable": split is None}
        rules = (RULE_PUSHFORWARD_ORTHOGONAL, RULE_ORTHOGONAL, RULE_PUSHFORWARD_SPLIT)
        if split is not None:
            L = split.L
            witness["E_split"] = [L.to_json(), (L + LineClass(0, E.cov.ell)).to_json()]
        return StabilityVerdict(Status.STRICTLY_SEMISTABLE, 2, witness, rules=rules)
    if isinstance(E, FormalStable):
        return StabilityVerdict(Status.STABLE, 2, rules=(RULE_ASSUMED,))
    if isinstance(E, S2TriplePushforward):
        if E.M_in_pullback_image():
            a = pullback_preimage(E.cov, E.M)
            witness = {"kind": "line", "pulled_back_from": _vec(a)}
            return StabilityVerdict(Status.STRICTLY_SEMISTABLE, 2, witness, rules=(RULE_TRIPLE_S2,))
        return StabilityVerdict(Status.STABLE, 2, rules=(RULE_TRIPLE_S2,))
    raise InvalidDescriptor(f"not a bundle descriptor: {E!r}")


def _line_witness(E: PushforwardTwist, k: int) -> dict:
    return {
        "kind": "line",
        "R": E.R.to_json(),
        "R_order": E.R.order(),
        "A": E.A.to_json(),
        "cover_ell": _vec(E.cov.ell),
    }


def s3_line_subbundle_status(E: BundleDescriptor) -> StabilityVerdict:
    """Whether S^3 E has a degree-0 line subbundle."""
    scope = "line-subbundles"
    if isinstance(E, Split):
        v = _split_verdict(E.L, 3, (RULE_SPLIT,))
        return StabilityVerdict(Status.NOT_STABLE, 3, v.witness, rules=v.rules, scope=scope)
    if isinstance(E, PushforwardTwist):
        split = as_split(E)
        if split is not None:
            v = _split_verdict(split.L, 3, (RULE_PUSHFORWARD_SPLIT, RULE_SPLIT))
            return StabilityVerdict(Status.NOT_STABLE, 3, v.witness, rules=v.rules, scope=scope)
        order = E.R.order()
        twist_ok = (E.A * 4).is_trivial()
        if order in (3, 6) and twist_ok:
            return StabilityVerdict(Status.NOT_STABLE, 3, _line_witness(E, 3), rules=(RULE_LINE_K3,), scope=scope)
        return StabilityVerdict(
            Status.STABLE, 3, reason=f"R has order {order}, not 3 or 6", rules=(RULE_LINE_K3,), scope=scope
        )
    if isinstance(E, FormalStable):
        # a line subbundle of S^3 would destabilize S^2, which is postulated stable
        return StabilityVerdict(Status.STABLE, 3, rules=(RULE_ASSUMED, RULE_DOWNWARD), scope=scope)
    if isinstance(E, S2TriplePushforward):
        if not E.M_in_pullback_image():
            return StabilityVerdict(Status.STABLE, 3, rules=(RULE_TRIPLE_S2, RULE_DOWNWARD), scope=scope)
        return StabilityVerdict(
            Status.UNKNOWN,
            3,
            reason="S^2 E is strictly semistable and the presentation does not determine E",
            scope=scope,
        )
    raise InvalidDescriptor(f"not a bundle descriptor: {E!r}")


def _least_k(pred) -> int:
    k = 2
    while not pred(k):
        k += 1
    return k


def minimal_line_destabilized_k(E: BundleDescriptor) -> MinimalKReport:
    """Bracket the least k for which S^k E has a degree-0 line subbundle.

    ``sufficient_k`` is the least ``k >= 2`` with ``ord(R) | 2k`` (certified);
    ``necessary_floor`` is the least ``k >= 2`` with ``ord(R) | 2k(k-1)``, which
    is what the torsion constraints on the quotient and on the k-section allow.
    """
    if isinstance(E, Split):
        if not E.L.is_torsion():
            raise NotTorsion("the split summand has a non-torsion part")
        raise ValidationError("E is split, so it is not stable")
    if isinstance(E, FormalStable):
        raise NotTorsion("formal descriptors carry no torsion data")
    if not isinstance(E, PushforwardTwist):
        raise InvalidDescriptor("needs a pushforward descriptor")
    if not E.A.is_torsion():
        raise NotTorsion("the twist has a non-torsion part")
    if in_pullback_image(E.cov, E.R):
        raise ValidationError("R is pulled back from C, so E is not stable")
    m = E.R.order()
    sufficient = _least_k(lambda k: (2 * k) % m == 0)
    floor = _least_k(lambda k: (2 * k * (k - 1)) % m == 0)
    return MinimalKReport(m, sufficient, floor, (RULE_LINE_2K, RULE_QUOTIENT_ORDER, RULE_KSECTION_ORDER))


def s3_rank2_status(E: BundleDescriptor) -> StabilityVerdict:
    """Whether S^3 E is destabilized by a rank-2 subbundle."""
    if isinstance(E, S2TriplePushforward):
        if not E.M_in_pullback_image():
            ell = E.cov.ell
            witness = {
                "kind": "rank2",
                "subbundles": [
                    {"description": "E (x) L^-1", "L_power": -1, "L": _vec(ell)},
                    {"description": "E (x) L", "L_power": 1, "L": _vec(ell)},
                ],
                "cover_degree": 3,
            }
            return StabilityVerdict(Status.NOT_STABLE, 3, witness, rules=(RULE_TRIPLE,))
        witness = {"kind": "propagated", "from_k": 2}
        return StabilityVerdict(Status.NOT_STABLE, 3, witness, rules=(RULE_TRIPLE_S2, RULE_S2_FORCES_S3))
    if isinstance(E, (Split, PushforwardTwist)):
        s2 = s2_status(E)
        if not s2.is_stable:
            witness = {"kind": "propagated", "from_k": 2, "S2": s2.status.value}
            return StabilityVerdict(Status.NOT_STABLE, 3, witness, rules=s2.rules + (RULE_S2_FORCES_S3,))
    if isinstance(E, FormalStable):
        return StabilityVerdict(Status.STABLE, 3, rules=(RULE_ASSUMED, RULE_TRIPLE))
    raise MissingPresentation("needs a triple-cover presentation of S^2 E or a pushforward/split descriptor")


def power_status(E: BundleDescriptor, k: int) -> StabilityVerdict:
    """Verdict for S^k E, k >= 1, combining the rules above."""
    if k < 1:
        raise ValidationError("k must be positive")
    if isinstance(E, Split):
        return _split_verdict(E.L, k, (RULE_SPLIT,))
    if isinstance(E, PushforwardTwist):
        split = as_split(E)
        if split is not None:
            v = power_status(split, k)
            return StabilityVerdict(v.status, k, v.witness, rules=(RULE_PUSHFORWARD_SPLIT,) + v.rules)
        if k == 1:
            return StabilityVerdict(Status.STABLE, 1, rules=(RULE_PUSHFORWARD_SPLIT,))
        m = E.R.order()
        if (2 * k) % m == 0:
            witness = _line_witness(E, k)
            status = Status.STRICTLY_SEMISTABLE if k == 2 else Status.NOT_STABLE
            return StabilityVerdict(status, k, witness, rules=(RULE_LINE_2K,))
        if k == 2:
            return s2_status(E)
        witness = {"kind": "propagated", "from_k": 2, "subbundle_rank": k - 1, "values": _vec(E.cov.ell)}
        return StabilityVerdict(Status.NOT_STABLE, k, witness, rules=(RULE_ORTHOGONAL, RULE_UPWARD))
    if isinstance(E, S2TriplePushforward):
        s2 = s2_status(E)
        if k == 1:
            if s2.is_stable:
                return StabilityVerdict(Status.STABLE, 1, rules=(RULE_TRIPLE_S2,))
            return StabilityVerdict(Status.UNKNOWN, 1, reason="S^2 E strictly semistable; E not determined")
        if k == 2:
            return s2
        if not s2.is_stable:
            witness = {"kind": "propagated", "from_k": 2}
            return StabilityVerdict(Status.NOT_STABLE, k, witness, rules=(RULE_TRIPLE_S2, RULE_UPWARD))
        if k == 3:
            return s3_rank2_status(E)
        ell = E.cov.ell
        if k == 4:
            witness = {"kind": "line", "quotients": [_vec(ell), _vec(-ell)], "twist": "A^2"}
            return StabilityVerdict(Status.NOT_STABLE, 4, witness, rules=(RULE_TRIPLE_S4,))
        witness = {"kind": "propagated", "from_k": 4, "subbundle_rank": k - 3}
        return StabilityVerdict(Status.NOT_STABLE, k, witness, rules=(RULE_TRIPLE_S4, RULE_UPWARD))
    if isinstance(E, FormalStable):
        if k <= 2:
            return StabilityVerdict(Status.STABLE, k, rules=(RULE_ASSUMED,))
        if k == 3:
            return StabilityVerdict(Status.STABLE, 3, rules=(RULE_ASSUMED, RULE_TRIPLE))
        return StabilityVerdict(
            Status.UNKNOWN, k, reason="formal descriptor; supply verdicts for k <= 6 to the gate", rules=(RULE_GATE,)
        )
    raise InvalidDescriptor(f"not a bundle descriptor: {E!r}")


GATE_CASES = {
    2: {"case": 1, "subbundle_rank": 1},
    3: {"case": 2, "subbundle_rank": 2},
    4: {"case": 3, "subbundle_rank": 2},
    6: {"case": 4, "subbundle_rank": 3},
}


def _status_of(value) -> Status:
    if isinstance(value, StabilityVerdict):
        return value.status
    if isinstance(value, Mapping):
        value = value.get("status")
    if isinstance(value, Status):
        return value
    try:
        return Status(value)
    except ValueError as exc:
        raise ValidationError(f"unknown verdict {value!r}") from exc


def higher_gate(statuses: Mapping) -> dict:
    """Decide stability of every S^k E (k >= 2) from verdicts for k = 2..6."""
    parsed = {}
    for key, value in statuses.items():
        try:
            parsed[int(key)] = _status_of(value)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad power {key!r}") from exc
    missing = [m for m in range(2, 7) if m not in parsed]
    if missing:
        raise IncompleteInput(f"missing verdicts for k = {missing}")
    for m in range(2, 7):
        status = parsed[m]
        if status is Status.STABLE:
            continue
        if status is Status.UNKNOWN:
            return {"verdict": "Undetermined", "first_unresolved": m, "rules": [RULE_GATE]}
        if m in GATE_CASES:
            return {"verdict": "NotAllStable", "first_failure": m, **GATE_CASES[m], "rules": [RULE_GATE]}
        return {
            "verdict": "Inconsistent",
            "first_failure": m,
            "reason": "S^5 cannot be the first unstable power once S^4 is stable",
            "rules": [RULE_GATE],
        }
    return {"verdict": "AllStable", "rules": [RULE_GATE]}


def etale_trivial(E: BundleDescriptor) -> dict:
    """Whether E becomes trivial on a finite unramified cover, with that cover's degree."""
    if isinstance(E, Split):
        if not E.L.is_torsion():
            return {"trivial": False, "cover_degree": None, "rules": [RULE_ETALE]}
        return {"trivial": True, "cover_degree": E.L.order(), "rules": [RULE_ETALE]}
    if isinstance(E, PushforwardTwist):
        if not E.A.is_torsion():
            return {"trivial": False, "cover_degree": None, "rules": [RULE_ETALE]}
        # pi^* E = (R + pi^*A) + iota(R + pi^*A); trivialize R + pi^*A on top of B
        twisted = E.R + pullback(E.cov, E.A.torsion)
        return {"trivial": True, "cover_degree": 2 * twisted.order(), "rules": [RULE_ETALE]}
    if isinstance(E, S2TriplePushforward):
        if not E.M_in_pullback_image():
            return {"trivial": True, "cover_degree": None, "rules": [RULE_TRIPLE_S4, RULE_FINITE]}
        return {"trivial": None, "cover_degree": None, "reason": "S^2 E strictly semistable", "rules": []}
    if isinstance(E, FormalStable):
        return {"trivial": None, "cover_degree": None, "reason": "formal descriptor", "rules": [RULE_FINITE]}
    raise InvalidDescriptor(f"not a bundle descriptor: {E!r}")


class Family(enum.Enum):
    DOUBLE_COVERS = "double-covers"
    PRYM_JN = "prym-jn"
    S2_LOCUS = "s2-locus"
    S3_LINE = "s3-line"


def _default_cover(g: int, ell: TorsionVector | None) -> CoveringModel:
    return make_double_cover(g, ell if ell is not None else standard_ell(g))


def _involution_pairs(cov: CoveringModel, classes) -> tuple[int, int]:
    """(number of unordered {x, iota x} pairs, number of fixed points)."""
    seen = set()
    pairs = fixed = 0
    for x in classes:
        if x in seen:
            continue
        y = involution(cov, x)
        seen.update((x, y))
        pairs += 1
        fixed += x == y
    return pairs, fixed


def count_exceptional(g: int, family: Family | str, n: int | None = None, ell: TorsionVector | None = None) -> dict:
    """Torsion-level counts, reported with their identification multiplicities."""
    family = Family(family)
    if g < 2:
        raise ValidationError("genus must be at least 2")
    if family is Family.DOUBLE_COVERS:
        check_budget(2 ** (2 * g))
        count = sum(1 for v in enumerate_torsion(2 * g, 2) if not v.is_zero())
        return {"family": family.value, "genus": g, "count": count, "formula": 2 ** (2 * g) - 1}
    cov = _default_cover(g, ell)
    base = {"family": family.value, "genus": g, "cover": cov.to_json(), "per_covering": True,
            "coverings": 2 ** (2 * g) - 1}
    if family is Family.PRYM_JN:
        n = 2 if n is None else n
        return {**base, "n": n, "count": prym_torsion_count(cov, n)}
    if family is Family.S2_LOCUS:
        n = 2 if n is None else n
        classes = prym_torsion_classes(cov, n)
        pairs, fixed = _involution_pairs(cov, classes)
        raw = len(classes)
        return {**base, "n": n, "raw": raw, "fixed": fixed, "pairs": pairs,
                "identity_holds": 2 * pairs == raw + fixed}
    # S3_LINE
    j6 = prym_torsion_classes(cov, 6)
    witnesses = [x for x in j6 if not (x * 2).is_zero()]
    pairs, fixed = _involution_pairs(cov, witnesses)
    translations = [pullback(cov, a) for a in enumerate_torsion(2 * g, 2)]
    orbits = set()
    for x in witnesses:
        orbit = frozenset(y for t in translations for y in (x + t, involution(cov, x + t)))
        orbits.add(orbit)
    return {
        **base,
        "raw": len(witnesses),
        "prym_J6": len(j6),
        "prym_J2": len(j6) - len(witnesses),
        "paired": pairs,
        "fixed": fixed,
        "twist_orbits": len(orbits),
        "a_choices": 2 ** (2 * g),
    }


def _split_matches(L1: LineClass, L2: LineClass, M: LineClass) -> bool:
    return sorted([L1, -L1], key=LineClass.key) == sorted([L2 + M, -L2 + M], key=LineClass.key)


def twist_equivalence_candidates(E: BundleDescriptor, F: BundleDescriptor) -> list[TorsionVector]:
    """2-torsion M with E = F (x) M at the level of descriptor data.

    Pushforward descriptors are compared only within one covering.
    """
    if isinstance(E, PushforwardTwist) and as_split(E) is not None:
        E = as_split(E)
    if isinstance(F, PushforwardTwist) and as_split(F) is not None:
        F = as_split(F)
    if isinstance(E, FormalStable) or isinstance(F, FormalStable):
        # nothing is known about twists of a formal bundle beyond identity
        if E == F and E.genus is not None:
            return [TorsionVector.zero(2 * E.genus)]
        return []
    genus = {getattr(E, "genus", None), getattr(F, "genus", None)}
    if len(genus) != 1:
        raise ValidationError("descriptors live on curves of different genus")
    (g,) = genus
    out = []
    for M in enumerate_torsion(2 * g, 2):
        if isinstance(E, Split) and isinstance(F, Split):
            if _split_matches(E.L, F.L, LineClass(0, M)):
                out.append(M)
        elif isinstance(E, PushforwardTwist) and isinstance(F, PushforwardTwist):
            if E.cov != F.cov:
                return []
            N = (F.A - E.A).torsion
            shifted = F.R + pullback(F.cov, N + M)
            if E.R in (shifted, involution(F.cov, shifted)):
                out.append(M)
        else:
            return []
    return sorted(out)
