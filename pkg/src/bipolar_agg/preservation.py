"""Properties of frameworks, preservation under aggregation, and meta-properties."""
from __future__ import annotations

import enum
import itertools
import pickle
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import baf as core
from .aggregation import AggregationRule, Domain, Profile, SupportUniverse
from .baf import Baf, Pair, SemanticsKind, format_relation, format_set
from .config import Limits, default_limits
from .errors import DomainError, ResourceError


class PropertyKind(enum.Enum):
    ESSENTIAL_CONSTRAINT = "essential-constraint"
    CLOSED = "closed"
    CONFLICT_FREE = "conflict-free"
    SAFE = "safe"
    D_ADMISSIBLE = "d-admissible"
    S_ADMISSIBLE = "s-admissible"
    C_ADMISSIBLE = "c-admissible"
    D_PREFERRED_EXT = "d-preferred"
    S_PREFERRED_EXT = "s-preferred"
    C_PREFERRED_EXT = "c-preferred"
    STABLE_EXT = "stable"
    ACCEPTABLE = "acceptable"


_SET_KINDS = {
    PropertyKind.CLOSED,
    PropertyKind.CONFLICT_FREE,
    PropertyKind.SAFE,
    PropertyKind.D_ADMISSIBLE,
    PropertyKind.S_ADMISSIBLE,
    PropertyKind.C_ADMISSIBLE,
    PropertyKind.D_PREFERRED_EXT,
    PropertyKind.S_PREFERRED_EXT,
    PropertyKind.C_PREFERRED_EXT,
    PropertyKind.STABLE_EXT,
}

_EXTENSION_SEMANTICS = {
    PropertyKind.D_PREFERRED_EXT: SemanticsKind.D_PREFERRED,
    PropertyKind.S_PREFERRED_EXT: SemanticsKind.S_PREFERRED,
    PropertyKind.C_PREFERRED_EXT: SemanticsKind.C_PREFERRED,
    PropertyKind.STABLE_EXT: SemanticsKind.STABLE,
}


@dataclass(frozen=True)
class PropertySpec:
    """A property of a framework with its parameters fixed in advance.

    Set-valued kinds carry ``delta``; ``ACCEPTABLE`` carries an argument and
    a semantics (credulous acceptance).
    """

    kind: PropertyKind
    delta: frozenset[str] | None = None
    argument: str | None = None
    semantics: SemanticsKind | None = None

    def __post_init__(self):
        if self.kind in _SET_KINDS:
            if self.delta is None:
                raise DomainError(f"{self.kind.value} needs an argument set")
            object.__setattr__(self, "delta", frozenset(self.delta))
        elif self.kind is PropertyKind.ACCEPTABLE:
            if self.argument is None or self.semantics is None:
                raise DomainError("acceptable needs an argument and a semantics")

    # convenience constructors
    @classmethod
    def essential_constraint(cls) -> "PropertySpec":
        return cls(PropertyKind.ESSENTIAL_CONSTRAINT)

    @classmethod
    def of_set(cls, kind: PropertyKind, delta: Iterable[str]) -> "PropertySpec":
        return cls(kind, frozenset(delta))

    @classmethod
    def extension(cls, semantics: SemanticsKind, delta: Iterable[str]) -> "PropertySpec":
        kind = {v: k for k, v in _EXTENSION_SEMANTICS.items()}[semantics]
        return cls(kind, frozenset(delta))

    @classmethod
    def acceptable(cls, argument: str, semantics: SemanticsKind) -> "PropertySpec":
        return cls(PropertyKind.ACCEPTABLE, argument=argument, semantics=semantics)

    def arguments(self) -> frozenset[str]:
        if self.delta is not None:
            return self.delta
        if self.argument is not None:
            return frozenset([self.argument])
        return frozenset()

    def __str__(self) -> str:
        if self.kind is PropertyKind.ESSENTIAL_CONSTRAINT:
            return self.kind.value
        if self.kind is PropertyKind.ACCEPTABLE:
            return f"acceptable:{self.argument}:{self.semantics.value}"
        return f"{self.kind.value}:{','.join(sorted(self.delta))}"


def parse_property(text: str) -> PropertySpec:
    """Parse the flat CLI form, e.g. ``conflict-free:A,E`` or ``acceptable:A:d-preferred``."""
    head, _, rest = text.strip().partition(":")
    try:
        kind = PropertyKind(head)
    except ValueError:
        names = ", ".join(k.value for k in PropertyKind)
        raise DomainError(f"unknown property {head!r}; expected one of {names}") from None
    if kind is PropertyKind.ESSENTIAL_CONSTRAINT:
        if rest:
            raise DomainError("essential-constraint takes no parameters")
        return PropertySpec(kind)
    if kind is PropertyKind.ACCEPTABLE:
        arg, _, sem = rest.partition(":")
        if not arg or not sem:
            raise DomainError("expected acceptable:<argument>:<semantics>")
        return PropertySpec.acceptable(core.check_argument_name(arg), SemanticsKind.parse(sem))
    members = [m.strip() for m in rest.split(",") if m.strip()]
    return PropertySpec(kind, frozenset(core.check_argument_name(m) for m in members))


def _check_params(prop: PropertySpec, args: Iterable[str]) -> None:
    unknown = prop.arguments() - frozenset(args)
    if unknown:
        raise DomainError(f"property {prop} mentions unknown argument(s) {format_set(unknown)}")


def evaluate_property(prop: PropertySpec, baf: Baf, limits: Limits | None = None) -> bool:
    _check_params(prop, baf.args)
    k = prop.kind
    if k is PropertyKind.ESSENTIAL_CONSTRAINT:
        return core.satisfies_essential_constraint(baf)
    if k is PropertyKind.CLOSED:
        return core.is_closed(baf, prop.delta)
    if k is PropertyKind.CONFLICT_FREE:
        return core.is_conflict_free(baf, prop.delta)
    if k is PropertyKind.SAFE:
        return core.is_safe(baf, prop.delta)
    if k is PropertyKind.D_ADMISSIBLE:
        return core.is_d_admissible(baf, prop.delta)
    if k is PropertyKind.S_ADMISSIBLE:
        return core.is_s_admissible(baf, prop.delta)
    if k is PropertyKind.C_ADMISSIBLE:
        return core.is_c_admissible(baf, prop.delta)
    if k in _EXTENSION_SEMANTICS:
        return core.is_extension(baf, prop.delta, _EXTENSION_SEMANTICS[k], limits)
    return core.credulously_accepted(baf, prop.argument, prop.semantics, limits)


# -- preservation ------------------------------------------------------------


@dataclass(frozen=True)
class PreservationVerdict:
    rule: str
    prop: str
    preserved: bool
    domain: str
    counterexample: Profile | None = None
    outcome: frozenset[Pair] | None = None

    def __post_init__(self):
        if self.preserved == (self.counterexample is not None):
            raise ValueError("a verdict carries a counterexample exactly when preservation fails")

    def __str__(self) -> str:
        head = f"{self.rule} {'preserves' if self.preserved else 'does not preserve'} {self.prop}"
        if self.counterexample is None:
            return f"{head} on {self.domain}"
        return f"{head}: {self.counterexample} -> {format_relation(self.outcome)}"


class _Scanner:
    """Memoised property evaluation over one domain."""

    def __init__(self, rule: AggregationRule, prop: PropertySpec, dom: Domain, limits: Limits):
        self.rule = rule
        self.prop = prop
        self.dom = dom
        self.limits = limits
        self._agent_ok: dict[int, bool] = {}
        self._outcome_ok: dict[frozenset[Pair], bool] = {}

    def agent_ok(self, mask: int) -> bool:
        ok = self._agent_ok.get(mask)
        if ok is None:
            ok = evaluate_property(self.prop, self.dom.base.with_supports(self.dom.relation(mask)), self.limits)
            self._agent_ok[mask] = ok
        return ok

    def outcome_ok(self, rel: frozenset[Pair]) -> bool:
        ok = self._outcome_ok.get(rel)
        if ok is None:
            ok = evaluate_property(self.prop, self.dom.base.with_supports(rel), self.limits)
            self._outcome_ok[rel] = ok
        return ok

    def first_violation(self, start: int = 0, stop: int | None = None) -> int | None:
        for offset, masks in enumerate(self.dom.iter_masks(start, stop)):
            if all(self.agent_ok(mk) for mk in masks):
                if not self.outcome_ok(self.dom.outcome(self.rule, masks)):
                    return start + offset
        return None


def _scan_chunk(rule, prop, universe, n, args, attacks, allow, limits, start, stop):
    dom = Domain(universe, n, args, attacks, allow, limits)
    return _Scanner(rule, prop, dom, limits).first_violation(start, stop)


def _masks_at(dom: Domain, idx: int) -> tuple[int, ...]:
    return next(dom.iter_masks(idx, idx + 1))


def check_preservation(
    rule: AggregationRule,
    prop: PropertySpec,
    args: Iterable[str],
    attacks: Iterable[Pair],
    universe: SupportUniverse,
    n: int,
    *,
    allow_ec_violation: bool = False,
    limits: Limits | None = None,
    jobs: int = 1,
) -> PreservationVerdict:
    """Exhaustively test whether ``rule`` preserves ``prop`` on the domain.

    The reported counterexample is the first violating profile in canonical
    order, whatever ``jobs`` is.
    """
    limits = limits or default_limits()
    args = frozenset(args)
    attacks = frozenset(attacks)
    _check_params(prop, args)
    rule.validate(n)
    dom = Domain(universe, n, args, attacks, allow_ec_violation, limits)
    hit = None
    if jobs > 1 and dom.size >= 4 * jobs and _picklable(rule):
        step = -(-dom.size // jobs)
        bounds = [(s, min(s + step, dom.size)) for s in range(0, dom.size, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_scan_chunk, rule, prop, universe, n, args, attacks,
                            allow_ec_violation, limits, s, e)
                for s, e in bounds
            ]
            for fut in futures:
                found = fut.result()
                if found is not None:
                    hit = found
                    break
    else:
        hit = _Scanner(rule, prop, dom, limits).first_violation()
    if hit is None:
        return PreservationVerdict(rule.name, str(prop), True, dom.describe())
    masks = _masks_at(dom, hit)
    return PreservationVerdict(
        rule.name, str(prop), False, dom.describe(),
        counterexample=dom.profile(masks),
        outcome=dom.outcome(rule, masks),
    )


def _picklable(obj) -> bool:
    try:
        pickle.dumps(obj)
    except Exception:
        return False
    return True


def find_counterexample(rule, prop, args, attacks, universe, n, **kwargs) -> Profile | None:
    return check_preservation(rule, prop, args, attacks, universe, n, **kwargs).counterexample


def is_violation(rule: AggregationRule, prop: PropertySpec, profile: Profile) -> bool:
    """Every agent satisfies ``prop`` and the aggregate does not."""
    if not all(evaluate_property(prop, b) for b in profile.bafs()):
        return False
    outcome = profile.outcome_baf(rule(profile))
    return not evaluate_property(prop, outcome)


# -- meta-properties ---------------------------------------------------------


class MetaKind(enum.Enum):
    NON_SIMPLE = "non-simple"
    DISJUNCTIVE = "disjunctive"


@dataclass(frozen=True)
class MetaWitness:
    """A base support set plus distinguished extra supports.

    Non-simple witnesses have three extras and disjunctive ones two.
    """

    base: frozenset[Pair]
    extras: tuple[Pair, ...]
    kind: MetaKind

    def __post_init__(self):
        object.__setattr__(self, "base", frozenset((a, b) for a, b in self.base))
        object.__setattr__(self, "extras", tuple((a, b) for a, b in self.extras))
        want = 3 if self.kind is MetaKind.NON_SIMPLE else 2
        if len(self.extras) != want:
            raise DomainError(f"a {self.kind.value} witness needs {want} extras, got {len(self.extras)}")
        if len(set(self.extras)) != want:
            raise DomainError("witness extras must be pairwise distinct")
        if set(self.extras) & self.base:
            raise DomainError("witness extras must not belong to the base")

    def __str__(self) -> str:
        extras = ", ".join(f"{a}>{b}" for a, b in self.extras)
        return f"{self.kind.value} witness: base={format_relation(self.base)} extras=({extras})"


def meta_table(
    args: Iterable[str], attacks: Iterable[Pair], prop: PropertySpec, w: MetaWitness
) -> list[tuple[frozenset[Pair], bool]]:
    """Evaluate ``prop`` on base ∪ S for every S ⊆ extras, smallest S first."""
    base = Baf(frozenset(args), frozenset(attacks))
    _check_params(prop, base.args)
    for a, b in itertools.chain(w.base, w.extras):
        if a not in base.args or b not in base.args:
            raise DomainError(f"witness pair {a} {b} is not over the arguments")
    rows = []
    for size in range(len(w.extras) + 1):
        for s in itertools.combinations(w.extras, size):
            s = frozenset(s)
            rows.append((s, evaluate_property(prop, base.with_supports(w.base | s))))
    return rows


def _expected(w: MetaWitness, s: frozenset[Pair]) -> bool:
    if w.kind is MetaKind.NON_SIMPLE:
        return len(s) != len(w.extras)
    return len(s) != 0


def verify_nonsimplicity_witness(args, attacks, prop: PropertySpec, w: MetaWitness) -> bool:
    if w.kind is not MetaKind.NON_SIMPLE:
        raise DomainError("expected a non-simple witness")
    return all(value == _expected(w, s) for s, value in meta_table(args, attacks, prop, w))


def verify_disjunctiveness_witness(args, attacks, prop: PropertySpec, w: MetaWitness) -> bool:
    if w.kind is not MetaKind.DISJUNCTIVE:
        raise DomainError("expected a disjunctive witness")
    return all(value == _expected(w, s) for s, value in meta_table(args, attacks, prop, w))


def verify_meta_witness(args, attacks, prop: PropertySpec, w: MetaWitness) -> bool:
    if w.kind is MetaKind.NON_SIMPLE:
        return verify_nonsimplicity_witness(args, attacks, prop, w)
    return verify_disjunctiveness_witness(args, attacks, prop, w)


def _candidates(pairs: Sequence[Pair], k: int, max_base: int | None) -> Iterator[tuple[frozenset[Pair], tuple[Pair, ...]]]:
    top = len(pairs) if max_base is None else min(max_base, len(pairs))
    for size in range(top + 1):
        for base in itertools.combinations(pairs, size):
            rest = [p for p in pairs if p not in base]
            for extras in itertools.combinations(rest, k):
                yield frozenset(base), extras


def search_meta_witness(
    prop: PropertySpec,
    args: Iterable[str],
    attacks: Iterable[Pair],
    universe: SupportUniverse,
    kind: MetaKind,
    *,
    max_base: int | None = None,
    limits: Limits | None = None,
) -> MetaWitness | None:
    """First witness in canonical order (base size, base, extras), or None.

    Raises ``ResourceError`` once more than ``limits.max_candidates``
    candidates have been tried without success.
    """
    limits = limits or default_limits()
    base_baf = Baf(frozenset(args), frozenset(attacks))
    _check_params(prop, base_baf.args)
    for a, b in universe.pairs:
        if a not in base_baf.args or b not in base_baf.args:
            raise DomainError(f"universe pair {a} {b} is not over the arguments")
    k = 3 if kind is MetaKind.NON_SIMPLE else 2
    cache: dict[frozenset[Pair], bool] = {}

    def holds(rel: frozenset[Pair]) -> bool:
        v = cache.get(rel)
        if v is None:
            v = cache[rel] = evaluate_property(prop, base_baf.with_supports(rel), limits)
        return v

    tried = 0
    for base, extras in _candidates(universe.pairs, k, max_base):
        tried += 1
        if tried > limits.max_candidates:
            raise ResourceError("meta-witness search (candidates)", tried, limits.max_candidates)
        w = MetaWitness(base, extras, kind)
        ok = True
        for size in range(k + 1):
            for s in itertools.combinations(extras, size):
                if holds(base | frozenset(s)) != _expected(w, frozenset(s)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return w
    return None
