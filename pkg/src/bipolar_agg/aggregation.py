"""Profiles of support relations, aggregation rules and their axioms.

Axiom checks are exhaustive over a finite *domain*: every profile whose
agent relations are subsets of a declared ``SupportUniverse``.  A positive
verdict certifies the axiom on that domain only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .baf import Baf, Pair, check_argument_name, format_relation
from .config import Limits, default_limits
from .errors import DomainError, ResourceError


@dataclass(frozen=True)
class Profile:
    """Shared arguments and attacks plus one support relation per agent.

    Agents are numbered from 1.  Each agent framework must satisfy the
    essential constraint unless ``allow_ec_violation`` is set.
    """

    args: frozenset[str]
    attacks: frozenset[Pair]
    agent_supports: tuple[frozenset[Pair], ...]
    allow_ec_violation: bool = field(default=False, compare=False)

    def __post_init__(self):
        args = frozenset(check_argument_name(a) for a in self.args)
        attacks = frozenset((a, b) for a, b in self.attacks)
        agents = tuple(frozenset((a, b) for a, b in rel) for rel in self.agent_supports)
        if not agents:
            raise DomainError("a profile needs at least one agent")
        for a, b in attacks:
            if a not in args or b not in args:
                raise DomainError(f"attack {a} {b}: unknown argument")
        for i, rel in enumerate(agents, start=1):
            for a, b in rel:
                if a not in args or b not in args:
                    raise DomainError(f"agent {i}: support {a} {b}: unknown argument")
            if not self.allow_ec_violation and rel & attacks:
                (a, b) = min(rel & attacks)
                raise DomainError(
                    f"agent {i}: {a} {b} is both an attack and a support (essential constraint)"
                )
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "attacks", attacks)
        object.__setattr__(self, "agent_supports", agents)

    @property
    def n(self) -> int:
        return len(self.agent_supports)

    def agent_baf(self, i: int) -> Baf:
        if not 1 <= i <= self.n:
            raise DomainError(f"agent {i} out of range 1..{self.n}")
        return Baf(self.args, self.attacks, self.agent_supports[i - 1])

    def bafs(self) -> list[Baf]:
        return [self.agent_baf(i) for i in range(1, self.n + 1)]

    def outcome_baf(self, supports: Iterable[Pair]) -> Baf:
        return Baf(self.args, self.attacks, frozenset(supports))

    def __str__(self) -> str:
        agents = "; ".join(
            f"{i}: {format_relation(rel)}" for i, rel in enumerate(self.agent_supports, start=1)
        )
        return f"Profile(attacks={format_relation(self.attacks, '=>')}, agents=[{agents}])"


def supporter_set(profile: Profile, sup: Pair) -> frozenset[int]:
    a, b = sup
    if a not in profile.args or b not in profile.args:
        raise DomainError(f"pair {a} {b} is not over the profile's arguments")
    return frozenset(i for i, rel in enumerate(profile.agent_supports, start=1) if sup in rel)


# -- rules -------------------------------------------------------------------


class AggregationRule:
    """Maps a profile to one support relation.

    Subclasses may implement ``combine_masks`` as a fast path over bitmask
    encodings of the agents' relations; returning ``None`` falls back to
    ``__call__`` on a materialised ``Profile``.
    """

    name = "rule"

    def __call__(self, profile: Profile) -> frozenset[Pair]:
        raise NotImplementedError

    def combine_masks(self, masks: Sequence[int]) -> int | None:
        return None

    def validate(self, n: int) -> None:
        pass


@dataclass(frozen=True)
class Quota(AggregationRule):
    """Accept a support iff at least ``q`` agents hold it."""

    q: int

    @property
    def name(self) -> str:
        return f"quota:{self.q}"

    def validate(self, n: int) -> None:
        if not 1 <= self.q <= n:
            raise DomainError(f"quota {self.q} out of range 1..{n}")

    def __call__(self, profile: Profile) -> frozenset[Pair]:
        self.validate(profile.n)
        counts: dict[Pair, int] = {}
        for rel in profile.agent_supports:
            for p in rel:
                counts[p] = counts.get(p, 0) + 1
        return frozenset(p for p, c in counts.items() if c >= self.q)

    def combine_masks(self, masks: Sequence[int]) -> int:
        out = 0
        for group in itertools.combinations(masks, self.q):
            acc = group[0]
            for m in group[1:]:
                acc &= m
            out |= acc
        return out


@dataclass(frozen=True)
class Dictatorship(AggregationRule):
    """Return agent ``i``'s relation verbatim (agents numbered from 1)."""

    i: int

    @property
    def name(self) -> str:
        return f"dictator:{self.i}"

    def validate(self, n: int) -> None:
        if not 1 <= self.i <= n:
            raise DomainError(f"dictator {self.i} out of range 1..{n}")

    def __call__(self, profile: Profile) -> frozenset[Pair]:
        self.validate(profile.n)
        return profile.agent_supports[self.i - 1]

    def combine_masks(self, masks: Sequence[int]) -> int:
        return masks[self.i - 1]


@dataclass(frozen=True)
class CallableRule(AggregationRule):
    """Wrap an arbitrary function of a profile; treated as a black box."""

    fn: Callable[[Profile], Iterable[Pair]]
    label: str = "external"

    @property
    def name(self) -> str:
        return self.label

    def __call__(self, profile: Profile) -> frozenset[Pair]:
        return frozenset(self.fn(profile))


def unanimity(n: int) -> Quota:
    return Quota(n)


def majority(n: int) -> Quota:
    # strict majority: ceil((n + 1) / 2)
    return Quota(n // 2 + 1)


def nomination() -> Quota:
    return Quota(1)


def parse_rule(text: str, n: int) -> AggregationRule:
    """Parse ``quota:<q>``, ``unanimity``, ``majority``, ``nomination`` or ``dictator:<i>``."""
    text = text.strip()
    if text == "unanimity":
        rule: AggregationRule = unanimity(n)
    elif text == "majority":
        rule = majority(n)
    elif text == "nomination":
        rule = nomination()
    elif text.startswith("quota:") or text.startswith("dictator:"):
        head, _, num = text.partition(":")
        try:
            value = int(num)
        except ValueError:
            raise DomainError(f"bad rule parameter in {text!r}") from None
        rule = Quota(value) if head == "quota" else Dictatorship(value)
    else:
        raise DomainError(
            f"unknown rule {text!r}; expected quota:<q>, unanimity, majority, nomination or dictator:<i>"
        )
    rule.validate(n)
    return rule


def aggregate(rule: AggregationRule, profile: Profile) -> frozenset[Pair]:
    rule.validate(profile.n)
    return frozenset(rule(profile))


# -- enumerated domains ------------------------------------------------------


@dataclass(frozen=True)
class SupportUniverse:
    """Candidate support pairs that agent relations are drawn from."""

    pairs: tuple[Pair, ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted({(a, b) for a, b in self.pairs})))

    @classmethod
    def all_pairs(cls, args: Iterable[str], attacks: Iterable[Pair] = ()) -> "SupportUniverse":
        """Every ordered pair over ``args`` (self-pairs included) that is not an attack."""
        names = sorted(args)
        excluded = set(attacks)
        return cls(tuple(p for p in itertools.product(names, repeat=2) if p not in excluded))

    def args(self) -> frozenset[str]:
        return frozenset(x for p in self.pairs for x in p)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)


class Domain:
    """All profiles of ``n`` agents over a universe, in canonical order.

    A profile is encoded as one mask per agent; bit ``m - 1 - k`` of a mask
    stands for ``universe.pairs[k]``, so counting masks upward walks the
    profiles lexicographically (agent-major, pair-minor).
    """

    def __init__(
        self,
        universe: SupportUniverse,
        n: int,
        args: Iterable[str] | None = None,
        attacks: Iterable[Pair] = (),
        allow_ec_violation: bool = False,
        limits: Limits | None = None,
    ):
        if n < 1:
            raise DomainError("need at least one agent")
        self.universe = universe
        self.n = n
        self.attacks = frozenset((a, b) for a, b in attacks)
        self.args = frozenset(args) if args is not None else universe.args() | {
            x for p in self.attacks for x in p
        }
        for a, b in universe.pairs:
            if a not in self.args or b not in self.args:
                raise DomainError(f"universe pair {a} {b} is not over the arguments")
        clash = set(universe.pairs) & self.attacks
        if clash and not allow_ec_violation:
            a, b = min(clash)
            raise DomainError(
                f"universe pair {a} {b} is also an attack; pass allow_ec_violation to permit"
            )
        self.allow_ec_violation = allow_ec_violation
        self.m = len(universe.pairs)
        self.size = 1 << (self.m * n)
        limits = limits or default_limits()
        if self.size > limits.max_profiles:
            raise ResourceError("profile enumeration", self.size, limits.max_profiles)
        self._decoded: dict[int, frozenset[Pair]] = {}
        self.base = Baf(self.args, self.attacks)

    def describe(self) -> str:
        return (
            f"{self.size} profiles: n={self.n}, args={{{', '.join(sorted(self.args))}}}, "
            f"attacks={format_relation(self.attacks, '=>')}, universe={format_relation(self.universe.pairs)}"
        )

    def relation(self, mask: int) -> frozenset[Pair]:
        rel = self._decoded.get(mask)
        if rel is None:
            m = self.m
            rel = frozenset(self.universe.pairs[k] for k in range(m) if mask >> (m - 1 - k) & 1)
            self._decoded[mask] = rel
        return rel

    def pair_bit(self, k: int) -> int:
        return 1 << (self.m - 1 - k)

    def agent_masks(self) -> range:
        return range(1 << self.m)

    def iter_masks(self, start: int = 0, stop: int | None = None) -> Iterator[tuple[int, ...]]:
        """Profiles by index; index bits are the agents' masks concatenated, agent 1 first."""
        stop = self.size if stop is None else stop
        if start == 0 and stop == self.size:
            yield from itertools.product(self.agent_masks(), repeat=self.n)
            return
        width = self.m
        low = (1 << width) - 1
        for idx in range(start, stop):
            yield tuple((idx >> (width * (self.n - 1 - j))) & low for j in range(self.n))

    def profile(self, masks: Sequence[int]) -> Profile:
        return Profile(
            self.args,
            self.attacks,
            tuple(self.relation(mk) for mk in masks),
            allow_ec_violation=self.allow_ec_violation,
        )

    def outcome(self, rule: AggregationRule, masks: Sequence[int]) -> frozenset[Pair]:
        fast = rule.combine_masks(masks)
        if fast is not None:
            return self.relation(fast)
        return frozenset(rule(self.profile(masks)))

    def supporters(self, masks: Sequence[int], k: int) -> frozenset[int]:
        bit = self.pair_bit(k)
        return frozenset(i for i, mk in enumerate(masks, start=1) if mk & bit)


def profile_space(
    universe: SupportUniverse,
    n: int,
    args: Iterable[str] | None = None,
    attacks: Iterable[Pair] = (),
    allow_ec_violation: bool = False,
    limits: Limits | None = None,
) -> Iterator[Profile]:
    dom = Domain(universe, n, args, attacks, allow_ec_violation, limits)
    for masks in dom.iter_masks():
        yield dom.profile(masks)


# -- axioms ------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomWitness:
    profiles: tuple[Profile, ...]
    pairs: tuple[Pair, ...]
    note: str


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    holds: bool
    domain: str
    witness: AxiomWitness | None = None

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("a verdict carries a witness exactly when the axiom fails")

    def __str__(self) -> str:
        head = f"{self.axiom}: {'holds' if self.holds else 'fails'} on {self.domain}"
        if self.witness is None:
            return head
        return f"{head}; {self.witness.note}"


def _domain(rule, universe, n, args, attacks, limits) -> Domain:
    rule.validate(n)
    return Domain(universe, n, args, attacks, False, limits)


def check_unanimous(rule, universe, n, *, args=None, attacks=(), limits=None) -> AxiomVerdict:
    dom = _domain(rule, universe, n, args, attacks, limits)
    full = (1 << dom.m) - 1
    for masks in dom.iter_masks():
        common = full
        for mk in masks:
            common &= mk
        missing = dom.relation(common) - dom.outcome(rule, masks)
        if missing:
            p = min(missing)
            return AxiomVerdict(
                "unanimous", False, dom.describe(),
                AxiomWitness((dom.profile(masks),), (p,), f"{p[0]}>{p[1]} held by all agents but rejected"),
            )
    return AxiomVerdict("unanimous", True, dom.describe())


def check_grounded(rule, universe, n, *, args=None, attacks=(), limits=None) -> AxiomVerdict:
    dom = _domain(rule, universe, n, args, attacks, limits)
    for masks in dom.iter_masks():
        union = 0
        for mk in masks:
            union |= mk
        extra = dom.outcome(rule, masks) - dom.relation(union)
        if extra:
            p = min(extra)
            return AxiomVerdict(
                "grounded", False, dom.describe(),
                AxiomWitness((dom.profile(masks),), (p,), f"{p[0]}>{p[1]} accepted but held by no agent"),
            )
    return AxiomVerdict("grounded", True, dom.describe())


def _pair_memberships(dom: Domain, rule, masks) -> Iterator[tuple[Pair, frozenset[int], bool]]:
    out = dom.outcome(rule, masks)
    for k, p in enumerate(dom.universe.pairs):
        yield p, dom.supporters(masks, k), p in out
    # accepted pairs outside the universe are held by nobody
    for p in sorted(out - set(dom.universe.pairs)):
        yield p, frozenset(), True


def check_neutral(rule, universe, n, *, args=None, attacks=(), limits=None) -> AxiomVerdict:
    dom = _domain(rule, universe, n, args, attacks, limits)
    for masks in dom.iter_masks():
        seen: dict[frozenset[int], tuple[Pair, bool]] = {}
        for p, who, accepted in _pair_memberships(dom, rule, masks):
            if who in seen and seen[who][1] != accepted:
                q = seen[who][0]
                return AxiomVerdict(
                    "neutral", False, dom.describe(),
                    AxiomWitness(
                        (dom.profile(masks),), (q, p),
                        f"{q[0]}>{q[1]} and {p[0]}>{p[1]} have equal supporters but different outcomes",
                    ),
                )
            seen.setdefault(who, (p, accepted))
    return AxiomVerdict("neutral", True, dom.describe())


def check_independent(rule, universe, n, *, args=None, attacks=(), limits=None) -> AxiomVerdict:
    dom = _domain(rule, universe, n, args, attacks, limits)
    seen: dict[tuple[Pair, frozenset[int]], tuple[tuple[int, ...], bool]] = {}
    for masks in dom.iter_masks():
        for p, who, accepted in _pair_memberships(dom, rule, masks):
            key = (p, who)
            if key in seen and seen[key][1] != accepted:
                first = seen[key][0]
                return AxiomVerdict(
                    "independent", False, dom.describe(),
                    AxiomWitness(
                        (dom.profile(first), dom.profile(masks)), (p,),
                        f"{p[0]}>{p[1]} has the same supporters in both profiles but different outcomes",
                    ),
                )
            seen.setdefault(key, (tuple(masks), accepted))
    return AxiomVerdict("independent", True, dom.describe())


def check_dictatorial(rule, universe, n, *, args=None, attacks=(), limits=None) -> AxiomVerdict:
    """Is there an agent whose relation is returned on every profile of the domain?"""
    dom = _domain(rule, universe, n, args, attacks, limits)
    candidates = set(range(1, n + 1))
    last = None
    for masks in dom.iter_masks():
        out = dom.outcome(rule, masks)
        candidates = {i for i in candidates if dom.relation(masks[i - 1]) == out}
        last = masks
        if not candidates:
            break
    if candidates:
        return AxiomVerdict("dictatorial", True, dom.describe())
    return AxiomVerdict(
        "dictatorial", False, dom.describe(),
        AxiomWitness((dom.profile(last),), (), "every agent is overruled on some profile"),
    )


# -- winning coalitions ------------------------------------------------------


def all_coalitions(n: int) -> list[frozenset[int]]:
    agents = range(1, n + 1)
    return [
        frozenset(c) for size in range(n + 1) for c in itertools.combinations(agents, size)
    ]


def _coalition_key(c: frozenset[int]) -> tuple[int, tuple[int, ...]]:
    return (len(c), tuple(sorted(c)))


@dataclass(frozen=True)
class CoalitionFamily:
    n: int
    members: frozenset[frozenset[int]]

    def __post_init__(self):
        members = frozenset(frozenset(c) for c in self.members)
        for c in members:
            if not all(1 <= i <= self.n for i in c):
                raise DomainError(f"coalition {sorted(c)} is not a subset of 1..{self.n}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of_quota(cls, n: int, q: int) -> "CoalitionFamily":
        return cls(n, frozenset(c for c in all_coalitions(n) if len(c) >= q))

    @classmethod
    def containing(cls, n: int, i: int) -> "CoalitionFamily":
        return cls(n, frozenset(c for c in all_coalitions(n) if i in c))

    def __contains__(self, coalition) -> bool:
        return frozenset(coalition) in self.members

    def sorted(self) -> list[frozenset[int]]:
        return sorted(self.members, key=_coalition_key)

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.sorted()) + "}"


class Extraction(NamedTuple):
    family: CoalitionFamily
    consistent: bool
    witness: AxiomWitness | None = None


def extract_winning_coalitions(
    rule, universe: SupportUniverse, n: int, *, args=None, attacks=(), limits=None
) -> Extraction:
    """Read off the winning coalitions of ``rule`` and check they determine it.

    Each coalition is probed with the least pair of the universe held by
    exactly that coalition.  The family is then validated against every
    pair of every profile in the domain.
    """
    if not universe.pairs:
        raise DomainError("coalition extraction needs a non-empty universe")
    dom = _domain(rule, universe, n, args, attacks, limits)
    probe_bit = dom.pair_bit(0)
    probe = universe.pairs[0]
    winners = set()
    for c in all_coalitions(n):
        masks = tuple(probe_bit if i in c else 0 for i in range(1, n + 1))
        if probe in dom.outcome(rule, masks):
            winners.add(c)
    family = CoalitionFamily(n, frozenset(winners))
    empty_wins = frozenset() in family
    for masks in dom.iter_masks():
        out = dom.outcome(rule, masks)
        for p, who, accepted in _pair_memberships(dom, rule, masks):
            if accepted != (who in family):
                return Extraction(family, False, AxiomWitness(
                    (dom.profile(masks),), (p,),
                    f"{p[0]}>{p[1]} with supporters {sorted(who)} "
                    f"{'accepted' if accepted else 'rejected'} against the probed coalitions",
                ))
        if empty_wins:
            # every pair nobody holds must be accepted
            missing = {
                (a, b) for a in dom.args for b in dom.args
            } - set(dom.universe.pairs) - out
            if missing:
                p = min(missing)
                return Extraction(family, False, AxiomWitness(
                    (dom.profile(masks),), (p,), f"{p[0]}>{p[1]} held by nobody yet rejected",
                ))
    return Extraction(family, True)


@dataclass(frozen=True)
class UltrafilterViolation:
    condition: str  # "empty", "intersection" or "maximality"
    coalitions: tuple[frozenset[int], ...]

    def __str__(self) -> str:
        sets = [("{" + ",".join(map(str, sorted(c))) + "}") for c in self.coalitions]
        if self.condition == "empty":
            return "empty coalition is winning"
        if self.condition == "intersection":
            return f"{sets[0]} and {sets[1]} win but their intersection {sets[2]} does not"
        return f"neither {sets[0]} nor its complement {sets[1]} wins"


def is_ultrafilter(w: CoalitionFamily) -> tuple[bool, UltrafilterViolation | None]:
    if frozenset() in w.members:
        return False, UltrafilterViolation("empty", (frozenset(),))
    ordered = w.sorted()
    for x, y in itertools.combinations(ordered, 2):
        meet = x & y
        if meet not in w.members:
            return False, UltrafilterViolation("intersection", (x, y, meet))
    everyone = frozenset(range(1, w.n + 1))
    for c in all_coalitions(w.n):
        if c not in w.members and everyone - c not in w.members:
            return False, UltrafilterViolation("maximality", (c, everyone - c))
    return True, None


def detect_dictator(rule, universe: SupportUniverse, n: int, **kwargs) -> int | None:
    family, consistent, _ = extract_winning_coalitions(rule, universe, n, **kwargs)
    if not consistent:
        return None
    for i in range(1, n + 1):
        if family == CoalitionFamily.containing(n, i):
            return i
    return None
