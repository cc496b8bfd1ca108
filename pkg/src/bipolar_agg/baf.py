"""Bipolar argumentation frameworks and their semantics.

Everything here is evaluated directly from the definitions, with argument
sets encoded as bitmasks over the sorted argument names.  Frameworks are
small (the extension enumerator refuses more than ``Limits.max_args``
arguments), so brute force over all subsets is the intended strategy.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .config import Limits, default_limits
from .errors import DomainError, ResourceError

Pair = tuple[str, str]


class SemanticsKind(enum.Enum):
    D_PREFERRED = "d-preferred"
    S_PREFERRED = "s-preferred"
    C_PREFERRED = "c-preferred"
    STABLE = "stable"

    @classmethod
    def parse(cls, text: str) -> "SemanticsKind":
        for kind in cls:
            if kind.value == text:
                return kind
        raise DomainError(
            f"unknown semantics {text!r}; expected one of {', '.join(k.value for k in cls)}"
        )


def check_argument_name(name: str) -> str:
    if not isinstance(name, str) or not name or any(ch.isspace() for ch in name):
        raise DomainError(f"invalid argument name {name!r}")
    return name


def _as_pairs(pairs: Iterable[Pair]) -> frozenset[Pair]:
    out = set()
    for p in pairs:
        src, dst = p
        out.add((src, dst))
    return frozenset(out)


def sorted_pairs(pairs: Iterable[Pair]) -> list[Pair]:
    return sorted(pairs)


def format_set(members: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(members)) + "}"


def format_relation(pairs: Iterable[Pair], symbol: str = ">") -> str:
    return "{" + ", ".join(f"{a}{symbol}{b}" for a, b in sorted(pairs)) + "}"


class _Index:
    """Bitmask view of a framework, built once per Baf."""

    def __init__(self, baf: "Baf"):
        self.names: tuple[str, ...] = tuple(sorted(baf.args))
        self.pos = {name: i for i, name in enumerate(self.names)}
        n = len(self.names)
        self.n = n
        self.full = (1 << n) - 1
        self.att_out = [0] * n
        self.att_in = [0] * n
        self.sup_out = [0] * n
        for a, b in baf.attacks:
            self.att_out[self.pos[a]] |= 1 << self.pos[b]
            self.att_in[self.pos[b]] |= 1 << self.pos[a]
        for a, b in baf.supports:
            self.sup_out[self.pos[a]] |= 1 << self.pos[b]
        self.reach = self._transitive_closure()
        # supported attack: support path of length >= 1, then one attack edge
        self.supported_attack = [self._union(self.att_out, self.reach[i]) for i in range(n)]
        # secondary attack: one attack edge, then a support path of length >= 0
        self.secondary_attack = [
            self.att_out[i] | self._union(self.reach, self.att_out[i]) for i in range(n)
        ]
        self.set_attack = [self.supported_attack[i] | self.secondary_attack[i] for i in range(n)]

    def _transitive_closure(self) -> list[int]:
        reach = list(self.sup_out)
        changed = True
        while changed:
            changed = False
            for i in range(self.n):
                grown = reach[i] | self._union(reach, reach[i])
                if grown != reach[i]:
                    reach[i] = grown
                    changed = True
        return reach

    @staticmethod
    def _union(table: list[int], mask: int) -> int:
        acc = 0
        i = 0
        while mask:
            if mask & 1:
                acc |= table[i]
            mask >>= 1
            i += 1
        return acc

    def mask(self, members: Iterable[str]) -> int:
        m = 0
        for name in members:
            try:
                m |= 1 << self.pos[name]
            except KeyError:
                raise DomainError(f"unknown argument {name!r}") from None
        return m

    def bit(self, name: str) -> int:
        try:
            return self.pos[name]
        except KeyError:
            raise DomainError(f"unknown argument {name!r}") from None

    def members(self, mask: int) -> frozenset[str]:
        return frozenset(self.names[i] for i in range(self.n) if mask >> i & 1)

    # mask-level predicates; callers have already validated membership

    def attacked_by(self, mask: int) -> int:
        return self._union(self.set_attack, mask)

    def supported_by(self, mask: int) -> int:
        return self._union(self.reach, mask)

    def conflict_free(self, mask: int) -> bool:
        return self.attacked_by(mask) & mask == 0

    def safe(self, mask: int) -> bool:
        return self.attacked_by(mask) & (self.supported_by(mask) | mask) == 0

    def closed(self, mask: int) -> bool:
        return self.supported_by(mask) & ~mask == 0

    def defends(self, mask: int, b: int) -> bool:
        counter = self._union(self.att_out, mask)
        return self.att_in[b] & ~counter == 0

    def self_defending(self, mask: int) -> bool:
        counter = self._union(self.att_out, mask)
        return self._union(self.att_in, mask) & ~counter == 0

    def admissible(self, mask: int, kind: SemanticsKind) -> bool:
        if kind is SemanticsKind.D_PREFERRED:
            return self.conflict_free(mask) and self.self_defending(mask)
        if kind is SemanticsKind.S_PREFERRED:
            return self.safe(mask) and self.self_defending(mask)
        if kind is SemanticsKind.C_PREFERRED:
            return self.conflict_free(mask) and self.self_defending(mask) and self.closed(mask)
        raise DomainError(f"{kind.value} has no admissibility notion")

    def stable(self, mask: int) -> bool:
        return self.conflict_free(mask) and (self.full & ~mask) & ~self.attacked_by(mask) == 0


@dataclass(frozen=True)
class Baf:
    """An immutable bipolar argumentation framework.

    The essential constraint (attacks and supports disjoint) is deliberately
    not enforced here: aggregated outcomes can violate it, and that is
    something we want to be able to observe.
    """

    args: frozenset[str]
    attacks: frozenset[Pair] = frozenset()
    supports: frozenset[Pair] = frozenset()

    def __post_init__(self):
        args = frozenset(check_argument_name(a) for a in self.args)
        attacks = _as_pairs(self.attacks)
        supports = _as_pairs(self.supports)
        for label, rel in (("attack", attacks), ("support", supports)):
            for a, b in rel:
                for endpoint in (a, b):
                    if endpoint not in args:
                        raise DomainError(f"{label} {a} {b}: unknown argument {endpoint!r}")
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "attacks", attacks)
        object.__setattr__(self, "supports", supports)

    @cached_property
    def _ix(self) -> _Index:
        return _Index(self)

    def with_supports(self, supports: Iterable[Pair]) -> "Baf":
        return Baf(self.args, self.attacks, frozenset(supports))

    def __str__(self) -> str:
        return (
            f"Baf(args={format_set(self.args)}, attacks={format_relation(self.attacks, '=>')}, "
            f"supports={format_relation(self.supports)})"
        )


def _subset_mask(baf: Baf, delta: Iterable[str]) -> int:
    return baf._ix.mask(delta)


def support_reachable(baf: Baf, a: str, b: str) -> bool:
    """True iff a support path with at least one edge leads from ``a`` to ``b``."""
    ix = baf._ix
    return bool(ix.reach[ix.bit(a)] >> ix.bit(b) & 1)


def has_supported_attack(baf: Baf, a: str, b: str) -> bool:
    ix = baf._ix
    return bool(ix.supported_attack[ix.bit(a)] >> ix.bit(b) & 1)


def has_secondary_attack(baf: Baf, a: str, b: str) -> bool:
    """Direct attacks count: the trailing support path may be empty."""
    ix = baf._ix
    return bool(ix.secondary_attack[ix.bit(a)] >> ix.bit(b) & 1)


def set_attacks(baf: Baf, delta: Iterable[str], b: str) -> bool:
    ix = baf._ix
    return bool(ix.attacked_by(_subset_mask(baf, delta)) >> ix.bit(b) & 1)


def set_supports(baf: Baf, delta: Iterable[str], b: str) -> bool:
    ix = baf._ix
    return bool(ix.supported_by(_subset_mask(baf, delta)) >> ix.bit(b) & 1)


def closure(baf: Baf, delta: Iterable[str]) -> frozenset[str]:
    """``delta`` together with everything it set-supports."""
    ix = baf._ix
    m = _subset_mask(baf, delta)
    return ix.members(m | ix.supported_by(m))


def is_closed(baf: Baf, delta: Iterable[str]) -> bool:
    return baf._ix.closed(_subset_mask(baf, delta))


def is_conflict_free(baf: Baf, delta: Iterable[str]) -> bool:
    return baf._ix.conflict_free(_subset_mask(baf, delta))


def is_safe(baf: Baf, delta: Iterable[str]) -> bool:
    return baf._ix.safe(_subset_mask(baf, delta))


def defends(baf: Baf, delta: Iterable[str], b: str) -> bool:
    """Classical defence over the direct attack relation only."""
    ix = baf._ix
    return ix.defends(_subset_mask(baf, delta), ix.bit(b))


def is_d_admissible(baf: Baf, delta: Iterable[str]) -> bool:
    return baf._ix.admissible(_subset_mask(baf, delta), SemanticsKind.D_PREFERRED)


def is_s_admissible(baf: Baf, delta: Iterable[str]) -> bool:
    return baf._ix.admissible(_subset_mask(baf, delta), SemanticsKind.S_PREFERRED)


def is_c_admissible(baf: Baf, delta: Iterable[str]) -> bool:
    return baf._ix.admissible(_subset_mask(baf, delta), SemanticsKind.C_PREFERRED)


def is_admissible(baf: Baf, delta: Iterable[str], kind: SemanticsKind) -> bool:
    """Admissibility flavour matching a preferred semantics."""
    return baf._ix.admissible(_subset_mask(baf, delta), kind)


def is_stable(baf: Baf, delta: Iterable[str]) -> bool:
    return baf._ix.stable(_subset_mask(baf, delta))


def satisfies_essential_constraint(baf: Baf) -> bool:
    return not (baf.attacks & baf.supports)


def _check_cap(baf: Baf, limits: Limits | None) -> None:
    limits = limits or default_limits()
    if len(baf.args) > limits.max_args:
        raise ResourceError("extension enumeration (arguments)", len(baf.args), limits.max_args)


def _iter_extension_masks(ix: _Index, kind: SemanticsKind) -> Iterator[int]:
    if kind is SemanticsKind.STABLE:
        for m in range(ix.full + 1):
            if ix.stable(m):
                yield m
        return
    admissible = [m for m in range(ix.full + 1) if ix.admissible(m, kind)]
    admissible.sort(key=lambda m: -m.bit_count())
    maximal: list[int] = []
    for m in admissible:
        if not any(m & ~big == 0 for big in maximal):
            maximal.append(m)
    yield from maximal


def _canonical(sets: Iterable[frozenset[str]]) -> list[frozenset[str]]:
    return sorted(sets, key=lambda s: (len(s), sorted(s)))


def enumerate_extensions(
    baf: Baf, kind: SemanticsKind, limits: Limits | None = None
) -> list[frozenset[str]]:
    """All extensions of ``kind``, ordered by size then lexicographically."""
    _check_cap(baf, limits)
    ix = baf._ix
    return _canonical(ix.members(m) for m in _iter_extension_masks(ix, kind))


def is_extension(
    baf: Baf, delta: Iterable[str], kind: SemanticsKind, limits: Limits | None = None
) -> bool:
    _check_cap(baf, limits)
    ix = baf._ix
    m = _subset_mask(baf, delta)
    if kind is SemanticsKind.STABLE:
        return ix.stable(m)
    if not ix.admissible(m, kind):
        return False
    # walk the strict supersets of m
    rest = ix.full & ~m
    sub = rest
    while sub:
        if ix.admissible(m | sub, kind):
            return False
        sub = (sub - 1) & rest
    return True


def credulously_accepted(
    baf: Baf, a: str, kind: SemanticsKind, limits: Limits | None = None
) -> bool:
    _check_cap(baf, limits)
    ix = baf._ix
    b = 1 << ix.bit(a)
    return any(m & b for m in _iter_extension_masks(ix, kind))


def all_subsets(args: Iterable[str]) -> Iterator[frozenset[str]]:
    names = sorted(args)
    for m in range(1 << len(names)):
        yield frozenset(names[i] for i in range(len(names)) if m >> i & 1)
