"""Line-based text formats for frameworks, profiles, domains and witnesses.

All formats share the same lexical rules: UTF-8, one directive per line,
``#`` starts a comment, tokens are separated by whitespace.

    args A B C D E
    attack D E
    support A B

Profiles put ``args``/``attack`` lines first, then ``agent <k>`` blocks of
``support`` lines.  Domains use ``universe <src> <dst>`` (or
``universe all``) and ``agents <n>``.  Witness files use ``base`` and
``extra`` lines; extras keep their file order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .aggregation import Profile, SupportUniverse
from .baf import Baf, Pair
from .errors import ParseError
from .preservation import MetaKind, MetaWitness


def _tokens(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield (line number, [(column, token), ...]) for each non-blank line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        while col < len(line):
            if line[col].isspace():
                col += 1
                continue
            start = col
            while col < len(line) and not line[col].isspace():
                col += 1
            toks.append((start + 1, line[start:col]))
        if toks:
            yield lineno, toks


class _Reader:
    """Shared state for ``args``/``attack``/edge directives."""

    def __init__(self):
        self.args: list[str] = []
        self.arg_set: set[str] = set()
        self.attacks: set[Pair] = set()

    def declare_args(self, lineno, toks):
        if len(toks) < 2:
            raise ParseError("'args' needs at least one argument name", lineno, toks[0][0] + len(toks[0][1]))
        for col, name in toks[1:]:
            if name in self.arg_set:
                raise ParseError(f"argument {name!r} declared twice", lineno, col)
            self.args.append(name)
            self.arg_set.add(name)

    def edge(self, lineno, toks) -> Pair:
        directive = toks[0][1]
        if len(toks) != 3:
            col = toks[3][0] if len(toks) > 3 else toks[-1][0] + len(toks[-1][1])
            raise ParseError(f"'{directive}' takes exactly two argument names", lineno, col)
        for col, name in toks[1:]:
            if name not in self.arg_set:
                raise ParseError(f"unknown argument {name!r}", lineno, col)
        return (toks[1][1], toks[2][1])

    def attack(self, lineno, toks):
        pair = self.edge(lineno, toks)
        if pair in self.attacks:
            raise ParseError(f"duplicate attack {pair[0]} {pair[1]}", lineno, toks[0][0])
        self.attacks.add(pair)

    def require_args(self, lineno=None):
        if not self.args:
            raise ParseError("no 'args' line", lineno or 1, 1)


def _unknown(lineno, toks, allowed):
    raise ParseError(
        f"unknown directive {toks[0][1]!r} (expected {', '.join(allowed)})", lineno, toks[0][0]
    )


def parse_baf(text: str) -> Baf:
    r = _Reader()
    supports: set[Pair] = set()
    for lineno, toks in _tokens(text):
        d = toks[0][1]
        if d == "args":
            r.declare_args(lineno, toks)
        elif d == "attack":
            r.attack(lineno, toks)
        elif d == "support":
            pair = r.edge(lineno, toks)
            if pair in supports:
                raise ParseError(f"duplicate support {pair[0]} {pair[1]}", lineno, toks[0][0])
            supports.add(pair)
        else:
            _unknown(lineno, toks, ["args", "attack", "support"])
    r.require_args()
    return Baf(frozenset(r.args), frozenset(r.attacks), frozenset(supports))


def parse_profile(text: str, allow_ec_violation: bool = False) -> Profile:
    r = _Reader()
    agents: list[set[Pair]] = []
    for lineno, toks in _tokens(text):
        d = toks[0][1]
        if d == "args":
            if agents:
                raise ParseError("'args' must precede the agent blocks", lineno, toks[0][0])
            r.declare_args(lineno, toks)
        elif d == "attack":
            if agents:
                raise ParseError("'attack' must precede the agent blocks", lineno, toks[0][0])
            r.attack(lineno, toks)
        elif d == "agent":
            if len(toks) != 2 or not toks[1][1].isdigit():
                raise ParseError("expected 'agent <k>'", lineno, toks[-1][0])
            k = int(toks[1][1])
            if k != len(agents) + 1:
                raise ParseError(f"agent {k} out of order; expected agent {len(agents) + 1}", lineno, toks[1][0])
            agents.append(set())
        elif d == "support":
            if not agents:
                raise ParseError("'support' outside an agent block", lineno, toks[0][0])
            pair = r.edge(lineno, toks)
            if pair in agents[-1]:
                raise ParseError(f"duplicate support {pair[0]} {pair[1]} for agent {len(agents)}", lineno, toks[0][0])
            if pair in r.attacks and not allow_ec_violation:
                raise ParseError(
                    f"agent {len(agents)}: {pair[0]} {pair[1]} is also an attack (essential constraint)",
                    lineno, toks[0][0],
                )
            agents[-1].add(pair)
        else:
            _unknown(lineno, toks, ["args", "attack", "agent", "support"])
    r.require_args()
    if not agents:
        raise ParseError("profile has no agent blocks", 1, 1)
    return Profile(
        frozenset(r.args),
        frozenset(r.attacks),
        tuple(frozenset(a) for a in agents),
        allow_ec_violation=allow_ec_violation,
    )


@dataclass(frozen=True)
class DomainSpec:
    args: frozenset[str]
    attacks: frozenset[Pair]
    universe: SupportUniverse
    n: int | None


def parse_domain(text: str) -> DomainSpec:
    r = _Reader()
    pairs: set[Pair] = set()
    use_all = False
    n = None
    for lineno, toks in _tokens(text):
        d = toks[0][1]
        if d == "args":
            r.declare_args(lineno, toks)
        elif d == "attack":
            r.attack(lineno, toks)
        elif d == "universe":
            if len(toks) == 2 and toks[1][1] == "all":
                use_all = True
                continue
            pair = r.edge(lineno, toks)
            if pair in pairs:
                raise ParseError(f"duplicate universe pair {pair[0]} {pair[1]}", lineno, toks[0][0])
            pairs.add(pair)
        elif d == "agents":
            if len(toks) != 2 or not toks[1][1].isdigit() or int(toks[1][1]) < 1:
                raise ParseError("expected 'agents <n>' with n >= 1", lineno, toks[-1][0])
            n = int(toks[1][1])
        else:
            _unknown(lineno, toks, ["args", "attack", "universe", "agents"])
    r.require_args()
    if use_all:
        pairs |= set(SupportUniverse.all_pairs(r.args, r.attacks).pairs)
    return DomainSpec(frozenset(r.args), frozenset(r.attacks), SupportUniverse(tuple(pairs)), n)


def parse_witness(text: str, kind: MetaKind) -> MetaWitness:
    base: list[Pair] = []
    extras: list[Pair] = []
    for lineno, toks in _tokens(text):
        d = toks[0][1]
        if d not in ("base", "extra"):
            _unknown(lineno, toks, ["base", "extra"])
        if len(toks) != 3:
            raise ParseError(f"'{d}' takes exactly two argument names", lineno, toks[0][0])
        (base if d == "base" else extras).append((toks[1][1], toks[2][1]))
    return MetaWitness(frozenset(base), tuple(extras), kind)


# -- serialisation (canonical order) -----------------------------------------


def _header(args, attacks) -> list[str]:
    lines = ["args " + " ".join(sorted(args))]
    lines += [f"attack {a} {b}" for a, b in sorted(attacks)]
    return lines


def serialize_relation(pairs, directive: str = "support") -> str:
    return "".join(f"{directive} {a} {b}\n" for a, b in sorted(pairs))


def serialize_baf(baf: Baf) -> str:
    lines = _header(baf.args, baf.attacks)
    lines += [f"support {a} {b}" for a, b in sorted(baf.supports)]
    return "\n".join(lines) + "\n"


def serialize_profile(profile: Profile) -> str:
    lines = _header(profile.args, profile.attacks)
    for i, rel in enumerate(profile.agent_supports, start=1):
        lines.append(f"agent {i}")
        lines += [f"support {a} {b}" for a, b in sorted(rel)]
    return "\n".join(lines) + "\n"


def serialize_domain(spec: DomainSpec) -> str:
    lines = _header(spec.args, spec.attacks)
    lines += [f"universe {a} {b}" for a, b in spec.universe.pairs]
    if spec.n is not None:
        lines.append(f"agents {spec.n}")
    return "\n".join(lines) + "\n"


def serialize_witness(w: MetaWitness) -> str:
    lines = [f"base {a} {b}" for a, b in sorted(w.base)]
    lines += [f"extra {a} {b}" for a, b in w.extras]
    return "\n".join(lines) + "\n"
