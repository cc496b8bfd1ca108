"""Slow reference semantics, written straight from the definitions.

This module shares nothing with ``baf`` beyond the ``Baf`` value type: it
walks explicit argument sequences and compares explicit sets.  It exists
to cross-check the fast evaluator, so keep it naive.
"""
from __future__ import annotations

from itertools import combinations

from .baf import Baf


def _support_sequences_from(baf: Baf, a: str):
    """Yield the end of every simple-or-closing support sequence starting at ``a``."""
    out = {}
    for x, y in baf.supports:
        out.setdefault(x, []).append(y)
    stack = [(a, (a,))]
    while stack:
        node, seq = stack.pop()
        for nxt in out.get(node, []):
            yield nxt
            # revisiting a node adds no new endpoints
            if nxt not in seq:
                stack.append((nxt, seq + (nxt,)))


def support_path(baf: Baf, a: str, b: str) -> bool:
    return any(end == b for end in _support_sequences_from(baf, a))


def supported_attack(baf: Baf, a: str, b: str) -> bool:
    return any(
        support_path(baf, a, m) and (m, b) in baf.attacks for m in baf.args
    )


def secondary_attack(baf: Baf, a: str, b: str) -> bool:
    return any(
        (a, m) in baf.attacks and (m == b or support_path(baf, m, b)) for m in baf.args
    )


def set_attacks(baf: Baf, delta, b: str) -> bool:
    return any(supported_attack(baf, a, b) or secondary_attack(baf, a, b) for a in delta)


def set_supports(baf: Baf, delta, b: str) -> bool:
    return any(support_path(baf, a, b) for a in delta)


def conflict_free(baf: Baf, delta) -> bool:
    return not any(set_attacks(baf, {a}, b) for a in delta for b in delta)


def safe(baf: Baf, delta) -> bool:
    return not any(
        set_attacks(baf, delta, b) and (set_supports(baf, delta, b) or b in delta)
        for b in baf.args
    )


def closed(baf: Baf, delta) -> bool:
    return all(b in delta for b in baf.args if set_supports(baf, delta, b))


def defends(baf: Baf, delta, b: str) -> bool:
    return all(
        any((c, a) in baf.attacks for c in delta)
        for a in baf.args
        if (a, b) in baf.attacks
    )


def admissible(baf: Baf, delta, flavour: str) -> bool:
    self_defending = all(defends(baf, delta, b) for b in delta)
    if flavour == "d":
        return conflict_free(baf, delta) and self_defending
    if flavour == "s":
        return safe(baf, delta) and self_defending
    if flavour == "c":
        return conflict_free(baf, delta) and self_defending and closed(baf, delta)
    raise ValueError(flavour)


def stable(baf: Baf, delta) -> bool:
    return conflict_free(baf, delta) and all(
        set_attacks(baf, delta, a) for a in baf.args if a not in delta
    )


def subsets(args):
    names = sorted(args)
    for r in range(len(names) + 1):
        for c in combinations(names, r):
            yield frozenset(c)


def extensions(baf: Baf, semantics: str) -> set[frozenset[str]]:
    """``semantics`` is one of d, s, c (preferred) or stable."""
    if semantics == "stable":
        return {d for d in subsets(baf.args) if stable(baf, d)}
    adm = [d for d in subsets(baf.args) if admissible(baf, d, semantics)]
    return {d for d in adm if not any(d < e for e in adm)}
