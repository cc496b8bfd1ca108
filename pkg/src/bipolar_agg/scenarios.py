"""Fixtures for the worked figures and the reproduction suite built on them."""
from __future__ import annotations

import hashlib
import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Union

from . import reference
from .aggregation import (
    CoalitionFamily,
    Dictatorship,
    Profile,
    Quota,
    SupportUniverse,
    aggregate,
    detect_dictator,
    extract_winning_coalitions,
    is_ultrafilter,
    majority,
)
from .baf import (
    Baf,
    Pair,
    SemanticsKind,
    all_subsets,
    format_relation,
    format_set,
    has_secondary_attack,
    has_supported_attack,
    is_admissible,
    is_closed,
    is_conflict_free,
    is_safe,
)
from .config import Limits
from .errors import DomainError
from .formats import serialize_baf, serialize_profile, serialize_witness
from .preservation import (
    MetaKind,
    MetaWitness,
    PropertyKind,
    PropertySpec,
    check_preservation,
    find_counterexample,
    is_violation,
    meta_table,
    search_meta_witness,
    verify_meta_witness,
)


@dataclass(frozen=True)
class MetaScenario:
    """Arguments and attacks, a candidate witness, and the set it is about."""

    args: frozenset[str]
    attacks: frozenset[Pair]
    witness: MetaWitness
    delta: frozenset[str]


Payload = Union[Baf, Profile, MetaScenario]


@dataclass(frozen=True)
class NamedScenario:
    id: str
    payload: Payload
    expected: dict[str, Any] = field(hash=False, compare=False)
    caption: str = ""


def _pairs(text: str) -> frozenset[Pair]:
    return frozenset(tuple(p.split(">")) for p in text.split())


_PREFERRED = ("d-preferred", "s-preferred", "c-preferred")


def _fig1_supported() -> NamedScenario:
    baf = Baf(
        frozenset("A1 B1 C1 D1 E1".split()),
        _pairs("D1>E1"),
        _pairs("A1>B1 B1>C1 C1>D1"),
    )
    return NamedScenario(
        "fig1_supported", baf,
        {"supported_attack": [["A1", "E1", True]], "secondary_attack": [["A1", "E1", False]]},
        "support chain A1..D1 followed by the attack D1 => E1",
    )


def _fig1_secondary() -> NamedScenario:
    baf = Baf(
        frozenset("A2 B2 C2 D2 E2".split()),
        _pairs("A2>B2"),
        _pairs("B2>C2 C2>D2 D2>E2"),
    )
    return NamedScenario(
        "fig1_secondary", baf,
        {"supported_attack": [["A2", "E2", False]], "secondary_attack": [["A2", "E2", True]]},
        "attack A2 => B2 followed by the support chain B2..E2",
    )


def _fig2_profile() -> NamedScenario:
    profile = Profile(
        frozenset("ABCDE"),
        _pairs("D>E"),
        (_pairs("A>B B>C"), _pairs("B>C C>D"), _pairs("A>B C>D")),
    )
    return NamedScenario(
        "fig2_profile", profile,
        {
            "majority_outcome": [["A", "B"], ["B", "C"], ["C", "D"]],
            "delta": ["A", "E"],
            "universe": [["A", "B"], ["B", "C"], ["C", "D"]],
        },
        "three agents, attack D => E; majority accepts the chain A > B > C > D",
    )


def _meta(sid, args, attacks, extras, delta, kind, semantics, caption) -> NamedScenario:
    w = MetaWitness(frozenset(), tuple(tuple(p.split(">")) for p in extras.split()), kind)
    payload = MetaScenario(frozenset(args.split()), _pairs(attacks), w, frozenset(delta.split()))
    return NamedScenario(sid, payload, {"semantics": list(semantics), "valid": True}, caption)


_BUILDERS: dict[str, Callable[[], NamedScenario]] = {
    "fig1_supported": _fig1_supported,
    "fig1_secondary": _fig1_secondary,
    "fig2_profile": _fig2_profile,
    "fig3_nonsimple": lambda: _meta(
        "fig3_nonsimple", "A B C D E", "D>E E>D B>B C>C", "A>B B>C C>D", "A E",
        MetaKind.NON_SIMPLE, _PREFERRED, "deductive support, non-simplicity of preferred extensions",
    ),
    "fig3_disjunctive": lambda: _meta(
        "fig3_disjunctive", "A B C D E", "B>C B>D C>E D>E", "A>C A>D", "A B",
        MetaKind.DISJUNCTIVE, _PREFERRED, "deductive support, disjunctiveness of preferred extensions",
    ),
    "fig4_nonsimple": lambda: _meta(
        "fig4_nonsimple", "A B C D E", "D>E E>D B>B C>C", "B>A C>B D>C", "A E",
        MetaKind.NON_SIMPLE, _PREFERRED, "necessary support, non-simplicity of preferred extensions",
    ),
    "fig4_disjunctive": lambda: _meta(
        "fig4_disjunctive", "A B C D", "B>C B>D", "C>A D>A", "B",
        MetaKind.DISJUNCTIVE, _PREFERRED, "necessary support, disjunctiveness of preferred extensions",
    ),
    "fig5_nonsimple": lambda: _meta(
        "fig5_nonsimple", "A B C D E", "D>E E>B E>C E>D", "A>B B>C C>D", "A E",
        MetaKind.NON_SIMPLE, ("stable",), "non-simplicity of stable extensions",
    ),
    "fig5_disjunctive": lambda: _meta(
        "fig5_disjunctive", "A B C D E", "B>C B>D C>E D>E", "A>C A>D", "A B",
        MetaKind.DISJUNCTIVE, ("stable",), "disjunctiveness of stable extensions",
    ),
}

SCENARIO_IDS = tuple(_BUILDERS)


def load_scenario(sid: str) -> NamedScenario:
    try:
        builder = _BUILDERS[sid]
    except KeyError:
        raise DomainError(f"unknown scenario {sid!r}; valid ids: {', '.join(_BUILDERS)}") from None
    return builder()


def canonical_text(s: NamedScenario) -> str:
    p = s.payload
    if isinstance(p, Baf):
        body = serialize_baf(p)
    elif isinstance(p, Profile):
        body = serialize_profile(p)
    else:
        body = serialize_baf(Baf(p.args, p.attacks)) + serialize_witness(p.witness)
        body += "delta " + " ".join(sorted(p.delta)) + "\n"
    return f"scenario {s.id}\n{body}expected {json.dumps(s.expected, sort_keys=True)}\n"


def fingerprint(s: NamedScenario) -> str:
    return hashlib.sha256(canonical_text(s).encode("utf-8")).hexdigest()


# Frozen at fixture creation; any edit to a figure changes these.
FIXTURE_HASHES = {
    "fig1_supported": "513efd9cbac495daa9e2814580f74e5b66da49eba647a4312873b12ff2c926c9",
    "fig1_secondary": "23f0ad20c90ba5981f65318b65d59ec6a7f4364a14004b7d93f489649c21e662",
    "fig2_profile": "e264f0888d1ea1e390fb7781680d2a9d1fe56965a82e2874aec2d66574de6409",
    "fig3_nonsimple": "6e9f279c18565d4b09661a2f3b6698b187e8830059652b53b00eb8f9421e103b",
    "fig3_disjunctive": "62298415708c5123a655f6169f252967c3c735b6055432226c2cad524daf5ad8",
    "fig4_nonsimple": "78e0c8c5532635d2de1d86c7051eff769e0a94133e11a51704b4d6b39d77b728",
    "fig4_disjunctive": "28de274aefd6d1baabfb045770ce9de463ad0516acaa408777f070bb8094bd6f",
    "fig5_nonsimple": "264b3f62f5be05eca9e9489843aa268f5dd8aff3f092b2e6683970fb9aa2e1bf",
    "fig5_disjunctive": "1ef988093aa87d6fe80ae9cbfd34e8795c7e0b104f090bc7d4307f1b5ed21722",
}


# -- reproduction suite ------------------------------------------------------


@dataclass
class Claim:
    id: str
    title: str
    budget_s: float
    passed: bool = False
    elapsed: float = 0.0
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        slow = " (over budget)" if self.elapsed > self.budget_s else ""
        return f"{self.id} {verdict} {self.elapsed:.3f}s/{self.budget_s:g}s{slow} {self.title}"


@dataclass
class Report:
    claims: list[Claim]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def render(self, verbose: bool = True) -> str:
        out = []
        for c in self.claims:
            out.append(c.line())
            if verbose:
                out += [f"    {d}" for d in c.details]
        out.append(f"summary {sum(c.passed for c in self.claims)}/{len(self.claims)} passed")
        return "\n".join(out) + "\n"

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "claims": [
                {
                    "id": c.id, "title": c.title, "passed": c.passed,
                    "elapsed_s": round(c.elapsed, 6), "budget_s": c.budget_s, "details": c.details,
                }
                for c in self.claims
            ],
        }


def _sem(name: str) -> SemanticsKind:
    return SemanticsKind.parse(name)


_FLAVOUR = {"d-preferred": "d", "s-preferred": "s", "c-preferred": "c", "stable": "stable"}


def _small_domain():
    """Three arguments, one attack A => B: the domain of the small exhaustive checks."""
    args = frozenset("ABC")
    attacks = frozenset({("A", "B")})
    return args, attacks, SupportUniverse.all_pairs(args, attacks)


def _unanimity_domain():
    """Four arguments with the attack C => D and four candidate supports."""
    args = frozenset("ABCD")
    attacks = frozenset({("C", "D")})
    universe = SupportUniverse((("A", "B"), ("B", "C"), ("B", "D"), ("D", "A")))
    return args, attacks, universe


def _ec_relations(args, attacks):
    pairs = sorted(itertools.product(sorted(args), repeat=2))
    for r in range(len(pairs) + 1):
        for rel in itertools.combinations(pairs, r):
            rel = frozenset(rel)
            if not rel & attacks:
                yield rel


def _c_fixtures(details):
    bad = [sid for sid in SCENARIO_IDS if fingerprint(load_scenario(sid)) != FIXTURE_HASHES[sid]]
    for sid in bad:
        details.append(f"fixture {sid} differs from its frozen content hash")
    return not bad


def _c1(details):
    ok = True
    for sid in ("fig1_supported", "fig1_secondary"):
        s = load_scenario(sid)
        for a, b, want in s.expected["supported_attack"]:
            got = has_supported_attack(s.payload, a, b)
            details.append(f"{sid}: supported attack {a} -> {b}: {got}")
            ok &= got == want
        for a, b, want in s.expected["secondary_attack"]:
            got = has_secondary_attack(s.payload, a, b)
            details.append(f"{sid}: secondary attack {a} -> {b}: {got}")
            ok &= got == want
    return ok


def _c2(details):
    s = load_scenario("fig2_profile")
    profile = s.payload
    outcome = aggregate(majority(profile.n), profile)
    want = frozenset(tuple(p) for p in s.expected["majority_outcome"])
    delta = s.expected["delta"]
    agent_cf = [is_conflict_free(b, delta) for b in profile.bafs()]
    out_cf = is_conflict_free(profile.outcome_baf(outcome), delta)
    details.append(f"majority outcome {format_relation(outcome)}")
    details.append(f"{format_set(delta)} conflict-free per agent {agent_cf}, in outcome {out_cf}")
    return outcome == want and all(agent_cf) and not out_cf


_RULES_GROUNDED = (Quota(1), Quota(2), Dictatorship(1))


def _c3(details, limits, jobs):
    args, attacks, universe = _small_domain()
    ok = True
    for rule in _RULES_GROUNDED:
        v = check_preservation(rule, PropertySpec.essential_constraint(), args, attacks, universe, 2,
                               limits=limits, jobs=jobs)
        details.append(str(v) if not v.preserved else f"{rule.name}: preserved")
        ok &= v.preserved
    return ok


def _c4(details, limits, jobs):
    args, attacks, universe = _small_domain()
    ok = True
    for rule in _RULES_GROUNDED:
        for delta in all_subsets(args):
            v = check_preservation(rule, PropertySpec.of_set(PropertyKind.CLOSED, delta), args, attacks,
                                   universe, 2, limits=limits, jobs=jobs)
            if not v.preserved:
                details.append(str(v))
            ok &= v.preserved
    details.append(f"{len(_RULES_GROUNDED) * 2 ** len(args)} (rule, set) combinations checked")
    return ok


def _c5(details, limits, jobs):
    args, attacks, universe = _unanimity_domain()
    kinds = (PropertyKind.CONFLICT_FREE, PropertyKind.SAFE, PropertyKind.D_ADMISSIBLE, PropertyKind.S_ADMISSIBLE)
    ok = True
    for kind in kinds:
        for delta in all_subsets(args):
            v = check_preservation(Quota(2), PropertySpec.of_set(kind, delta), args, attacks, universe, 2,
                                   limits=limits, jobs=jobs)
            if not v.preserved:
                details.append(str(v))
            ok &= v.preserved
        details.append(f"unanimity preserves {kind.value} for all {2 ** len(args)} sets")
    return ok


def _c6(details, limits, jobs):
    s = load_scenario("fig2_profile")
    profile = s.payload
    universe = SupportUniverse(tuple(tuple(p) for p in s.expected["universe"]))
    prop = PropertySpec.of_set(PropertyKind.CONFLICT_FREE, s.expected["delta"])
    rule = majority(profile.n)
    found = find_counterexample(rule, prop, profile.args, profile.attacks, universe, profile.n,
                                limits=limits, jobs=jobs)
    injected = is_violation(rule, prop, profile)
    if found is not None:
        details.append(f"first counterexample: {found}")
        details.append(f"  majority outcome {format_relation(rule(found))}")
    details.append(f"figure profile is a violation: {injected}")
    return found is not None and is_violation(rule, prop, found) and injected


def _meta_claim(sids, details):
    ok = True
    for sid in sids:
        s = load_scenario(sid)
        sc: MetaScenario = s.payload
        for name in s.expected["semantics"]:
            prop = PropertySpec.extension(_sem(name), sc.delta)
            rows = meta_table(sc.args, sc.attacks, prop, sc.witness)
            # cross-check every evaluation against the reference enumerator
            agree = all(
                value == (sc.delta in reference.extensions(Baf(sc.args, sc.attacks, sc.witness.base | extra), _FLAVOUR[name]))
                for extra, value in rows
            )
            valid = verify_meta_witness(sc.args, sc.attacks, prop, sc.witness)
            table = " ".join(
                ("{" + ",".join(f"{a}>{b}" for a, b in sorted(extra)) + "}") + ("+" if v else "-")
                for extra, v in rows
            )
            details.append(f"{sid} {prop}: witness {'valid' if valid else 'INVALID'}; oracle agrees: {agree}; {table}")
            if valid != s.expected["valid"] or not agree:
                ok = False
                if not valid:
                    alt = search_meta_witness(
                        prop, sc.args, sc.attacks, SupportUniverse.all_pairs(sc.args, sc.attacks),
                        sc.witness.kind, max_base=1,
                    )
                    details.append(f"    search on the same arguments and attacks finds: {alt}")
    return ok


def _c7(details):
    return _meta_claim(("fig3_nonsimple", "fig3_disjunctive"), details)


def _c8(details):
    return _meta_claim(("fig4_nonsimple", "fig4_disjunctive"), details)


def _c9(details):
    return _meta_claim(("fig5_nonsimple", "fig5_disjunctive"), details)


def _c10(details):
    n = 3
    universe = SupportUniverse((("A", "B"), ("B", "C")))
    ok = True
    fam, consistent, _ = extract_winning_coalitions(Quota(2), universe, n)
    uf, why = is_ultrafilter(fam)
    details.append(f"quota:2 winning {fam} consistent={consistent} ultrafilter={uf} ({why})")
    ok &= fam == CoalitionFamily.of_quota(n, 2) and consistent and not uf and why.condition == "intersection"
    ok &= detect_dictator(Quota(2), universe, n) is None
    fam, consistent, _ = extract_winning_coalitions(Dictatorship(1), universe, n)
    uf, why = is_ultrafilter(fam)
    dictator = detect_dictator(Dictatorship(1), universe, n)
    details.append(f"dictator:1 winning {fam} consistent={consistent} ultrafilter={uf} dictator={dictator}")
    ok &= fam == CoalitionFamily.containing(n, 1) and consistent and uf and dictator == 1
    return ok


def _c11(details):
    args, attacks, _ = _small_domain()
    checked = 0
    for rel in _ec_relations(args, attacks):
        baf = Baf(args, attacks, rel)
        for delta in all_subsets(args):
            checked += 1
            safe, cf, closed = is_safe(baf, delta), is_conflict_free(baf, delta), is_closed(baf, delta)
            if safe and not cf:
                details.append(f"safe but not conflict-free: {format_set(delta)} in {baf}")
                return False
            if cf and closed and not safe:
                details.append(f"conflict-free and closed but not safe: {format_set(delta)} in {baf}")
                return False
    details.append(f"{checked} (framework, set) combinations checked")
    return True


def _c12(details):
    args, attacks, _ = _small_domain()
    rels = list(_ec_relations(args, attacks))
    subsets = list(all_subsets(args))
    kinds = (SemanticsKind.D_PREFERRED, SemanticsKind.S_PREFERRED, SemanticsKind.C_PREFERRED)
    table = {}
    for rel in rels:
        baf = Baf(args, attacks, rel)
        table[rel] = {(k, d): is_admissible(baf, d, k) for k in kinds for d in subsets}
    pairs = 0
    for big in rels:
        for small in rels:
            if small <= big:
                pairs += 1
                for key, adm in table[big].items():
                    if adm and not table[small][key]:
                        k, d = key
                        details.append(
                            f"{format_set(d)} is {k.value[0]}-admissible under {format_relation(big)} "
                            f"but not under {format_relation(small)}"
                        )
                        return False
    details.append(f"{pairs} ordered support pairs checked")
    return True


def _c13(details, limits, jobs):
    args, attacks, universe = _unanimity_domain()
    ok = True
    for kind in (SemanticsKind.D_PREFERRED, SemanticsKind.S_PREFERRED, SemanticsKind.C_PREFERRED):
        for a in sorted(args):
            v = check_preservation(Quota(2), PropertySpec.acceptable(a, kind), args, attacks, universe, 2,
                                   limits=limits, jobs=jobs)
            if not v.preserved:
                details.append(str(v))
            ok &= v.preserved
        details.append(f"unanimity preserves acceptability of every argument under {kind.value}")
    return ok


CLAIMS = (
    ("fixtures", "figure fixtures match their frozen content hashes", 1.0, _c_fixtures, False),
    ("C01", "figure 1: supported vs secondary attack", 0.001, _c1, False),
    ("C02", "figure 2: majority outcome breaks conflict-freeness of {A,E}", 0.001, _c2, False),
    ("C03", "grounded rules preserve the essential constraint", 5.0, _c3, True),
    ("C04", "grounded rules preserve closedness", 10.0, _c4, True),
    ("C05", "unanimity preserves conflict-freeness, safety, d-/s-admissibility", 20.0, _c5, True),
    ("C06", "majority does not preserve conflict-freeness (figure 2)", 1.0, _c6, True),
    ("C07", "figure 3 witnesses: preferred extensions non-simple and disjunctive", 1.0, _c7, False),
    ("C08", "figure 4 witnesses: necessary-support variant", 1.0, _c8, False),
    ("C09", "figure 5 witnesses: stable extensions", 1.0, _c9, False),
    ("C10", "winning coalitions and ultrafilters at n = 3", 1.0, _c10, False),
    ("C11", "safe implies conflict-free; conflict-free and closed implies safe", 10.0, _c11, False),
    ("C12", "admissibility survives shrinking the support relation", 20.0, _c12, False),
    ("C13", "unanimity preserves credulous acceptance under preferred semantics", 20.0, _c13, True),
)


def verify_paper(limits: Limits | None = None, jobs: int = 1, only: set[str] | None = None) -> Report:
    claims = []
    for cid, title, budget, fn, heavy in CLAIMS:
        if only is not None and cid not in only:
            continue
        claim = Claim(cid, title, budget)
        t0 = time.perf_counter()
        try:
            claim.passed = bool(fn(claim.details, limits, jobs) if heavy else fn(claim.details))
        except DomainError as exc:
            claim.details.append(f"error: {exc}")
            claim.passed = False
        claim.elapsed = time.perf_counter() - t0
        claims.append(claim)
    return Report(claims)
