import itertools

import pytest
from hypothesis import given, settings

from bipolar_agg import reference as ref
from bipolar_agg.baf import (
    Baf,
    SemanticsKind,
    all_subsets,
    closure,
    credulously_accepted,
    defends,
    enumerate_extensions,
    has_secondary_attack,
    has_supported_attack,
    is_admissible,
    is_c_admissible,
    is_closed,
    is_conflict_free,
    is_d_admissible,
    is_extension,
    is_s_admissible,
    is_safe,
    is_stable,
    satisfies_essential_constraint,
    set_attacks,
    set_supports,
    support_reachable,
)
from bipolar_agg.config import Limits
from bipolar_agg.errors import DomainError, ResourceError

from conftest import baf_and_subset, bafs, pairs

ABCDE = frozenset("ABCDE")
FIG1_TOP = Baf(frozenset("A1 B1 C1 D1 E1".split()), pairs("D1>E1"), pairs("A1>B1 B1>C1 C1>D1"))
FIG1_BOTTOM = Baf(frozenset("A2 B2 C2 D2 E2".split()), pairs("A2>B2"), pairs("B2>C2 C2>D2 D2>E2"))
FIG2_OUT = Baf(ABCDE, pairs("D>E"), pairs("A>B B>C C>D"))
FIG2_AGENT1 = Baf(ABCDE, pairs("D>E"), pairs("A>B B>C"))

FIG3_TOP_ATT = pairs("D>E E>D B>B C>C")
FIG3_TOP_EXTRAS = ["A>B", "B>C", "C>D"]
FIG4_TOP_EXTRAS = ["B>A", "C>B", "D>C"]
FIG4_BOTTOM_ATT = pairs("B>C B>D")
FIG5_TOP_ATT = pairs("D>E E>B E>C E>D")
FIG5_BOTTOM_ATT = pairs("B>C B>D C>E D>E")  # shared with figure 3's lower panel


def fig3_top(*extras):
    return Baf(ABCDE, FIG3_TOP_ATT, pairs(" ".join(extras)))


def fig5_bottom(*extras):
    return Baf(ABCDE, FIG5_BOTTOM_ATT, pairs(" ".join(extras)))


def reach_by_squaring(baf, a, b):
    """Transitive closure of the support adjacency matrix by repeated squaring."""
    names = sorted(baf.args)
    idx = {x: i for i, x in enumerate(names)}
    n = len(names)
    m = [[(x, y) in baf.supports for y in names] for x in names]
    for _ in range(max(1, n).bit_length() + 1):
        sq = [[any(m[i][k] and m[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        m = [[m[i][j] or sq[i][j] for j in range(n)] for i in range(n)]
    return m[idx[a]][idx[b]]


# -- paths and combined attacks ----------------------------------------------


def test_support_reachable_examples():
    assert support_reachable(FIG1_TOP, "A1", "D1")
    assert not support_reachable(Baf(frozenset("AB")), "A", "B")
    cyc = Baf(frozenset("AB"), supports=pairs("A>B B>A"))
    assert reach_by_squaring(cyc, "A", "A")
    assert support_reachable(cyc, "A", "A")


def test_no_reflexive_path_without_cycle():
    assert not support_reachable(Baf(frozenset("AB"), supports=pairs("A>B")), "A", "A")


def test_unknown_argument_is_named():
    with pytest.raises(DomainError, match="'Z'"):
        support_reachable(FIG1_TOP, "A1", "Z")
    with pytest.raises(DomainError):
        is_conflict_free(FIG1_TOP, {"A1", "Q"})


@given(bafs())
@settings(max_examples=150, deadline=None)
def test_reachability_matches_matrix_squaring(baf):
    for a, b in itertools.product(sorted(baf.args), repeat=2):
        assert support_reachable(baf, a, b) == reach_by_squaring(baf, a, b)


def test_figure1_attack_kinds():
    assert has_supported_attack(FIG1_TOP, "A1", "E1")
    assert not has_secondary_attack(FIG1_TOP, "A1", "E1")
    assert has_secondary_attack(FIG1_BOTTOM, "A2", "E2")
    assert not has_supported_attack(FIG1_BOTTOM, "A2", "E2")


def test_direct_attack_is_secondary_not_supported():
    baf = Baf(frozenset("AB"), pairs("A>B"))
    assert has_secondary_attack(baf, "A", "B")
    assert not has_supported_attack(baf, "A", "B")


def test_witness_scenarios_attacks():
    assert has_supported_attack(fig3_top(*FIG3_TOP_EXTRAS), "A", "E")
    fig4 = Baf(ABCDE, FIG3_TOP_ATT, pairs(" ".join(FIG4_TOP_EXTRAS)))
    assert has_secondary_attack(fig4, "E", "A")


def test_set_attacks_and_supports():
    assert set_attacks(FIG2_OUT, {"A", "E"}, "E")
    assert not set_attacks(FIG2_OUT, set(), "E")
    # oracle value from reference path enumeration: True
    assert set_attacks(fig5_bottom("A>C"), {"A", "B"}, "E")
    assert set_supports(FIG2_OUT, {"A"}, "D")
    assert not set_supports(Baf(ABCDE), {"A", "B"}, "C")
    assert set_supports(Baf(frozenset("ABC"), supports=pairs("A>B")), {"A", "C"}, "B")


# -- closure ---------------------------------------------------------------


def test_closure_examples():
    assert closure(FIG2_OUT, {"A"}) == frozenset("ABCD")
    assert closure(Baf(frozenset("AB")), {"A", "B"}) == frozenset("AB")
    assert closure(Baf(frozenset("AB"), supports=pairs("A>B B>A")), {"A"}) == frozenset("AB")
    assert not is_closed(FIG2_OUT, {"A", "E"})
    assert is_closed(FIG2_OUT, set())
    assert is_closed(Baf(frozenset("ABC"), pairs("A>B")), {"A"})


def fixpoint_closure(baf, delta):
    cur = set(delta)
    while True:
        nxt = cur | {b for a, b in baf.supports if a in cur}
        if nxt == cur:
            return frozenset(cur)
        cur = nxt


@given(baf_and_subset())
@settings(max_examples=200, deadline=None)
def test_closure_is_a_closure_operator(case):
    baf, delta = case
    cl = closure(baf, delta)
    assert delta <= cl
    assert closure(baf, cl) == cl
    assert cl == fixpoint_closure(baf, delta)
    for extra in sorted(baf.args):
        assert cl <= closure(baf, delta | {extra})


# -- conflict-freeness, safety, defence ----------------------------------------


def test_conflict_free_examples():
    assert is_conflict_free(FIG2_AGENT1, {"A", "E"})
    assert not is_conflict_free(FIG2_OUT, {"A", "E"})
    assert is_conflict_free(FIG2_OUT, set())


def test_self_attack_is_a_conflict():
    assert not is_conflict_free(fig3_top(), {"B"})
    for kind in SemanticsKind:
        assert not credulously_accepted(Baf(frozenset("A"), pairs("A>A")), "A", kind)


def test_safe_examples():
    # reference evaluation over all five candidates gives True
    assert ref.safe(fig3_top("B>C", "C>D"), {"A", "E"})
    assert is_safe(fig3_top("B>C", "C>D"), {"A", "E"})
    assert is_safe(FIG2_OUT, set())
    assert not is_safe(FIG2_OUT, {"A", "E"})


def test_defends_examples():
    assert defends(fig3_top(), {"A", "E"}, "E")
    assert defends(Baf(frozenset("AB")), set(), "A")
    assert defends(fig5_bottom(), {"B"}, "E")
    assert not defends(fig5_bottom(), set(), "E")


def test_defence_ignores_supported_attacks():
    # A supported-attacks C through B; only the direct attacker B needs answering
    baf = Baf(frozenset("ABCD"), pairs("B>C D>B"), pairs("A>B"))
    assert has_supported_attack(baf, "A", "C")
    assert defends(baf, {"D"}, "C")
    assert not defends(baf, set(), "C")


# -- admissibility, stability, extensions ------------------------------------


def test_admissibility_examples():
    assert is_d_admissible(fig3_top("A>B", "B>C"), {"A", "E"})
    empty = Baf(frozenset("ABC"), pairs("A>B"))
    assert is_d_admissible(empty, set()) and is_s_admissible(empty, set()) and is_c_admissible(empty, set())
    assert not is_c_admissible(fig3_top(*FIG3_TOP_EXTRAS), {"A", "E"})


def test_stable_examples():
    fig5_top = lambda *e: Baf(ABCDE, FIG5_TOP_ATT, pairs(" ".join(e)))
    assert is_stable(fig5_top("A>B", "B>C"), {"A", "E"})
    assert not is_stable(fig5_top("A>B", "B>C", "C>D"), {"A", "E"})
    assert is_stable(Baf(frozenset("ABC")), {"A", "B", "C"})


def test_enumerate_examples():
    exts = enumerate_extensions(fig3_top("A>B", "B>C"), SemanticsKind.D_PREFERRED)
    assert frozenset("AE") in exts
    # D and E attack each other, so {A, D} is the symmetric twin (reference enumeration)
    assert exts == [frozenset("AD"), frozenset("AE")]
    for kind in SemanticsKind:
        assert enumerate_extensions(Baf(frozenset()), kind) == [frozenset()]
    # reference stable enumeration over all 32 subsets: only {A, B, E}
    assert enumerate_extensions(fig5_bottom(), SemanticsKind.STABLE) == [frozenset("ABE")]


def test_is_extension_examples():
    assert is_extension(fig3_top(), {"A", "E"}, SemanticsKind.C_PREFERRED)
    assert not is_extension(fig3_top(), {"A"}, SemanticsKind.D_PREFERRED)
    fig4_bottom = Baf(frozenset("ABCD"), FIG4_BOTTOM_ATT, pairs("D>A"))
    assert is_extension(fig4_bottom, {"B"}, SemanticsKind.D_PREFERRED)


def test_credulous_examples():
    assert credulously_accepted(fig3_top(), "E", SemanticsKind.D_PREFERRED)
    assert not credulously_accepted(fig5_bottom("A>C", "A>D"), "E", SemanticsKind.STABLE)


def test_cycles_with_self_attack_give_empty_extension():
    baf = Baf(frozenset("A"), pairs("A>A"))
    assert enumerate_extensions(baf, SemanticsKind.D_PREFERRED) == [frozenset()]
    assert enumerate_extensions(baf, SemanticsKind.STABLE) == []


def test_enumeration_cap():
    baf = Baf(frozenset("ABCD"))
    with pytest.raises(ResourceError) as info:
        enumerate_extensions(baf, SemanticsKind.STABLE, Limits(max_args=3))
    assert info.value.allowed == 3
    with pytest.raises(ResourceError):
        is_extension(baf, {"A"}, SemanticsKind.D_PREFERRED, Limits(max_args=3))


def test_canonical_order():
    baf = Baf(frozenset("ABCD"), pairs("A>B B>A C>D D>C"))
    exts = enumerate_extensions(baf, SemanticsKind.STABLE)
    assert exts == [frozenset("AC"), frozenset("AD"), frozenset("BC"), frozenset("BD")]


def test_essential_constraint():
    assert satisfies_essential_constraint(FIG2_AGENT1)
    assert not satisfies_essential_constraint(Baf(frozenset("AB"), pairs("A>B"), pairs("A>B")))
    assert satisfies_essential_constraint(Baf(frozenset("AB")))


def test_invalid_names_and_edges():
    with pytest.raises(DomainError):
        Baf(frozenset(["A B"]))
    with pytest.raises(DomainError):
        Baf(frozenset(["A"]), pairs("A>B"))


# -- invariants --------------------------------------------------------------

FLAVOURS = {SemanticsKind.D_PREFERRED: "d", SemanticsKind.S_PREFERRED: "s", SemanticsKind.C_PREFERRED: "c"}


@given(baf_and_subset())
@settings(max_examples=300, deadline=None)
def test_predicates_agree_with_reference(case):
    baf, delta = case
    assert is_conflict_free(baf, delta) == ref.conflict_free(baf, delta)
    assert is_safe(baf, delta) == ref.safe(baf, delta)
    assert is_closed(baf, delta) == ref.closed(baf, delta)
    assert is_stable(baf, delta) == ref.stable(baf, delta)
    for kind, fl in FLAVOURS.items():
        assert is_admissible(baf, delta, kind) == ref.admissible(baf, delta, fl)


@given(baf_and_subset())
@settings(max_examples=300, deadline=None)
def test_safe_implies_conflict_free_and_closed_cf_implies_safe(case):
    baf, delta = case
    if is_safe(baf, delta):
        assert is_conflict_free(baf, delta)
    if is_conflict_free(baf, delta) and is_closed(baf, delta):
        assert is_safe(baf, delta)


@given(bafs())
@settings(max_examples=300, deadline=None)
def test_direct_attack_blocks_conflict_freeness(baf):
    for a, b in baf.attacks:
        assert has_secondary_attack(baf, a, b)
        assert not is_conflict_free(baf, {a, b})


@given(bafs(max_args=4))
@settings(max_examples=200, deadline=None)
def test_enumeration_matches_reference(baf):
    for kind in SemanticsKind:
        fl = FLAVOURS.get(kind, "stable")
        assert set(enumerate_extensions(baf, kind)) == ref.extensions(baf, fl)


@given(bafs(max_args=4))
@settings(max_examples=150, deadline=None)
def test_extensions_are_admissible_and_cover_admissible_sets(baf):
    for kind in FLAVOURS:
        exts = enumerate_extensions(baf, kind)
        assert exts
        for e in exts:
            assert is_admissible(baf, e, kind)
            assert is_extension(baf, e, kind)
        for d in all_subsets(baf.args):
            if is_admissible(baf, d, kind):
                assert any(d <= e for e in exts)


def test_enumeration_matches_reference_exhaustively_small():
    # every framework over two arguments
    names = ["A", "B"]
    grid = list(itertools.product(names, repeat=2))
    subsets = [frozenset(c) for r in range(5) for c in itertools.combinations(grid, r)]
    for att in subsets:
        for sup in subsets:
            baf = Baf(frozenset(names), att, sup)
            for kind in SemanticsKind:
                assert set(enumerate_extensions(baf, kind)) == ref.extensions(baf, FLAVOURS.get(kind, "stable"))


def test_monotonicity_under_support_shrinkage_exhaustive():
    names = ["A", "B", "C"]
    att = pairs("A>B C>C")
    grid = [p for p in itertools.product(names, repeat=2) if p not in att]
    rels = [frozenset(c) for r in range(len(grid) + 1) for c in itertools.combinations(grid, r)]
    # sample the big relations, every subset of each
    for big in rels[::17]:
        big_baf = Baf(frozenset(names), att, big)
        items = sorted(big)
        for r in range(len(items) + 1):
            for small in itertools.combinations(items, r):
                small_baf = Baf(frozenset(names), att, frozenset(small))
                for d in all_subsets(names):
                    for kind in FLAVOURS:
                        if is_admissible(big_baf, d, kind):
                            assert is_admissible(small_baf, d, kind)
