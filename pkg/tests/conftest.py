import itertools
import sys

from hypothesis import strategies as st

from bipolar_agg.baf import Baf


def pairs(text):
    """'A>B C>D' -> {('A','B'), ('C','D')}"""
    return frozenset(tuple(p.split(">")) for p in text.split())


@st.composite
def bafs(draw, max_args=5, min_args=0):
    n = draw(st.integers(min_args, max_args))
    names = [chr(ord("A") + i) for i in range(n)]
    grid = list(itertools.product(names, repeat=2))
    attacks = draw(st.sets(st.sampled_from(grid))) if grid else set()
    supports = draw(st.sets(st.sampled_from(grid))) if grid else set()
    return Baf(frozenset(names), frozenset(attacks), frozenset(supports))


@st.composite
def baf_and_subset(draw, max_args=5):
    baf = draw(bafs(max_args))
    names = sorted(baf.args)
    delta = draw(st.sets(st.sampled_from(names))) if names else set()
    return baf, frozenset(delta)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
