"""Show why the figure-3 witnesses fail for s-/c-preferred and what works instead.

For each figure-3 scenario and flavour, prints the subset table and, where the
figure's witness is invalid, the first witness found on the same arguments
and attacks.
"""
import sys

from bipolar_agg.aggregation import SupportUniverse
from bipolar_agg.baf import Baf, SemanticsKind, closure, is_safe
from bipolar_agg.preservation import PropertySpec, meta_table, search_meta_witness, verify_meta_witness
from bipolar_agg.scenarios import load_scenario


def main():
    for sid in ("fig3_nonsimple", "fig3_disjunctive"):
        sc = load_scenario(sid).payload
        for sem in (SemanticsKind.D_PREFERRED, SemanticsKind.S_PREFERRED, SemanticsKind.C_PREFERRED):
            prop = PropertySpec.extension(sem, sc.delta)
            valid = verify_meta_witness(sc.args, sc.attacks, prop, sc.witness)
            print(f"{sid} {prop}: {'valid' if valid else 'invalid'}")
            for s, value in meta_table(sc.args, sc.attacks, prop, sc.witness):
                baf = Baf(sc.args, sc.attacks, sc.witness.base | s)
                members = ",".join(f"{a}>{b}" for a, b in sorted(s)) or "-"
                print(f"    S={{{members}}}: {'holds' if value else 'fails'}"
                      f"  closure={sorted(closure(baf, sc.delta))} safe={is_safe(baf, sc.delta)}")
            if not valid:
                universe = SupportUniverse.all_pairs(sc.args, sc.attacks)
                alt = search_meta_witness(prop, sc.args, sc.attacks, universe, sc.witness.kind, max_base=1)
                print(f"    alternative: {alt}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
