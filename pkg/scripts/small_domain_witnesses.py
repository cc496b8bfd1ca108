"""Search for non-simplicity / disjunctiveness witnesses on 3- and 4-argument domains.

The dictatorship results need at least five arguments; whether that bound is
sharp is open.  This script sweeps every attack relation on n arguments (up
to renaming is *not* factored out, so keep n small), every target set, and
each preferred/stable flavour, and reports which (flavour, kind) pairs admit
a witness at all.  Nothing here is asserted; it is exploration.

    python scripts/small_domain_witnesses.py --args 3 [--max-base 1] [--attacks-limit 200]
"""
import argparse
import itertools
import random
import sys
from collections import Counter

from bipolar_agg.aggregation import SupportUniverse
from bipolar_agg.baf import SemanticsKind, all_subsets
from bipolar_agg.errors import ResourceError
from bipolar_agg.preservation import MetaKind, PropertySpec, search_meta_witness


def attack_relations(args, limit, rng):
    grid = list(itertools.product(args, repeat=2))
    total = 1 << len(grid)
    picks = range(total) if limit is None or limit >= total else sorted(rng.sample(range(total), limit))
    for bits in picks:
        yield frozenset(p for i, p in enumerate(grid) if bits >> i & 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--args", type=int, default=3, choices=[3, 4])
    ap.add_argument("--max-base", type=int, default=1)
    ap.add_argument("--attacks-limit", type=int, default=200, help="sample this many attack relations (0 = all)")
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args()

    rng = random.Random(ns.seed)
    args = [chr(ord("A") + i) for i in range(ns.args)]
    found = Counter()
    example = {}
    limit = ns.attacks_limit or None
    for attacks in attack_relations(args, limit, rng):
        universe = SupportUniverse.all_pairs(args, attacks)
        for sem in SemanticsKind:
            for delta in all_subsets(args):
                prop = PropertySpec.extension(sem, delta)
                for kind in MetaKind:
                    key = (sem.value, kind.value)
                    if key in example:
                        continue
                    try:
                        w = search_meta_witness(prop, args, attacks, universe, kind, max_base=ns.max_base)
                    except ResourceError:
                        continue
                    if w is not None:
                        found[key] += 1
                        example[key] = (sorted(attacks), sorted(delta), w)
    for sem in SemanticsKind:
        for kind in MetaKind:
            key = (sem.value, kind.value)
            if key in example:
                attacks, delta, w = example[key]
                print(f"{sem.value:12} {kind.value:12} witness: attacks={attacks} set={delta} {w}")
            else:
                print(f"{sem.value:12} {kind.value:12} none found")
    return 0


if __name__ == "__main__":
    sys.exit(main())
