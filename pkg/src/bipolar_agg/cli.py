"""Command-line entry point.

Exit status: 0 success, 1 semantic failure (violation found, witness
invalid, suite failed), 2 usage or parse error, 3 enumeration cap exceeded.
Errors are reported as a single ``error: ...`` line on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .aggregation import (
    aggregate,
    detect_dictator,
    extract_winning_coalitions,
    is_ultrafilter,
    parse_rule,
)
from .baf import SemanticsKind, enumerate_extensions
from .config import default_limits
from .errors import DomainError, ParseError, ResourceError
from .formats import (
    parse_baf,
    parse_domain,
    parse_profile,
    parse_witness,
    serialize_profile,
    serialize_relation,
    serialize_witness,
)
from .preservation import (
    MetaKind,
    check_preservation,
    meta_table,
    parse_property,
    search_meta_witness,
    verify_meta_witness,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # one-line errors instead of argparse's usage dump
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _parse_file(parser, path: str, **kw):
    try:
        return parser(_read(path), **kw)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.args[0]}", exc.line, exc.col) from None


def _format_members(members) -> str:
    return " ".join(sorted(members))


def cmd_semantics(ns, out) -> int:
    baf = _parse_file(parse_baf, ns.baf_file)
    kind = SemanticsKind.parse(ns.kind)
    for ext in enumerate_extensions(baf, kind, default_limits()):
        out.write(("extension " + _format_members(ext)).rstrip() + "\n")
    return EXIT_OK


def cmd_aggregate(ns, out) -> int:
    profile = _parse_file(parse_profile, ns.profile_file, allow_ec_violation=ns.allow_ec_violation)
    rule = parse_rule(ns.rule, profile.n)
    out.write(serialize_relation(aggregate(rule, profile)))
    return EXIT_OK


def _domain_n(domain, ns) -> int:
    n = ns.n if getattr(ns, "n", None) is not None else domain.n
    if n is None:
        raise _Usage("number of agents missing: add an 'agents <n>' line or pass --n")
    return n


def cmd_preserve(ns, out) -> int:
    domain = _parse_file(parse_domain, ns.domain_file)
    n = _domain_n(domain, ns)
    rule = parse_rule(ns.rule, n)
    prop = parse_property(ns.property)
    v = check_preservation(
        rule, prop, domain.args, domain.attacks, domain.universe, n,
        allow_ec_violation=ns.allow_ec_violation, jobs=ns.jobs,
    )
    out.write(f"rule {v.rule}\nproperty {v.prop}\ndomain {v.domain}\n")
    if v.preserved:
        out.write("verdict preserved\n")
        return EXIT_OK
    out.write("verdict violated\ncounterexample\n")
    out.write(serialize_profile(v.counterexample))
    out.write("outcome\n")
    out.write(serialize_relation(v.outcome))
    return EXIT_FAIL


def cmd_meta(ns, out) -> int:
    domain = _parse_file(parse_domain, ns.domain_file)
    prop = parse_property(ns.property)
    kind = MetaKind(ns.kind)
    if ns.verify:
        w = _parse_file(parse_witness, ns.verify, kind=kind)
        for s, value in meta_table(domain.args, domain.attacks, prop, w):
            members = ",".join(f"{a}>{b}" for a, b in sorted(s))
            out.write(f"subset {{{members}}} {'holds' if value else 'fails'}\n")
        valid = verify_meta_witness(domain.args, domain.attacks, prop, w)
        out.write(f"witness {'valid' if valid else 'invalid'}\n")
        return EXIT_OK if valid else EXIT_FAIL
    w = search_meta_witness(prop, domain.args, domain.attacks, domain.universe, kind, max_base=ns.max_base)
    if w is None:
        out.write("witness none\n")
        return EXIT_FAIL
    out.write("witness found\n")
    out.write(serialize_witness(w))
    return EXIT_OK


def cmd_coalitions(ns, out) -> int:
    domain = _parse_file(parse_domain, ns.universe)
    rule = parse_rule(ns.rule, ns.n)
    kw = dict(args=domain.args, attacks=domain.attacks)
    family, consistent, witness = extract_winning_coalitions(rule, domain.universe, ns.n, **kw)
    for c in family.sorted():
        out.write("winning {" + ",".join(map(str, sorted(c))) + "}\n")
    out.write(f"consistent {'true' if consistent else 'false'}\n")
    if witness is not None:
        out.write(f"inconsistency {witness.note}\n")
    uf, why = is_ultrafilter(family)
    out.write(f"ultrafilter {'true' if uf else 'false'}" + (f" ({why})" if why else "") + "\n")
    dictator = detect_dictator(rule, domain.universe, ns.n, **kw)
    out.write(f"dictator {dictator if dictator is not None else 'none'}\n")
    return EXIT_OK


def cmd_paper(ns, out) -> int:
    from .scenarios import verify_paper

    report = verify_paper(jobs=ns.jobs)
    out.write(report.render(verbose=not ns.quiet))
    if ns.json:
        Path(ns.json).write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="bipolar-agg",
        description="Bipolar argumentation semantics and support-relation aggregation.",
    )
    p.add_argument("--jobs", type=int, default=1, help="worker processes for exhaustive checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("semantics", help="list the extensions of a framework")
    s.add_argument("baf_file")
    s.add_argument("--kind", required=True, choices=[k.value for k in SemanticsKind])
    s.set_defaults(func=cmd_semantics)

    s = sub.add_parser("aggregate", help="aggregate a profile of support relations")
    s.add_argument("profile_file")
    s.add_argument("--rule", required=True, help="quota:<q>|unanimity|majority|nomination|dictator:<i>")
    s.add_argument("--allow-ec-violation", action="store_true")
    s.set_defaults(func=cmd_aggregate)

    s = sub.add_parser("preserve", help="check whether a rule preserves a property on a domain")
    s.add_argument("domain_file")
    s.add_argument("--rule", required=True)
    s.add_argument("--property", required=True, help="e.g. conflict-free:A,E or acceptable:A:d-preferred")
    s.add_argument("--n", type=int, help="number of agents (overrides the domain file)")
    s.add_argument("--allow-ec-violation", action="store_true")
    s.set_defaults(func=cmd_preserve)

    s = sub.add_parser("meta", help="verify or search non-simplicity / disjunctiveness witnesses")
    s.add_argument("domain_file")
    s.add_argument("--property", required=True)
    s.add_argument("--kind", required=True, choices=[k.value for k in MetaKind])
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--verify", metavar="WITNESS_FILE")
    mode.add_argument("--search", action="store_true")
    s.add_argument("--max-base", type=int, default=None, help="largest base set tried by --search")
    s.set_defaults(func=cmd_meta)

    s = sub.add_parser("coalitions", help="winning coalitions, ultrafilter and dictator verdicts")
    s.add_argument("--rule", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--universe", required=True, help="domain file with universe lines")
    s.set_defaults(func=cmd_coalitions)

    s = sub.add_parser("paper", help="reproduce the worked examples and results")
    s.add_argument("action", choices=["verify"])
    s.add_argument("--json", help="also write a machine-readable report here")
    s.add_argument("--quiet", action="store_true", help="one line per claim")
    s.set_defaults(func=cmd_paper)
    return p


def cli_main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return EXIT_USAGE if exc.code else EXIT_OK
    except _Usage as exc:
        err.write(f"error: usage: {exc}\n")
        return EXIT_USAGE
    if ns.jobs < 1:
        err.write("error: usage: --jobs must be at least 1\n")
        return EXIT_USAGE
    try:
        return ns.func(ns, out)
    except ResourceError as exc:
        err.write(f"error: resource: {exc}\n")
        return EXIT_RESOURCE
    except ParseError as exc:
        err.write(f"error: parse: {exc}\n")
        return EXIT_USAGE
    except (DomainError, _Usage) as exc:
        err.write(f"error: usage: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
