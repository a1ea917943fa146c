"""Command line entry point: ``rhogroups <subcommand> ...``.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors
(bad arguments, unparsable recipes or corpora, cap violations).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .classify import classify, prime_divisors
from .dsl import parse_corpus, parse_recipe
from .errors import RhoGroupsError
from .exact_arith import rho_cyclic
from .groups import DEFAULT_CAP, build
from .invariants import invariants_direct
from .verifier import (
    Tag,
    VerificationReport,
    check_abelian_distinguish,
    parse_tags,
    remark_rows,
    run_corpus,
)
from . import recipes as R

log = logging.getLogger("rhogroups")


class UsageError(Exception):
    pass


def default_corpus_text() -> str:
    return resources.files("rhogroups").joinpath("data/default_corpus.txt").read_text()


def _build(text: str, cap: int):
    try:
        return build(parse_recipe(text), cap=cap)
    except RhoGroupsError as exc:
        raise UsageError(f"{getattr(exc, 'code', 'ERROR')}: {exc}") from exc


def _b(x: bool) -> str:
    return "true" if x else "false"


def cmd_compute(args) -> int:
    G = _build(args.recipe, args.cap)
    rec = invariants_direct(G)
    if args.format == "json":
        print(json.dumps({"group": G.label, **rec.as_dict()}, indent=2))
    else:
        print(f"group = {G.label}")
        print(f"n = {rec.n}")
        print(f"q = {rec.q_min if rec.q_min is not None else 'none'}")
        print(f"rho = {rec.rho}")
        print(f"psi = {rec.psi}")
        print("omega = {" + ", ".join(map(str, rec.omega)) + "}")
    return 0


def cmd_classify(args) -> int:
    G = _build(args.recipe, args.cap)
    c = classify(G)
    info: dict = {"group": G.label, "n": G.order, **c.flags()}
    info["p_nilpotent"] = {str(p): v for p, v in c.p_nilpotent.items()}
    info["sylow_splits"] = {
        str(p): None
        if s is None
        else {
            "sylow_order": s.sylow.order,
            "sylow_cyclic": s.sylow.is_cyclic(),
            "complement_order": s.complement.order,
            "centralizer_in_complement_order": s.centralizer_in_complement.order,
        }
        for p, s in c.splits.items()
    }
    fs = c.frobenius
    info["frobenius_structure"] = (
        None if fs is None else {"kernel_order": fs.kernel.order, "complement_order": fs.complement.order}
    )
    info["abelian_invariants"] = c.abelian_invariants
    if args.format == "json":
        print(json.dumps(info, indent=2))
        return 0
    print(f"group = {G.label}")
    print(f"n = {G.order}")
    for k, v in c.flags().items():
        print(f"{k} = {_b(v)}")
    for p in prime_divisors(G.order):
        s = c.splits[p]
        split = (
            "none"
            if s is None
            else f"|P|={s.sylow.order} ({'cyclic' if s.sylow.is_cyclic() else 'non-cyclic'}), "
            f"|F|={s.complement.order}, |C_F(P)|={s.centralizer_in_complement.order}"
        )
        print(f"p={p}: p_nilpotent = {_b(c.p_nilpotent[p])}; sylow_split = {split}")
    if fs is not None:
        print(f"frobenius_kernel_order = {fs.kernel.order}")
        print(f"frobenius_complement_order = {fs.complement.order}")
    if c.abelian_invariants is not None:
        print(f"abelian_invariants = {c.abelian_invariants}")
    return 0


def _emit(report: VerificationReport, fmt: str, out: str | None) -> None:
    text = report.to_json() if fmt == "json" else report.to_csv()
    if out:
        Path(out).write_text(text, newline="")
    else:
        sys.stdout.write(text)


def _summary_to_stderr(report: VerificationReport) -> None:
    for tag, s in report.summary.items():
        print(
            f"{tag:22s} applicable={s['applicable']:4d} holds={s['holds']:4d} "
            f"violations={s['violations']:3d} tight={s['tight']:4d}",
            file=sys.stderr,
        )


def cmd_verify(args) -> int:
    if args.corpus == "default":
        source = default_corpus_text()
    else:
        try:
            source = Path(args.corpus).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read corpus: {exc}") from exc
    try:
        corpus = parse_corpus(source)
        tags = parse_tags(args.tags)
    except (RhoGroupsError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    report = run_corpus(corpus, tags, jobs=args.jobs, cap=args.cap, collisions=args.collisions)
    _emit(report, args.format, args.out)
    _summary_to_stderr(report)
    return report.exit_status


def cmd_remarks(args) -> int:
    rows = remark_rows(args.p_max, args.alpha_max, args.qp_max)
    report = VerificationReport(rows, [Tag.REMARK_P, Tag.REMARK_QP])
    _emit(report, args.format, args.out)
    _summary_to_stderr(report)
    return report.exit_status


def cmd_abelian(args) -> int:
    if args.n_max > args.cap:
        raise UsageError(f"--n-max {args.n_max} exceeds --cap {args.cap}")
    report = VerificationReport(check_abelian_distinguish(args.n_max, args.cap), [Tag.ABELIAN_DISTINGUISH])
    _emit(report, args.format, args.out)
    _summary_to_stderr(report)
    return report.exit_status


def cmd_table(args) -> int:
    if args.n_max > args.cap:
        raise UsageError(f"--n-max {args.n_max} exceeds --cap {args.cap}")
    bad = 0
    print("n\tclosed_form\tenumerated\tmatch")
    for n in range(1, args.n_max + 1):
        closed = rho_cyclic(n)
        direct = invariants_direct(build(R.Cyclic(n), cap=args.cap)).rho
        bad += closed != direct
        print(f"{n}\t{closed}\t{direct}\t{_b(closed == direct)}")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rhogroups", description="Products of element orders of finite groups.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_cap(p):
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="group order cap (default %(default)s)")
        return p

    def with_output(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    p = with_cap(sub.add_parser("compute", help="print n, q, rho, psi and omega of a group"))
    p.add_argument("recipe")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_compute)

    p = with_cap(sub.add_parser("classify", help="print structure flags and decompositions"))
    p.add_argument("recipe")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_classify)

    p = with_output(with_cap(sub.add_parser("verify", help="check every bound on a corpus")))
    p.add_argument("--corpus", required=True, help="corpus file, or 'default' for the bundled corpus")
    p.add_argument("--tags", help="comma-separated tag list (default: all group tags)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--collisions", action="store_true", help="also report equal-rho pairs of distinct groups")
    p.set_defaults(func=cmd_verify)

    p = with_output(sub.add_parser("remarks", help="sweep the two arithmetic remarks"))
    p.add_argument("--p-max", type=int, default=97)
    p.add_argument("--alpha-max", type=int, default=8)
    p.add_argument("--qp-max", type=int, default=100)
    p.set_defaults(func=cmd_remarks)

    p = with_output(with_cap(sub.add_parser("abelian", help="check rho separates abelian groups of each order")))
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_abelian)

    p = with_cap(sub.add_parser("table", help="rho(C_n): closed form against enumeration"))
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_table)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rhogroups {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
