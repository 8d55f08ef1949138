"""Command-line front end.

Exit status: 0 success, 1 usage or domain error, 2 overflow or failed
re-verification, 3 a perfect cuboid turned up (checked last, so it wins).
"""

from __future__ import annotations

import argparse
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .arith import ArithmeticOverflowError
from .checkpoint import CheckpointMismatch
from .cuboid import Cuboid, CuboidClass
from .lemma_audit import (
    SubstitutionFamily,
    audit_equal_sums,
    audit_substitution,
    classify_lemma_case,
    scan_case_coverage,
    substitution_params,
)
from .params import (
    ParameterError,
    QuadrupleParams,
    SaundersonVariant,
    SharedLegParams,
    lal_blundon,
    perfect_conditions,
    quadruple_from_params,
    saunderson,
    saunderson_audit,
    shared_leg_forward,
    shared_leg_inverse,
)
from .records import FORMATS, ResultRecord, parse_records, write_records
from .search import (
    SearchError,
    SearchTask,
    Strategy,
    VerificationError,
    default_workers,
    divisibility_report,
    merge_hits,
    Hit,
    quadruple_surjectivity_audit,
    run_task,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILURE, EXIT_PERFECT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _natural(token: str) -> int:
    try:
        v = int(token, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number {token!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"negative number {token!r}")
    return v


def _positive(token: str) -> int:
    v = _natural(token)
    if v == 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {token!r}")
    return v


def _shard(token: str) -> tuple[int, int]:
    index, sep, count = token.partition("/")
    try:
        if not sep:
            raise ValueError
        return int(index), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like INDEX/COUNT, got {token!r}") from None


@functools.lru_cache(maxsize=None)
def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cuboid-forge", description="Euler brick and perfect cuboid toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("verify", "diagonals and class of a cuboid"),
                           ("classify", "class label of a cuboid")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("edges", nargs=3, type=_positive, metavar="EDGE")
        s.add_argument("--format", choices=("text", "json", *FORMATS), default="text")

    s = sub.add_parser("search", help="run a brick search")
    s.add_argument("--strategy", required=True, choices=[x.value for x in Strategy])
    s.add_argument("--max-edge", type=_positive)
    s.add_argument("--x", type=_positive)
    s.add_argument("--max-x", type=_positive)
    s.add_argument("--max-param", type=_positive)
    s.add_argument("--max-hyp", type=_positive)
    s.add_argument("--max-z", type=_positive)
    s.add_argument("--perfect-only", action="store_true")
    s.add_argument("--format", choices=(*FORMATS, "json"), default="jsonl")
    s.add_argument("--out", type=Path)
    s.add_argument("--threads", type=_positive)
    s.add_argument("--shard", type=_shard)
    s.add_argument("--checkpoint", type=Path)
    s.add_argument("--stop-after", type=_positive, help="halt once this unit is done")

    s = sub.add_parser("audit-lemma", help="lemma case audits")
    lsub = s.add_subparsers(dest="audit", required=True, parser_class=_Parser)
    a = lsub.add_parser("case", help="classify (m, n, p, q) into the lemma cases")
    a.add_argument("values", nargs=4, type=_positive, metavar="M N P Q")
    a = lsub.add_parser("substitution", help="shared-leg substitution degeneracy")
    a.add_argument("values", nargs=4, type=_positive, metavar="M1 M2 N1 N2")
    a = lsub.add_parser("family", help="substitution family from (k1, k2, r)")
    a.add_argument("family", choices=[f.value for f in SubstitutionFamily])
    a.add_argument("values", nargs=3, type=_positive, metavar="K1 K2 R")
    a = lsub.add_parser("equal-sums", help="the m^2+n^2 = p^2+q^2 degeneracy")
    a.add_argument("values", nargs=4, type=_positive, metavar="M N P Q")

    s = sub.add_parser("audit-coverage", help="scan [1, bound]^4 for uncovered quadruples")
    s.add_argument("--bound", type=_positive, required=True)
    s.add_argument("--threads", type=_positive)
    s.add_argument("--out", type=Path)

    s = sub.add_parser("param", help="evaluate a parametrization")
    psub = s.add_subparsers(dest="param", required=True, parser_class=_Parser)
    for name, meta in (("quadruple", "M N P Q"), ("conditions", "M N P Q"),
                       ("shared-leg", "M1 M2 N1 N2"), ("shared-leg-inverse", "B C D E"),
                       ("lal-blundon", "M N P Q")):
        a = psub.add_parser(name)
        a.add_argument("values", nargs=4, type=_natural, metavar=meta)
    for name in ("saunderson", "saunderson-audit"):
        a = psub.add_parser(name)
        a.add_argument("values", nargs=3, type=_positive, metavar="X Y Z")
        if name == "saunderson":
            a.add_argument("--variant", choices=[v.value for v in SaundersonVariant],
                           default=SaundersonVariant.CLASSICAL.value)

    s = sub.add_parser("report-divisibility", help="divisibility profile of primitive bricks")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--max-edge", type=_positive)
    src.add_argument("--input", type=Path)
    s.add_argument("--input-format", choices=FORMATS, default="jsonl")
    s.add_argument("--out", type=Path)
    return p


def _emit(data: bytes | str, out: Path | None, stdout: TextIO) -> None:
    if isinstance(data, str):
        data = data.encode()
    if out is None:
        stdout.write(data.decode())
        return
    try:
        out.write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror}") from exc


def _json(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cmd_verify(args: argparse.Namespace, stdout: TextIO) -> int:
    record = ResultRecord.from_cuboid(Cuboid.of(*args.edges))
    if args.command == "classify" and args.format == "text":
        stdout.write(record.cls.label + "\n")
    elif args.format == "text":
        def show(v: int | None) -> str:
            return "non-integer" if v is None else str(v)
        stdout.write(
            f"edges  {record.a} {record.b} {record.c}\n"
            f"d_ab   {show(record.d_ab)}\n"
            f"d_ac   {show(record.d_ac)}\n"
            f"d_bc   {show(record.d_bc)}\n"
            f"g      {show(record.g)}\n"
            f"class  {record.cls.label}\n"
        )
    elif args.format == "json":
        stdout.write(_json(record.to_dict()))
    else:
        stdout.write(write_records([record], args.format).decode())
    return EXIT_PERFECT if record.cls is CuboidClass.PERFECT else EXIT_OK


def _search_task(args: argparse.Namespace) -> SearchTask:
    strategy = Strategy(args.strategy)
    flags = {"max_edge": args.max_edge, "x": args.x, "max_x": args.max_x,
             "max_param": args.max_param, "max_hyp": args.max_hyp, "max_z": args.max_z}
    given = {k: v for k, v in flags.items() if v is not None}
    try:
        return SearchTask(strategy, tuple(given.items()), args.shard, args.perfect_only)
    except SearchError as exc:
        raise UsageError(str(exc)) from None


def _cmd_search(args: argparse.Namespace, stdout: TextIO) -> int:
    task = _search_task(args)
    workers = args.threads or default_workers()
    if task.strategy is Strategy.QUADRUPLE_GEN:
        max_z = task.bound("max_z")
        audit = quadruple_surjectivity_audit(max_z, task.bound("max_param", max_z))
        _emit(_json(audit.to_dict()), args.out, stdout)
        return EXIT_OK
    report = run_task(task, workers=workers, checkpoint=args.checkpoint, stop_after=args.stop_after)
    report.verify()
    if args.format == "json":
        _emit(report.to_json(), args.out, stdout)
    else:
        records = [ResultRecord.from_hit(h, task.strategy) for h in report.found]
        _emit(write_records(records, args.format), args.out, stdout)
    if report.perfect:
        for h in report.perfect:
            print(f"PERFECT CUBOID FOUND: {h.cuboid.edges}", file=sys.stderr)
        return EXIT_PERFECT
    return EXIT_OK


def _cmd_audit_lemma(args: argparse.Namespace, stdout: TextIO) -> int:
    v = args.values
    if args.audit == "case":
        rec = classify_lemma_case(QuadrupleParams(*v))
        out = {
            "params": v,
            "m2+n2": {"value": rec.params.sum_mn, "k": rec.decomp_mn.k, "r": rec.decomp_mn.r},
            "p2+q2": {"value": rec.params.sum_pq, "k": rec.decomp_pq.k, "r": rec.decomp_pq.r},
            "shared_r": rec.shared_r,
            "A_integral": rec.A_integral,
            "mp+nq": rec.params.cross_plus,
            "mq-np": rec.params.cross_minus,
            "target": rec.target,
            "case": rec.case.value,
            "consequent_holds": rec.consequent_holds,
            "specializations": [s.value for s in rec.specializations],
        }
    elif args.audit in ("substitution", "family"):
        if args.audit == "family":
            params = substitution_params(SubstitutionFamily(args.family), *v)
        else:
            params = SharedLegParams(*v)
        rep = audit_substitution(params)
        pair = rep.pair
        out = {
            "params": [params.m1, params.m2, params.n1, params.n2],
            "a_squared": pair.a_squared, "b": pair.b, "c": pair.c, "d": pair.d, "e": pair.e,
            "zero_components": list(rep.zero_components),
            "sign_flipped": [n for n in ("c", "e") if getattr(pair, f"{n}_flipped")],
            "case": rep.case.value,
        }
    else:
        rep = audit_equal_sums(*v)
        q = rep.quadruple
        out = {
            "params": v,
            "first_component": rep.first_component,
            "mq-np": rep.cross_minus,
            "quadruple": [q.w, q.x, q.y, q.z],
            "degenerate": rep.degenerate,
            "wx_sum": rep.wx_sum,
            "wx_root": rep.wx_root,
        }
    stdout.write(_json(out))
    return EXIT_OK


def _cmd_audit_coverage(args: argparse.Namespace, stdout: TextIO) -> int:
    report = scan_case_coverage(args.bound, workers=args.threads or default_workers())
    _emit(_json(report.to_dict()), args.out, stdout)
    return EXIT_OK


def _cmd_param(args: argparse.Namespace, stdout: TextIO) -> int:
    v = args.values
    kind = args.param
    if kind == "quadruple":
        q = quadruple_from_params(QuadrupleParams(*v))
        out = {"quadruple": [q.w, q.x, q.y, q.z], "degenerate": q.degenerate, "primitive": q.primitive}
    elif kind == "conditions":
        c = perfect_conditions(QuadrupleParams(*v))
        out = {"sums": [c.xy_sum, c.wx_sum, c.wy_sum], "roots": [c.A, c.B, c.C],
               "holds": list(c.flags), "degenerate": c.degenerate}
    elif kind == "shared-leg":
        pair = shared_leg_forward(SharedLegParams(*v))
        out = {"a_squared": pair.a_squared, "a": pair.a, "b": pair.b, "c": pair.c,
               "d": pair.d, "e": pair.e, "degenerate": pair.degenerate}
    elif kind == "shared-leg-inverse":
        sp = shared_leg_inverse(*v)
        out = {"m1": sp.m1, "m2": sp.m2, "n1": sp.n1, "n2": sp.n2}
    elif kind == "lal-blundon":
        lb = lal_blundon(*v)
        out = {"edges": [lb.x, lb.y, lb.z], "diag_xy": lb.diag_xy, "diag_xz": lb.diag_xz,
               "yz_root": lb.yz_root, "body": lb.is_body, "certified": lb.certified}
    elif kind == "saunderson":
        g = saunderson(*v, variant=SaundersonVariant(args.variant))
        out = {"edges": list(g.cuboid.edges), "class": g.cls.label}
    else:
        audit = saunderson_audit(*v)
        stdout.write(audit.describe() + "\n")
        return EXIT_OK
    stdout.write(_json(out))
    return EXIT_OK


def _cmd_divisibility(args: argparse.Namespace, stdout: TextIO) -> int:
    if args.max_edge is not None:
        report = run_task(SearchTask.make(Strategy.TRIPLE_JOIN, max_edge=args.max_edge),
                          workers=default_workers())
        report.verify()
        hits = report.found
    else:
        try:
            data = args.input.read_bytes()
        except OSError as exc:
            raise OSError(f"cannot read {args.input}: {exc.strerror}") from exc
        records = parse_records(data, args.input_format)
        bad = [r for r in records if not r.verify()]
        if bad:
            raise VerificationError(f"{len(bad)} input records fail re-verification, first {bad[0]}")
        hits = merge_hits(Hit(r.cuboid, r.cls, r.params) for r in records)
    _emit(_json(divisibility_report(hits).to_dict()), args.out, stdout)
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "classify": _cmd_verify,
    "search": _cmd_search,
    "audit-lemma": _cmd_audit_lemma,
    "audit-coverage": _cmd_audit_coverage,
    "param": _cmd_param,
    "report-divisibility": _cmd_divisibility,
}


def run_cli(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
            stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args, stdout)
    except (UsageError, ParameterError, SearchError, CheckpointMismatch) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ArithmeticOverflowError, VerificationError) as exc:
        print(f"failure: {exc}", file=stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())
