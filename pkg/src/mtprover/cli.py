"""Command-line front end.

Exit codes: 0 proven (or certificate valid, or reproduction matches golden),
1 not proven (or certificate rejected, or golden mismatch), 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .cases import CASES, reproduce
from .certificate import CertificateError, check_certificate
from .estimation import DEFAULT_BUDGET, AffinePoly
from .exact import BoundaryValue, IntervalSpec, rat_to_str
from .model import METHOD_C, KhatError, SignError, ZeroExpressionError
from .parser import ParseError
from .prover import IntervalError, ProofCertificate, prove
from .taylor import DegreeBudgetError

EXIT_PROVEN = 0
EXIT_NOT_PROVEN = 1
EXIT_USAGE = 2

_PARAM = re.compile(r"^\s*([A-Za-z_]\w*)\s*=\s*([^.\s]+(?:\.\d+)?)\s*\.\.\s*(\S+)\s*$")


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2) itself
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="mtprove", description="Prove f(x) > 0 on (0, b] for mixed trig-polynomial f.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    p = sub.add_parser("prove", help="prove an inequality expr > 0")
    p.add_argument("expr")
    p.add_argument("--upper", required=True, help='"pi/2" or a rational such as 1551414/1000000')
    ends = p.add_mutually_exclusive_group()
    ends.add_argument("--closed", dest="upper_closed", action="store_true", default=None,
                      help="include the upper end (default for rational ends)")
    ends.add_argument("--open", dest="upper_closed", action="store_false",
                      help="exclude the upper end (default for pi/2)")
    p.add_argument("--method", choices=("auto", "method-c", "method-d"), default="auto")
    p.add_argument("--param", help='affine parameter range, e.g. "a=1..3/2" (open interval)')
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest degree index tried")
    p.add_argument("--cert", type=Path, help="write the certificate JSON here")
    p.add_argument("-v", "--verbose", action="count", default=0)

    v = sub.add_parser("verify", help="re-check a certificate file")
    v.add_argument("path", type=Path)
    v.add_argument("-v", "--verbose", action="count", default=0)

    r = sub.add_parser("reproduce", help="run a built-in example against its golden polynomials")
    r.add_argument("name", choices=sorted(CASES))
    r.add_argument("--cert", type=Path)
    r.add_argument("-v", "--verbose", action="count", default=0)
    return ap


def parse_param(spec: str) -> tuple[str, Fraction, Fraction]:
    m = _PARAM.match(spec)
    if not m:
        raise UsageError(f"bad --param {spec!r}; expected NAME=LO..HI")
    try:
        lo, hi = Fraction(m.group(2)), Fraction(m.group(3))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --param bounds in {spec!r}") from None
    if lo >= hi:
        raise UsageError("--param needs LO < HI")
    return m.group(1), lo, hi


def make_interval(upper: str, upper_closed: Optional[bool]) -> IntervalSpec:
    try:
        bv = BoundaryValue.parse(upper)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --upper {upper!r}") from None
    if upper_closed is None:
        upper_closed = not bv.is_pi_half
    try:
        return IntervalSpec(bv, upper_closed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# output


def _status_line(result, out: TextIO) -> None:
    if isinstance(result, ProofCertificate):
        rec = {
            "status": "proven",
            "khat": result.khat_plan.khat,
            "method": result.khat_plan.method_used,
        }
        tp = result.tp
        rec["tp_degree"] = tp.degree if not hasattr(tp, "p_poly") else max(
            d for d in (tp.p_poly.degree, tp.q_poly.degree, 0) if d is not None
        )
    else:
        rec = {"status": result.status, "reason": result.reason}
        if result.witness is not None:
            rec["witness"] = [rat_to_str(result.witness[0]), rat_to_str(result.witness[1])]
        if result.counterexample is not None:
            rec["counterexample_x"] = rat_to_str(result.counterexample["x"])
    out.write(json.dumps(rec, sort_keys=True) + "\n")


def _trace(result, out: TextIO) -> None:
    w = out.write
    var = result.normalized.var if result.normalized is not None else "x"
    if result.normalized is not None:
        w(f"normalized: {result.normalized.to_text()}\n")
    kp = result.khat_plan
    if kp is not None:
        w(f"k-hat: {kp.khat} ({kp.method_used})\n")
        if kp.transformed is not result.normalized:
            w(f"transformed: {kp.transformed.to_text()}\n")
    plan = result.plan if isinstance(result, ProofCertificate) else result.last_plan
    if plan is not None:
        for i, tp in enumerate(plan.per_term):
            if tp is not None:
                w(f"  term {i}: s={tp.s} k={tp.k} variant {tp.variant}\n")
    if isinstance(result, ProofCertificate):
        if hasattr(result.tp, "p_poly"):
            ev = result.evidence
            w(f"TP = p*a + q\n  p = {result.tp.p_poly.format(var)}\n  q = {result.tp.q_poly.format(var)}\n")
            w(f"parameter endpoints: {ev.case}; p is {ev.p_sign}\n")
        else:
            ev = result.evidence
            w(f"TP = {result.tp.format(var)}\n")
            w(f"Sturm: x^{ev.x_power} factored, chain length {ev.chain_length}, "
              f"sign changes {ev.changes_lo} -> {ev.changes_hi}, roots {ev.root_count}\n")
        w(f"result: proven on {result.interval}\n")
        return
    tp = result.last_tp
    if isinstance(tp, AffinePoly):
        w(f"last TP = ({tp.p.format(var)})*a + ({tp.q.format(var)})\n")
    elif tp is not None:
        w(f"last TP = {tp.format(var)}\n")
    for lo, hi in result.root_enclosures:
        w(f"  TP root in [{lo}, {hi}]\n")
    if result.witness is not None:
        w(f"  TP({result.witness[0]}) = {result.witness[1]} <= 0\n")
    if result.counterexample is not None:
        ce = result.counterexample
        lo, hi = ce["enclosure"]
        a = "" if ce["a"] is None else f", a = {ce['a']}"
        w(f"counterexample: f({ce['x']}{a}) in [{float(lo):.6g}, {float(hi):.6g}]\n")
    w(f"result: {result.status} ({result.reason})\n")


def _report(result, verbosity: int, out: TextIO) -> None:
    if verbosity:
        _trace(result, out)
    else:
        _status_line(result, out)


def _write_cert(result, path: Optional[Path]) -> None:
    if path is not None and isinstance(result, ProofCertificate):
        path.write_text(result.to_json(), encoding="utf-8")


# ---------------------------------------------------------------------------
# commands


def cmd_prove(args, out: TextIO) -> int:
    interval = make_interval(args.upper, args.upper_closed)
    if args.method == METHOD_C and interval.upper.is_pi_half:
        raise UsageError("method-c requires an upper end below pi/2")
    if args.budget < 0:
        raise UsageError("--budget must be a natural number")
    param = name = None
    if args.param:
        name, lo, hi = parse_param(args.param)
        param = (lo, hi)
    result = prove(args.expr, interval, method=args.method, budget=args.budget, param=param, param_name=name)
    _report(result, args.verbose, out)
    _write_cert(result, args.cert)
    return EXIT_PROVEN if result.proven else EXIT_NOT_PROVEN


def cmd_verify(args, out: TextIO) -> int:
    try:
        text = args.path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}") from None
    try:
        check_certificate(text)
    except CertificateError as exc:
        out.write(f"invalid: {exc}\n")
        return EXIT_NOT_PROVEN
    out.write("valid\n")
    return EXIT_PROVEN


def cmd_reproduce(args, out: TextIO) -> int:
    rep = reproduce(args.name)
    case = rep.case
    if args.verbose:
        out.write(f"{case.name}: {case.text} on {case.interval}\n")
        _trace(rep.result, out)
    if not rep.result.proven:
        out.write(f"{case.name}: not proven\n")
        return EXIT_NOT_PROVEN
    _write_cert(rep.result, args.cert)
    out.write(f"{case.name}: {case.summary}\n")
    ok = True
    for key in sorted(rep.golden):
        got = rep.produced.get(key)
        same = got == rep.golden[key]
        ok &= same
        shown = "missing" if got is None else got.format(case.var)
        out.write(f"{key}({case.var}) = {shown}  [{'matches golden' if same else 'DIFFERS from golden'}]\n")
        if not same:
            out.write(f"  golden: {rep.golden[key].format(case.var)}\n")
    return EXIT_PROVEN if ok else EXIT_NOT_PROVEN


_COMMANDS = {"prove": cmd_prove, "verify": cmd_verify, "reproduce": cmd_reproduce}


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_PROVEN if exc.code in (0, None) else EXIT_USAGE
    if getattr(args, "verbose", 0) >= 2:
        logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=err)
    try:
        return _COMMANDS[args.command](args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc.render()}\n")
    except (UsageError, KhatError, IntervalError, SignError, ZeroExpressionError, DegreeBudgetError) as exc:
        err.write(f"error: {exc}\n")
    return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
