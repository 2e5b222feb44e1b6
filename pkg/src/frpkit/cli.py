"""Command-line interface.

Exit codes: 0 pass/SAT, 1 fail/UNSAT/violation found, 2 usage or input
error, 3 search budget exceeded.  Reports are plain text, one finding per
line; ``--porcelain`` switches to ``key=value`` lines.  Lines starting with
``#`` carry timing and are not part of the stable report.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .algebra import TooLargeError, check_ra_axioms
from .fileio import (
    FormatError,
    format_representation,
    load_algebra,
    load_representation,
    parse_algebra,
    parse_element_expr,
)
from .refuter import NotPointAlgebra, refute_finite_candidate
from .representation import (
    RepresentationError,
    check_representation,
    image_of,
    theta_construction,
)
from .search import SearchError, Verdict, frp_scan
from .terms import (
    SignatureError,
    Signature,
    TermSyntaxError,
    UnboundName,
    eval_abstract,
    eval_proper,
    format_term,
    names_of,
    parse_term,
)
from .zoo import POINT_ELEMENTS, point_algebra

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class InputError(Exception):
    pass


class _Report:
    def __init__(self, porcelain: bool, stream):
        self.porcelain = porcelain
        self.stream = stream

    def line(self, text: str, **fields) -> None:
        if self.porcelain:
            body = " ".join(f"{k}={_quote(v)}" for k, v in fields.items())
            print(body, file=self.stream)
        else:
            print(text, file=self.stream)

    def trailer(self, text: str) -> None:
        print(f"# {text}", file=self.stream)


def _quote(v) -> str:
    s = str(v)
    if s == "" or any(c.isspace() for c in s):
        return '"' + s.replace('"', '\\"') + '"'
    return s


def _load_algebra_arg(spec: str):
    if spec.startswith("zoo:"):
        name = spec[4:]
        try:
            text = resources.files("frpkit.data").joinpath(f"{name}.alg").read_text()
        except FileNotFoundError:
            raise InputError(f"no built-in algebra {name!r}") from None
        return parse_algebra(text, source=spec)
    p = Path(spec)
    if not p.exists():
        raise InputError(f"no such file: {spec}")
    return load_algebra(p)


def _load_rep_arg(path: str, A):
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    return load_representation(p, A)


def _signature(text: str) -> Signature:
    return Signature.parse(text)


def _cmd_check_axioms(args, rep: _Report) -> int:
    A = _load_algebra_arg(args.algebra)
    report = check_ra_axioms(A)
    for g in sorted(report.verdicts):
        ok = report.verdicts[g]
        f = report.failures.get(g)
        text = report.lines()[g - 1]
        fields = {"group": g, "status": "pass" if ok else "fail"}
        if f is not None:
            fields["law"] = f.law
            fields["witness"] = ",".join(str(w) for w in f.witness)
        rep.line(text, **fields)
    if report.note:
        rep.line(f"note: {report.note}", note=report.note)
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_build_rep(args, rep: _Report) -> int:
    A = _load_algebra_arg(args.algebra)
    try:
        m = theta_construction(A)
    except RepresentationError as exc:
        rep.line(f"refused: {exc}", status="refused", reason=str(exc))
        return EXIT_FAIL
    text = format_representation(m, name=args.name or f"theta-{A.name}")
    if args.out:
        Path(args.out).write_text(text)
        rep.line(f"wrote {args.out} (base {m.size})", status="written", path=args.out, base=m.size)
    else:
        print(text, end="", file=rep.stream)
    return EXIT_OK


def _cmd_verify_rep(args, rep: _Report) -> int:
    A = _load_algebra_arg(args.algebra)
    m = _load_rep_arg(args.representation, A)
    sig = _signature(args.sig)
    cap = None if args.max_violations == 0 else args.max_violations
    try:
        violations = check_representation(m, sig, injective=not args.no_injective, cap=cap)
    except RepresentationError as exc:
        raise InputError(str(exc)) from None
    if not violations:
        rep.line(f"pass {sig}", status="pass", signature=sig)
        return EXIT_OK
    for v in violations:
        fields = {"status": "violation", "kind": v.kind, "symbol": v.symbol or "",
                  "operands": ",".join(str(o) for o in v.operands)}
        if v.pair is not None:
            fields["pair"] = m.render_pair(v.pair)
        rep.line(f"violation {v.describe(m)}", **fields)
    return EXIT_FAIL


def _cmd_search_rep(args, rep: _Report) -> int:
    A = _load_algebra_arg(args.algebra)
    sig = _signature(args.sig)
    top = args.max_base if args.max_base is not None else args.base
    if top < args.base:
        raise InputError("--max-base must be at least --base")
    options = dict(
        require_injectivity=not args.no_injective,
        time_budget=args.budget_ms / 1000.0,
        node_budget=args.node_budget,
        allow_large=args.allow_large,
        workers=args.threads,
    )
    outcomes = frp_scan(A, sig, top, n_min=args.base, **options)
    rep.line(
        f"search {sig} injective={'yes' if not args.no_injective else 'no'} "
        f"budget_ms={args.budget_ms} node_budget={args.node_budget}",
        signature=sig, injective=not args.no_injective, budget_ms=args.budget_ms,
        node_budget=args.node_budget,
    )
    for o in outcomes:
        rep.line(f"base {o.base_size}: {o.verdict.value} nodes={o.nodes}",
                 base=o.base_size, verdict=o.verdict.value, nodes=o.nodes)
    last = outcomes[-1]
    if last.verdict is Verdict.SAT:
        text = format_representation(last.witness, name=f"found-{A.name}")
        if args.out:
            Path(args.out).write_text(text)
            rep.line(f"witness written to {args.out}", witness=args.out)
        elif not rep.porcelain:
            for line in text.splitlines():
                rep.line(f"  {line}")
    rep.trailer("elapsed " + " ".join(f"{o.elapsed:.3f}s" for o in outcomes))
    if last.verdict is Verdict.SAT:
        return EXIT_OK
    if any(o.verdict is Verdict.BUDGET_EXCEEDED for o in outcomes):
        return EXIT_BUDGET
    return EXIT_FAIL


def _cmd_refute(args, rep: _Report) -> int:
    A = _load_algebra_arg(args.algebra)
    m = _load_rep_arg(args.representation, A)
    try:
        trace = refute_finite_candidate(m)
    except NotPointAlgebra as exc:
        raise InputError(f"refute needs the Point Algebra: {exc}") from None
    for i, f in enumerate(trace.facts, 1):
        rep.line(f"{i}. {f.describe(m)}", n=i, fact="member", element=str(f.element),
                 pair=m.render_pair(f.pair))
    v = trace.violation
    rep.line(
        f"{len(trace.facts) + 1}. violation {v.describe(m)}",
        n=len(trace.facts) + 1, fact="violation", symbol=v.symbol,
        operands=",".join(str(o) for o in v.operands), pair=m.render_pair(v.pair),
        expected=v.expected, actual=v.actual,
    )
    return EXIT_FAIL


def _default_env(A) -> dict:
    env = {a: A.element(a) for a in A.atoms}
    if A == point_algebra():
        for name, atoms in POINT_ELEMENTS.items():
            env.setdefault(name, A.element(atoms))
    return env


def _cmd_eval(args, rep: _Report) -> int:
    A = _load_algebra_arg(args.algebra)
    env = _default_env(A)
    for binding in args.env or []:
        if "=" not in binding:
            raise InputError(f"--env expects name=element, got {binding!r}")
        name, expr = binding.split("=", 1)
        try:
            env[name.strip()] = A.element(parse_element_expr(A, expr))
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    term = parse_term(args.term)
    value = eval_abstract(A, term, env)
    rep.line(f"term = {format_term(term)}", term=format_term(term))
    rep.line(f"value = {value}", value=str(value))
    if args.rep:
        m = _load_rep_arg(args.rep, A)
        image = m.image(value)
        leaves = {name: env[name] for name in names_of(term)}
        proper = eval_proper(image_of(m, leaves), term)
        rep.line(f"image = {image.render(m.labels or None)}", image=image.render(m.labels or None))
        rep.line(f"proper = {proper.render(m.labels or None)}", proper=proper.render(m.labels or None))
        same = image == proper
        rep.line(f"preserved = {'yes' if same else 'no'}", preserved=same)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frpkit",
        description="Finite relation algebras, their representations and reduct signatures.",
    )
    parser.add_argument("--porcelain", action="store_true", help="key=value output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-axioms", help="check the relation algebra axioms")
    p.add_argument("algebra", help="algebra file, or zoo:NAME")
    p.set_defaults(func=_cmd_check_axioms)

    p = sub.add_parser("build-rep", help="build the representation over the atom base")
    p.add_argument("algebra")
    p.add_argument("--out", help="write the representation file here")
    p.add_argument("--name", help="representation name in the file")
    p.set_defaults(func=_cmd_build_rep)

    p = sub.add_parser("verify-rep", help="check a map against a signature")
    p.add_argument("algebra")
    p.add_argument("representation")
    p.add_argument("--sig", required=True, help="symbols, e.g. \"0,1,+,1',~,;\"")
    p.add_argument("--no-injective", action="store_true", help="skip the injectivity check")
    p.add_argument("--max-violations", type=int, default=10, help="0 for all")
    p.set_defaults(func=_cmd_verify_rep)

    p = sub.add_parser("search-rep", help="search for a representation on a bounded base")
    p.add_argument("algebra")
    p.add_argument("--sig", required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--max-base", type=int)
    p.add_argument("--no-injective", action="store_true")
    p.add_argument("--budget-ms", type=int, default=60_000)
    p.add_argument("--node-budget", type=int, default=10_000_000)
    p.add_argument("--allow-large", action="store_true", help="permit bases above 8")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--out", help="write a found witness here")
    p.set_defaults(func=_cmd_search_rep)

    p = sub.add_parser("refute", help="extract a violation from a finite Point Algebra map")
    p.add_argument("algebra")
    p.add_argument("representation")
    p.set_defaults(func=_cmd_refute)

    p = sub.add_parser("eval", help="evaluate a term")
    p.add_argument("algebra")
    p.add_argument("--term", required=True)
    p.add_argument("--env", action="append", metavar="NAME=ELEM")
    p.add_argument("--rep", help="also evaluate under this representation")
    p.set_defaults(func=_cmd_eval)
    return parser


# values for these may start with "-" (a signature "-,;" or a term "-a")
_VALUE_OPTIONS = ("--sig", "--term", "--env")


def _glue_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    rep = _Report(args.porcelain, stdout)
    try:
        return args.func(args, rep)
    except (
        InputError,
        FormatError,
        SignatureError,
        TermSyntaxError,
        UnboundName,
        SearchError,
        TooLargeError,
        ValueError,
    ) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(f"error: {msg}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())
