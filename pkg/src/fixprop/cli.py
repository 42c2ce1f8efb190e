"""Text front end.

Input grammar, line oriented, '#' starts a comment:

    var <name> <value> <value> ...
    con <name> (<var> ... <var>) { (<value> ...) ... (<value> ...) }

A var line declares a variable and its whole domain on one line.  A con
block names a constraint, lists previously declared variables (any order,
no repeats), then the allowed tuples; the block may span lines between the
braces.  Names match [A-Za-z_][A-Za-z0-9_]*, values are signed decimal
integers and must lie in the declared domain of their variable.

Output uses the same grammar: reduced domains as var lines, and for the
relation algorithms (path, pc2, dpath, dpc) also the reduced pair
constraints, so a result can be piped back in.

Exit codes: 0 all domains and printed relations nonempty, 1 some came out
empty, 2 usage or input errors, 3 runtime failures (invariant violation,
step limit, resource cap, oracle mismatch).
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from . import algorithms, oracle
from .engine import DEFAULT_STEP_LIMIT
from .errors import (
    FixpropError,
    InvariantViolation,
    ParseError,
    ResourceLimitError,
    StepLimitExceeded,
    StructuralError,
    UnsupportedInputError,
)
from .model import Constraint, Csp, normalize, reorder
from .propagators import path_fns, projection_fns

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
INT_RE = re.compile(r"[+-]?\d+")
TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[+-]?\d+|[(){}]|\S")


def _tokens(text: str) -> list[tuple[str, int, int]]:
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        for m in TOKEN_RE.finditer(body):
            out.append((m.group(), ln, m.start() + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.toks)

    def peek(self):
        return self.toks[self.pos] if not self.done() else None

    def next(self, expect: str):
        if self.done():
            last = self.toks[-1] if self.toks else ("", 1, 1)
            raise ParseError(f"{expect} expected, got end of input", last[1], last[2])
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def name(self, what: str) -> tuple[str, int, int]:
        tok, ln, col = self.next(what)
        if not NAME_RE.fullmatch(tok):
            raise ParseError(f"{what} expected, got {tok!r}", ln, col)
        return tok, ln, col

    def literal(self, text: str):
        tok, ln, col = self.next(f"'{text}'")
        if tok != text:
            raise ParseError(f"'{text}' expected, got {tok!r}", ln, col)
        return tok, ln, col

    def integer(self, what: str) -> tuple[int, int, int]:
        tok, ln, col = self.next(what)
        if not INT_RE.fullmatch(tok):
            raise ParseError(f"{what} expected, got {tok!r}", ln, col)
        return int(tok), ln, col


def parse_csp(text: str) -> Csp:
    """Parse the var/con grammar into a Csp.  Raises ParseError with the
    line and column of the offending token."""
    p = _Parser(text)
    order: list[str] = []
    domains: dict[str, frozenset] = {}
    constraints: list[Constraint] = []
    con_names = set()
    while not p.done():
        tok, ln, col = p.next("'var' or 'con'")
        if tok == "var":
            vname, vln, vcol = p.name("variable name")
            if vname in domains:
                raise ParseError(f"duplicate variable {vname!r}", vln, vcol)
            values = []
            while True:
                nxt = p.peek()
                if nxt is None or nxt[1] != vln or not INT_RE.fullmatch(nxt[0]):
                    break
                values.append(int(nxt[0]))
                p.pos += 1
            order.append(vname)
            domains[vname] = frozenset(values)
        elif tok == "con":
            cname, cln, ccol = p.name("constraint name")
            if cname in con_names:
                raise ParseError(f"duplicate constraint {cname!r}", cln, ccol)
            con_names.add(cname)
            p.literal("(")
            vars_here: list[str] = []
            positions: list[tuple[int, int]] = []
            while True:
                nxt = p.peek()
                if nxt is None or nxt[0] == ")":
                    break
                wname, wln, wcol = p.name("variable name")
                if wname not in domains:
                    raise ParseError(f"undeclared variable {wname!r}", wln, wcol)
                if wname in vars_here:
                    raise ParseError(
                        f"variable {wname!r} repeated in scheme", wln, wcol
                    )
                vars_here.append(wname)
                positions.append((wln, wcol))
            close = p.literal(")")
            if not vars_here:
                raise ParseError("constraint scheme is empty", close[1], close[2])
            p.literal("{")
            tuples = []
            while True:
                nxt = p.peek()
                if nxt is None or nxt[0] == "}":
                    break
                _, oln, ocol = p.literal("(")
                values = []
                while True:
                    nxt = p.peek()
                    if nxt is None or nxt[0] == ")":
                        break
                    val, iln, icol = p.integer("integer value")
                    at = len(values)
                    if at < len(vars_here) and val not in domains[vars_here[at]]:
                        raise ParseError(
                            f"value {val} not in the domain of {vars_here[at]!r}",
                            iln,
                            icol,
                        )
                    values.append(val)
                p.literal(")")
                if len(values) != len(vars_here):
                    raise ParseError(
                        f"tuple has {len(values)} values for {len(vars_here)} variables",
                        oln,
                        ocol,
                    )
                tuples.append(tuple(values))
            p.literal("}")
            indices = tuple(order.index(v) for v in vars_here)
            constraints.append(Constraint.on(indices, tuples, cname))
        else:
            raise ParseError(f"'var' or 'con' expected, got {tok!r}", ln, col)
    return Csp(
        variables=tuple(order),
        domains=tuple(domains[v] for v in order),
        constraints=tuple(constraints),
    )


def render_csp(csp: Csp, include_constraints: bool = False) -> str:
    """Render a Csp back into the input grammar."""
    lines = []
    for vname, dom in zip(csp.variables, csp.domains):
        values = " ".join(str(v) for v in sorted(dom))
        lines.append(f"var {vname} {values}".rstrip())
    if include_constraints:
        for ci, c in enumerate(csp.constraints):
            vars_ = " ".join(csp.variables[i] for i in c.scheme)
            tups = " ".join(
                "(" + " ".join(str(v) for v in t) + ")" for t in c.tuples_sorted
            )
            body = f"{{ {tups} }}" if tups else "{ }"
            lines.append(f"con {csp.constraint_name(ci)} ({vars_}) {body}")
    return "\n".join(lines) + "\n"


WORKLIST = {"hyperarc", "ac3", "path", "pc2"}
DIRECTIONAL = {"darc", "dac", "dpath", "dpc"}
NORMALIZING = {"path", "pc2", "dpath", "dpc", "dac"}
RELATIONAL = {"path", "pc2", "dpath", "dpc"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fixprop",
        description="Constraint propagation over finite domains: worklist and "
        "one-pass local consistency algorithms.",
    )
    ap.add_argument(
        "input",
        nargs="?",
        default="-",
        help="input file in the var/con format; '-' or absent reads stdin",
    )
    ap.add_argument(
        "--algorithm",
        required=True,
        choices=sorted(WORKLIST | DIRECTIONAL),
        help="which reduction to run",
    )
    ap.add_argument(
        "--order",
        help="comma-separated variable order; required for darc, dac, dpath, "
        "dpc, and applied up front for the others",
    )
    ap.add_argument(
        "--policy",
        choices=["full", "idem", "comm", "both"],
        help="re-enqueue filtering for the worklist algorithms: keep everything, "
        "drop the function itself when idempotent, drop commutation partners, "
        "or both (default depends on the algorithm)",
    )
    ap.add_argument(
        "--trace",
        action="store_true",
        help="write one line per applied function to stderr",
    )
    ap.add_argument(
        "--oracle",
        action="store_true",
        help="recompute the result with the brute-force reference and report "
        "MATCH or MISMATCH on stderr; mismatch exits 3",
    )
    ap.add_argument(
        "--step-limit",
        type=int,
        default=DEFAULT_STEP_LIMIT,
        help="abort a worklist run after this many function applications",
    )
    return ap


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _check_oracle(args, result, csp) -> bool:
    """Recompute with the reference route; True on agreement."""
    algo = args.algorithm
    if algo in ("hyperarc", "ac3"):
        expected = oracle.roundrobin_fixpoint(projection_fns(csp), csp.domains)
        return tuple(result.csp.domains) == expected
    if algo in ("path", "pc2"):
        bottoms = tuple(c.tuples for c in csp.constraints)
        expected = oracle.roundrobin_fixpoint(path_fns(csp), bottoms)
        return tuple(c.tuples for c in result.csp.constraints) == expected
    if algo in ("darc", "dac"):
        return oracle.is_dir_arc_consistent(result.csp, result.csp.variables)
    return oracle.is_dir_path_consistent(result.csp, result.csp.variables)


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.step_limit <= 0:
        print("fixprop: --step-limit must be positive", file=sys.stderr)
        return 2

    algo = args.algorithm
    order = None
    if args.order is not None:
        order = [v.strip() for v in args.order.split(",")]
        if any(not v for v in order):
            print("fixprop: --order has an empty variable name", file=sys.stderr)
            return 2
    if algo in DIRECTIONAL and order is None:
        print(f"fixprop: --order is required for {algo}", file=sys.stderr)
        return 2

    try:
        text = _read_input(args.input)
    except OSError as exc:
        print(f"fixprop: {exc}", file=sys.stderr)
        return 2

    try:
        csp = parse_csp(text)
        if order is not None and sorted(order) != sorted(csp.variables):
            raise UnsupportedInputError(
                "--order must list each declared variable exactly once"
            )
        if algo in NORMALIZING:
            csp = normalize(csp)

        worklist_kwargs = {"step_limit": args.step_limit}
        if args.policy is not None:
            worklist_kwargs["policy"] = args.policy

        if order is not None and algo in WORKLIST:
            csp = reorder(csp, order)

        if algo == "hyperarc":
            result = algorithms.hyper_arc(csp, **worklist_kwargs)
        elif algo == "ac3":
            result = algorithms.ac3(csp, **worklist_kwargs)
        elif algo == "path":
            result = algorithms.path(csp, **worklist_kwargs)
        elif algo == "pc2":
            result = algorithms.pc2(csp, **worklist_kwargs)
        elif algo == "darc":
            result = algorithms.darc(csp, order)
        elif algo == "dac":
            result = algorithms.dac(csp, order)
        elif algo == "dpath":
            result = algorithms.dpath(csp, order)
        else:
            result = algorithms.dpc(csp, order)
    except ParseError as exc:
        print(f"fixprop: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedInputError, StructuralError) as exc:
        print(f"fixprop: {exc}", file=sys.stderr)
        return 2
    except (InvariantViolation, StepLimitExceeded, ResourceLimitError) as exc:
        print(f"fixprop: {exc}", file=sys.stderr)
        return 3

    if args.trace:
        for line in result.trace.lines():
            print(line, file=sys.stderr)

    if args.oracle:
        try:
            ok = _check_oracle(args, result, csp)
        except FixpropError as exc:
            print(f"fixprop: oracle: {exc}", file=sys.stderr)
            return 3
        print("oracle: MATCH" if ok else "oracle: MISMATCH", file=sys.stderr)
        if not ok:
            return 3

    sys.stdout.write(render_csp(result.csp, include_constraints=algo in RELATIONAL))
    return 0 if result.consistent_hint else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
