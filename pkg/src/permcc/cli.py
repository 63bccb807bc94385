"""Problem files and the `permcc` command line.

Problem file grammar (one declaration per line, `#` starts a comment)::

    sym <name>/<arity>
    perm <name> : <i1> <i2> ... <in>      # f(x1..xn) = f(x_i1..x_in)
    permcycle <name> : (1 2)(3 4)
    theory <g> <I|N|U|IU|NU> [zero=<sym>]
    axiom <term> = <term>
    query <term> = <term>

Terms are written in prefix form, ``f(a,g(b,c))``; constants are bare names.
"""

from __future__ import annotations

import argparse
import random
import re
import statistics
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

from permcc.engine import Caps, EngineState, ResourceCap, input_size, run_fair_mu
from permcc.etheory import PermTheory, decompose
from permcc.instances import bench_instance, random_small_instance
from permcc.oracle import DEFAULT_UNIVERSE_CAP, UniverseTooLarge, oracle_universe
from permcc.permgroup import DEFAULT_GROUP_CAP, GroupTooLarge, PermError, Permutation, from_cycles
from permcc.rewriter import ClosureSystem, decide_word
from permcc.terms import App, Equation, Signature, Term, TermError

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 1, 2


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class ProblemFile:
    sig: Signature = field(default_factory=Signature)
    axioms: list[Equation] = field(default_factory=list)
    queries: list[Equation] = field(default_factory=list)


_NAME = re.compile(r"[^\s(),=:#]+")


class _TermParser:
    def __init__(self, text: str, sig: Signature, line: int, offset: int):
        self.text, self.sig, self.line, self.offset = text, sig, line, offset
        self.i = 0

    def error(self, msg: str, at: int | None = None) -> ParseError:
        return ParseError(msg, self.line, self.offset + (self.i if at is None else at) + 1)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def term(self) -> Term:
        self.skip()
        start = self.i
        m = _NAME.match(self.text, self.i)
        if not m:
            raise self.error("expected a symbol name")
        name = m.group(0)
        self.i = m.end()
        args: list[Term] = []
        self.skip()
        if self.i < len(self.text) and self.text[self.i] == "(":
            self.i += 1
            while True:
                args.append(self.term())
                self.skip()
                if self.i < len(self.text) and self.text[self.i] == ",":
                    self.i += 1
                    continue
                if self.i < len(self.text) and self.text[self.i] == ")":
                    self.i += 1
                    break
                raise self.error("expected ',' or ')'")
        if name not in self.sig:
            raise self.error(f"UnknownSymbol: {name!r}", start)
        sym = self.sig[name]
        if sym.arity != len(args):
            raise self.error(f"ArityMismatch: {name} expects {sym.arity} arguments, got {len(args)}", start)
        return App(sym, args)

    def equation(self) -> Equation:
        lhs = self.term()
        self.skip()
        if self.i >= len(self.text) or self.text[self.i] != "=":
            raise self.error("expected '='")
        self.i += 1
        rhs = self.term()
        self.skip()
        if self.i != len(self.text):
            raise self.error("trailing input")
        return Equation(lhs, rhs)


def parse_term(text: str, sig: Signature) -> Term:
    p = _TermParser(text, sig, 1, 0)
    t = p.term()
    p.skip()
    if p.i != len(text):
        raise p.error("trailing input")
    return t


def parse_problem(text: str) -> ProblemFile:
    prob = ProblemFile()
    sig = prob.sig
    theory_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped)
        kw, _, rest = stripped.partition(" ")
        body_col = indent + len(kw) + 1
        try:
            if kw == "sym":
                m = re.fullmatch(r"\s*([^\s/(),=:#]+)\s*/\s*(\d+)\s*", rest)
                if not m:
                    raise ParseError("expected sym <name>/<arity>", lineno, body_col + 1)
                if m.group(1) in sig:
                    raise ParseError(f"symbol {m.group(1)!r} declared twice", lineno, body_col + 1)
                sig.declare(m.group(1), int(m.group(2)))
            elif kw in ("perm", "permcycle"):
                name, sep, spec = rest.partition(":")
                name = name.strip()
                if not sep or not name:
                    raise ParseError(f"expected {kw} <name> : ...", lineno, body_col + 1)
                if name not in sig:
                    raise ParseError(f"UnknownSymbol: {name!r}", lineno, body_col + 1)
                n = sig[name].arity
                if kw == "perm":
                    try:
                        imgs = tuple(int(x) for x in spec.split())
                    except ValueError:
                        raise ParseError("permutation images must be integers", lineno, body_col + len(name) + 3)
                    if len(imgs) != n:
                        raise ParseError(
                            f"ArityMismatch: {name} has arity {n}, got {len(imgs)} images",
                            lineno, body_col + len(name) + 3,
                        )
                    perm = Permutation(imgs)
                else:
                    cycles = re.findall(r"\(([^()]*)\)", spec)
                    if re.sub(r"\(([^()]*)\)", "", spec).strip():
                        raise ParseError("expected cycles like (1 2)(3 4)", lineno, body_col + len(name) + 3)
                    perm = from_cycles(n, [[int(x) for x in c.split()] for c in cycles])
                sig.add_perm(name, perm)
            elif kw == "theory":
                if theory_seen:
                    raise ParseError("at most one theory declaration", lineno, 1)
                parts = rest.split()
                if len(parts) not in (2, 3):
                    raise ParseError("expected theory <g> <tag> [zero=<sym>]", lineno, body_col + 1)
                zero = None
                if len(parts) == 3:
                    if not parts[2].startswith("zero="):
                        raise ParseError("expected zero=<sym>", lineno, body_col + 1)
                    zero = parts[2][5:]
                sig.set_theory(parts[0], parts[1], zero)
                theory_seen = True
            elif kw in ("axiom", "query"):
                eq = _TermParser(rest, sig, lineno, body_col).equation()
                (prob.axioms if kw == "axiom" else prob.queries).append(eq)
            else:
                raise ParseError(f"unknown declaration {kw!r}", lineno, indent + 1)
        except ParseError:
            raise
        except (TermError, PermError) as e:
            raise ParseError(f"{type(e).__name__}: {e}", lineno, indent + 1) from e
    try:
        sig.check()
    except TermError as e:
        raise ParseError(f"{type(e).__name__}: {e}", 0) from e
    return prob


# ------------------------------------------------------------------ solving


@dataclass
class Solution:
    theory: PermTheory
    state: EngineState
    closure: ClosureSystem

    def answers(self, queries: Sequence[Equation]) -> list[bool]:
        return [decide_word(q.lhs, q.rhs, self.closure) for q in queries]


def solve(prob: ProblemFile, cap_group: int = DEFAULT_GROUP_CAP, caps: Caps | None = None) -> Solution:
    th = decompose(prob.sig, cap_group)
    st = run_fair_mu(prob.axioms, prob.sig, th, caps)
    return Solution(th, st, ClosureSystem.from_state(st))


def format_rules(st: EngineState) -> list[str]:
    d = sorted(st.D.values(), key=lambda r: (r.rhs.index, str(r.lhs)))
    c = sorted(st.c_rules, key=lambda r: r.lhs.index)
    return [str(r) for r in d] + [str(r) for r in c]


def _verdict(b: bool) -> str:
    return "EQUAL" if b else "NOT-EQUAL"


def cmd_solve(args, out) -> int:
    prob = _load(args.file)
    sol = solve(prob, args.cap_group, Caps(max_steps=args.cap_steps))
    if args.trace:
        for ev in sol.state.trace:
            print(ev, file=out)
    if args.dump_rules:
        for line in format_rules(sol.state):
            print(line, file=out)
    for ok in sol.answers(prob.queries):
        print(_verdict(ok), file=out)
    return EXIT_OK


def oracle_answers(prob: ProblemFile, cap: int = DEFAULT_UNIVERSE_CAP) -> list[bool]:
    qterms = [t for q in prob.queries for t in (q.lhs, q.rhs)]
    u = oracle_universe(prob.axioms, qterms, prob.sig, cap)
    return [u.same(q.lhs, q.rhs) for q in prob.queries]


def cross_check_universe(prob: ProblemFile, sol: Solution, cap: int = DEFAULT_UNIVERSE_CAP) -> tuple[int, int]:
    """(agreements, pairs) over every pair of universe terms."""
    qterms = [t for q in prob.queries for t in (q.lhs, q.rhs)]
    u = oracle_universe(prob.axioms, qterms, prob.sig, cap)
    agree = total = 0
    for i, s in enumerate(u.terms):
        for t in u.terms[i + 1:]:
            total += 1
            agree += u.same(s, t) == decide_word(s, t, sol.closure)
    return agree, total


def cmd_oracle(args, out) -> int:
    if args.random:
        rng = random.Random(args.seed)
        agree_inst = 0
        pairs_agree = pairs = 0
        for _ in range(args.random):
            inst = random_small_instance(rng, rng.choice([None, "I", "U", "IU"]))
            prob = ProblemFile(inst.sig, inst.equations, [])
            a, n = cross_check_universe(prob, solve(prob), args.cap_universe)
            pairs_agree += a
            pairs += n
            agree_inst += a == n
        rate = pairs_agree / pairs if pairs else 1.0
        print(f"instances AGREE {agree_inst}/{args.random}", file=out)
        print(f"pairs AGREE {pairs_agree}/{pairs} rate {rate:.4f}", file=out)
        return EXIT_OK
    if args.file is None:
        raise SystemExit("oracle: FILE or --random is required")
    prob = _load(args.file)
    answers = oracle_answers(prob, args.cap_universe)
    if args.cross_check:
        mine = solve(prob, args.cap_group).answers(prob.queries)
        for a, b in zip(answers, mine):
            print("AGREE" if a == b else "DISAGREE", file=out)
    else:
        for ok in answers:
            print(_verdict(ok), file=out)
    return EXIT_OK


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    import math

    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2:
        return float("nan")
    lx, ly = zip(*pts)
    return statistics.linear_regression(lx, ly).slope


def run_bench(sizes: Sequence[int], seed: int, repeats: int = 3) -> list[tuple[int, int, float]]:
    rows = []
    for n in sizes:
        inst = bench_instance(random.Random(f"{seed}:{n}"), n)
        th = decompose(inst.sig)
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            st = run_fair_mu(inst.equations, inst.sig, th)
            best = min(best, time.perf_counter() - t0)
        rows.append((input_size(inst.equations), len(st.trace), best))
    return rows


def cmd_bench(args, out) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    rows = run_bench(sizes, args.seed, args.repeats)
    print(f"{'n':>6} {'trace':>8} {'seconds':>10}", file=out)
    for n, steps, secs in rows:
        print(f"{n:>6} {steps:>8} {secs if args.timing else 0.0:>10.4f}", file=out)
    ns = [r[0] for r in rows]
    print(f"slope trace {loglog_slope(ns, [r[1] for r in rows]):.3f}", file=out)
    if args.timing:
        print(f"slope time {loglog_slope(ns, [r[2] for r in rows]):.3f}", file=out)
    return EXIT_OK


def _load(path: str) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="permcc", description="Congruence closure modulo permutation equations")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def caps(p):
        p.add_argument("--cap-group", type=int, default=DEFAULT_GROUP_CAP, help="max group order")
        p.add_argument("--cap-steps", type=int, default=None, help="max derivation length")

    p = sub.add_parser("solve", help="complete the axioms and answer the queries")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--dump-rules", action="store_true")
    caps(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="answer queries by brute-force closure")
    p.add_argument("file", nargs="?")
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--random", type=int, default=0, metavar="N", help="cross-check N random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-universe", type=int, default=DEFAULT_UNIVERSE_CAP)
    caps(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="derivation length and time against input size")
    p.add_argument("--sizes", default="50,100,200,400,800,1600")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=True,
                   help="report wall time (--no-timing gives byte-stable output)")
    caps(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (GroupTooLarge, ResourceCap, UniverseTooLarge) as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
