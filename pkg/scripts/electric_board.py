"""Solve the electric board fault-state problem and print the closure."""

import sys
import time
from pathlib import Path

from permcc.cli import format_rules, parse_problem, solve

PROB = Path(__file__).resolve().parent.parent / "problems" / "electric_board.prob"


def main() -> int:
    prob = parse_problem(PROB.read_text(encoding="utf-8"))
    t0 = time.perf_counter()
    sol = solve(prob)
    answers = sol.answers(prob.queries)
    elapsed = time.perf_counter() - t0
    st = sol.state
    print(f"group order {len(sol.theory.groups['f'].elements)}")
    print(f"constants {len(st.K)}  D-rules {len(st.d_rules)}  C-rules {len(st.c_rules)}  "
          f"derivation {len(st.trace)} steps  {elapsed * 1000:.1f} ms")
    for line in format_rules(st):
        print("  " + line)
    for q, ok in zip(prob.queries, answers):
        print(f"{q.lhs} = {q.rhs}: {'fault state' if ok else 'not a fault state'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
