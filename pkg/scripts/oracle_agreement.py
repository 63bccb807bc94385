"""Compare the completion-based decider with the brute-force oracle on random instances."""

import argparse
import itertools
import random
import sys
import time
from dataclasses import dataclass

from permcc.cli import ProblemFile, solve
from permcc.instances import random_small_instance
from permcc.oracle import oracle_universe
from permcc.rewriter import decide_word

THEORIES = (None, "I", "U", "IU", "N", "NU")


@dataclass
class AgreementConfig:
    instances: int = 500
    seed: int = 0
    max_total: int = 30
    max_depth: int = 3
    show: int = 5


def run(cfg: AgreementConfig) -> int:
    rng = random.Random(cfg.seed)
    bad = pairs = biggest = 0
    t0 = time.perf_counter()
    for i in range(cfg.instances):
        theory = THEORIES[i % len(THEORIES)]
        inst = random_small_instance(rng, theory, cfg.max_total, cfg.max_depth)
        cs = solve(ProblemFile(inst.sig, inst.equations, [])).closure
        u = oracle_universe(inst.equations, [], inst.sig)
        biggest = max(biggest, len(u))
        for s, t in itertools.combinations(u.terms, 2):
            pairs += 1
            if u.same(s, t) != decide_word(s, t, cs):
                bad += 1
                if bad <= cfg.show:
                    print(f"DISAGREE theory={theory} P={[str(e) for e in inst.equations]} {s} vs {t}")
    elapsed = time.perf_counter() - t0
    print(f"instances {cfg.instances} pairs {pairs} disagreements {bad} "
          f"largest universe {biggest} time {elapsed:.1f}s")
    return 1 if bad else 0


def main(argv=None) -> int:
    d = AgreementConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", "--instances", type=int, default=d.instances)
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--max-total", type=int, default=d.max_total)
    args = ap.parse_args(argv)
    return run(AgreementConfig(args.instances, args.seed, args.max_total))


if __name__ == "__main__":
    sys.exit(main())
