"""Seeded survey: on each named algebra, draw random small-integer bivectors
and compare the CYBE verdict with the graph-subalgebra test."""

import argparse
import random
from dataclasses import dataclass

from affine_cybe import fixtures as fx
from affine_cybe.rmatrix import graph_check, random_bivector, schouten_rr


@dataclass(frozen=True)
class SurveyConfig:
    algebras: tuple = ("aff1", "h3", "sl2", "n4", "aff1x2")
    samples: int = 200
    seed: int = 0


def survey(cfg: SurveyConfig) -> list[tuple[str, int, int, int]]:
    rows = []
    for name in cfg.algebras:
        L = fx.algebra(name)
        rng = random.Random(f"{cfg.seed}-{name}")
        solutions = mismatches = 0
        for _ in range(cfg.samples):
            r = random_bivector(L.dim, rng)
            cybe = schouten_rr(L, r).cybe_ok
            solutions += cybe
            mismatches += graph_check(L, r).subalgebra != cybe
        rows.append((name, cfg.samples, solutions, mismatches))
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=SurveyConfig.samples)
    p.add_argument("--seed", type=int, default=SurveyConfig.seed)
    p.add_argument("--algebras", nargs="+", default=list(SurveyConfig.algebras))
    a = p.parse_args(argv)
    rows = survey(SurveyConfig(tuple(a.algebras), a.samples, a.seed))
    print(f"{'algebra':10s} {'samples':>8s} {'cybe':>6s} {'mismatch':>9s}")
    for name, n, sol, bad in rows:
        print(f"{name:10s} {n:8d} {sol:6d} {bad:9d}")
    return 1 if any(r[3] for r in rows) else 0


if __name__ == "__main__":
    raise SystemExit(main())
