"""Compare the MOY rewrite oracle with direct d_mf homology on every closed
resolved braid up to a given weight and strand count.

    python scripts/oracle_sweep.py --max-weight 6 --max-strands 4 --N 1 2
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from trkr.braid import enumerate_resolved
from trkr.verify import oracle_check


@dataclass
class Config:
    max_weight: int = 6
    max_strands: int = 4
    Ns: tuple[int, ...] = (1, 2)
    depth: int = 6
    slow: float = 5.0  # report words slower than this many seconds


def run(cfg: Config) -> int:
    failures = []
    count = 0
    start = time.perf_counter()
    for G in enumerate_resolved(cfg.max_weight, cfg.max_strands):
        for N in cfg.Ns:
            t = time.perf_counter()
            v = oracle_check(G, N, depth=cfg.depth)
            dt = time.perf_counter() - t
            count += 1
            failures += v["failures"]
            if not v["passed"] or dt > cfg.slow:
                print(f"{G}  N={N}  {'ok' if v['passed'] else 'MISMATCH'}  {dt:.1f}s", flush=True)
    total = time.perf_counter() - start
    print(f"{count} (word, N) pairs, {len(failures)} mismatches, {total:.0f}s")
    for f in failures[:20]:
        print("  " + f)
    return len(failures)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-weight", type=int, default=Config.max_weight)
    p.add_argument("--max-strands", type=int, default=Config.max_strands)
    p.add_argument("--N", type=int, nargs="+", default=list(Config.Ns))
    p.add_argument("--depth", type=int, default=Config.depth)
    a = p.parse_args()
    raise SystemExit(2 if run(Config(a.max_weight, a.max_strands, tuple(a.N), a.depth)) else 0)


if __name__ == "__main__":
    main()
