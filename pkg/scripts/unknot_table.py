"""Homology of the transverse unknots U_m next to their closed form.

    python scripts/unknot_table.py --max-m 2 --N 1 2
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from trkr.report import module_lines
from trkr.verify import audit_report, unknot_check


@dataclass
class Config:
    max_m: int = 2
    Ns: tuple[int, ...] = (1, 2)
    extra_k: int = 5  # kmax = 2N + 2m + extra_k


def run(cfg: Config) -> bool:
    ok = True
    for N in cfg.Ns:
        for m in range(cfg.max_m + 1):
            kmax = 2 * N + 2 * m + cfg.extra_k
            t = time.perf_counter()
            verdict, R = unknot_check(m, N, kmax)
            audits = audit_report(R)
            dt = time.perf_counter() - t
            passed = verdict["passed"] and all(a["passed"] for a in audits.values())
            ok &= passed
            print(f"U_{m}  N={N}  sl={R.sl}  k<={kmax}  {'PASS' if passed else 'FAIL'}  {dt:.1f}s")
            for line in module_lines(R.module, kmax):
                print("    " + line)
    return ok


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-m", type=int, default=Config.max_m)
    p.add_argument("--N", type=int, nargs="+", default=list(Config.Ns))
    p.add_argument("--extra-k", type=int, default=Config.extra_k)
    a = p.parse_args()
    raise SystemExit(0 if run(Config(a.max_m, tuple(a.N), a.extra_k)) else 2)


if __name__ == "__main__":
    main()
