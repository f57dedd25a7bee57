"""Negative stabilization: homology of B and B sigma_b^-1 side by side, with the
stabilization-sequence and cone checks.

    python scripts/stabilization_demo.py --braid "b=1;" --N 1
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from trkr.braid import parse_braid, transverse_move
from trkr.homology import total_homology
from trkr.report import module_lines
from trkr.verify import cone_pi0_check, stab_check


@dataclass
class Config:
    braid: str = "b=1;"
    N: int = 1
    kmax: int | None = None


def run(cfg: Config) -> bool:
    B = parse_braid(cfg.braid)
    Bm = transverse_move(B, "stab_neg")
    kmax = cfg.kmax if cfg.kmax is not None else 2 * cfg.N + 2 * Bm.crossings + 5
    for X in (B, Bm):
        R = total_homology(X, cfg.N, kmax, with_sln=False)
        print(f"{X}  sl={R.sl}")
        for line in module_lines(R.module, kmax):
            print("    " + line)
    s = stab_check(B, cfg.N, kmax)
    c = cone_pi0_check(B, cfg.N, kmax)
    print(f"stabilization sequences: {'PASS' if s['passed'] else 'FAIL'} ({s['checked']} identities)")
    print(f"cone identity: {'PASS' if c['passed'] else 'FAIL'} ({c['compared']} cells)")
    for f in (s["failures"] + c["failures"])[:20]:
        print("  " + f)
    return s["passed"] and c["passed"]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--braid", default=Config.braid)
    p.add_argument("--N", type=int, default=Config.N)
    p.add_argument("--kmax", type=int, default=None)
    a = p.parse_args()
    raise SystemExit(0 if run(Config(a.braid, a.N, a.kmax)) else 2)


if __name__ == "__main__":
    main()
