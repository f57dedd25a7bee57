"""Acceptance criteria 1-10; each test prints one PASS/FAIL line."""

import itertools
from functools import lru_cache

import pytest

from trkr.braid import BraidWord, ResolvedWord, enumerate_resolved, parse_braid, unknot_presentation
from trkr.homology import mf_homology, total_homology
from trkr.mfcore import _difference, _dh_plus_hd, braid_complex, chi_pair, identity_morphism
from trkr.moyoracle import empty_braid_series, series_module
from trkr.verify import (audit_report, cone_pi0_check, oracle_check, parity_vanishing, stab_check,
                         unknot_expected)


@lru_cache(maxsize=None)
def report(braid: str, N: int, kmax: int):
    return total_homology(parse_braid(braid), N, kmax)


def module(braid: str, N: int, kmax: int):
    return report(braid, N, kmax).module.restrict(kmax=kmax)


UNKNOT_CASES = [(m, N) for N in (1, 2) for m in (0, 1, 2)] + [(3, 1)]

INVARIANCE_PAIRS = [
    ("b=1;", "b=2; 1", "positive stabilization"),
    ("b=2; 1", "b=3; 1 2", "positive stabilization"),
    ("b=2; 1 1", "b=3; 1 1 2", "positive stabilization"),
    ("b=3; 1 2 1", "b=3; 2 1 2", "braid relation"),
    ("b=2; 1 -1", "b=2;", "braid relation"),
    ("b=3; 1", "b=3; -2 1 2", "conjugation"),
    ("b=3; -1 2", "b=3; 2 -1", "conjugation"),
]


def invariance_kmax(N: int) -> int:
    return 2 * N + 7


def test_criterion_1_unknot_golden_data(acceptance):
    fails = []
    for m, N in UNKNOT_CASES:
        kmax = 2 * N + 2 * m + 5
        got = module(str(unknot_presentation(m)), N, kmax)
        if got != unknot_expected(m, N, kmax):
            fails.append((m, N))
    acceptance(1, not fails, f"{len(UNKNOT_CASES)} unknot cases, mismatches {fails}")
    assert not fails


def test_criterion_2_empty_braids(acceptance):
    fails = []
    for b in (1, 2, 3):
        for N in (1, 2):
            kmax = 2 * N + 8
            H = mf_homology(ResolvedWord(b), N, kmax, with_module=True)
            if H.module.restrict(kmax=kmax) != series_module(empty_braid_series(b, N), kmax):
                fails.append((b, N))
    acceptance(2, not fails, f"b<=3, N<=2, mismatches {fails}")
    assert not fails


@pytest.mark.slow
def test_criterion_3_oracle_sweep(acceptance):
    fails = []
    count = 0
    for G in enumerate_resolved(6, 4):
        for N in (1, 2):
            fails += oracle_check(G, N)["failures"]
            count += 1
    acceptance(3, not fails, f"{count} (word, N) pairs, {len(fails)} mismatches")
    assert not fails, fails[:5]


def test_criterion_4_invariance(acceptance):
    fails = []
    for a, b, move in INVARIANCE_PAIRS:
        for N in (1, 2):
            kmax = invariance_kmax(N)
            if module(a, N, kmax) != module(b, N, kmax):
                fails.append((a, b, move, N))
    acceptance(4, not fails, f"{len(INVARIANCE_PAIRS)} pairs at N=1,2, failures {fails}")
    assert not fails


def test_criterion_5_negative_stabilization(acceptance):
    differ = []
    for N in (1, 2):
        kmax = 2 * N + 7
        differ.append(module("b=1;", N, kmax) != module(str(unknot_presentation(1)), N, kmax))
    acceptance(5, all(differ), f"U1 != U0 at N=1,2: {differ}")
    assert all(differ)


def test_criterion_6_structure_audit(acceptance):
    cases = [(str(unknot_presentation(m)), N, 2 * N + 2 * m + 5) for m, N in UNKNOT_CASES]
    cases += [(x, N, invariance_kmax(N)) for a, b, _ in INVARIANCE_PAIRS for x in (a, b) for N in (1, 2)]
    fails = []
    for braid, N, kmax in dict.fromkeys(cases):
        audits = audit_report(report(braid, N, kmax), parity=False)
        if not audits["structure_theorem"]["passed"]:
            fails.append((braid, N, audits["structure_theorem"]["failures"][:2]))
    acceptance(6, not fails, f"{len(dict.fromkeys(cases))} reports audited, failures {fails}")
    assert not fails


def test_criterion_7_stabilization_sequences(acceptance):
    fails = []
    for braid in ("b=1;", str(unknot_presentation(1)), "b=2; 1"):
        for N in (1, 2):
            v = stab_check(parse_braid(braid), N)
            if not v["passed"]:
                fails.append((braid, N, v["failures"][:2]))
    acceptance(7, not fails, f"U0, U1, b=2;1 at N=1,2, failures {fails}")
    assert not fails


def test_criterion_8_cone_identity(acceptance):
    fails = []
    for braid, N in (("b=1;", 1), ("b=1;", 2), ("b=2; 1", 1)):
        v = cone_pi0_check(parse_braid(braid), N)
        if not v["passed"]:
            fails.append((braid, N, v["failures"][:2]))
    acceptance(8, not fails, f"3 cases, failures {fails}")
    assert not fails


def test_criterion_9_chi_contract(acceptance):
    fails = []
    for N in (1, 2, 3):
        chi = chi_pair(N)
        if len(chi.hom01.modulo_homotopy) != 1 or len(chi.hom10.modulo_homotopy) != 1:
            fails.append((N, "dimension"))
        x21 = chi.gamma0.ring.var("x2") - chi.gamma0.ring.var("x1")
        for M, f, g, h in ((chi.gamma0, chi.chi0, chi.chi1, chi.homotopy0),
                           (chi.gamma1, chi.chi1, chi.chi0, chi.homotopy1)):
            if _dh_plus_hd(h).entries != _difference(f.compose(g), identity_morphism(M, x21)).entries:
                fails.append((N, "homotopy"))
    acceptance(9, not fails, f"N=1,2,3, failures {fails}")
    assert not fails


def _all_braids(max_strands: int, max_crossings: int):
    for b in range(1, max_strands + 1):
        gens = [x for i in range(1, b) for x in (i, -i)]
        for c in range(max_crossings + 1):
            for w in itertools.product(gens, repeat=c):
                yield BraidWord(b, w)


def test_criterion_10_invariant_suite(acceptance):
    fails = []
    count = 0
    for B in _all_braids(3, 3):
        for N in (1, 2):
            count += 1
            C = braid_complex(B, N)
            checks = {
                "d^2=w": all(C.vertex_mf(v).check_d_squared() for v in range(len(C.vertices))),
                "homogeneity": not C.check_homogeneity(),
                "edges": C.check_edges_commute(),
                "d_chi^2": C.check_d_chi_squared(),
                "parity": parity_vanishing(B, N)["passed"],
            }
            fails += [(str(B), N, name) for name, ok in checks.items() if not ok]
    acceptance(10, not fails, f"{count} (braid, N) pairs, failures {fails[:5]}")
    assert not fails
