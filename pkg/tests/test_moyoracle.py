import random

import pytest
from hypothesis import given, settings, strategies as st

from trkr.braid import ResolvedWord, parse_resolved
from trkr.homology import mf_homology
from trkr.moyoracle import (ModuleSeries, NegativeCoefficient, circle_series,
                            empty_braid_series, reduce_series, series_arith, series_module)
from trkr.verify import oracle_check

coeffs = st.dictionaries(st.tuples(st.integers(-3, 0), st.integers(-4, 6)), st.integers(1, 3), max_size=4)
series = st.builds(lambda f0, f1, t0, t1, d: ModuleSeries((f0, f1), (t0, t1), "triple", d),
                   coeffs, coeffs, coeffs, coeffs, st.integers(1, 3))


@given(series)
def test_series_arithmetic(S):
    assert S - S == ModuleSeries.zero()
    assert S.shift(1, -1, 2).shift(1, 1, -2) == S
    assert series_arith("add", S, S) == S.scale(2)
    assert (S + S) - S == S


@given(series)
def test_geometric_expansion(S):
    # 1/(1 - q^2) = sum of q^(2n); the depth-d expansion has binomial coefficients
    one = ModuleSeries(({}, {}), ({(0, 0): 1}, {}), "triple", 1)
    assert one.torsion_coefficients(0, 6) == {(0, 0): 1, (0, 2): 1, (0, 4): 1, (0, 6): 1}
    two = one.deepen(1)
    assert two.torsion_coefficients(0, 6) == {(0, 0): 1, (0, 2): 2, (0, 4): 3, (0, 6): 4}
    assert S.deepen(1).torsion_coefficients(0, 4) == {
        key: v for key, v in S.deepen(1).torsion_coefficients(0, 8).items() if key[1] <= 4}


def test_lowest_terms():
    S = ModuleSeries(({}, {}), ({(0, 0): 1, (0, 2): -1}, {}), "triple", 2)
    assert S.depth == 1 and S.torsion[0] == {(0, 0): 1}


def test_negative_subtraction_raises():
    with pytest.raises(NegativeCoefficient):
        ModuleSeries.zero() - circle_series(2)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_circle_series(N):
    S = circle_series(N)
    assert S.free[1] == {(-1, 1 - N + 2 * l): 1 for l in range(N)}
    assert S.torsion[1] == {(-1, N + 1): 1} and S.depth == 1
    assert circle_series(N, "sln").free[1] == {(0, 1 - N + 2 * l): 1 for l in range(N)}


def test_two_circles_frozen():
    S = empty_braid_series(2, 1)
    assert S.depth == 2
    assert S.free == ({(-2, 0): 1}, {})
    assert S.torsion == ({(-2, 2): 2, (-2, 4): -1}, {(-1, 2): 1})
    assert S.torsion_coefficients(0, 6) == {(-2, 2): 2, (-2, 4): 3, (-2, 6): 4}


@pytest.mark.parametrize("b,N", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)])
def test_empty_braid_matches_direct(b, N):
    kmax = 2 * N + 6
    H = mf_homology(ResolvedWord(b), N, kmax, with_module=True)
    assert H.module.restrict(kmax=kmax) == series_module(empty_braid_series(b, N), kmax)


def test_rewrite_cases():
    S, trace = reduce_series(parse_resolved("b=2; t1"), 2)
    assert [s.case for s in trace.steps][0] == "a"
    S2, trace2 = reduce_series(parse_resolved("b=3; t1 t1"), 2)
    assert "b" in [s.case for s in trace2.steps]


words = st.integers(2, 4).flatmap(lambda b: st.builds(
    ResolvedWord, st.just(b), st.lists(st.integers(1, b - 1), max_size=4)))


@settings(max_examples=25)
@given(words, st.sampled_from([1, 2]))
def test_path_independence_and_bounds(G, N):
    S0, _ = reduce_series(G, N, rng=random.Random(0))
    S1, _ = reduce_series(G, N, rng=random.Random(1))
    assert S0 == S1
    assert S0.is_nonnegative()
    assert S0.tau_support() <= set(range(-G.strands, 0))
    assert not S0.free[(G.strands + 1) % 2]


@pytest.mark.parametrize("word", ["b=2; t1", "b=3; t1 t2", "b=3; t2 t1 t1", "b=2; t1 t1"])
@pytest.mark.parametrize("N", [1, 2])
def test_oracle_matches_direct(word, N):
    v = oracle_check(parse_resolved(word), N, depth=4)
    assert v["passed"], v["failures"]
