import random

import pytest
from hypothesis import given, strategies as st

from trkr.braid import (BraidError, BraidWord, ResolvedWord, cube, enumerate_resolved,
                        induction_case, parse_braid, parse_resolved, replay, resolve,
                        self_linking, transverse_move, unknot_presentation)


def test_parse_and_print_roundtrip():
    B = parse_braid("b=3; 1 -2")
    assert B == BraidWord(3, (1, -2))
    assert str(B) == "b=3; 1 -2"
    assert parse_braid("b=1;") == BraidWord(1)
    assert str(parse_resolved("b=3; t1 t2")) == "b=3; t1 t2"


@pytest.mark.parametrize("text", ["b=2; 3", "b=2; 0", "3; 1", "b=2; x", "b=0;"])
def test_parse_errors(text):
    with pytest.raises(BraidError):
        parse_braid(text)


def test_self_linking():
    assert self_linking(parse_braid("b=1;")) == -1
    assert self_linking(parse_braid("b=2; 1")) == -1
    assert self_linking(parse_braid("b=2; -1")) == -3
    for m in range(4):
        assert self_linking(unknot_presentation(m)) == -1 - 2 * m


def test_moves():
    B = parse_braid("b=2; 1")
    assert transverse_move(B, "stab_pos") == parse_braid("b=3; 1 2")
    assert transverse_move(B, "stab_neg") == parse_braid("b=3; 1 -2")
    assert transverse_move(B, "destab_pos") == parse_braid("b=1;")
    assert transverse_move(B, "conjugate", 1) == parse_braid("b=2; -1 1 1")
    assert transverse_move(parse_braid("b=3; 1 2 1"), "braid_relation", 0) == parse_braid("b=3; 2 1 2")
    assert transverse_move(parse_braid("b=4; 1 3"), "braid_relation", 0) == parse_braid("b=4; 3 1")
    assert transverse_move(parse_braid("b=2; 1 -1"), "braid_relation", 0) == parse_braid("b=2;")
    with pytest.raises(BraidError):
        transverse_move(parse_braid("b=2; -1"), "destab_pos")
    with pytest.raises(BraidError):
        transverse_move(B, "twist")


braids = st.integers(1, 4).flatmap(lambda b: st.builds(
    BraidWord, st.just(b),
    st.lists(st.integers(1, b - 1).flatmap(lambda x: st.sampled_from([x, -x])), max_size=4)
    if b > 1 else st.just(())))


@given(braids)
def test_transverse_moves_preserve_sl(B):
    s = self_linking(B)
    assert self_linking(transverse_move(B, "stab_pos")) == s
    assert self_linking(transverse_move(B, "stab_neg")) == s - 2
    if B.strands > 1:
        assert self_linking(transverse_move(B, "conjugate", 1)) == s


def test_resolve_counts():
    B = parse_braid("b=3; 1 -2 1")
    G, mp, mn = resolve(B, (1, 1, 0))
    assert G == ResolvedWord(3, (1, 2))
    assert (mp, mn) == (1, 1)


def test_cube_gradings():
    B = parse_braid("b=2; -1")
    v0, v1 = cube(B, 2)
    assert v0.degree == 0 and v1.degree == 1
    assert (v1.a_shift, v1.x_shift) == (-1, -1 - 1)
    assert len(cube(parse_braid("b=3; 1 2 -1"))) == 8


resolved = st.integers(2, 5).flatmap(lambda b: st.builds(
    ResolvedWord, st.just(b), st.lists(st.integers(1, b - 1), min_size=1, max_size=7)))


@given(resolved, st.integers(0, 10 ** 6))
def test_induction_case_is_legal(G, seed):
    rng = random.Random(seed)
    case = induction_case(G, rng)
    # the trace only uses legal commutations and rotations
    assert replay(G.letters, case.trace) == case.word
    assert sorted(case.word) == sorted(G.letters)
    tail = case.word[len(case.prefix):]
    i = case.index
    expected = {"A": (i,), "B": (i, i), "C": (i, i - 1, i)}[case.kind]
    assert tail == expected
    if case.kind == "A":
        assert all(x < i for x in case.prefix)


def test_induction_case_examples():
    assert induction_case(ResolvedWord(3, ())).kind == "empty"
    assert induction_case(ResolvedWord(2, (1,))).kind == "A"
    assert induction_case(ResolvedWord(2, (1, 1))).kind == "B"
    c = induction_case(ResolvedWord(3, (2, 1, 2)))
    assert c.kind == "C" and c.index == 2
    # t2 t1 t1 t2 needs the inner pair first
    c = induction_case(ResolvedWord(3, (2, 1, 1, 2)))
    assert c.kind in ("B", "C")


def test_replay_rejects_illegal_swap():
    with pytest.raises(BraidError):
        replay((1, 2), (("swap", 0),))


def test_enumerate_resolved():
    words = list(enumerate_resolved(2, 3))
    assert [str(w) for w in words] == ["b=1;", "b=2;", "b=2; t1", "b=2; t1 t1", "b=3;",
                                       "b=3; t1", "b=3; t2", "b=3; t1 t1"]
    assert len(list(enumerate_resolved(6, 4))) == 50
