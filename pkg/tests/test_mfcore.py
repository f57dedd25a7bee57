import pytest
from hypothesis import given, settings, strategies as st

from trkr.braid import BraidWord
from trkr.exactalg import Ring
from trkr.mfcore import (KoszulRow, MFError, MOYGraph, Piece, _difference, _dh_plus_hd,
                         arc_row, braid_complex, chi_pair, circle_graph, identity_morphism,
                         koszul, local_graphs, moy_mf, shift, tensor_mf, unit_mf, wide_rows)


def _ring():
    return Ring.with_x(("x1", "x2", "y1", "y2"))


def _potential(ring, N, outs, ins):
    a = ring.var("a")
    w = ring.zero()
    for v in outs:
        w = w + ring.var(v) ** (N + 1)
    for v in ins:
        w = w - ring.var(v) ** (N + 1)
    return a * w


@pytest.mark.parametrize("N", [1, 2, 3])
def test_arc_and_wide_rows(N):
    R = _ring()
    arc = koszul([arc_row(R, N, "x1", "y1")], R, N)
    assert arc.check_d_squared()
    assert not arc.homogeneity_violations()
    assert arc.w == _potential(R, N, ["y1"], ["x1"])
    wide = koszul(wide_rows(R, N, "x1", "x2", "y1", "y2"), R, N)
    assert wide.check_d_squared()
    assert not wide.homogeneity_violations()
    assert wide.w == _potential(R, N, ["y1", "y2"], ["x1", "x2"])


def test_koszul_row_degree_check():
    R = _ring()
    x = R.var("x1")
    with pytest.raises(MFError):
        KoszulRow.make(x, x, 2)


@pytest.mark.parametrize("N", [1, 2])
def test_tensor_and_shift(N):
    R = _ring()
    A = koszul([arc_row(R, N, "x1", "y1")], R, N)
    B = koszul([arc_row(R, N, "x2", "y2")], R, N)
    T = tensor_mf(A, B)
    assert T.check_d_squared()
    assert T.w == A.w + B.w
    assert len(T.gens) == 4
    assert tensor_mf(unit_mf(R, N), A).gens == A.gens
    S = shift(A, 1, 2, -3)
    assert S.check_d_squared()
    assert [(e, a, x) for e, a, x in S.gens] == [((e + 1) % 2, a + 2, x - 3) for e, a, x in A.gens]


@pytest.mark.parametrize("N", [1, 2])
def test_closed_graphs_have_zero_potential(N):
    C = moy_mf(circle_graph(), N)
    assert not C.w and C.check_d_squared()
    g = MOYGraph(("x1", "x2"), (Piece("wide", ("x1", "x2", "x1", "x2")),))
    M = moy_mf(g, N)
    assert not M.w and M.check_d_squared()
    assert M.base == (0, 0, -1)


def test_moy_graph_validation():
    with pytest.raises(MFError):
        MOYGraph(("x1", "x1"), ())
    with pytest.raises(MFError):
        MOYGraph(("x1",), (Piece("arc", ("x1", "x2")),))
    with pytest.raises(MFError):
        MOYGraph(("x1", "x2"), (Piece("arc", ("x1", "x2")), Piece("arc", ("x1", "x2"))))
    g0, g1 = local_graphs()
    assert g0.endpoints() == g1.endpoints()


@pytest.mark.parametrize("N", [1, 2, 3])
def test_chi_contract(N):
    chi = chi_pair(N)
    assert len(chi.hom01.modulo_homotopy) == 1
    assert len(chi.hom10.modulo_homotopy) == 1
    assert chi.chi0.is_chain_map() and chi.chi1.is_chain_map()
    x21 = chi.gamma0.ring.var("x2") - chi.gamma0.ring.var("x1")
    for M, first, second, h in ((chi.gamma0, chi.chi0, chi.chi1, chi.homotopy0),
                                (chi.gamma1, chi.chi1, chi.chi0, chi.homotopy1)):
        want = _difference(first.compose(second), identity_morphism(M, x21))
        got = _dh_plus_hd(h)
        assert got.entries == want.entries


small_braids = st.integers(2, 3).flatmap(lambda b: st.builds(
    BraidWord, st.just(b),
    st.lists(st.integers(1, b - 1).flatmap(lambda x: st.sampled_from([x, -x])), max_size=3)))


@settings(max_examples=12)
@given(small_braids, st.sampled_from([1, 2]))
def test_cube_invariants(B, N):
    C = braid_complex(B, N)
    assert C.check_edges_commute()
    assert C.check_d_chi_squared()
    assert not C.check_homogeneity()
    for v in range(len(C.vertices)):
        M = C.vertex_mf(v)
        assert M.check_d_squared()
        assert not M.w
