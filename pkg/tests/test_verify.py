import pytest

from trkr import verify
from trkr.braid import parse_braid, parse_resolved
from trkr.verify import cone_pi0_check, oracle_check, parity_vanishing, stab_check, unknot_check


@pytest.mark.parametrize("braid,N", [("b=1;", 1), ("b=1;", 2), ("b=2; 1", 1)])
def test_stab_sequences(braid, N):
    v = stab_check(parse_braid(braid), N)
    assert v["passed"], v["failures"][:5]
    assert v["checked"] > 0


@pytest.mark.parametrize("braid,N", [("b=1;", 1), ("b=1;", 2), ("b=2; 1", 1)])
def test_cone_identity(braid, N):
    v = cone_pi0_check(parse_braid(braid), N)
    assert v["passed"], v["failures"][:5]
    assert v["compared"] > 0


def test_stab_check_detects_mutation(monkeypatch):
    real = verify._braid_dims

    def bumped(B, N, window):
        dims = dict(real(B, N, window))
        key = max(dims)
        dims[key] += 1
        return dims

    monkeypatch.setattr(verify, "_braid_dims", bumped)
    assert not stab_check(parse_braid("b=1;"), 1)["passed"]


def test_cone_check_needs_the_quotient_map(monkeypatch):
    # with pi0 replaced by zero the cone is a direct sum and must disagree
    monkeypatch.setattr(verify._ConeComplex, "pi0",
                        lambda self, v, cell: [{} for _ in self.HC.cells[v].homology(cell).reps])
    assert not cone_pi0_check(parse_braid("b=1;"), 1)["passed"]


def test_oracle_check_detects_mutation(monkeypatch):
    real = verify.reduce_series

    def shifted(G, N, variant="triple", rng=None):
        S, trace = real(G, N, variant, rng)
        return S.shift(0, 0, 2), trace

    monkeypatch.setattr(verify, "reduce_series", shifted)
    assert not oracle_check(parse_resolved("b=2; t1"), 1)["passed"]


def test_parity_and_unknot():
    assert parity_vanishing(parse_braid("b=2; 1 -1"), 2, 9)["passed"]
    v, _ = unknot_check(1, 2)
    assert v["passed"], v["failures"]
