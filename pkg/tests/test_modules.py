import json

from hypothesis import given, strategies as st

from trkr.homology import DegreeWindow
from trkr.modules import GradedQaModule, module_structure

WINDOW = DegreeWindow(-4, 8, 0, 4)


def _presentation(M: GradedQaModule, window: DegreeWindow) -> dict:
    """Graded dimensions and a-maps of M inside the window, one basis vector per
    nonzero a^t g of each summand generator g."""
    data = {}
    for (e, i) in M.components():
        summands = []
        for (j, k), m in M.free.get((e, i), {}).items():
            summands += [(j, k, None)] * m
        for (l, j, k), m in M.torsion.get((e, i), {}).items():
            summands += [(j, k, l)] * m
        for k in {s[1] for s in summands}:
            index: dict[int, dict] = {}
            for n, (j, kk, l) in enumerate(summands):
                if kk != k:
                    continue
                t = 0
                while j + 2 * t <= window.jmax and (l is None or t < l):
                    jj = j + 2 * t
                    index.setdefault(jj, {})[(n, t)] = len(index.get(jj, {}))
                    t += 1
            dims = {j: len(b) for j, b in index.items()}
            amaps = {}
            for j, basis in index.items():
                cols = [None] * len(basis)
                for (n, t), c in basis.items():
                    up = index.get(j + 2, {}).get((n, t + 1))
                    cols[c] = {} if up is None else {up: 1}
                amaps[j] = cols
            data[(e, i, k)] = (dims, amaps)
    return data


def test_simple_decomposition():
    M = GradedQaModule()
    M.add_free(0, 0, -2, 0)
    M.add_torsion(0, 0, 1, -2, 2, 2)
    M.add_torsion(1, 1, 2, -4, 0)
    M.add_free(1, 1, -4, 0)
    got = module_structure(_presentation(M, WINDOW), WINDOW)
    assert got == M


generators = st.lists(st.tuples(st.integers(0, 1), st.integers(-1, 1), st.integers(-4, 0),
                                st.sampled_from([0, 2, 4]), st.sampled_from([None, 1, 2, 3]),
                                st.integers(1, 2)), max_size=6)


@given(generators)
def test_decomposition_roundtrip(gens):
    M = GradedQaModule()
    for e, i, j, k, l, m in gens:
        if l is None:
            M.add_free(e, i, j, k, m)
        else:
            M.add_torsion(e, i, l, j, k, m)
    assert module_structure(_presentation(M, WINDOW), WINDOW) == M


@given(generators)
def test_json_roundtrip(gens):
    M = GradedQaModule()
    for e, i, j, k, l, m in gens:
        if l is None:
            M.add_free(e, i, j, k, m)
        else:
            M.add_torsion(e, i, l, j, k, m)
    text = json.dumps(M.to_json())
    assert GradedQaModule.from_json(json.loads(text)) == M


def test_dims_and_restrict():
    M = GradedQaModule()
    M.add_free(0, 0, -2, 0)
    M.add_torsion(0, 0, 2, -2, 4)
    assert M.dims(-2, 2, 0, 4) == {(0, 0, -2, 0): 1, (0, 0, 0, 0): 1, (0, 0, 2, 0): 1,
                                  (0, 0, -2, 4): 1, (0, 0, 0, 4): 1}
    assert M.restrict(kmax=2).dims(-2, 2, 0, 4) == {(0, 0, -2, 0): 1, (0, 0, 0, 0): 1, (0, 0, 2, 0): 1}
    assert GradedQaModule().is_zero()


def test_torsion_at_window_top_reads_as_free():
    # a chain whose death is not visible inside the window is reported free
    data = {(0, 0, 0): ({0: 1, 2: 1, 4: 1}, {0: [{0: 1}], 2: [{}], 4: [{}]})}
    window = DegreeWindow(0, 4, 0, 0)
    M = module_structure(data, window)
    assert M.dims(0, 4, 0, 0) == {(0, 0, 0, 0): 1, (0, 0, 2, 0): 1, (0, 0, 4, 0): 1}
    assert M.torsion[(0, 0)][(2, 0, 0)] == 1
    assert M.free[(0, 0)][(4, 0)] == 1
