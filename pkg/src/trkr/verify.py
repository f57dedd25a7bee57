"""Audits of computed homology against the structural theorems.

Every check returns a plain ``dict`` with a boolean ``passed`` and a list of
``failures`` (human-readable strings), so the CLI can print it and the tests
can assert on it.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .braid import (BraidWord, ResolvedWord, resolve, self_linking, transverse_move,
                    unknot_presentation)
from .homology import (BraidHomology, DegreeWindow, HomologyReport, ModelCells, braid_window,
                       default_window, mf_homology, sln_homology, total_homology)
from .mfcore import braid_complex, resolved_model
from .modules import GradedQaModule
from .exactalg import Echelon
from .moyoracle import reduce_series, total_dims


def _verdict(failures: list[str], **extra) -> dict:
    return {"passed": not failures, "failures": failures, **extra}


# ---------------------------------------------------------------------------
# structure theorem
# ---------------------------------------------------------------------------


def verify_structure_theorem(report: HomologyReport) -> dict:
    """Free shifts, free rank, torsion lengths and torsion shift bounds."""
    B, N, M = report.braid, report.N, report.module
    sl = self_linking(B)
    cp, cn = B.c_pos, B.c_neg
    fails = []
    l_counts: dict[str, int] = {}
    free_rank: Counter = Counter()
    for (e, i), c in M.free.items():
        for (j, k), m in c.items():
            if not m:
                continue
            free_rank[(e, i, k)] += m
            if j not in (sl, sl + 2):
                fails.append(f"free shift {j} at eps={e} i={i} k={k} not in {{{sl},{sl + 2}}}")
            if j == sl:
                l_counts[f"{e},{i},{k}"] = l_counts.get(f"{e},{i},{k}", 0) + m
            if e == (sl - 1) % 2:
                fails.append(f"free summand in the torsion-only degree eps={e} i={i} k={k}")
    for (e, i), c in M.torsion.items():
        for (l, j, k), m in c.items():
            if not m:
                continue
            if l != 1:
                fails.append(f"torsion of length {l} at eps={e} i={i} j={j} k={k}")
            if not sl <= j <= cp - cn - 1:
                fails.append(f"torsion shift {j} outside [{sl},{cp - cn - 1}] at eps={e} i={i} k={k}")
            if (N - 1) * j > k - 2 * N + 2 * cn:
                fails.append(f"torsion shift {j} violates the x-bound at eps={e} i={i} k={k}")
    if report.sln_dims:
        keys = set(free_rank) | {key for key, d in report.sln_dims.items() if d}
        for key in sorted(keys):
            if free_rank.get(key, 0) != report.sln_dims.get(key, 0):
                fails.append(f"free rank {free_rank.get(key, 0)} != sl(N) dim "
                             f"{report.sln_dims.get(key, 0)} at (eps,i,k)={key}")
    return _verdict(fails, l=dict(sorted(l_counts.items())))


# ---------------------------------------------------------------------------
# parity vanishing on resolutions
# ---------------------------------------------------------------------------


def parity_vanishing(B: BraidWord, N: int, kmax: int | None = None) -> dict:
    """d_mf homology of each resolution is pure torsion in Z2-degree b+1."""
    fails = []
    seen = set()
    for bits in _resolutions(len(B.letters)):
        G, _, _ = resolve(B, bits)
        key = (G.strands, min((G.letters[k:] + G.letters[:k] for k in range(len(G.letters))),
                              default=()))
        if key in seen:
            continue
        seen.add(key)
        fails += resolved_parity(ResolvedWord(*key), N, kmax)
    return _verdict(fails, resolutions=len(seen))


def _resolutions(c: int):
    for n in range(1 << c):
        yield tuple(n >> t & 1 for t in range(c))


@lru_cache(maxsize=None)
def resolved_parity(G: ResolvedWord, N: int, kmax: int | None = None) -> list[str]:
    """Free summands in the wrong Z2-degree, read off above the generators.

    Past the largest generator a-shift s, multiplication by a is an
    isomorphism of chain complexes, so no torsion survives there and
    dim H(j=s) + dim H(j=s+1) is the free rank at each k.  The default
    k-range covers every free generator: kmin + 2b(N-1) + 2(#letters).
    """
    model = resolved_model(G, N)
    if not model.gens:
        return []
    cells = ModelCells(model, "free")
    top = max(g[1] for g in model.gens)
    kmin = min(g[2] for g in model.gens)
    if kmax is None:
        kmax = kmin + 2 * G.strands * (N - 1) + 2 * len(G.letters)
    bad = (G.strands + 1) % 2
    out = []
    for k in range(kmin, kmax + 1):
        for j in (top, top + 1):
            d = cells.dim(cells.cell_key(bad, j, k))
            if d:
                out.append(f"{G}: free rank {d} with shift parity {j % 2} at eps={bad} k={k}")
    return out


# ---------------------------------------------------------------------------
# stabilization sequences
# ---------------------------------------------------------------------------


def _union(*ws: DegreeWindow) -> DegreeWindow:
    return DegreeWindow(min(w.jmin for w in ws), max(w.jmax for w in ws),
                        min(w.kmin for w in ws), max(w.kmax for w in ws))


def _braid_dims(B: BraidWord, N: int, window: DegreeWindow) -> dict:
    H = BraidHomology(braid_complex(B, N), window)
    H.precompute()
    return H.all_dims()


def stab_check(B: BraidWord, N: int, kmax: int | None = None) -> dict:
    """Per-(j,k) dimension identities of both stabilization sequences.

    Short sequence (eps = s):
        dim H^{s,i,j,k}(B-) = [j >= s, j = s mod 2] dim H_N^{s,i,k}(B)
                              + dim H^{s-1,i-1,j+1,k+N+1}(B)
    Long sequence (eps = s-1), via its Euler characteristic along i:
        sum_i (-1)^i (X_i - Y_i + Z_i) = 0.
    """
    Bm = transverse_move(B, "stab_neg")
    s = self_linking(B)
    wm = braid_window(Bm, N, kmax)
    wb = braid_window(B, N, wm.kmax + N + 1)
    w = _union(wm, DegreeWindow(wb.jmin - 1, wb.jmax - 1, wm.kmin, wm.kmax))
    wB = DegreeWindow(w.jmin + 1, w.jmax + 1, w.kmin, w.kmax + N + 1)
    dm = _braid_dims(Bm, N, w)
    db = _braid_dims(B, N, wB)
    sln = sln_homology(B, N, wB.kmax)
    degs = sorted({i for (_, i, _, _) in dm} | {i + 1 for (_, i, _, _) in db}
                  | {i + 1 for (_, i, _) in sln})
    if not degs:
        return _verdict([], checked=0)
    irange = range(degs[0] - 1, degs[-1] + 2)

    def H_N(e, i, k):
        return sln.get((e % 2, i, k), 0)

    fails = []
    checked = 0
    for j in w.js():
        for k in w.ks():
            free_here = j >= s and (j - s) % 2 == 0
            for i in irange:
                lhs = dm.get((s % 2, i, j, k), 0)
                rhs = (H_N(s, i, k) if free_here else 0) + db.get(((s - 1) % 2, i - 1, j + 1, k + N + 1), 0)
                checked += 1
                if lhs != rhs:
                    fails.append(f"short sequence at i={i} j={j} k={k}: {lhs} != {rhs}")
            free_prev = j >= s - 1 and (j - s + 1) % 2 == 0
            euler = 0
            for i in irange:
                X = dm.get(((s - 1) % 2, i, j, k), 0)
                Y = db.get((s % 2, i - 1, j + 1, k + N + 1), 0)
                Z = H_N(s, i - 1, k + N + 1) if free_prev else 0
                euler += (-1) ** (i % 2) * (X - Y + Z)
            checked += 1
            if euler:
                fails.append(f"long sequence Euler sum {euler} at j={j} k={k}")
    return _verdict(fails, checked=checked, sl=s, window=w.to_json())


# ---------------------------------------------------------------------------
# cone of the quotient map
# ---------------------------------------------------------------------------


class _ConeComplex:
    """cone(pi0)^i = H(C^i) + H(D^(i-1)) with d = [[d_C, 0], [pi0, -d_D]]."""

    def __init__(self, HC: BraidHomology, HD: BraidHomology):
        self.HC, self.HD = HC, HD
        self._pi: dict = {}

    def pi0(self, v: int, cell) -> list[dict]:
        """Induced a -> 0 map on the d_mf homology of one vertex."""
        key = (v, cell)
        if key not in self._pi:
            cc, cd = self.HC.cells[v], self.HD.cells[v]
            hd = cd.homology(cell)
            cols = []
            for rep in cc.homology(cell).reps:
                polys = cc.to_polys(cell, rep)
                low = {}
                for g, p in polys.items():
                    terms = {e: c for e, c in p.terms.items() if e[0] == 0}
                    if terms:
                        low[g] = type(p)(p.ring, terms)
                cols.append(hd.coords(cd.to_vector(cell, low)) if low else {})
            self._pi[key] = cols
        return self._pi[key]

    def differential(self, i: int, cell):
        HC, HD = self.HC, self.HD
        c_src, n_c = HC.blocks(i, cell)
        d_src, n_d = HD.blocks(i - 1, cell)
        c_tgt, m_c = HC.blocks(i + 1, cell)
        d_tgt, m_d = HD.blocks(i, cell)
        dC = HC.d_chi(i, cell)
        dD = HD.d_chi(i - 1, cell)
        d_off = dict(d_tgt)
        cols = []
        for c in range(n_c):
            col = dict(dC.columns[c])
            cols.append(col)
        for v, off in c_src:
            for c, img in enumerate(self.pi0(v, cell)):
                col = cols[off + c]
                for r, x in img.items():
                    col[m_c + d_off[v] + r] = col.get(m_c + d_off[v] + r, 0) + x
        for c in range(n_d):
            cols.append({m_c + r: -x for r, x in dD.columns[c].items()})
        cols = [{r: x for r, x in col.items() if x} for col in cols]
        return n_c + n_d, m_c + m_d, cols

    def dim(self, i: int, cell) -> int:
        n, _, cols = self.differential(i, cell)
        if not n:
            return 0
        _, _, prev = self.differential(i - 1, cell)
        return n - _rank(cols) - _rank(prev)


def _rank(cols: list[dict]) -> int:
    ech = Echelon()
    for c in cols:
        if c:
            ech.add(c)
    return len(ech)


def cone_pi0_check(B: BraidWord, N: int, kmax: int | None = None) -> dict:
    """Compare cone(pi0){-2,0} with the homology of the negative stabilization.

    The cone lives over C(B) (free) and C(B)/aC(B) (a = 0); its cell (eps, j+2, k)
    is compared with cell (eps, j, k) of B-.
    """
    Bm = transverse_move(B, "stab_neg")
    wm = braid_window(Bm, N, kmax)
    Cf = braid_complex(B, N, "free")
    Cz = braid_complex(B, N, "zero")
    wb = default_window(Cf.models, wm.kmax)
    w = _union(wm, DegreeWindow(wb.jmin - 2, wb.jmax - 2, wm.kmin, wm.kmax))
    dm = _braid_dims(Bm, N, w)
    shifted = DegreeWindow(w.jmin + 2, w.jmax + 2, w.kmin, w.kmax)
    HC, HD = BraidHomology(Cf, shifted), BraidHomology(Cz, shifted)
    cone = _ConeComplex(HC, HD)
    degs = sorted(HC.by_degree)
    fails = []
    cone_dims = {}
    for eps in (0, 1):
        for j in w.js():
            for k in w.ks():
                cell = (eps, j + 2, k)
                for i in range(degs[0], degs[-1] + 2):
                    d = cone.dim(i, cell)
                    if d:
                        cone_dims[(eps, i, j, k)] = d
    for key in sorted(set(cone_dims) | set(dm)):
        if cone_dims.get(key, 0) != dm.get(key, 0):
            fails.append(f"cone dim {cone_dims.get(key, 0)} != stabilized dim {dm.get(key, 0)} at {key}")
    # sanity: the a = 0 quotient has the a-exponent-0 slice as basis
    for v, (mc, md) in enumerate(zip(HC.cells, HD.cells)):
        for eps in (0, 1):
            for j in shifted.js():
                for k in shifted.ks():
                    cell = (eps, j, k)
                    slice0 = sum(1 for g, e in mc.basis(cell)[0] if e[0] == 0)
                    if md.size(cell) != slice0:
                        fails.append(f"quotient basis mismatch at vertex {v} cell {cell}")
    return _verdict(fails, compared=len(set(cone_dims) | set(dm)), window=w.to_json())


# ---------------------------------------------------------------------------
# oracle equivalence
# ---------------------------------------------------------------------------


def oracle_check(G: ResolvedWord, N: int, depth: int = 6, kmax: int | None = None) -> dict:
    """Direct d_mf homology dims against the MOY oracle, both variants.

    The k-window runs from the lowest generator degree up to ``depth`` above
    it (or to ``kmax`` when given).
    """
    fails = []
    for mode, variant in (("free", "triple"), ("one", "sln")):
        model = resolved_model(G, N, mode)
        w0 = default_window([model], 0, mode)
        top = kmax if kmax is not None else w0.kmin + depth
        w = DegreeWindow(w0.jmin, w0.jmax, w0.kmin, top)
        direct = mf_homology(G, N, mode=mode, window=w).dims
        S, _ = reduce_series(G, N, variant)
        expect = total_dims(S, w)
        if variant == "sln":
            expect = {(e, 0, k): d for (e, _, k), d in expect.items()}
        for key in sorted(set(direct) | set(expect)):
            if direct.get(key, 0) != expect.get(key, 0):
                fails.append(f"{G} N={N} {variant} at {key}: direct {direct.get(key, 0)} "
                             f"oracle {expect.get(key, 0)}")
    return _verdict(fails)


def audit_report(report: HomologyReport, parity: bool = True) -> dict:
    audits = {"structure_theorem": verify_structure_theorem(report)}
    if parity:
        audits["parity_vanishing"] = parity_vanishing(report.braid, report.N,
                                                      min(report.window.kmax, 2 * report.N + 7))
    report.audits = audits
    return audits


# ---------------------------------------------------------------------------
# transverse unknots
# ---------------------------------------------------------------------------


def unknot_expected(m: int, N: int, kmax: int) -> GradedQaModule:
    """Closed-form homology of the transverse unknot U_m, torsion cut at kmax."""
    out = GradedQaModule()

    def free_block(e, i, j, dk):
        for l in range(N):
            out.add_free(e, i, j, -N + 1 + 2 * l + dk)

    def tower(e, i, j, dk):
        k = N + 1 + dk
        while k <= kmax:
            out.add_torsion(e, i, 1, j, k)
            k += 2

    if m == 0:
        free_block(1, 0, -1, 0)
        tower(1, 0, -1, 0)
    elif m == 1:
        free_block(1, 0, -1, 0)
        tower(0, 1, -2, -N - 1)
    else:
        free_block(1, 0, -2 * m + 1, 0)
        tower((1 + m) % 2, m, -1 - m, -m * (N + 1))
        for l in range(1, m):
            for t in range(N):
                out.add_torsion((1 + l) % 2, l + 1, 1, -2 * m - 1 + l, -N + 1 + 2 * t - l * (N + 1))
    return out.restrict(kmax=kmax)


def unknot_check(m: int, N: int, kmax: int | None = None) -> tuple[dict, HomologyReport]:
    B = unknot_presentation(m)
    kmax = kmax if kmax is not None else 2 * N + 2 * m + 5
    R = total_homology(B, N, kmax)
    got = R.module.restrict(kmax=kmax)
    want = unknot_expected(m, N, kmax)
    fails = []
    if got != want:
        g, w = got.to_json(), want.to_json()
        fails.append(f"U_{m} N={N}: computed {g} expected {w}")
    return _verdict(fails, m=m, N=N, kmax=kmax), R
