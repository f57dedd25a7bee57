"""Degreewise two-stage homology H(H(C, d_mf), d_chi) of cube complexes.

Each vertex factorization is a free module over Q[a, x]; fixing the Z2
degree and the bigrading (j, k) leaves a finite Q-vector space spanned by
``monomial * generator``.  Stage one takes d_mf homology of every vertex
cell, keeping explicit representatives.  Stage two assembles the vertices of
each homological degree, applies the induced chi maps and takes homology
again.  Multiplication by a is tracked through both stages so the result can
be decomposed as a graded Q[a]-module.

Cells are keyed ``(eps, j, k)``.  In mode ``"one"`` (a = 1) the a-grading is
gone and j is always 0.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .braid import BraidWord, ResolvedWord, resolve, self_linking, transverse_move
from .exactalg import Echelon, Poly, QMatrix, monomials, rank_kernel_image
from .mfcore import CubeComplex, ReducedModel, braid_complex, resolved_model
from .modules import GradedQaModule, module_structure

Cell = tuple[int, int, int]


@dataclass(frozen=True)
class DegreeWindow:
    jmin: int
    jmax: int
    kmin: int
    kmax: int

    def js(self):
        return range(self.jmin, self.jmax + 1)

    def ks(self):
        return range(self.kmin, self.kmax + 1)

    def to_json(self) -> dict:
        return {"jmin": self.jmin, "jmax": self.jmax, "kmin": self.kmin, "kmax": self.kmax}


class CellHomology:
    """Homology of one cell: representatives and a projector onto them.

    ``coords(v)`` writes a cycle v as a combination of the representatives
    modulo boundaries.
    """

    def __init__(self, size: int, boundaries: list[dict], cycles: list[dict]):
        self.size = size
        self._ech = Echelon()
        for b in boundaries:
            self._ech.add(b)
        self.boundary_rank = len(self._ech)
        self.reps: list[dict] = []
        for z in cycles:
            if self._ech.add(z, {len(self.reps): 1}) is not None:
                self.reps.append(z)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, vec: dict) -> dict:
        res, c = self._ech.coordinates(vec)
        if res:
            raise ArithmeticError("vector is not a cycle of this cell")
        return c


def _empty_homology() -> CellHomology:
    return CellHomology(0, [], [])


class ModelCells:
    """Degreewise data for one reduced vertex model."""

    def __init__(self, model: ReducedModel, mode: str):
        self.model = model
        self.mode = mode
        self.N = model.N
        self.ring = model.ring
        self.nv = self.ring.nvars
        self._basis: dict[Cell, tuple[list, dict]] = {}
        self._dout: dict[Cell, QMatrix] = {}
        self._rank: dict[Cell, int] = {}
        self._hom: dict[Cell, CellHomology] = {}
        self._terms = [
            [(t, list(p.terms.items())) for t, p in model.D[g]] for g in range(len(model.gens))
        ]

    def cell_key(self, eps: int, j: int, k: int) -> Cell:
        return (eps % 2, 0 if self.mode == "one" else j, k)

    def basis(self, cell: Cell) -> tuple[list, dict]:
        if cell in self._basis:
            return self._basis[cell]
        eps, j, k = cell
        elems = []
        act = self.model.active
        for g, (e, sa, sx) in enumerate(self.model.gens):
            if e != eps:
                continue
            dx = k - sx
            if dx < 0 or dx % 2:
                continue
            if self.mode == "free":
                da = j - sa
                if da < 0 or da % 2:
                    continue
                p = da // 2
            elif self.mode == "zero":
                if sa != j:
                    continue
                p = 0
            else:
                p = 0
            for mono in monomials(len(act), dx // 2):
                e_full = [0] * self.nv
                e_full[0] = p
                for i, m in zip(act, mono):
                    e_full[i] = m
                elems.append((g, tuple(e_full)))
        index = {x: n for n, x in enumerate(elems)}
        self._basis[cell] = (elems, index)
        return elems, index

    def size(self, cell: Cell) -> int:
        return len(self.basis(cell)[0])

    def d_target(self, cell: Cell) -> Cell:
        eps, j, k = cell
        return self.cell_key(eps + 1, j + 1, k + self.N + 1)

    def d_source(self, cell: Cell) -> Cell:
        eps, j, k = cell
        return self.cell_key(eps + 1, j - 1, k - self.N - 1)

    def d_out(self, cell: Cell) -> QMatrix:
        if cell in self._dout:
            return self._dout[cell]
        elems, _ = self.basis(cell)
        tcell = self.d_target(cell)
        telems, tindex = self.basis(tcell)
        cols = []
        for g, e in elems:
            col: dict = {}
            for t, terms in self._terms[g]:
                for pe, c in terms:
                    key = (t, tuple(x + y for x, y in zip(e, pe)))
                    idx = tindex[key]
                    v = col.get(idx, 0) + c
                    if v:
                        col[idx] = v
                    else:
                        col.pop(idx, None)
            cols.append(col)
        M = QMatrix(len(telems), len(elems), cols)
        self._dout[cell] = M
        return M

    def rank_out(self, cell: Cell) -> int:
        if cell not in self._rank:
            M = self.d_out(cell)
            ech = Echelon()
            for col in M.columns:
                if col:
                    ech.add(col)
            self._rank[cell] = len(ech)
        return self._rank[cell]

    def dim(self, cell: Cell) -> int:
        """dim H(d_mf) at a cell from ranks only."""
        n = self.size(cell)
        if not n:
            return 0
        return n - self.rank_out(cell) - self.rank_out(self.d_source(cell))

    def homology(self, cell: Cell) -> CellHomology:
        if cell in self._hom:
            return self._hom[cell]
        n = self.size(cell)
        if not n:
            h = _empty_homology()
        else:
            rk, kernel, _ = rank_kernel_image(self.d_out(cell))
            self._rank[cell] = rk
            src = self.d_out(self.d_source(cell))
            h = CellHomology(n, [c for c in src.columns if c], kernel)
        self._hom[cell] = h
        return h

    # conversions ------------------------------------------------------------
    def to_polys(self, cell: Cell, vec: dict) -> dict[int, Poly]:
        elems, _ = self.basis(cell)
        terms: dict[int, dict] = {}
        for i, c in vec.items():
            g, e = elems[i]
            terms.setdefault(g, {})[e] = c
        return {g: Poly(self.ring, t) for g, t in terms.items()}

    def to_vector(self, cell: Cell, polys: dict[int, Poly]) -> dict:
        _, index = self.basis(cell)
        vec = {}
        for g, p in polys.items():
            for e, c in p.terms.items():
                key = (g, e)
                if key not in index:
                    raise ArithmeticError(f"term {e} on generator {g} is outside cell {cell}")
                vec[index[key]] = c
        return vec

    def a_matrix(self, cell: Cell) -> list[dict]:
        """Multiplication by a on H at ``cell`` in representative coordinates."""
        eps, j, k = cell
        tcell = (eps, j + 2, k)
        h, ht = self.homology(cell), self.homology(tcell)
        if not h.dim:
            return []
        elems, _ = self.basis(cell)
        _, tindex = self.basis(tcell)
        cols = []
        for rep in h.reps:
            v = {}
            for i, c in rep.items():
                g, e = elems[i]
                v[tindex[(g, (e[0] + 1,) + e[1:])]] = c
            cols.append(ht.coords(v))
        return cols


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TRKR_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------


def default_window(models: list[ReducedModel], kmax: int, mode: str = "free") -> DegreeWindow:
    """jmin is the least generator a-shift; jmax exceeds the largest by 3 so the
    a-action is an isomorphism at the top of the window."""
    sas = [g[1] for m in models for g in m.gens]
    sxs = [g[2] for m in models for g in m.gens]
    if not sas:
        return DegreeWindow(0, 0, 0, kmax)
    if mode == "one":
        return DegreeWindow(0, 0, min(sxs), kmax)
    return DegreeWindow(min(sas), max(sas) + 3, min(sxs), kmax)


def default_kmax(B: BraidWord, N: int) -> int:
    return 2 * N + 2 * B.crossings + 5


# ---------------------------------------------------------------------------
# single MOY graph (stage one only)
# ---------------------------------------------------------------------------


@dataclass
class GraphHomology:
    """d_mf homology of one closed MOY graph within a window."""

    word: ResolvedWord
    N: int
    mode: str
    window: DegreeWindow
    dims: dict[Cell, int]
    module: GradedQaModule | None = None

    def sln_dims(self) -> dict[tuple[int, int], int]:
        return {(e, k): d for (e, _, k), d in self.dims.items() if d}


def mf_homology(G: ResolvedWord, N: int, kmax: int | None = None, mode: str = "free",
                with_module: bool = False, eliminate_vars: bool = True,
                window: DegreeWindow | None = None) -> GraphHomology:
    model = resolved_model(G, N, mode, eliminate_vars)
    cells = ModelCells(model, mode)
    if window is None:
        if kmax is None:
            kmax = 2 * N + 2 * len(G.letters) + 5
        window = default_window([model], kmax, mode)
    dims = {}
    for eps in (0, 1):
        for j in window.js():
            for k in window.ks():
                c = cells.cell_key(eps, j, k)
                d = cells.dim(c)
                if d:
                    dims[c] = d
    module = None
    if with_module and mode == "free":
        module = _module_from_cells(
            window,
            lambda c: cells.homology((c[0], c[2], c[3])).dim,
            lambda c: cells.a_matrix((c[0], c[2], c[3])),
            [(e, 0) for e in (0, 1)],
        )
    return GraphHomology(G, N, mode, window, dims, module)


def _module_from_cells(window, dim_fn, a_fn, eps_i) -> GradedQaModule:
    """Assemble a graded Q[a]-module from cellwise dims and a-matrices."""
    data = {}
    for eps, i in eps_i:
        for k in window.ks():
            dims = {}
            amaps = {}
            for j in window.js():
                d = dim_fn((eps, i, j, k))
                if d:
                    dims[j] = d
            if not dims:
                continue
            for j in window.js():
                if j in dims and j + 2 <= window.jmax and dims.get(j + 2):
                    amaps[j] = a_fn((eps, i, j, k))
            data[(eps, i, k)] = (dims, amaps)
    return module_structure(data, window)


# ---------------------------------------------------------------------------
# braids (both stages)
# ---------------------------------------------------------------------------


class BraidHomology:
    """Two-stage homology of a braid's cube complex."""

    def __init__(self, C: CubeComplex, window: DegreeWindow):
        self.C = C
        self.window = window
        self.mode = C.mode
        self.cells = [ModelCells(m, C.mode) for m in C.models]
        self.by_degree: dict[int, list[int]] = {}
        for n, v in enumerate(C.vertices):
            self.by_degree.setdefault(v.degree, []).append(n)
        self._lifts: dict = {}
        self._induced: dict = {}
        self._final: dict = {}
        self._blocks: dict = {}

    def key(self, eps, j, k) -> Cell:
        return self.cells[0].cell_key(eps, j, k)

    # stage one ------------------------------------------------------------
    def vertex_homology(self, v: int, cell: Cell) -> CellHomology:
        return self.cells[v].homology(cell)

    def blocks(self, i: int, cell: Cell) -> list[tuple[int, int]]:
        """(vertex, offset) pairs laying out E^i at a cell."""
        key = (i, cell)
        if key not in self._blocks:
            out = []
            off = 0
            for v in self.by_degree.get(i, ()):
                out.append((v, off))
                off += self.vertex_homology(v, cell).dim
            self._blocks[key] = (out, off)
        return self._blocks[key]

    def lifted_reps(self, v: int, cell: Cell) -> list[dict[int, Poly]]:
        key = (v, cell)
        if key not in self._lifts:
            mc = self.cells[v]
            h = mc.homology(cell)
            self._lifts[key] = [mc.model.lift(mc.to_polys(cell, r)) for r in h.reps]
        return self._lifts[key]

    def induced(self, e_idx: int, cell: Cell) -> list[dict]:
        """Induced map of one cube edge on d_mf homology (columns = source reps)."""
        key = (e_idx, cell)
        if key in self._induced:
            return self._induced[key]
        e = self.C.edges[e_idx]
        tc = self.cells[e.target]
        th = tc.homology(cell)
        cols = []
        for z in self.lifted_reps(e.source, cell):
            img = self.C.edge_map(e, z)
            red = tc.model.quotient(img)
            cols.append(th.coords(tc.to_vector(cell, red)) if red else {})
        self._induced[key] = cols
        return cols

    def d_chi(self, i: int, cell: Cell) -> QMatrix:
        """Induced d_chi: E^i -> E^{i+1} at a cell."""
        src, n = self.blocks(i, cell)
        tgt, m = self.blocks(i + 1, cell)
        toff = dict(tgt)
        soff = dict(src)
        cols = [dict() for _ in range(n)]
        for e_idx, e in enumerate(self.C.edges):
            if e.source not in soff or e.target not in toff:
                continue
            so, to = soff[e.source], toff[e.target]
            for c, col in enumerate(self.induced(e_idx, cell)):
                dst = cols[so + c]
                for r, val in col.items():
                    s = dst.get(to + r, 0) + val
                    if s:
                        dst[to + r] = s
                    else:
                        dst.pop(to + r, None)
        return QMatrix(m, n, cols)

    # stage two ------------------------------------------------------------
    def final(self, i: int, cell: Cell) -> CellHomology:
        key = (i, cell)
        if key not in self._final:
            _, n = self.blocks(i, cell)
            if not n:
                h = _empty_homology()
            else:
                _, kernel, _ = rank_kernel_image(self.d_chi(i, cell))
                din = self.d_chi(i - 1, cell)
                h = CellHomology(n, [c for c in din.columns if c], kernel)
            self._final[key] = h
        return self._final[key]

    def dim(self, eps: int, i: int, j: int, k: int) -> int:
        return self.final(i, self.key(eps, j, k)).dim

    def a_matrix(self, eps: int, i: int, j: int, k: int) -> list[dict]:
        """a-multiplication on the final homology, (eps,i,j,k) -> (eps,i,j+2,k)."""
        cell, tcell = (eps % 2, j, k), (eps % 2, j + 2, k)
        h, ht = self.final(i, cell), self.final(i, tcell)
        src, _ = self.blocks(i, cell)
        tgt, _ = self.blocks(i, tcell)
        toff = dict(tgt)
        amats = {v: self.cells[v].a_matrix(cell) for v, _ in src}
        cols = []
        for rep in h.reps:
            img: dict = {}
            for v, off in src:
                dimv = self.vertex_homology(v, cell).dim
                A = amats[v]
                for c in range(dimv):
                    x = rep.get(off + c)
                    if not x:
                        continue
                    for r, val in A[c].items():
                        idx = toff[v] + r
                        s = img.get(idx, 0) + x * val
                        if s:
                            img[idx] = s
                        else:
                            img.pop(idx, None)
            cols.append(ht.coords(img))
        return cols

    def all_dims(self) -> dict[tuple[int, int, int, int], int]:
        out = {}
        degs = sorted(self.by_degree)
        if not degs:
            return out
        for eps in (0, 1):
            for i in range(degs[0], degs[-1] + 1):
                for j in (self.window.js() if self.mode != "one" else (0,)):
                    for k in self.window.ks():
                        d = self.dim(eps, i, j, k)
                        if d:
                            out[(eps, i, j, k)] = d
        return out

    def precompute(self):
        """Stage-one homology of every vertex cell (parallel over vertices)."""
        js = self.window.js() if self.mode != "one" else (0,)
        jobs = [(v, self.key(eps, j, k)) for v in range(len(self.cells))
                for eps in (0, 1) for j in js for k in self.window.ks()]
        threads = _threads()
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                list(pool.map(lambda vc: self.cells[vc[0]].homology(vc[1]), jobs))
        else:
            for v, c in jobs:
                self.cells[v].homology(c)

    def module(self) -> GradedQaModule:
        degs = sorted(self.by_degree)
        eps_i = [(e, i) for e in (0, 1) for i in range(degs[0], degs[-1] + 1)]
        return _module_from_cells(
            self.window,
            lambda c: self.dim(*c),
            lambda c: self.a_matrix(*c),
            eps_i,
        )


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class HomologyReport:
    braid: BraidWord
    N: int
    window: DegreeWindow
    module: GradedQaModule
    sln_dims: dict[tuple[int, int, int], int]
    dims: dict[tuple[int, int, int, int], int] = field(default_factory=dict)
    audits: dict[str, dict] = field(default_factory=dict)

    @property
    def sl(self) -> int:
        return self_linking(self.braid)


def braid_window(B: BraidWord, N: int, kmax: int | None = None, C: CubeComplex | None = None
                 ) -> DegreeWindow:
    C = C or braid_complex(B, N)
    return default_window(C.models, kmax if kmax is not None else default_kmax(B, N))


def total_homology(B: BraidWord, N: int, kmax: int | None = None,
                   window: DegreeWindow | None = None, with_sln: bool = True,
                   eliminate_vars: bool = True) -> HomologyReport:
    C = braid_complex(B, N, "free", eliminate_vars)
    if window is None:
        window = braid_window(B, N, kmax, C)
    H = BraidHomology(C, window)
    H.precompute()
    module = H.module()
    sln = sln_homology(B, N, window.kmax, eliminate_vars) if with_sln else {}
    return HomologyReport(B, N, window, module, sln, H.all_dims())


def sln_homology(B: BraidWord, N: int, kmax: int | None = None, eliminate_vars: bool = True
                 ) -> dict[tuple[int, int, int], int]:
    """dims of the a = 1 specialization per (eps, i, k)."""
    C = braid_complex(B, N, "one", eliminate_vars)
    kmax = kmax if kmax is not None else default_kmax(B, N)
    window = default_window(C.models, kmax, "one")
    H = BraidHomology(C, window)
    H.precompute()
    return {(e, i, k): d for (e, i, j, k), d in H.all_dims().items()}
