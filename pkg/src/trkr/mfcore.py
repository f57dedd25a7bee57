"""Graded matrix factorizations over Q[a, x_1..x_m].

Everything here is Koszul-shaped: a factorization is stored as one
differential ``D`` acting on a list of graded generators, ``D[g]`` being the
list of ``(target, polynomial)`` pairs with d(e_g) = sum p * e_target.  The
Z2 degree of a generator tells which of the two modules M_0, M_1 it lives in.

Conventions:

* deg a = (2, 0), deg x = (0, 2); differentials have bidegree (1, N+1).
* A generator with shift (s_a, s_x) sits in bidegree (s_a, s_x), so an
  element p * e_g has bidegree deg(p) + shift(g).
* Koszul generators are indexed by bitmasks S over the rows (bit r is row r),
  z2 = |S| mod 2, and d e_S = sum_r (-1)^{|S cap [0, r)|} (a_r0 e_{S+r} or
  a_r1 e_{S-r}).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

from .braid import BraidWord, CubeVertex, ResolvedWord, cube
from .exactalg import (
    AlgebraError,
    Echelon,
    Poly,
    Ring,
    divide_exact,
    g_divided_differences,
    monomials,
    qdiv,
    quotient_pi,
    solve_nullspace,
    vec_axpy,
)


class MFError(ValueError):
    pass


Gen = tuple[int, int, int]  # (z2, a_shift, x_shift)


@dataclass(frozen=True)
class GradedFreeModule:
    gens: tuple[Gen, ...]

    def shift(self, z2: int = 0, j: int = 0, k: int = 0) -> "GradedFreeModule":
        return GradedFreeModule(tuple(((e + z2) % 2, sa + j, sx + k) for e, sa, sx in self.gens))

    def __len__(self):
        return len(self.gens)


@dataclass(frozen=True)
class KoszulRow:
    """A pair (a0, a1) with a0 * a1 contributing to the potential.

    ``deg0`` is the bidegree of a0; it is stored so rows with a0 = 0 (and
    specialized rows, which lose the a-grading) still know their shift.
    """

    a0: Poly
    a1: Poly
    deg0: tuple[int, int]

    @classmethod
    def make(cls, a0: Poly, a1: Poly, N: int) -> "KoszulRow":
        d0, d1 = a0.bidegree(), a1.bidegree()
        target = (2, 2 * N + 2)
        if d0 is None and d1 is None:
            raise MFError("Koszul row with both entries zero needs an explicit degree")
        if d0 is None:
            d0 = (target[0] - d1[0], target[1] - d1[1])
        if d1 is not None and (d0[0] + d1[0], d0[1] + d1[1]) != target:
            raise MFError(f"Koszul row ({a0}, {a1}) has bidegrees {d0}+{d1} != {target}")
        return cls(a0, a1, d0)

    def shift(self, N: int) -> tuple[int, int]:
        return 1 - self.deg0[0], N + 1 - self.deg0[1]

    def map(self, f: Callable[[Poly], Poly]) -> "KoszulRow":
        return KoszulRow(f(self.a0), f(self.a1), self.deg0)


@dataclass
class MatrixFactorization:
    ring: Ring
    N: int
    gens: tuple[Gen, ...]
    D: tuple[tuple[tuple[int, Poly], ...], ...]
    w: Poly
    rows: tuple[KoszulRow, ...] | None = None
    base: Gen = (0, 0, 0)

    @property
    def module(self) -> GradedFreeModule:
        return GradedFreeModule(self.gens)

    def rank(self) -> tuple[int, int]:
        n0 = sum(1 for g in self.gens if g[0] == 0)
        return n0, len(self.gens) - n0

    def _block(self, src: int) -> list[list[Poly]]:
        tgt = 1 - src
        srcs = [g for g, gen in enumerate(self.gens) if gen[0] == src]
        tgts = [g for g, gen in enumerate(self.gens) if gen[0] == tgt]
        pos = {g: i for i, g in enumerate(tgts)}
        mat = [[self.ring.zero() for _ in srcs] for _ in tgts]
        for c, g in enumerate(srcs):
            for t, p in self.D[g]:
                mat[pos[t]][c] = mat[pos[t]][c] + p
        return mat

    @property
    def d0(self) -> list[list[Poly]]:
        """Polynomial matrix M_0 -> M_1 (rows indexed by M_1 generators)."""
        return self._block(0)

    @property
    def d1(self) -> list[list[Poly]]:
        return self._block(1)

    def apply(self, vec: dict[int, Poly]) -> dict[int, Poly]:
        out: dict[int, Poly] = {}
        for g, p in vec.items():
            for t, q in self.D[g]:
                v = out.get(t)
                out[t] = p * q if v is None else v + p * q
        return {g: p for g, p in out.items() if p}

    def check_d_squared(self) -> bool:
        """d∘d = w·id exactly."""
        for g in range(len(self.gens)):
            dd = self.apply(self.apply({g: self.ring.one()}))
            expect = {g: self.w} if self.w else {}
            if dd != expect:
                return False
        return True

    def homogeneity_violations(self) -> list[str]:
        bad = []
        for g, (e, sa, sx) in enumerate(self.gens):
            for t, p in self.D[g]:
                te, ta, tx = self.gens[t]
                want = (sa + 1 - ta, sx + self.N + 1 - tx)
                if te == e:
                    bad.append(f"d maps gen {g} to gen {t} of the same Z2 degree")
                degs = p.bidegrees()
                if degs and degs != {want}:
                    bad.append(f"entry {g}->{t} = {p} has bidegrees {degs}, expected {want}")
        return bad

    def shift(self, z2: int = 0, j: int = 0, k: int = 0) -> "MatrixFactorization":
        return shift(self, z2, j, k)


def shift(M: MatrixFactorization, z2: int = 0, j: int = 0, k: int = 0) -> MatrixFactorization:
    gens = tuple(((e + z2) % 2, sa + j, sx + k) for e, sa, sx in M.gens)
    b = M.base
    return replace(M, gens=gens, base=((b[0] + z2) % 2, b[1] + j, b[2] + k))


def koszul_gens(rows: Sequence[KoszulRow], N: int, base: Gen = (0, 0, 0)) -> tuple[Gen, ...]:
    shifts = [r.shift(N) for r in rows]
    gens = []
    for S in range(1 << len(rows)):
        e, sa, sx = base
        for r, (da, dx) in enumerate(shifts):
            if S >> r & 1:
                e ^= 1
                sa += da
                sx += dx
        gens.append((e, sa, sx))
    return tuple(gens)


def koszul_differential(rows: Sequence[KoszulRow]) -> tuple[tuple[tuple[int, Poly], ...], ...]:
    D = []
    for S in range(1 << len(rows)):
        out = []
        for r, row in enumerate(rows):
            sign = -1 if bin(S & ((1 << r) - 1)).count("1") % 2 else 1
            if S >> r & 1:
                p, t = row.a1, S & ~(1 << r)
            else:
                p, t = row.a0, S | (1 << r)
            if p:
                out.append((t, p if sign > 0 else -p))
        D.append(tuple(out))
    return tuple(D)


def koszul(rows: Sequence[KoszulRow], ring: Ring, N: int, base: Gen = (0, 0, 0)) -> MatrixFactorization:
    rows = tuple(rows)
    w = ring.zero()
    for row in rows:
        if row.a0.ring != ring or row.a1.ring != ring:
            raise MFError("Koszul row over a different ring")
        w = w + row.a0 * row.a1
    return MatrixFactorization(ring, N, koszul_gens(rows, N, base), koszul_differential(rows), w, rows, base)


def tensor_mf(M: MatrixFactorization, P: MatrixFactorization) -> MatrixFactorization:
    """M ⊗ P with e_g ⊗ e_h at index g + h * len(M) and the signed Leibniz rule."""
    if M.ring != P.ring:
        raise MFError("tensor of factorizations over different rings")
    if M.N != P.N:
        raise MFError("tensor of factorizations with different N")
    n = len(M.gens)
    gens = []
    D = []
    for h, (eh, ah, xh) in enumerate(P.gens):
        for g, (eg, ag, xg) in enumerate(M.gens):
            gens.append(((eg + eh) % 2, ag + ah, xg + xh))
    for h in range(len(P.gens)):
        for g, (eg, _, _) in enumerate(M.gens):
            out = [(t + h * n, p) for t, p in M.D[g]]
            out += [(g + t * n, p if eg == 0 else -p) for t, p in P.D[h]]
            D.append(tuple(out))
    rows = M.rows + P.rows if M.rows is not None and P.rows is not None else None
    base = ((M.base[0] + P.base[0]) % 2, M.base[1] + P.base[1], M.base[2] + P.base[2])
    return MatrixFactorization(M.ring, M.N, tuple(gens), tuple(D), M.w + P.w, rows, base)


def unit_mf(ring: Ring, N: int) -> MatrixFactorization:
    return koszul((), ring, N)


# ---------------------------------------------------------------------------
# MOY pieces and graphs
# ---------------------------------------------------------------------------


def arc_row(ring: Ring, N: int, xi: str, xk: str) -> KoszulRow:
    """Row of the arc piece from x_i to x_k."""
    a = ring.var("a")
    u, v = ring.var(xk), ring.var(xi)
    return KoszulRow.make(a * quotient_pi(u, v, N), u - v, N)


def wide_rows(ring: Ring, N: int, xi: str, xj: str, xk: str, xl: str) -> tuple[KoszulRow, KoszulRow]:
    """The two rows of the wide edge with inputs x_i, x_j and outputs x_k, x_l."""
    a = ring.var("a")
    vi, vj, vk, vl = (ring.var(n) for n in (xi, xj, xk, xl))
    s_in, p_in = vi + vj, vi * vj
    s_out, p_out = vk + vl, vk * vl
    q1, q2 = g_divided_differences(N, s_in, p_in, s_out, p_out)
    return (KoszulRow.make(a * q1, s_out - s_in, N), KoszulRow.make(a * q2, p_out - p_in, N))


@dataclass(frozen=True)
class Piece:
    """A simple marked MOY piece: ``arc`` (in, out) or ``wide`` (i, j, k, l)."""

    kind: str
    ends: tuple[str, ...]

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.ends[:1] if self.kind == "arc" else self.ends[:2]

    @property
    def outputs(self) -> tuple[str, ...]:
        return self.ends[1:] if self.kind == "arc" else self.ends[2:]


@dataclass(frozen=True)
class MOYGraph:
    """A marked MOY graph cut at its marked points.

    1-colored edges are the arc pieces and the four legs of each wide piece;
    the 2-colored edge is the middle of a wide piece and carries no mark.
    ``variables`` lists the marks in ring order.
    """

    variables: tuple[str, ...]
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        vs = set(self.variables)
        if len(vs) != len(self.variables):
            raise MFError("two marked points share a variable")
        for p in self.pieces:
            if p.kind not in ("arc", "wide"):
                raise MFError(f"unknown piece kind {p.kind!r}")
            if len(p.ends) != (2 if p.kind == "arc" else 4):
                raise MFError(f"piece {p} has the wrong number of marked ends")
            for v in p.ends:
                if v not in vs:
                    raise MFError(f"piece end {v!r} is not a marked point")
        ins = [v for p in self.pieces for v in p.inputs]
        outs = [v for p in self.pieces for v in p.outputs]
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            raise MFError("a marked point is entered or left twice")

    @property
    def ring(self) -> Ring:
        return Ring.with_x(self.variables)

    def endpoints(self) -> tuple[list[str], list[str]]:
        """(outward endpoints, inward endpoints)."""
        ins = {v for p in self.pieces for v in p.inputs}
        outs = {v for p in self.pieces for v in p.outputs}
        return sorted(outs - ins), sorted(ins - outs)

    def is_closed(self) -> bool:
        o, i = self.endpoints()
        return not o and not i


def piece_rows(piece: Piece, ring: Ring, N: int) -> tuple[KoszulRow, ...]:
    if piece.kind == "arc":
        return (arc_row(ring, N, *piece.ends),)
    return wide_rows(ring, N, *piece.ends)


def moy_rows(G: MOYGraph, N: int, ring: Ring | None = None) -> tuple[tuple[KoszulRow, ...], int]:
    """Rows of the big tensor product and the number of wide edges."""
    ring = ring or G.ring
    rows: list[KoszulRow] = []
    wides = 0
    for p in G.pieces:
        rows.extend(piece_rows(p, ring, N))
        wides += p.kind == "wide"
    return tuple(rows), wides


def moy_mf(G: MOYGraph, N: int, ring: Ring | None = None) -> MatrixFactorization:
    """Factorization of a marked MOY graph; each wide edge contributes {0,-1}."""
    ring = ring or G.ring
    rows, wides = moy_rows(G, N, ring)
    return koszul(rows, ring, N, (0, 0, -wides))


def circle_graph(var: str = "x1") -> MOYGraph:
    return MOYGraph((var,), (Piece("arc", (var, var)),))


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


@dataclass
class MFMorphism:
    """Even or odd map ``source -> target<z2>{j,k}``; ``entries[(t, s)]`` is the
    coefficient of e_t in the image of e_s."""

    source: MatrixFactorization
    target: MatrixFactorization
    entries: dict[tuple[int, int], Poly]
    shift: tuple[int, int, int] = (0, 0, 0)
    odd: bool = False

    def apply(self, vec: dict[int, Poly]) -> dict[int, Poly]:
        out: dict[int, Poly] = {}
        for (t, s), p in self.entries.items():
            v = vec.get(s)
            if v:
                out[t] = out[t] + v * p if t in out else v * p
        return {g: p for g, p in out.items() if p}

    def compose(self, after: "MFMorphism") -> "MFMorphism":
        """after ∘ self."""
        out: dict[tuple[int, int], Poly] = {}
        for (t, s), p in self.entries.items():
            for (u, t2), q in after.entries.items():
                if t2 == t:
                    out[(u, s)] = out[(u, s)] + q * p if (u, s) in out else q * p
        sh = tuple(x + y for x, y in zip(self.shift, after.shift))
        return MFMorphism(self.source, after.target, {k: v for k, v in out.items() if v},
                          ((sh[0]) % 2, sh[1], sh[2]), self.odd != after.odd)

    def scale(self, c) -> "MFMorphism":
        return replace(self, entries={k: v.scale(c) for k, v in self.entries.items() if c})

    def commutator(self) -> dict[tuple[int, int], Poly]:
        """f d - d f for even f, f d + d f for odd f; zero iff a chain map."""
        M, P = self.source, self.target
        out: dict[tuple[int, int], Poly] = {}

        def acc(key, p):
            out[key] = out[key] + p if key in out else p

        for s in range(len(M.gens)):
            for t, p in M.D[s]:
                for (u, t2), q in self.entries.items():
                    if t2 == t:
                        acc((u, s), q * p)
        sign = 1 if self.odd else -1
        for (t, s), p in self.entries.items():
            for u, q in P.D[t]:
                acc((u, s), (q * p).scale(sign))
        return {k: v for k, v in out.items() if v}

    def is_chain_map(self) -> bool:
        return not self.commutator()


def identity_morphism(M: MatrixFactorization, coef: Poly | None = None) -> MFMorphism:
    c = coef if coef is not None else M.ring.one()
    return MFMorphism(M, M, {(g, g): c for g in range(len(M.gens))} if c else {})


class HomSpace:
    """Homogeneous maps ``source -> target<z2>{j,k}`` of a fixed parity.

    Unknowns are the coefficients of every monomial of the forced bidegree in
    every matrix entry.
    """

    def __init__(self, M: MatrixFactorization, P: MatrixFactorization, shift=(0, 0, 0),
                 odd: bool = False, degree_cap: int = 64):
        if M.ring != P.ring:
            raise MFError("morphisms between factorizations over different rings")
        self.M, self.P, self.shift, self.odd = M, P, shift, odd
        ring = M.ring
        z2, j, k = shift
        dN = (1, M.N + 1) if odd else (0, 0)
        self.unknowns: list[tuple[int, int, tuple[int, ...]]] = []
        nx = ring.nvars - 1
        for s, (es, sas, sxs) in enumerate(M.gens):
            for t, (et, sat, sxt) in enumerate(P.gens):
                if ((et + z2 + (1 if odd else 0)) % 2) != es:
                    continue
                da = sas - sat - j - dN[0]
                dx = sxs - sxt - k - dN[1]
                if da < 0 or dx < 0 or da % 2 or dx % 2:
                    continue
                if da // 2 + dx // 2 > degree_cap:
                    raise MFError("degree cap exceeded while enumerating morphism entries")
                for mono in monomials(nx, dx // 2):
                    self.unknowns.append((t, s, (da // 2,) + mono))
        self.index = {u: i for i, u in enumerate(self.unknowns)}

    def __len__(self):
        return len(self.unknowns)

    def to_morphism(self, vec: dict[int, object]) -> MFMorphism:
        ring = self.M.ring
        terms: dict[tuple[int, int], dict] = {}
        for i, c in vec.items():
            t, s, e = self.unknowns[i]
            terms.setdefault((t, s), {})[e] = c
        entries = {key: Poly(ring, d) for key, d in terms.items()}
        return MFMorphism(self.M, self.P, {k: v for k, v in entries.items() if v}, self.shift, self.odd)

    def to_vector(self, f: MFMorphism) -> dict[int, object]:
        vec = {}
        for (t, s), p in f.entries.items():
            for e, c in p.terms.items():
                key = (t, s, e)
                if key not in self.index:
                    raise MFError(f"entry {(t, s)} term {e} lies outside the forced bidegree")
                vec[self.index[key]] = c
        return vec

    def chain_equations(self) -> list[dict[int, object]]:
        """Linear equations on the unknowns expressing f d ∓ d f = 0."""
        M, P = self.M, self.P
        eqs: dict[tuple, dict[int, object]] = {}
        sign = 1 if self.odd else -1
        by_src: dict[int, list[int]] = {}
        for i, (t, s, e) in enumerate(self.unknowns):
            by_src.setdefault(s, []).append(i)
        # (f d)[u, s] = sum_t f[u, t] d[t, s]
        for s in range(len(M.gens)):
            for t, p in M.D[s]:
                for i in by_src.get(t, ()):
                    u, _, e = self.unknowns[i]
                    for pe, pc in p.terms.items():
                        key = (u, s, tuple(x + y for x, y in zip(e, pe)))
                        row = eqs.setdefault(key, {})
                        row[i] = row.get(i, 0) + pc
        # (d f)[u, s] = sum_t d[u, t] f[t, s]
        for i, (t, s, e) in enumerate(self.unknowns):
            for u, q in P.D[t]:
                for qe, qc in q.terms.items():
                    key = (u, s, tuple(x + y for x, y in zip(e, qe)))
                    row = eqs.setdefault(key, {})
                    row[i] = row.get(i, 0) + sign * qc
        return [{i: c for i, c in row.items() if c} for row in eqs.values()]

    def chain_maps(self) -> list[dict[int, object]]:
        return solve_nullspace(self.chain_equations(), len(self.unknowns))

    def null_homotopic(self) -> tuple["HomSpace", list[dict[int, object]]]:
        """The odd space of homotopies and the image vectors d h + h d."""
        H = HomSpace(self.M, self.P, self.shift, odd=not self.odd)
        images = []
        for i in range(len(H)):
            h = H.to_morphism({i: 1})
            images.append(self.to_vector(_dh_plus_hd(h)))
        return H, images


def _dh_plus_hd(h: MFMorphism) -> MFMorphism:
    M, P = h.source, h.target
    out: dict[tuple[int, int], Poly] = {}

    def acc(key, p):
        out[key] = out[key] + p if key in out else p

    for s in range(len(M.gens)):
        for t, p in M.D[s]:
            for (u, t2), q in h.entries.items():
                if t2 == t:
                    acc((u, s), q * p)
    for (t, s), p in h.entries.items():
        for u, q in P.D[t]:
            acc((u, s), q * p)
    return MFMorphism(M, P, {k: v for k, v in out.items() if v}, h.shift, not h.odd)


@dataclass
class MorphismSolution:
    space: HomSpace
    chain_maps: list[dict[int, object]]
    modulo_homotopy: list[dict[int, object]]
    homotopy_space: HomSpace
    homotopy_images: list[dict[int, object]]

    def homotopy_echelon(self) -> Echelon:
        ech = Echelon()
        for i, v in enumerate(self.homotopy_images):
            ech.add(v, {i: 1})
        return ech


def solve_morphisms(M: MatrixFactorization, P: MatrixFactorization, shift=(0, 0, 0),
                    degree_cap: int = 64) -> MorphismSolution:
    """All even chain maps M -> P<z2>{j,k} and a basis modulo null-homotopic ones."""
    space = HomSpace(M, P, shift, False, degree_cap)
    maps = space.chain_maps()
    H, images = space.null_homotopic()
    ech = Echelon()
    for v in images:
        ech.add(v)
    modulo = []
    for v in maps:
        if ech.add(v) is not None:
            modulo.append(v)
    return MorphismSolution(space, maps, modulo, H, images)


def find_homotopy(sol: MorphismSolution, f: MFMorphism) -> MFMorphism | None:
    """An odd h with d h + h d = f, or None if f is not null-homotopic."""
    ech = sol.homotopy_echelon()
    res, coords = ech.coordinates(sol.space.to_vector(f))
    if res:
        return None
    return sol.homotopy_space.to_morphism(coords)


# ---------------------------------------------------------------------------
# the chi maps of a crossing
# ---------------------------------------------------------------------------

LOCAL_VARS = ("x1", "x2", "y1", "y2")


def local_graphs() -> tuple[MOYGraph, MOYGraph]:
    """Gamma_0 (arcs y2->x1, x2->y1) and Gamma_1 (wide edge y2,x2 -> x1,y1)."""
    g0 = MOYGraph(LOCAL_VARS, (Piece("arc", ("y2", "x1")), Piece("arc", ("x2", "y1"))))
    g1 = MOYGraph(LOCAL_VARS, (Piece("wide", ("y2", "x2", "x1", "y1")),))
    return g0, g1


@dataclass
class ChiPair:
    N: int
    gamma0: MatrixFactorization
    gamma1: MatrixFactorization
    chi0: MFMorphism
    chi1: MFMorphism
    hom01: MorphismSolution
    hom10: MorphismSolution
    homotopy0: MFMorphism  # d h + h d = chi1 chi0 - (x2 - x1) id
    homotopy1: MFMorphism  # d h + h d = chi0 chi1 - (x2 - x1) id


def _target_view(P: MatrixFactorization, sh) -> MatrixFactorization:
    return shift(P, *sh)


@lru_cache(maxsize=None)
def chi_pair(N: int) -> ChiPair:
    """chi0: C(G0) -> C(G1){0,-1} and chi1: C(G1) -> C(G0){0,-1} by linear solve."""
    g0, g1 = local_graphs()
    M0, M1 = moy_mf(g0, N), moy_mf(g1, N)
    ring = M0.ring
    sol01 = solve_morphisms(M0, M1, (0, 0, -1))
    sol10 = solve_morphisms(M1, M0, (0, 0, -1))
    if len(sol01.modulo_homotopy) != 1 or len(sol10.modulo_homotopy) != 1:
        raise MFError(
            f"expected one-dimensional chi spaces, got {len(sol01.modulo_homotopy)} and "
            f"{len(sol10.modulo_homotopy)}")
    chi0 = sol01.space.to_morphism(sol01.modulo_homotopy[0])
    chi1 = sol10.space.to_morphism(sol10.modulo_homotopy[0])
    x21 = ring.var("x2") - ring.var("x1")
    # normalize chi1 so that chi1 chi0 is homotopic to (x2 - x1) id
    comp = chi0.compose(chi1)
    sol00 = solve_morphisms(M0, M0, (0, 0, -2))
    ident = identity_morphism(M0, x21)
    ech = sol00.homotopy_echelon()
    res_c, _ = ech.reduce(sol00.space.to_vector(comp))
    res_i, _ = ech.reduce(sol00.space.to_vector(ident))
    scale = _proportionality(res_c, res_i)
    if scale is None or scale == 0:
        raise MFError("chi1 chi0 is not a nonzero multiple of (x2 - x1) id modulo homotopy")
    chi1 = chi1.scale(qdiv(1, scale))
    h0 = find_homotopy(sol00, _difference(chi0.compose(chi1), ident))
    sol11 = solve_morphisms(M1, M1, (0, 0, -2))
    h1 = find_homotopy(sol11, _difference(chi1.compose(chi0), identity_morphism(M1, x21)))
    if h0 is None or h1 is None:
        raise MFError("chi composites are not homotopic to (x2 - x1) id")
    return ChiPair(N, M0, M1, chi0, chi1, sol01, sol10, h0, h1)


def _difference(f: MFMorphism, g: MFMorphism) -> MFMorphism:
    out = dict(f.entries)
    for k, v in g.entries.items():
        out[k] = out[k] - v if k in out else -v
    return replace(f, entries={k: v for k, v in out.items() if v})


def _proportionality(u: dict, v: dict):
    """c with u = c v, or None."""
    if not v:
        return None
    k0 = next(iter(v))
    c = qdiv(u.get(k0, 0), v[k0])
    for k in set(u) | set(v):
        if u.get(k, 0) != c * v.get(k, 0):
            return None
    return c


# ---------------------------------------------------------------------------
# braid closures and resolved braids as marked MOY graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Marking:
    """Arc variables of a closed braid diagram.

    ``crossings[l]`` is (in_left, in_right, out_left, out_right) for the l-th
    letter; ``circles`` lists variables of strands no crossing touches.
    """

    variables: tuple[str, ...]
    crossings: tuple[tuple[str, str, str, str], ...]
    circles: tuple[str, ...]


def mark_closure(strands: int, positions: Sequence[int]) -> Marking:
    """One variable per arc of the closure of a braid whose l-th crossing sits
    at strand positions (positions[l], positions[l] + 1)."""
    b = strands
    touching: dict[int, list[int]] = {p: [] for p in range(1, b + 1)}
    for l, i in enumerate(positions):
        touching[i].append(l)
        touching[i + 1].append(l)
    name: dict[tuple[int, int], str] = {}
    circles: list[str] = []
    count = 0
    for p in range(1, b + 1):
        if not touching[p]:
            count += 1
            circles.append(f"x{count}")
            continue
        for l in touching[p]:
            count += 1
            name[(p, l)] = f"x{count}"
    crossings = []
    for l, i in enumerate(positions):
        ins = []
        for p in (i, i + 1):
            ls = touching[p]
            prev = ls[ls.index(l) - 1]  # cyclic: the last crossing feeds the first
            ins.append(name[(p, prev)])
        crossings.append((ins[0], ins[1], name[(i, l)], name[(i + 1, l)]))
    variables = tuple(f"x{t}" for t in range(1, count + 1))
    return Marking(variables, tuple(crossings), tuple(circles))


def resolution_graph(marking: Marking, r: Sequence[int]) -> MOYGraph:
    """Pieces in crossing order (two arcs or one wide edge each), then circles."""
    pieces = []
    for (yl, xr, xl, yr), ri in zip(marking.crossings, r):
        if ri:
            pieces.append(Piece("wide", (yl, xr, xl, yr)))
        else:
            pieces.append(Piece("arc", (yl, xl)))
            pieces.append(Piece("arc", (xr, yr)))
    pieces.extend(Piece("arc", (v, v)) for v in marking.circles)
    return MOYGraph(marking.variables, tuple(pieces))


def resolved_graph(G: ResolvedWord) -> MOYGraph:
    """Closed resolved braid as a marked MOY graph (one mark per 1-colored edge)."""
    return resolution_graph(mark_closure(G.strands, G.letters), [1] * len(G.letters))


# ---------------------------------------------------------------------------
# variable elimination
# ---------------------------------------------------------------------------

SPECIALIZERS = {
    "free": lambda p: p,
    "one": lambda p: p.specialize_a(1),
    "zero": lambda p: p.specialize_a(0),
}


@dataclass
class EliminationStep:
    row: int  # index of the removed row in the row list before this step
    var: str
    value: Poly  # var = value on the quotient
    rows_before: tuple[KoszulRow, ...]
    D: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not self.D:
            self.D = koszul_differential(self.rows_before)


def _linear_solve_for(a1: Poly, eliminated: set[str]):
    """If a1 = c*y - p with c a constant and y absent from p, return (y, p/c)."""
    ring = a1.ring
    for i in range(ring.nvars - 1, 0, -1):
        name = ring.names[i]
        if name in eliminated:
            continue
        unit = tuple(1 if t == i else 0 for t in range(ring.nvars))
        c = a1.terms.get(unit)
        if not c:
            continue
        if any(e[i] for e in a1.terms if e != unit):
            continue
        rest = a1 - ring.monomial(unit, c)
        return name, rest.scale(qdiv(-1, c))
    return None


@dataclass
class ReducedModel:
    """A Koszul factorization with some variables eliminated.

    ``full_rows`` is the original (specialized) row list, ``rows`` the
    remaining ones after substituting every eliminated variable.  ``Q`` maps
    the full model onto the reduced one and ``lift`` sends reduced cycles
    back to full-model cycles.
    """

    ring: Ring
    N: int
    base: Gen
    full_rows: tuple[KoszulRow, ...]
    rows: tuple[KoszulRow, ...]
    steps: tuple[EliminationStep, ...]
    active: tuple[int, ...]  # ring indices of the x variables still present
    gens: tuple[Gen, ...] = field(init=False)
    D: tuple = field(init=False)
    full_D: tuple = field(init=False)
    kept: tuple[int, ...] = field(init=False)  # full positions of the kept rows

    def __post_init__(self):
        self.gens = koszul_gens(self.rows, self.N, self.base)
        self.D = koszul_differential(self.rows)
        self.full_D = koszul_differential(self.full_rows)
        pos = list(range(len(self.full_rows)))
        for st in self.steps:
            pos.pop(st.row)
        self.kept = tuple(pos)
        self._subst = {st.var: st.value for st in self.steps}
        self._resolved = self._resolve_substitution()

    def _resolve_substitution(self) -> dict[str, Poly]:
        # final values of eliminated variables in terms of active ones
        out: dict[str, Poly] = {}
        for st in reversed(self.steps):
            out[st.var] = st.value.substitute(out) if out else st.value
        return out

    @property
    def full_gens(self) -> tuple[Gen, ...]:
        return koszul_gens(self.full_rows, self.N, self.base)

    def expand_index(self, S: int) -> int:
        """Full-model bitmask of a reduced generator."""
        out = 0
        for r, p in enumerate(self.kept):
            if S >> r & 1:
                out |= 1 << p
        return out

    def quotient(self, vec: dict[int, Poly]) -> dict[int, Poly]:
        """Q: full model -> reduced model (drop eliminated rows, substitute)."""
        inv = {p: r for r, p in enumerate(self.kept)}
        dropped = 0
        for r in range(len(self.full_rows)):
            if r not in inv:
                dropped |= 1 << r
        out: dict[int, Poly] = {}
        for S, p in vec.items():
            if S & dropped:
                continue
            T = 0
            for r, pr in enumerate(self.kept):
                if S >> pr & 1:
                    T |= 1 << r
            q = p.substitute(self._resolved) if self._resolved else p
            if q:
                out[T] = out[T] + q if T in out else q
        return {k: v for k, v in out.items() if v}

    def lift(self, vec: dict[int, Poly]) -> dict[int, Poly]:
        """A full-model cycle mapping to the given reduced cycle under Q."""
        cur = vec
        for st in reversed(self.steps):
            rows = st.rows_before
            r = st.row
            D = st.D
            low = (1 << r) - 1
            # insert a zero bit at position r
            m = {((S & ~low) << 1) | (S & low): p for S, p in cur.items()}
            dm: dict[int, Poly] = {}
            for S, p in m.items():
                for t, q in D[S]:
                    dm[t] = dm[t] + p * q if t in dm else p * q
            a1 = rows[r].a1
            t = {}
            for S, p in dm.items():
                if not p or S >> r & 1:
                    continue
                sign = -1 if bin(S & low).count("1") % 2 else 1
                t[S | (1 << r)] = divide_exact(p, a1).scale(-sign)
            for S, p in t.items():
                m[S] = m[S] + p if S in m else p
            cur = {k: v for k, v in m.items() if v}
        return cur


def eliminate(rows: Sequence[KoszulRow], ring: Ring, N: int, base: Gen,
              enabled: bool = True) -> ReducedModel:
    rows = tuple(rows)
    full = rows
    steps: list[EliminationStep] = []
    eliminated: set[str] = set()
    while enabled:
        found = None
        for r, row in enumerate(rows):
            hit = _linear_solve_for(row.a1, eliminated)
            if hit is not None:
                found = (r, hit)
                break
        if found is None:
            break
        r, (var, value) = found
        steps.append(EliminationStep(r, var, value, rows))
        eliminated.add(var)
        rows = tuple(
            row.map(lambda p: p.substitute({var: value}) if var in p.variables() else p)
            for k, row in enumerate(rows) if k != r)
    active = tuple(i for i in range(1, ring.nvars) if ring.names[i] not in eliminated)
    return ReducedModel(ring, N, base, full, rows, tuple(steps), active)


# ---------------------------------------------------------------------------
# cube complexes
# ---------------------------------------------------------------------------


@dataclass
class CubeEdge:
    source: int  # vertex index
    target: int
    crossing: int
    sign: int
    chi: str  # "chi0" or "chi1"


@dataclass
class CubeComplex:
    braid: BraidWord
    N: int
    mode: str
    ring: Ring
    marking: Marking
    vertices: list[CubeVertex]
    models: list[ReducedModel]
    edges: list[CubeEdge]
    chi: ChiPair

    def degrees(self) -> list[int]:
        return sorted({v.degree for v in self.vertices})

    def vertex_mf(self, v: int) -> MatrixFactorization:
        """Full (unreduced) factorization at a vertex."""
        m = self.models[v]
        return koszul(m.full_rows, self.ring, self.N, m.base)

    def out_edges(self, v: int) -> list[CubeEdge]:
        return [e for e in self.edges if e.source == v]

    def edge_map(self, e: CubeEdge, vec: dict[int, Poly]) -> dict[int, Poly]:
        """Signed chi ⊗ id on full-model vectors."""
        local = local_map(self.chi, e.chi, self.marking.crossings[e.crossing], self.ring, self.mode)
        shift_bits = 2 * e.crossing
        block = 3 << shift_bits
        out: dict[int, Poly] = {}
        for S, p in vec.items():
            s = (S >> shift_bits) & 3
            rest = S & ~block
            for t, q in local.get(s, ()):
                T = rest | (t << shift_bits)
                v = p * q
                out[T] = out[T] + v if T in out else v
        if e.sign < 0:
            return {k: -v for k, v in out.items() if v}
        return {k: v for k, v in out.items() if v}

    def check_edges_commute(self) -> bool:
        """Every edge map commutes with d_mf (exact, on the full models)."""
        for e in self.edges:
            Ms, Mt = self.vertex_mf(e.source), self.vertex_mf(e.target)
            for g in range(len(Ms.gens)):
                unit = {g: self.ring.one()}
                lhs = self.edge_map(e, Ms.apply(unit))
                rhs = Mt.apply(self.edge_map(e, unit))
                if _vec_sub(lhs, rhs):
                    return False
        return True

    def check_d_chi_squared(self) -> bool:
        """d_chi ∘ d_chi = 0 on every generator (every square face cancels)."""
        for v in range(len(self.vertices)):
            n = len(self.models[v].full_rows)
            for g in range(1 << n):
                total: dict[tuple[int, int], Poly] = {}
                for e1 in self.out_edges(v):
                    mid = self.edge_map(e1, {g: self.ring.one()})
                    for e2 in self.out_edges(e1.target):
                        for S, p in self.edge_map(e2, mid).items():
                            key = (e2.target, S)
                            total[key] = total[key] + p if key in total else p
                if any(p for p in total.values()):
                    return False
        return True

    def check_homogeneity(self) -> list[str]:
        bad = []
        for v in range(len(self.vertices)):
            bad += self.vertex_mf(v).homogeneity_violations() if self.mode == "free" else []
        return bad


def _vec_sub(u: dict[int, Poly], v: dict[int, Poly]) -> dict[int, Poly]:
    out = dict(u)
    for k, p in v.items():
        out[k] = out[k] - p if k in out else -p
    return {k: p for k, p in out.items() if p}


_LOCAL_CACHE: dict = {}


def local_map(chi: ChiPair, which: str, ends: tuple[str, str, str, str], ring: Ring,
              mode: str) -> dict[int, list[tuple[int, Poly]]]:
    """chi0 or chi1 with local variables renamed; keyed by source block bits."""
    key = (chi.N, which, ends, ring, mode)
    if key in _LOCAL_CACHE:
        return _LOCAL_CACHE[key]
    f = chi.chi0 if which == "chi0" else chi.chi1
    yl, xr, xl, yr = ends
    rename = {"x1": xl, "x2": xr, "y1": yr, "y2": yl}
    src_ring = f.source.ring
    spec = SPECIALIZERS[mode]
    out: dict[int, list[tuple[int, Poly]]] = {}
    for (t, s), p in f.entries.items():
        q = _rename(p, src_ring, ring, rename)
        q = spec(q)
        if q:
            out.setdefault(s, []).append((t, q))
    _LOCAL_CACHE[key] = out
    return out


def _rename(p: Poly, src: Ring, dst: Ring, rename: dict[str, str]) -> Poly:
    pos = [dst.index(rename.get(n, n)) for n in src.names]
    terms = {}
    for e, c in p.terms.items():
        new = [0] * dst.nvars
        for i, k in enumerate(e):
            if k:
                new[pos[i]] += k
        key = tuple(new)
        terms[key] = terms.get(key, 0) + c
    return Poly(dst, terms)


def braid_complex(B: BraidWord, N: int, mode: str = "free", eliminate_vars: bool = True) -> CubeComplex:
    """The cube of resolutions of B with vertex factorizations and chi edges.

    Vertex v carries the rows of its resolution graph (crossing blocks in
    crossing order, then circles) and base shift <c>{w, (N-1)w + m+ - m-}
    plus {0,-1} per wide edge.
    """
    if mode not in SPECIALIZERS:
        raise MFError(f"unknown mode {mode!r}")
    marking = mark_closure(B.strands, [abs(x) for x in B.letters])
    ring = Ring.with_x(marking.variables)
    chi = chi_pair(N)
    verts = cube(B, N)
    spec = SPECIALIZERS[mode]
    models = []
    for v in verts:
        G = resolution_graph(marking, v.r)
        rows, wides = moy_rows(G, N, ring)
        rows = tuple(r.map(spec) for r in rows)
        base = (v.z2, v.a_shift, v.x_shift - wides)
        models.append(eliminate(rows, ring, N, base, eliminate_vars))
    index = {v.r: n for n, v in enumerate(verts)}
    edges = []
    for n, v in enumerate(verts):
        for c, x in enumerate(B.letters):
            if (x < 0 and v.r[c] == 0) or (x > 0 and v.r[c] == 1):
                r2 = list(v.r)
                r2[c] ^= 1
                sign = -1 if sum(v.r[:c]) % 2 else 1
                edges.append(CubeEdge(n, index[tuple(r2)], c, sign, "chi0" if x < 0 else "chi1"))
    return CubeComplex(B, N, mode, ring, marking, verts, models, edges, chi)


def resolved_model(G: ResolvedWord, N: int, mode: str = "free", eliminate_vars: bool = True) -> ReducedModel:
    """Reduced factorization of a closed resolved braid (no vertex shift)."""
    graph = resolved_graph(G)
    ring = graph.ring
    rows, wides = moy_rows(graph, N, ring)
    spec = SPECIALIZERS[mode]
    rows = tuple(r.map(spec) for r in rows)
    return eliminate(rows, ring, N, (0, 0, -wides), eliminate_vars)


def specialize(C: CubeComplex, mode: str) -> CubeComplex:
    """Rebuild the cube with a -> 1 (``"one"``) or a -> 0 (``"zero"``)."""
    if C.mode != "free" and C.mode != mode:
        raise MFError(f"cannot specialize a {C.mode!r} complex to {mode!r}")
    return braid_complex(C.braid, C.N, mode, bool(any(m.steps for m in C.models)))


def dump_complex(C: CubeComplex) -> dict:
    """Debug dump with stable field names and ordering."""
    return {
        "braid": str(C.braid),
        "N": C.N,
        "mode": C.mode,
        "variables": list(C.ring.names),
        "vertices": [
            {"r": list(v.r), "degree": v.degree, "base": list(m.base),
             "rows": [[str(r.a0), str(r.a1)] for r in m.full_rows],
             "eliminated": [st.var for st in m.steps]}
            for v, m in zip(C.vertices, C.models)
        ],
        "edges": [{"source": e.source, "target": e.target, "crossing": e.crossing,
                   "sign": e.sign, "map": e.chi} for e in C.edges],
    }
