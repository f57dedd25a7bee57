"""Finitely generated graded Q[a]-modules and their standard decomposition.

A module is recorded by generator multiplicities: free summands Q[a]{j,k}
and torsion summands Q[a]/(a^l){j,k}, grouped by (eps, i).  Homology only
ever hands us graded dimensions and the matrices of multiplication by a, so
``module_structure`` recovers the decomposition from the rank profile

    rho_l(s) = rank(a^l : M_s -> M_{s+2l}).

A summand Q[a]/(a^L){t} contributes to rho_l(s) exactly when t <= s and
(s - t)/2 + l < L, which gives

    #Q[a]/(a^l){s} = (rho_{l-1}(s) - rho_l(s)) - (rho_l(s-2) - rho_{l+1}(s-2)).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .exactalg import Echelon, vec_axpy


class WindowTooSmall(ValueError):
    """The a-degree window cannot separate long torsion from free summands."""


@dataclass
class GradedQaModule:
    """Generators per (eps, i): ``free[(j, k)]`` and ``torsion[(l, j, k)]``."""

    free: dict[tuple[int, int], Counter] = field(default_factory=dict)
    torsion: dict[tuple[int, int], Counter] = field(default_factory=dict)

    def add_free(self, eps: int, i: int, j: int, k: int, mult: int = 1):
        if mult:
            self.free.setdefault((eps % 2, i), Counter())[(j, k)] += mult

    def add_torsion(self, eps: int, i: int, l: int, j: int, k: int, mult: int = 1):
        if mult:
            self.torsion.setdefault((eps % 2, i), Counter())[(l, j, k)] += mult

    def components(self) -> list[tuple[int, int]]:
        keys = {key for key, c in self.free.items() if +c} | {key for key, c in self.torsion.items() if +c}
        return sorted(keys, key=lambda t: (t[1], t[0]))

    def restrict(self, kmin: int | None = None, kmax: int | None = None) -> "GradedQaModule":
        def ok(k):
            return (kmin is None or k >= kmin) and (kmax is None or k <= kmax)

        out = GradedQaModule()
        for (e, i), c in self.free.items():
            for (j, k), m in c.items():
                if ok(k):
                    out.add_free(e, i, j, k, m)
        for (e, i), c in self.torsion.items():
            for (l, j, k), m in c.items():
                if ok(k):
                    out.add_torsion(e, i, l, j, k, m)
        return out

    def canonical(self) -> tuple:
        f = tuple(sorted((key, tuple(sorted((x, m) for x, m in c.items() if m)))
                         for key, c in self.free.items() if +c))
        t = tuple(sorted((key, tuple(sorted((x, m) for x, m in c.items() if m)))
                         for key, c in self.torsion.items() if +c))
        return f, t

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedQaModule):
            return NotImplemented
        return self.canonical() == other.canonical()

    def is_zero(self) -> bool:
        return not self.components()

    def free_rank(self, eps: int, i: int, k: int) -> int:
        return sum(m for (j, kk), m in self.free.get((eps % 2, i), Counter()).items() if kk == k)

    def dims(self, jmin: int, jmax: int, kmin: int, kmax: int) -> dict:
        """Graded dimensions of the module inside a window."""
        out: Counter = Counter()
        for (e, i), c in self.free.items():
            for (j, k), m in c.items():
                if kmin <= k <= kmax:
                    for jj in range(max(j, jmin), jmax + 1):
                        if (jj - j) % 2 == 0:
                            out[(e, i, jj, k)] += m
        for (e, i), c in self.torsion.items():
            for (l, j, k), m in c.items():
                if kmin <= k <= kmax:
                    for t in range(l):
                        jj = j + 2 * t
                        if jmin <= jj <= jmax:
                            out[(e, i, jj, k)] += m
        return {key: v for key, v in out.items() if v}

    def to_json(self) -> list[dict]:
        comps = []
        for e, i in self.components():
            free = [{"j": j, "k": k, "mult": m}
                    for (j, k), m in sorted(self.free.get((e, i), Counter()).items()) if m]
            tor = [{"l": l, "j": j, "k": k, "mult": m}
                   for (l, j, k), m in sorted(self.torsion.get((e, i), Counter()).items(),
                                              key=lambda t: (t[0][1], t[0][2], t[0][0])) if m]
            comps.append({"eps": e, "i": i, "free": free, "torsion": tor})
        return comps

    @classmethod
    def from_json(cls, comps: list[dict]) -> "GradedQaModule":
        out = cls()
        for c in comps:
            for g in c["free"]:
                out.add_free(c["eps"], c["i"], g["j"], g["k"], g["mult"])
            for g in c["torsion"]:
                out.add_torsion(c["eps"], c["i"], g["l"], g["j"], g["k"], g["mult"])
        return out


def _rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        if v:
            ech.add(v)
    return len(ech)


def _apply(cols: list[dict], vec: dict) -> dict:
    out: dict = {}
    for c, x in vec.items():
        vec_axpy(out, x, cols[c])
    return out


def module_structure(data: dict, window) -> GradedQaModule:
    """Decompose from ``data[(eps, i, k)] = (dims_by_j, a_maps_by_j)``.

    ``a_maps_by_j[j]`` is the list of images (as sparse vectors) of the basis
    of M_j under a; a missing entry means the zero map.
    """
    out = GradedQaModule()
    jmax = window.jmax
    for (eps, i, k), (dims, amaps) in sorted(data.items(), key=lambda t: (t[0][1], t[0][0], t[0][2])):
        cache: dict[tuple[int, int], int] = {}

        def rho(s: int, l: int) -> int:
            if dims.get(s, 0) == 0:
                return 0
            if l == 0:
                return dims[s]
            if s + 2 * l > jmax:
                raise WindowTooSmall(f"a-rank from {s} by {l} steps leaves the window")
            key = (s, l)
            if key not in cache:
                vecs = [{c: 1} for c in range(dims[s])]
                for t in range(l):
                    jj = s + 2 * t
                    if jj not in amaps or not dims.get(jj + 2):
                        vecs = []
                        break
                    vecs = [_apply(amaps[jj], v) for v in vecs]
                cache[key] = _rank(vecs)
            return cache[key]

        for s in sorted(dims):
            gens = dims[s] - (rho(s - 2, 1) if s - 2 >= window.jmin else 0)
            if gens < 0:
                raise WindowTooSmall("negative generator count")
            used = 0
            l = 1
            while s + 2 * l <= jmax:
                below = (rho(s - 2, l) - rho(s - 2, l + 1)) if s - 2 >= window.jmin and s + 2 * l <= jmax else 0
                n = (rho(s, l - 1) - rho(s, l)) - below
                if n < 0:
                    raise WindowTooSmall(f"inconsistent a-rank profile at {(eps, i, s, k)}")
                out.add_torsion(eps, i, l, s, k, n)
                used += n
                l += 1
            free = gens - used
            if free < 0:
                raise WindowTooSmall(f"inconsistent generator count at {(eps, i, s, k)}")
            out.add_free(eps, i, s, k, free)
    return out
