"""Graded dimensions of closed resolved braids by MOY decomposition.

This is an independent route to H(C(G), d_mf): no matrices, only the
empty-braid formula and three local decompositions applied along the weight
induction.  Series are generating functions in tau (a-shift) and q
(x-shift), split by part (free / torsion) and Z2 degree.  Free parts are
Laurent polynomials; a torsion part is a numerator over (1 - q^2)^depth.

Concentric circles need depth > 1: once a = 0 the circle potentials vanish
and every circle variable but one is unconstrained, so the factor M0 of the
empty-braid formula carries a full polynomial ring Q[x] and contributes its
own 1 / (1 - q^2).
"""

from __future__ import annotations

import random
from collections import Counter
from math import comb
from dataclasses import dataclass, field

from .braid import ResolvedWord, induction_case
from .modules import GradedQaModule

Laurent = dict  # (j, k) -> int


class NegativeCoefficient(ArithmeticError):
    """A subtraction produced a negative multiplicity; the trace says where."""

    def __init__(self, msg: str, trace: list | None = None):
        super().__init__(msg)
        self.trace = trace or []


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _add(p: dict, q: dict, c: int = 1) -> dict:
    out = dict(p)
    for key, v in q.items():
        out[key] = out.get(key, 0) + c * v
    return _clean(out)


def _mul(p: dict, q: dict) -> dict:
    out: Counter = Counter()
    for (j1, k1), c1 in p.items():
        for (j2, k2), c2 in q.items():
            out[(j1 + j2, k1 + k2)] += c1 * c2
    return _clean(out)


def _shift(p: dict, j: int, k: int) -> dict:
    return {(a + j, b + k): v for (a, b), v in p.items()}


def _times_one_minus_q2(p: dict, times: int) -> dict:
    for _ in range(times):
        p = _add(p, _shift(p, 0, 2), -1)
    return p


def _divide_one_minus_q2(p: dict):
    """Exact division of a numerator by (1 - q^2), or None."""
    out: dict = {}
    # the quotient is the running sum along each (j, parity) class
    classes: dict = {}
    for (j, k), v in p.items():
        classes.setdefault((j, k % 2), []).append((k, v))
    for (j, _), terms in classes.items():
        terms.sort()
        run = 0
        k = terms[0][0]
        coeffs = dict(terms)
        top = terms[-1][0]
        while k <= top:
            run += coeffs.get(k, 0)
            if k == top:
                if run:
                    return None
                break
            if run:
                out[(j, k)] = run
            k += 2
    return out


def _expand(p: dict, depth: int, kmax: int) -> dict:
    """Coefficients of p / (1 - q^2)^depth up to q-degree kmax."""
    out: Counter = Counter()
    for (j, k0), v in p.items():
        n = 0
        while k0 + 2 * n <= kmax:
            out[(j, k0 + 2 * n)] += v * comb(n + depth - 1, depth - 1)
            n += 1
    return {key: c for key, c in out.items() if c}


@dataclass(frozen=True)
class ModuleSeries:
    """``free[eps]`` maps (j, k) to the multiplicity of Q[a]{j,k}.  The torsion
    series of Q[a]/(a) summands is ``torsion[eps] / (1 - q^2)^depth``; the
    depth grows with the number of circle variables left unconstrained once
    a = 0.  In the ``sln`` variant j is always 0 and torsion is absent."""

    free: tuple[dict, dict]
    torsion: tuple[dict, dict]
    variant: str = "triple"
    depth: int = 1

    def __post_init__(self):
        # keep the torsion fraction in lowest terms
        depth = self.depth
        tor = list(self.torsion)
        if not any(tor):
            depth = 1
        while depth > 1:
            q = [_divide_one_minus_q2(t) for t in tor]
            if any(x is None for x in q):
                break
            tor, depth = q, depth - 1
        object.__setattr__(self, "torsion", tuple(tor))
        object.__setattr__(self, "depth", depth)

    @classmethod
    def zero(cls, variant: str = "triple") -> "ModuleSeries":
        return cls(({}, {}), ({}, {}), variant)

    @classmethod
    def unit(cls, variant: str = "triple") -> "ModuleSeries":
        return cls(({(0, 0): 1}, {}), ({}, {}), variant)

    def _check(self, other: "ModuleSeries"):
        if self.variant != other.variant:
            raise ValueError("series of different variants")

    def _torsion_at(self, depth: int) -> tuple[dict, dict]:
        return tuple(_times_one_minus_q2(t, depth - self.depth) for t in self.torsion)

    def _combine(self, other: "ModuleSeries", c: int) -> "ModuleSeries":
        self._check(other)
        depth = max(self.depth, other.depth)
        mine, theirs = self._torsion_at(depth), other._torsion_at(depth)
        return ModuleSeries(
            tuple(_add(a, b, c) for a, b in zip(self.free, other.free)),
            tuple(_add(a, b, c) for a, b in zip(mine, theirs)),
            self.variant, depth,
        )

    def __add__(self, other: "ModuleSeries") -> "ModuleSeries":
        return self._combine(other, 1)

    def __sub__(self, other: "ModuleSeries") -> "ModuleSeries":
        out = self._combine(other, -1)
        bad = out.negative_terms()
        if bad:
            raise NegativeCoefficient(f"negative multiplicities after subtraction: {bad[:4]}")
        return out

    def shift(self, z2: int = 0, j: int = 0, k: int = 0) -> "ModuleSeries":
        if self.variant == "sln":
            j = 0
        free = tuple(_shift(p, j, k) for p in self.free)
        tor = tuple(_shift(p, j, k) for p in self.torsion)
        if z2 % 2:
            free, tor = free[::-1], tor[::-1]
        return ModuleSeries(free, tor, self.variant, self.depth)

    def scale(self, c: int) -> "ModuleSeries":
        return ModuleSeries(
            tuple(_clean({key: c * v for key, v in p.items()}) for p in self.free),
            tuple(_clean({key: c * v for key, v in p.items()}) for p in self.torsion),
            self.variant, self.depth,
        )

    def deepen(self, n: int) -> "ModuleSeries":
        """Divide the torsion series by (1 - q^2)^n."""
        return ModuleSeries(self.free, self.torsion, self.variant, self.depth + n)

    def tensor(self, other: "ModuleSeries") -> "ModuleSeries":
        """Tensor over Q[a]; at most one factor may carry torsion."""
        self._check(other)
        if any(self.torsion) and any(other.torsion):
            raise ValueError("tensor of two torsion series is not supported")
        free = [{}, {}]
        tor = [{}, {}]
        for e1 in (0, 1):
            for e2 in (0, 1):
                e = (e1 + e2) % 2
                free[e] = _add(free[e], _mul(self.free[e1], other.free[e2]))
                tor[e] = _add(tor[e], _mul(self.free[e1], other.torsion[e2]))
                tor[e] = _add(tor[e], _mul(self.torsion[e1], other.free[e2]))
        depth = other.depth if any(other.torsion) else self.depth
        return ModuleSeries(tuple(free), tuple(tor), self.variant, depth)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleSeries):
            return NotImplemented
        return (self.variant == other.variant and self.depth == other.depth
                and list(self.free) == list(other.free)
                and list(self.torsion) == list(other.torsion))

    def torsion_coefficients(self, eps: int, kmax: int) -> dict:
        return _expand(self.torsion[eps], self.depth, kmax)

    def negative_terms(self) -> list:
        bad = []
        for e in (0, 1):
            for key, v in self.free[e].items():
                if v < 0:
                    bad.append(("free", e, key, v))
            tor = self.torsion[e]
            if not tor:
                continue
            # past the numerator the coefficients are polynomial of degree
            # depth - 1 in k, so a margin of a few periods settles the sign
            top = max(k for _, k in tor) + 2 * (2 * self.depth + 2)
            for key, v in sorted(_expand(tor, self.depth, top).items()):
                if v < 0:
                    bad.append(("torsion", e, key, v))
        return bad

    def is_nonnegative(self) -> bool:
        return not self.negative_terms()

    def tau_support(self) -> set[int]:
        return {j for p in self.free + self.torsion for (j, _) in p}


def series_arith(op: str, S: ModuleSeries, T=None, **kw) -> ModuleSeries:
    """Dispatch for ``add``, ``sub``, ``shift`` and ``scale``."""
    if op == "add":
        return S + T
    if op == "sub":
        return S - T
    if op == "shift":
        return S.shift(kw.get("z2", 0), kw.get("j", 0), kw.get("k", 0))
    if op == "scale":
        return S.scale(T)
    raise ValueError(f"unknown series operation {op!r}")


def _geom(N: int, start: int) -> dict:
    return {(-1, 1 - N + 2 * l): 1 for l in range(start, N)}


def circle_series(N: int, variant: str = "triple") -> ModuleSeries:
    if variant == "sln":
        return ModuleSeries(({}, {(0, 1 - N + 2 * l): 1 for l in range(N)}), ({}, {}), "sln")
    return ModuleSeries(({}, _geom(N, 0)), ({}, {(-1, N + 1): 1}), variant)


def _m0(N: int, variant: str) -> ModuleSeries:
    j = 0 if variant == "sln" else -1
    return ModuleSeries(({(0, 0): 1}, {(j, 1 - N): 1}), ({}, {}), variant)


def _m1(N: int, variant: str) -> ModuleSeries:
    c = circle_series(N, variant)
    return ModuleSeries(c.free, ({}, {}), variant)


def _minf(N: int, variant: str) -> ModuleSeries:
    if variant == "sln":
        return ModuleSeries.zero("sln")
    return ModuleSeries(({}, {}), ({}, {(-1, N + 1): 1}), variant)


def empty_braid_series(b: int, N: int, variant: str = "triple") -> ModuleSeries:
    """M1^b + (sum_j M0[x]^j M1^(b-1-j)) M_inf for b concentric circles."""
    if b == 0:
        return ModuleSeries.unit(variant)
    m0, m1, minf = _m0(N, variant), _m1(N, variant), _minf(N, variant)

    def power(S, n):
        out = ModuleSeries.unit(variant)
        for _ in range(n):
            out = out.tensor(S)
        return out

    total = power(m1, b)
    for j in range(b):
        # each M0 factor is Q[x]-many copies of Q[a] + Q[a]<1>{-1,1-N}
        total = total + power(m0, j).tensor(power(m1, b - 1 - j)).tensor(minf).deepen(j)
    return total


@dataclass
class RewriteStep:
    case: str
    word: str
    detail: str


@dataclass
class RewriteTrace:
    steps: list[RewriteStep] = field(default_factory=list)

    def add(self, case: str, G: ResolvedWord, detail: str = ""):
        self.steps.append(RewriteStep(case, str(G), detail))


def _canonical(G: ResolvedWord) -> tuple:
    w = G.letters
    if not w:
        return (G.strands, ())
    return (G.strands, min(w[k:] + w[:k] for k in range(len(w))))


class Oracle:
    """Memoized reduction; one instance per (N, variant)."""

    def __init__(self, N: int, variant: str = "triple", rng: random.Random | None = None):
        if variant not in ("triple", "sln"):
            raise ValueError(f"unknown variant {variant!r}")
        self.N = N
        self.variant = variant
        self.rng = rng
        self.memo: dict[tuple, ModuleSeries] = {}
        self.trace = RewriteTrace()

    def series(self, G: ResolvedWord) -> ModuleSeries:
        key = _canonical(G)
        if key in self.memo:
            return self.memo[key]
        S = self._reduce(G)
        self.memo[key] = S
        return S

    def _reduce(self, G: ResolvedWord) -> ModuleSeries:
        N, var = self.N, self.variant
        b = G.strands
        case = induction_case(G, self.rng)
        W = case.prefix
        if case.kind == "empty":
            self.trace.add("empty", G)
            return empty_braid_series(b, N, var)
        try:
            if case.kind == "A":
                self.trace.add("a", G, f"peel t{case.index}")
                big = self.series(ResolvedWord(b, W))
                small = self.series(ResolvedWord(b - 1, W))
                return (big - small.shift(1, -1, 1 - N)).shift(0, 0, -1)
            j = case.index
            if case.kind == "B":
                self.trace.add("b", G, f"t{j} t{j}")
                S = self.series(ResolvedWord(b, W + (j,)))
                return S.shift(0, 0, 1) + S.shift(0, 0, -1)
            self.trace.add("c", G, f"t{j} t{j-1} t{j}")
            other = self.series(ResolvedWord(b, W + (j - 1, j, j - 1)))
            plus = self.series(ResolvedWord(b, W + (j,)))
            minus = self.series(ResolvedWord(b, W + (j - 1,)))
            return (other + plus) - minus
        except NegativeCoefficient as exc:
            raise NegativeCoefficient(f"{exc} while reducing {G}", self.trace.steps) from None


def reduce_series(G: ResolvedWord, N: int, variant: str = "triple",
                  rng: random.Random | None = None) -> tuple[ModuleSeries, RewriteTrace]:
    oracle = Oracle(N, variant, rng)
    S = oracle.series(G)
    return S, oracle.trace


def series_module(S: ModuleSeries, kmax: int) -> GradedQaModule:
    """Generators of the module a series describes, torsion cut at kmax."""
    out = GradedQaModule()
    for e in (0, 1):
        for (j, k), m in S.free[e].items():
            out.add_free(e, 0, j, k, m)
        for (j, k), v in S.torsion_coefficients(e, kmax).items():
            out.add_torsion(e, 0, 1, j, k, v)
    return out


def truncate_series(S: ModuleSeries, window) -> dict:
    """Graded dimensions per (part, eps, j, k) inside a window."""
    out: Counter = Counter()
    for e in (0, 1):
        for (j, k), m in S.free[e].items():
            if window.kmin <= k <= window.kmax:
                if S.variant == "sln":
                    out[("free", e, 0, k)] += m
                    continue
                for jj in range(max(j, window.jmin), window.jmax + 1):
                    if (jj - j) % 2 == 0:
                        out[("free", e, jj, k)] += m
        for (j, k), v in S.torsion_coefficients(e, window.kmax).items():
            if window.jmin <= j <= window.jmax and k >= window.kmin:
                out[("torsion", e, j, k)] += v
    return {key: v for key, v in out.items() if v}


def total_dims(S: ModuleSeries, window) -> dict:
    """Graded dimensions per (eps, j, k), free and torsion together."""
    out: Counter = Counter()
    for (_, e, j, k), v in truncate_series(S, window).items():
        out[(e, j, k)] += v
    return {key: v for key, v in out.items() if v}
