"""Exact bigraded polynomial arithmetic and sparse linear algebra over Q.

Polynomials live in Q[a, x_1, ..., x_m] with deg a = (2, 0) and
deg x_i = (0, 2).  Coefficients are Python ints when integral and
``Fraction`` otherwise; nothing here ever touches a float.
"""

from __future__ import annotations

from operator import add
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class AlgebraError(ValueError):
    """Raised on variable-set mismatches and failed exact operations."""


def _q(value) -> int | Fraction:
    """Normalize a rational to int when integral."""
    if type(value) is int:
        return value
    if type(value) is not Fraction:
        if isinstance(value, int):
            return int(value)
        value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return value


def qdiv(num, den) -> int | Fraction:
    if isinstance(num, int) and isinstance(den, int):
        if num % den == 0:
            return num // den
        return Fraction(num, den)
    return _q(Fraction(num) / Fraction(den))


@dataclass(frozen=True)
class Ring:
    """Variable list of a bigraded polynomial ring; index 0 is ``a`` when present."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise AlgebraError(f"duplicate variable names in {self.names}")

    @classmethod
    def with_x(cls, xs: Sequence[str]) -> "Ring":
        return cls(("a",) + tuple(xs))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise AlgebraError(f"variable {name!r} not in ring {self.names}") from None

    def has_a(self) -> bool:
        return bool(self.names) and self.names[0] == "a"

    def bidegree(self, exp: Exponent) -> tuple[int, int]:
        if self.has_a():
            return 2 * exp[0], 2 * (sum(exp) - exp[0])
        return 0, 2 * sum(exp)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: 1})

    def const(self, c) -> "Poly":
        c = _q(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Poly":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return Poly(self, {tuple(exp): 1})

    def monomial(self, exp: Exponent, coef=1) -> "Poly":
        return Poly(self, {tuple(exp): _q(coef)} if coef else {})


def _sort_key(exp: Exponent):
    # graded lex with a < x_1 < ... < x_m: compare total degree, then
    # exponent of the largest variable first
    return (sum(exp), tuple(reversed(exp)))


class Poly:
    """Immutable sparse polynomial over a :class:`Ring`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, int | Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    def _check(self, other: "Poly"):
        if other.ring != self.ring:
            raise AlgebraError(f"variable-set mismatch: {self.ring.names} vs {other.ring.names}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return self.ring.const(other)

    # queries ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.ring.bidegree(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def bidegree(self) -> tuple[int, int] | None:
        """Bidegree of a homogeneous polynomial; ``None`` for zero."""
        degs = self.bidegrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"polynomial is not homogeneous: {self}")
        return next(iter(degs))

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def constant(self) -> int | Fraction:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def sorted_terms(self) -> list[tuple[Exponent, int | Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _sort_key(t[0]), reverse=True)

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = _q(c)
        if not c:
            return self.ring.zero()
        return Poly._raw(self.ring, {e: _q(v * c) for e, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return Poly._raw(self.ring, {e: _q(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def mul_monomial(self, exp: Exponent, coef=1) -> "Poly":
        return Poly._raw(
            self.ring,
            {tuple(a + b for a, b in zip(e, exp)): _q(c * coef) for e, c in self.terms.items()},
        )

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise AlgebraError("negative power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def substitute(self, mapping: Mapping[str, "Poly | int | Fraction"]) -> "Poly":
        """Substitute variables by polynomials (or scalars) of the same ring."""
        idx = {self.ring.index(k): (v if isinstance(v, Poly) else self.ring.const(v))
               for k, v in mapping.items()}
        for v in idx.values():
            self._check(v)
        out = self.ring.zero()
        powers: dict[tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            rest = list(e)
            term = None
            for i, val in idx.items():
                k = e[i]
                if k:
                    rest[i] = 0
                    if (i, k) not in powers:
                        powers[(i, k)] = val ** k
                    term = powers[(i, k)] if term is None else term * powers[(i, k)]
            base = Poly._raw(self.ring, {tuple(rest): c})
            out = out + (base if term is None else base * term)
        return out

    def specialize_a(self, value: int) -> "Poly":
        """Set ``a`` to 0 or 1 keeping the ring (the a-exponent becomes 0)."""
        if not self.ring.has_a():
            raise AlgebraError("ring has no variable a")
        out: dict = {}
        for e, c in self.terms.items():
            if e[0] and value == 0:
                continue
            k = (0,) + e[1:]
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly._raw(self.ring, out)

    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in ``ring``; every used variable must exist there."""
        pos = [ring.index(n) for n in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            new = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    new[pos[i]] = k
            out[tuple(new)] = c
        return Poly._raw(ring, out)

    # printing -------------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in self.sorted_terms()]


def poly_arith(op: str, p: Poly, q) -> Poly:
    """Dispatch for ``add``, ``mul``, ``scale`` and ``substitute``."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    if op == "substitute":
        return p.substitute(q)
    raise AlgebraError(f"unknown operation {op!r}")


def _leading(p: Poly) -> tuple[Exponent, int | Fraction]:
    return max(p.terms.items(), key=lambda t: _sort_key(t[0]))


def divide_exact(p: Poly, q: Poly) -> Poly:
    """Return r with r*q == p; raise if q does not divide p."""
    p._check(q)
    if q.is_zero():
        raise AlgebraError("division by zero polynomial")
    lead_e, lead_c = _leading(q)
    rem = dict(p.terms)
    quot: dict = {}
    qterms = list(q.terms.items())
    while rem:
        e, c = max(rem.items(), key=lambda t: _sort_key(t[0]))
        diff = tuple(a - b for a, b in zip(e, lead_e))
        if min(diff) < 0:
            raise AlgebraError(f"{q} does not divide {p}")
        f = qdiv(c, lead_c)
        quot[diff] = f
        for qe, qc in qterms:
            k = tuple(a + b for a, b in zip(qe, diff))
            v = rem.get(k, 0) - f * qc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return Poly(p.ring, {e: _q(c) for e, c in quot.items()})


@lru_cache(maxsize=None)
def newton_g(N: int) -> Poly:
    """The polynomial g in (e1, e2) with g(x+y, xy) = x^(N+1) + y^(N+1)."""
    if N < 1:
        raise AlgebraError("N must be positive")
    ring = Ring(("e1", "e2"))
    e1, e2 = ring.var("e1"), ring.var("e2")
    p_prev, p_cur = ring.const(2), e1
    for _ in range(2, N + 2):
        p_prev, p_cur = p_cur, e1 * p_cur - e2 * p_prev
    return p_cur


def quotient_pi(u: Poly, v: Poly, N: int) -> Poly:
    """(u^(N+1) - v^(N+1)) / (u - v) = sum_t u^t v^(N-t); (N+1)u^N when u == v."""
    u._check(v)
    out = u.ring.zero()
    for t in range(N + 1):
        out = out + (u ** t) * (v ** (N - t))
    return out


def eval_g(N: int, s1: Poly, s2: Poly) -> Poly:
    """Evaluate newton_g(N) at (e1, e2) = (s1, s2)."""
    g = newton_g(N)
    out = s1.ring.zero()
    for (i, j), c in g.terms.items():
        out = out + (s1 ** i) * (s2 ** j) * c
    return out


def g_divided_differences(N: int, s1: Poly, s2: Poly, t1: Poly, t2: Poly) -> tuple[Poly, Poly]:
    """Divided differences of g used by the wide-edge factorization.

    Returns ((g(t1,t2) - g(s1,t2)) / (t1 - s1), (g(s1,t2) - g(s1,s2)) / (t2 - s2))
    computed symbolically, so the result stays valid when t1 == s1 or t2 == s2.
    """
    g = newton_g(N)
    first = s1.ring.zero()
    second = s1.ring.zero()
    for (i, j), c in g.terms.items():
        # t1^i t2^j - s1^i t2^j = (t1^i - s1^i) t2^j
        if i:
            first = first + _power_dd(t1, s1, i) * (t2 ** j) * c
        if j:
            second = second + (s1 ** i) * _power_dd(t2, s2, j) * c
    return first, second


def _power_dd(u: Poly, v: Poly, n: int) -> Poly:
    # (u^n - v^n)/(u - v)
    return quotient_pi(u, v, n - 1)


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors in ``nvars`` variables of total degree ``degree``."""
    return list(_monomials(nvars, degree))


@lru_cache(maxsize=4096)
def _monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=lambda e: tuple(reversed(e)))
    return tuple(out)


# ---------------------------------------------------------------------------
# sparse linear algebra
# ---------------------------------------------------------------------------

SparseVec = dict  # index -> nonzero rational


def vec_axpy(y: SparseVec, alpha, x: SparseVec) -> None:
    """y += alpha * x in place."""
    for k, v in x.items():
        s = y.get(k, 0) + alpha * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


@dataclass
class QMatrix:
    """Sparse rational matrix stored by columns."""

    rows: int
    cols: int
    columns: list[SparseVec] = field(default_factory=list)

    def __post_init__(self):
        if not self.columns:
            self.columns = [{} for _ in range(self.cols)]
        if len(self.columns) != self.cols:
            raise AlgebraError("column count mismatch")
        for col in self.columns:
            for r in col:
                if not 0 <= r < self.rows:
                    raise AlgebraError(f"row index {r} out of range")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "QMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        columns = [{r: _q(data[r][c]) for r in range(rows) if data[r][c]} for c in range(cols)]
        return cls(rows, cols, columns)

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r][c] = v
        return out

    def apply(self, vec: SparseVec) -> SparseVec:
        out: SparseVec = {}
        for c, v in vec.items():
            vec_axpy(out, v, self.columns[c])
        return out

    def row_permuted(self, perm: Sequence[int]) -> "QMatrix":
        """Matrix whose row perm[r] is row r of self."""
        return QMatrix(self.rows, self.cols,
                       [{perm[r]: v for r, v in col.items()} for col in self.columns])

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)


def _size(v) -> int:
    if isinstance(v, int):
        return abs(v)
    return abs(v.numerator) + v.denominator


class Echelon:
    """Incrementally maintained reduced echelon basis of a subspace of Q^n.

    Every stored vector is scaled to 1 at its pivot and has zeros at every
    other pivot, so reduction is a single pass.  Each stored vector can carry
    a ``tag`` (a sparse vector) that is transformed alongside it; this records
    coordinates with respect to user-chosen generators.
    """

    def __init__(self):
        self.pivots: dict[int, SparseVec] = {}
        self.tags: dict[int, SparseVec] = {}
        # index -> set of pivots whose stored vector has a nonzero there
        self._occ: dict[int, set[int]] = {}

    def __len__(self):
        return len(self.pivots)

    def _store(self, p: int, vec: SparseVec, tag: SparseVec):
        self.pivots[p] = vec
        self.tags[p] = tag
        for k in vec:
            self._occ.setdefault(k, set()).add(p)

    def _update(self, p: int, vec: SparseVec):
        old = self.pivots[p]
        for k in old:
            if k not in vec:
                self._occ[k].discard(p)
        for k in vec:
            if k not in old:
                self._occ.setdefault(k, set()).add(p)
        self.pivots[p] = vec

    def reduce(self, vec: SparseVec, tag: SparseVec | None = None) -> tuple[SparseVec, SparseVec]:
        """Return (residual, accumulated tag) with vec = residual + sum c_p stored_p."""
        vec = dict(vec)
        acc: SparseVec = {} if tag is None else dict(tag)
        hits = [k for k in vec if k in self.pivots]
        for p in hits:
            c = vec.get(p)
            if not c:
                continue
            vec_axpy(vec, -c, self.pivots[p])
            t = self.tags[p]
            if t:
                vec_axpy(acc, -c, t)
        return vec, acc

    def coordinates(self, vec: SparseVec) -> tuple[SparseVec, SparseVec]:
        """Return (residual, tag-combination) such that vec = residual + span part,
        where the span part has tag-coordinates given by the second value."""
        res, acc = self.reduce(vec)
        return res, {k: -v for k, v in acc.items()}

    def add(self, vec: SparseVec, tag: SparseVec | None = None) -> int | None:
        """Insert a vector; return its pivot or ``None`` if dependent."""
        res, t = self.reduce(vec, tag)
        if not res:
            return None
        p = min(res, key=lambda k: (_size(res[k]), k))
        inv = res[p]
        if inv != 1:
            res = {k: qdiv(v, inv) for k, v in res.items()}
            t = {k: qdiv(v, inv) for k, v in t.items()}
        # clear the new pivot from existing rows
        for q in list(self._occ.get(p, ())):
            row = dict(self.pivots[q])
            c = row[p]
            vec_axpy(row, -c, res)
            self._update(q, row)
            if t:
                qt = dict(self.tags[q])
                vec_axpy(qt, -c, t)
                self.tags[q] = qt
        self._store(p, res, t)
        return p

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)[0]


def rank_kernel_image(M: QMatrix) -> tuple[int, list[SparseVec], list[SparseVec]]:
    """Rank, a kernel basis and an image basis (subset of columns) of M."""
    ech = Echelon()
    image: list[SparseVec] = []
    kernel: list[SparseVec] = []
    for c, col in enumerate(M.columns):
        res, combo = ech.reduce(col, {c: 1})
        if res:
            # res = col - sum(...) ; store with its combination
            ech.add(col, {c: 1})
            image.append(dict(col))
        else:
            kernel.append(combo)
    return len(image), kernel, image


def rank(M: QMatrix) -> int:
    ech = Echelon()
    for col in M.columns:
        ech.add(col)
    return len(ech)


def solve_nullspace(equations: Iterable[SparseVec], nunknowns: int) -> list[SparseVec]:
    """Basis of {v in Q^n : <eq, v> = 0 for every equation}."""
    ech = Echelon()
    for eq in equations:
        if eq:
            ech.add(eq)
    # reduced row echelon: each pivot row expresses the pivot unknown
    basis = []
    for f in range(nunknowns):
        if f in ech.pivots:
            continue
        v = {f: 1}
        for p, row in ech.pivots.items():
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis

