"""Braid words, transverse Markov moves, resolutions and resolved-braid words.

A braid word on ``b`` strands is a tuple of nonzero integers; ``i`` stands
for sigma_i and ``-i`` for its inverse.  A resolved word is a tuple of
positive integers, ``i`` standing for the wide-edge letter tau_i.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product


class BraidError(ValueError):
    pass


_HEADER = re.compile(r"^\s*b\s*=\s*(\d+)\s*;(.*)$", re.S)


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strands < 1:
            raise BraidError("a braid needs at least one strand")
        for x in self.letters:
            if x == 0:
                raise BraidError("zero is not a braid letter")
            if not 1 <= abs(x) <= self.strands - 1:
                raise BraidError(f"letter {x} out of range for {self.strands} strands")

    @property
    def c_pos(self) -> int:
        return sum(1 for x in self.letters if x > 0)

    @property
    def c_neg(self) -> int:
        return sum(1 for x in self.letters if x < 0)

    @property
    def writhe(self) -> int:
        return self.c_pos - self.c_neg

    @property
    def crossings(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        body = " ".join(str(x) for x in self.letters)
        return f"b={self.strands};" + (f" {body}" if body else "")


def parse_braid(text: str) -> BraidWord:
    """Parse ``"b=3; 1 -2"`` into a :class:`BraidWord`."""
    m = _HEADER.match(text)
    if not m:
        raise BraidError(f"malformed braid text {text!r}; expected 'b=<int>; <signed ints>'")
    body = m.group(2).split()
    try:
        letters = tuple(int(t) for t in body)
    except ValueError:
        raise BraidError(f"malformed braid letters in {text!r}") from None
    return BraidWord(int(m.group(1)), letters)


def self_linking(B: BraidWord) -> int:
    return B.writhe - B.strands


def transverse_move(B: BraidWord, move: str, arg: int | None = None) -> BraidWord:
    """Apply a named move.

    ``braid_relation`` takes the site index of the first letter involved,
    ``conjugate`` takes a signed letter eta and returns eta^-1 B eta.
    ``stab_neg`` is a negative stabilization, which is not a transverse move
    but is needed for stabilization experiments.
    """
    w = list(B.letters)
    b = B.strands
    if move == "stab_pos":
        return BraidWord(b + 1, tuple(w) + (b,))
    if move == "stab_neg":
        return BraidWord(b + 1, tuple(w) + (-b,))
    if move == "destab_pos":
        if b < 2 or not w or w[-1] != b - 1 or any(abs(x) == b - 1 for x in w[:-1]):
            raise BraidError("positive destabilization needs a single trailing sigma_{b-1}")
        return BraidWord(b - 1, tuple(w[:-1]))
    if move == "conjugate":
        if arg is None or arg == 0 or abs(arg) >= b:
            raise BraidError(f"invalid conjugating letter {arg}")
        return BraidWord(b, (-arg,) + tuple(w) + (arg,))
    if move == "braid_relation":
        s = arg
        if s is None or not 0 <= s < len(w) - 1:
            raise BraidError(f"no braid relation site at {s}")
        x, y = w[s], w[s + 1]
        if x == -y:
            return BraidWord(b, tuple(w[:s] + w[s + 2:]))
        if abs(abs(x) - abs(y)) >= 2:
            return BraidWord(b, tuple(w[:s] + [y, x] + w[s + 2:]))
        if s + 2 < len(w) and w[s + 2] == x and abs(abs(x) - abs(y)) == 1 and (x > 0) == (y > 0):
            return BraidWord(b, tuple(w[:s] + [y, x, y] + w[s + 3:]))
        raise BraidError(f"no braid relation applies at site {s} of {B}")
    raise BraidError(f"unknown move {move!r}")


def unknot_presentation(m: int) -> BraidWord:
    """The transverse unknot U_m: m negative stabilizations of the one-strand braid."""
    return BraidWord(m + 1, tuple(-i for i in range(1, m + 1)))


# ---------------------------------------------------------------------------
# resolutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedWord:
    strands: int
    letters: tuple[int, ...] = ()
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strands < 0:
            raise BraidError("negative strand count")
        for x in self.letters:
            if not 1 <= x <= self.strands - 1:
                raise BraidError(f"letter t{x} out of range for {self.strands} strands")

    @property
    def weight(self) -> int:
        return sum(self.letters)

    def __str__(self) -> str:
        body = " ".join(f"t{x}" for x in self.letters)
        return f"b={self.strands};" + (f" {body}" if body else "")


def parse_resolved(text: str) -> ResolvedWord:
    m = _HEADER.match(text)
    if not m:
        raise BraidError(f"malformed resolved word {text!r}")
    letters = []
    for tok in m.group(2).split():
        if not re.fullmatch(r"t\d+", tok):
            raise BraidError(f"malformed resolved letter {tok!r}")
        letters.append(int(tok[1:]))
    return ResolvedWord(int(m.group(1)), tuple(letters))


@dataclass(frozen=True)
class CubeVertex:
    """One resolution of a braid together with its grading data.

    ``z2``, ``a_shift`` and ``x_shift`` are the shifts <c>{w, (N-1)w + m+ - m-}
    for the given N.
    """

    r: tuple[int, ...]
    m_pos: int
    m_neg: int
    degree: int
    z2: int
    a_shift: int
    x_shift: int


def resolve(B: BraidWord, r) -> tuple[ResolvedWord, int, int]:
    r = tuple(r)
    if len(r) != B.crossings:
        raise BraidError(f"resolution vector has length {len(r)}, braid has {B.crossings} crossings")
    letters = tuple(abs(x) for x, ri in zip(B.letters, r) if ri)
    m_pos = sum(1 for x, ri in zip(B.letters, r) if ri and x > 0)
    m_neg = sum(1 for x, ri in zip(B.letters, r) if ri and x < 0)
    return ResolvedWord(B.strands, letters), m_pos, m_neg


def cube(B: BraidWord, N: int = 1) -> list[CubeVertex]:
    """All 2^c resolutions, little-endian in crossing order."""
    out = []
    c = B.crossings
    w = B.writhe
    for bits in range(1 << c):
        r = tuple((bits >> t) & 1 for t in range(c))
        _, mp, mn = resolve(B, r)
        out.append(CubeVertex(r, mp, mn, mn - mp, c % 2, w, (N - 1) * w + mp - mn))
    return out


# ---------------------------------------------------------------------------
# induction on the weight of closed resolved braids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InductionCase:
    """Normal form reached by commutations and rotations.

    ``kind`` is ``"empty"``, ``"A"``, ``"B"`` or ``"C"``; ``prefix`` is the
    word W in front of the tail tau_i, tau_j tau_j or tau_j tau_{j-1} tau_j.
    ``trace`` lists ("swap", p) and ("rotate", k) moves.
    """

    kind: str
    prefix: tuple[int, ...]
    index: int
    word: tuple[int, ...]
    trace: tuple[tuple[str, int], ...] = field(default=())


def replay(letters, trace) -> tuple[int, ...]:
    """Replay a move trace, checking every commutation is legal."""
    w = list(letters)
    for kind, p in trace:
        if kind == "swap":
            if abs(w[p] - w[p + 1]) <= 1:
                raise BraidError(f"illegal commutation of t{w[p]} t{w[p+1]}")
            w[p], w[p + 1] = w[p + 1], w[p]
        elif kind == "rotate":
            w = w[p:] + w[:p]
        else:
            raise BraidError(f"unknown move {kind}")
    return tuple(w)


def induction_case(G: ResolvedWord, rng: random.Random | None = None) -> InductionCase:
    w = list(G.letters)
    trace: list[tuple[str, int]] = []
    if not w:
        return InductionCase("empty", (), 0, (), ())
    n = len(w)

    def rotate(k):
        nonlocal w
        k %= n
        if k:
            w = w[k:] + w[:k]
            trace.append(("rotate", k))

    def swap(p):
        w[p], w[p + 1] = w[p + 1], w[p]
        trace.append(("swap", p))

    i = max(w)
    occ = [p for p, x in enumerate(w) if x == i]
    if len(occ) == 1:
        rotate(occ[0] + 1)
        return InductionCase("A", tuple(w[:-1]), i, tuple(w), tuple(trace))

    start = rng.choice(occ) if rng else occ[0]
    rotate(start)
    hi = next(p for p in range(1, n) if w[p] == i)

    def reduce_segment(lo, hi, i):
        # w[lo] == w[hi] == i and every letter strictly between is < i
        inner = [p for p in range(lo + 1, hi) if w[p] == i - 1]
        if len(inner) >= 2:
            pairs = list(zip(inner, inner[1:]))
            p, q = rng.choice(pairs) if rng else pairs[0]
            return reduce_segment(p, q, i - 1)
        if not inner:
            for p in range(lo, hi - 1):
                swap(p)
            return "B", hi - 1, i
        c = inner[0]
        for p in range(lo, c - 1):
            swap(p)
        for p in range(hi - 1, c, -1):
            swap(p)
        return "C", c - 1, i

    kind, pos, j = reduce_segment(0, hi, i)
    length = 2 if kind == "B" else 3
    rotate(pos + length)
    return InductionCase(kind, tuple(w[:-length]), j, tuple(w), tuple(trace))


def enumerate_resolved(max_weight: int, max_strands: int, min_strands: int = 1):
    """All closed resolved words with weight <= max_weight, up to rotation."""
    seen = set()
    for b in range(min_strands, max_strands + 1):
        letters_range = range(1, b)
        results = []

        def extend(word, weight):
            key = min(tuple(word[k:] + word[:k]) for k in range(len(word))) if word else ()
            if key not in seen_b:
                seen_b.add(key)
                results.append(key)
            for x in letters_range:
                if weight + x <= max_weight:
                    extend(word + [x], weight + x)

        seen_b: set = set()
        extend([], 0)
        for key in sorted(results, key=lambda t: (sum(t), len(t), t)):
            if (b, key) not in seen:
                seen.add((b, key))
                yield ResolvedWord(b, key)


def all_resolutions(c: int):
    for bits in product((0, 1), repeat=c):
        yield bits
