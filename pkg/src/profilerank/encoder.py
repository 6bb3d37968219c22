"""Constructive encoders mapping structured messages to realizable vectors.

Two recursions are implemented.  The alphabet recursion (window length 2)
starts from a repository of all 30240 realizable 3x3 matrices and grows the
alphabet one symbol at a time: the incoming matrix is stretched by q+1 to
open integer gaps, q new values are threaded into those gaps according to an
interleaving pattern, and the new border row/column is balanced with 1/q
corrections before the whole matrix is rescaled by q back to integers.

The window recursion lifts a realizable vector one window length up through
the adjacent-sum homomorphism: the q words collapsing to the same image
receive a shared doubled base value plus per-word fractional corrections,
chosen so corrections cancel along every row and column.  All corrections
are multiples of q^(-q^2), so a fixed-point scale of q^(q^2) per stage keeps
everything in exact integers; entries grow accordingly and need arbitrary
precision.

Both decoders invert by reading rank information back off the output and
re-encode as a final consistency check; inputs that fail any structural step
raise :class:`NotACodeword`.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Params,
    RankPermutation,
    Word,
    all_words,
    homo_image,
    homo_preimages,
    rank_of,
    word_index,
    word_text,
)
from .feasibility import FeasibleVector

BASE_Q = 3
BASE_COUNT = 30240  # number of realizable orders at q=3, window 2 (census-verified)

Matrix = tuple[tuple[int, ...], ...]


class NotACodeword(ValueError):
    """The input is not an encoder output (best-effort detection)."""


# ---------------------------------------------------------------------------
# Repository of base-case matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Repository:
    """The 30240 integer matrices seeding both recursions, 1-indexed.

    Entry ``i`` realizes the i-th realizable rank order of 3x3 profile
    matrices (orders enumerated lexicographically by their word sequence);
    each stored vector is the flow-balanced assignment minimizing the
    maximum entry, ties broken by the lexicographically smallest 9-tuple.
    """

    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.vectors) != BASE_COUNT:
            raise ValueError(f"repository must hold {BASE_COUNT} vectors")

    @property
    def params(self) -> Params:
        return Params(BASE_Q, 2)

    def vector(self, index: int) -> tuple[int, ...]:
        if not 1 <= index <= BASE_COUNT:
            raise ValueError(f"repository index {index} out of range")
        return self.vectors[index - 1]

    def matrix(self, index: int) -> Matrix:
        return vector_to_matrix(self.vector(index), BASE_Q)

    def permutation(self, index: int) -> RankPermutation:
        return rank_of(self.vector(index), self.params)

    def index_of(self, matrix: Matrix) -> int:
        vec = matrix_to_vector(matrix)
        try:
            return self._lookup[vec]
        except KeyError:
            raise NotACodeword("matrix is not in the repository") from None

    @property
    def _lookup(self) -> dict[tuple[int, ...], int]:
        cache = self.__dict__.get("_lookup_cache")
        if cache is None:
            cache = {v: i + 1 for i, v in enumerate(self.vectors)}
            self.__dict__["_lookup_cache"] = cache
        return cache

    def validate(self) -> None:
        perms = set()
        for vec in self.vectors:
            fv = FeasibleVector(self.params, vec)
            fv.check()
            perms.add(rank_of(vec, self.params).order)
        if len(perms) != BASE_COUNT:
            raise ValueError("repository permutations are not pairwise distinct")

    def save(self, path) -> None:
        body = f"f32={BASE_COUNT}\n" + "".join(
            " ".join(str(e) for e in vec) + "\n" for vec in self.vectors
        )
        digest = hashlib.sha256(body.encode()).hexdigest()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(body)
            fh.write(f"sha256={digest}\n")

    @classmethod
    def load(cls, path) -> "Repository":
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0] != f"f32={BASE_COUNT}":
            raise ValueError("bad repository header")
        if not lines[-1].startswith("sha256="):
            raise ValueError("missing repository checksum trailer")
        body = "\n".join(lines[:-1]) + "\n"
        digest = hashlib.sha256(body.encode()).hexdigest()
        if lines[-1] != f"sha256={digest}":
            raise ValueError("repository checksum mismatch")
        vectors = tuple(
            tuple(int(t) for t in ln.split()) for ln in lines[1:-1]
        )
        return cls(vectors)


def vector_to_matrix(vec: Sequence[int], q: int) -> Matrix:
    return tuple(tuple(vec[i * q + j] for j in range(q)) for i in range(q))


def matrix_to_vector(matrix: Matrix) -> tuple[int, ...]:
    return tuple(e for row in matrix for e in row)


# ---------------------------------------------------------------------------
# Information vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StageA:
    """One alphabet-growth step: where the q new values rank (``pi``, values
    1..j) and how they interleave with the old entries (``t``, j ones among
    j^2-j+1 bits)."""

    pi: tuple[int, ...]
    t: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.pi)

    def check(self) -> None:
        j = len(self.pi)
        if sorted(self.pi) != list(range(1, j + 1)):
            raise ValueError(f"stage rank vector must permute 1..{j}")
        if len(self.t) != j * j - j + 1:
            raise ValueError("interleaving pattern has the wrong length")
        if any(b not in (0, 1) for b in self.t) or sum(self.t) != j:
            raise ValueError(f"interleaving pattern must have exactly {j} ones")


@dataclass(frozen=True)
class InfoVecA:
    """Message for the alphabet recursion: repository index plus one stage
    per added symbol (stage sizes 4..q in order)."""

    base: int
    stages: tuple[StageA, ...] = ()

    @property
    def q(self) -> int:
        return BASE_Q + len(self.stages)

    def check(self) -> None:
        if not 1 <= self.base <= BASE_COUNT:
            raise ValueError(f"base index {self.base} out of range")
        for offset, stage in enumerate(self.stages):
            if stage.size != 4 + offset:
                raise ValueError("stage sizes must run 4..q in order")
            stage.check()


@dataclass(frozen=True)
class InfoVecB:
    """Message for the window recursion: an alphabet message plus, for each
    window length 3..ell, a map assigning a symbol order to every interior
    word (first and last symbol nonzero)."""

    base: InfoVecA
    layers: tuple[dict[Word, tuple[int, ...]], ...] = ()

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def ell(self) -> int:
        return 2 + len(self.layers)

    def check(self) -> None:
        self.base.check()
        q = self.q
        for offset, layer in enumerate(self.layers):
            i = 3 + offset
            domain = layer_domain(q, i)
            if set(layer) != set(domain):
                raise ValueError(f"layer {i} must cover exactly the interior words")
            for perm in layer.values():
                if sorted(perm) != list(range(q)):
                    raise ValueError("layer values must permute 0..q-1")


def layer_domain(q: int, i: int) -> list[Word]:
    """Interior words of length i-1: first and last symbol nonzero."""
    return [
        u for u in all_words(q, i - 1) if u[0] != 0 and u[-1] != 0
    ]


# ---------------------------------------------------------------------------
# Alphabet recursion (window length 2)
# ---------------------------------------------------------------------------

def interleave(t: Sequence[int], ones_arg: Sequence, zeros_arg: Sequence) -> list:
    """Merge two sequences along a bit pattern: ones take from ``ones_arg``,
    zeros from ``zeros_arg``, both in their original order."""
    ones = list(ones_arg)
    zeros = list(zeros_arg)
    if sum(t) != len(ones) or len(t) - sum(t) != len(zeros):
        raise ValueError("argument lengths do not match the pattern weight")
    oi = zi = 0
    out = []
    for bit in t:
        if bit:
            out.append(ones[oi])
            oi += 1
        else:
            out.append(zeros[zi])
            zi += 1
    return out


def choose_y(pi: Sequence[int], t: Sequence[int], sorted_x: Sequence[int]) -> list[int]:
    """Minimal-sum gap values for one alphabet-growth step.

    ``sorted_x`` are the stretched old entries (pairwise gaps exceed the run
    lengths, so every gap can host its ones).  Each run of ones takes the
    smallest consecutive integers strictly inside its gap; a leading run is
    anchored at 1, a trailing run sits just above the maximum.  The values
    are then dealt out so the value at position i has rank ``pi[i]``.
    """
    j = len(pi)
    y_sorted: list[int] = []
    zi = 0
    i = 0
    while i < len(t):
        if t[i]:
            k = i
            while k < len(t) and t[k]:
                k += 1
            run = k - i
            base = 0 if zi == 0 else sorted_x[zi - 1]
            vals = list(range(base + 1, base + run + 1))
            if zi < len(sorted_x) and vals[-1] >= sorted_x[zi]:
                raise AssertionError("gap too small for its ones")
            y_sorted.extend(vals)
            i = k
        else:
            zi += 1
            i += 1
    return [y_sorted[pi[idx] - 1] for idx in range(j)]


def extend_matrix(chi: Matrix, pi: Sequence[int], t: Sequence[int]) -> Matrix:
    """One alphabet-growth step applied to an integer matrix.

    Returns the new integer matrix (the 1/q border corrections are folded in
    by the final factor of q, so everything stays integral).
    """
    m = len(chi)
    q = m + 1
    StageA(tuple(pi), tuple(t)).check()
    x = [[(q + 1) * chi[i][j] for j in range(m)] for i in range(m)]
    sorted_x = sorted(e for row in x for e in row)
    y = choose_y(pi, t, sorted_x)
    out = [[0] * q for _ in range(q)]
    for i in range(m):
        for j in range(m):
            out[i][j] = q * x[i][j] + (1 if j == 0 and i >= 1 else 0)
    out[0][q - 1] = q * y[0]
    for i in range(1, m):
        out[i][q - 1] = q * y[i] - 1
    out[q - 1][0] = q * y[0] - (q - 2)
    for j in range(1, m):
        out[q - 1][j] = q * y[j]
    out[q - 1][q - 1] = q * y[q - 1]
    return tuple(tuple(row) for row in out)


def encode_a(info: InfoVecA, repo: Repository) -> Matrix:
    """Alphabet-recursion encoder: message to integer q x q matrix."""
    info.check()
    chi = repo.matrix(info.base)
    for stage in info.stages:
        chi = extend_matrix(chi, stage.pi, stage.t)
    return chi


def _shrink_matrix(matrix: Matrix) -> tuple[Matrix, StageA]:
    """Undo one alphabet-growth step; raises NotACodeword on any misfit."""
    q = len(matrix)
    m = q - 1

    def exact_div(a: int, b: int) -> int:
        if a % b:
            raise NotACodeword("entry fails the divisibility structure")
        return a // b

    y = [0] * q
    y[0] = exact_div(matrix[0][q - 1], q)
    for i in range(1, m):
        y[i] = exact_div(matrix[i][q - 1] + 1, q)
    y[q - 1] = exact_div(matrix[q - 1][q - 1], q)
    if matrix[q - 1][0] != q * y[0] - (q - 2):
        raise NotACodeword("balancing corner does not match")
    for j in range(1, m):
        if matrix[q - 1][j] != q * y[j]:
            raise NotACodeword("border row does not match")

    scale = q * (q + 1)
    chi = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            raw = matrix[i][j] - (1 if j == 0 and i >= 1 else 0)
            chi[i][j] = exact_div(raw, scale)
            if chi[i][j] < 1:
                raise NotACodeword("inner entries must stay positive")

    if len(set(y)) != q:
        raise NotACodeword("new values must be distinct")
    by_value = sorted(range(q), key=lambda k: y[k])
    pi = [0] * q
    for pos, k in enumerate(by_value):
        pi[k] = pos + 1
    pi = tuple(pi)

    sx = sorted((q + 1) * chi[i][j] for i in range(m) for j in range(m))
    sy = sorted(y)
    if set(sx) & set(sy):
        raise NotACodeword("new values collide with old entries")
    t = []
    oi = zi = 0
    while oi < len(sy) or zi < len(sx):
        take_one = zi >= len(sx) or (oi < len(sy) and sy[oi] < sx[zi])
        if take_one:
            t.append(1)
            oi += 1
        else:
            t.append(0)
            zi += 1
    return tuple(tuple(row) for row in chi), StageA(pi, tuple(t))


def decode_a(matrix: Matrix, repo: Repository) -> InfoVecA:
    """Inverse of :func:`encode_a`; re-encodes to confirm codeword status."""
    q = len(matrix)
    if q < BASE_Q or any(len(row) != q for row in matrix):
        raise NotACodeword("not a square matrix of admissible size")
    stages: list[StageA] = []
    work = matrix
    while len(work) > BASE_Q:
        work, stage = _shrink_matrix(work)
        stages.append(stage)
    info = InfoVecA(repo.index_of(work), tuple(reversed(stages)))
    if encode_a(info, repo) != matrix:
        raise NotACodeword("matrix is not an encoder output")
    return info


# ---------------------------------------------------------------------------
# Window recursion (any window length)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScaledVector:
    """Integer output of the window recursion (fixed-point scale q^(q^2) per
    stage folded in).  A valid realizable vector in its own right."""

    params: Params
    entries: tuple[int, ...]

    def __getitem__(self, w: Word) -> int:
        return self.entries[word_index(w, self.params.q)]

    def to_feasible(self) -> FeasibleVector:
        return FeasibleVector(self.params, self.entries)

    def to_matrix(self) -> Matrix:
        """Square matrix view for window length 2 only."""
        if self.params.ell != 2:
            raise ValueError("matrix view defined only for window length 2")
        return vector_to_matrix(self.entries, self.params.q)

    def rank_order(self) -> RankPermutation:
        return rank_of(self.entries, self.params)


def _digit_position(a: int, b: int, q: int) -> int:
    """Fractional digit slot used for the (a, b) boundary pair: a + b*q + 1."""
    return a + b * q + 1


def _lift_layer(
    entries: Sequence[int], layer: dict[Word, tuple[int, ...]], q: int, i: int
) -> list[int]:
    """One window-growth step on scaled integer entries."""
    scale = q ** (q * q)
    out = [0] * (q**i)
    for v in all_words(q, i):
        w = homo_image(v, q)
        base = scale * 2 * entries[word_index(w, q)]
        head, tail = w[0], w[-1]
        mid = w[1:-1]
        v0 = v[0]
        delta = 0
        if head != 0 and tail != 0:
            delta = layer[w][v0] * q ** (q * q - _digit_position(head, tail, q))
        elif head == 0 and tail != 0:
            for mu in range(1, q):
                u = (mu,) + mid + (tail,)
                delta -= layer[u][(mu + v0) % q] * q ** (
                    q * q - _digit_position(mu, tail, q)
                )
        elif head != 0 and tail == 0:
            for tau in range(1, q):
                u = (head,) + mid + (tau,)
                delta -= layer[u][v0] * q ** (q * q - _digit_position(head, tau, q))
        else:
            for mu in range(1, q):
                for tau in range(1, q):
                    u = (mu,) + mid + (tau,)
                    delta += layer[u][(mu + v0) % q] * q ** (
                        q * q - _digit_position(mu, tau, q)
                    )
        out[word_index(v, q)] = base + delta
    return out


def encode_b(info: InfoVecB, repo: Repository) -> ScaledVector:
    """Window-recursion encoder: message to realizable integer vector."""
    info.check()
    q = info.q
    entries: Sequence[int] = matrix_to_vector(encode_a(info.base, repo))
    for offset, layer in enumerate(info.layers):
        entries = _lift_layer(entries, layer, q, 3 + offset)
    return ScaledVector(Params(q, info.ell), tuple(entries))


def decode_b(vec: ScaledVector, repo: Repository) -> InfoVecB:
    """Inverse of :func:`encode_b`; re-encodes to confirm codeword status."""
    q, ell = vec.params.q, vec.params.ell
    scale = q ** (q * q)
    entries = list(vec.entries)
    layers: list[dict[Word, tuple[int, ...]]] = []
    for i in range(ell, 2, -1):
        prev = [0] * (q ** (i - 1))
        layer: dict[Word, tuple[int, ...]] = {}
        for u in all_words(q, i - 1):
            vals = [entries[word_index(v, q)] for v in homo_preimages(u, q)]
            halves = {(val + scale) // (2 * scale) for val in vals}
            if len(halves) != 1:
                raise NotACodeword("preimage entries disagree on their base value")
            prev[word_index(u, q)] = halves.pop()
            if u[0] != 0 and u[-1] != 0:
                if len(set(vals)) != q:
                    raise NotACodeword("preimage entries must be distinct")
                order = sorted(range(q), key=lambda k: vals[k])
                ranks = [0] * q
                for pos, k in enumerate(order):
                    ranks[k] = pos
                layer[u] = tuple(ranks)
        layers.append(layer)
        entries = prev
    base = decode_a(vector_to_matrix(entries, q), repo)
    info = InfoVecB(base, tuple(reversed(layers)))
    if encode_b(info, repo).entries != vec.entries:
        raise NotACodeword("vector is not an encoder output")
    return info


# ---------------------------------------------------------------------------
# Counting, rate, and length calculators
# ---------------------------------------------------------------------------

def count_lower_bound(params: Params) -> int:
    """Number of distinct realizable orders the encoders reach, exact."""
    q, ell = params.q, params.ell
    if q < 3 or ell < 2:
        raise ValueError("bound defined for q >= 3 and ell >= 2")
    total = BASE_COUNT
    for j in range(4, q + 1):
        total *= math.factorial(j) * math.comb(j * j - j + 1, j)
    for i in range(3, ell + 1):
        total *= math.factorial(q) ** (
            q ** (i - 1) - 2 * q ** (i - 2) + q ** (i - 3)
        )
    return total


def rate_lower_bound(params: Params) -> float:
    """Closed-form rate lower bound used for the finite-parameter table."""
    q, ell = params.q, params.ell
    if q < 3 or ell < 3:
        raise ValueError("rate formula stated for q >= 3 and ell >= 3")
    return (
        math.log(math.factorial(q))
        * (q - 1)
        * (q ** (ell - 2) - 1)
        / (ell * q**ell * math.log(q))
    )


@dataclass(frozen=True)
class LengthBounds:
    """Exact witness-length bounds for the encoder output families."""

    max_entry_pairs: int  # largest entry, window length 2
    length_pairs: int  # witness length, window length 2
    max_entry: int  # largest entry at the requested window length
    length: Fraction  # witness length at the requested window length


def length_bounds(params: Params, c3: int) -> LengthBounds:
    q, ell = params.q, params.ell
    if q < 3 or ell < 2 or c3 < 1:
        raise ValueError("bounds defined for q >= 3, ell >= 2, c3 >= 1")
    growth = 2 ** (q - 3) * (math.factorial(q) // 6) * (math.factorial(q + 1) // 24)
    max_entry_pairs = growth * c3
    length_pairs = q * q * max_entry_pairs
    max_entry = max_entry_pairs * (3 * q ** (q * q)) ** (ell - 2)
    length = Fraction(
        c3 * growth * 3 ** (ell - 2) * (q**ell) ** (q * q + 1), 2 * q * q
    )
    return LengthBounds(max_entry_pairs, length_pairs, max_entry, length)


# ---------------------------------------------------------------------------
# Random messages and text formats
# ---------------------------------------------------------------------------

def random_info_a(q: int, rng) -> InfoVecA:
    stages = []
    for j in range(4, q + 1):
        pi = list(range(1, j + 1))
        rng.shuffle(pi)
        positions = rng.sample(range(j * j - j + 1), j)
        t = tuple(1 if k in positions else 0 for k in range(j * j - j + 1))
        stages.append(StageA(tuple(pi), t))
    return InfoVecA(rng.randint(1, BASE_COUNT), tuple(stages))


def random_layer(q: int, i: int, rng) -> dict[Word, tuple[int, ...]]:
    layer = {}
    for u in layer_domain(q, i):
        perm = list(range(q))
        rng.shuffle(perm)
        layer[u] = tuple(perm)
    return layer


def random_info_b(q: int, ell: int, rng) -> InfoVecB:
    return InfoVecB(
        random_info_a(q, rng),
        tuple(random_layer(q, i, rng) for i in range(3, ell + 1)),
    )


def info_a_to_text(info: InfoVecA) -> str:
    lines = [f"q={info.q}", f"base={info.base}"]
    for stage in info.stages:
        pi = ",".join(str(v) for v in stage.pi)
        t = "".join(str(b) for b in stage.t)
        lines.append(f"pi={pi} t={t}")
    return "\n".join(lines) + "\n"


def info_a_from_text(text: str) -> InfoVecA:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    m = re.fullmatch(r"q=(\d+)", lines[0])
    if not m:
        raise ValueError(f"bad message header: {lines[0]!r}")
    base = int(lines[1].removeprefix("base="))
    stages = []
    for ln in lines[2:]:
        sm = re.fullmatch(r"pi=([\d,]+) t=([01]+)", ln)
        if not sm:
            raise ValueError(f"bad stage line: {ln!r}")
        pi = tuple(int(v) for v in sm.group(1).split(","))
        t = tuple(int(c) for c in sm.group(2))
        stages.append(StageA(pi, t))
    info = InfoVecA(base, tuple(stages))
    if info.q != int(m.group(1)):
        raise ValueError("stage count does not match the declared q")
    return info


def info_b_to_text(info: InfoVecB) -> str:
    lines = [f"q={info.q} ell={info.ell}", f"base={info.base.base}"]
    for stage in info.base.stages:
        pi = ",".join(str(v) for v in stage.pi)
        t = "".join(str(b) for b in stage.t)
        lines.append(f"pi={pi} t={t}")
    for offset, layer in enumerate(info.layers):
        for u in layer_domain(info.q, 3 + offset):
            perm = ",".join(str(v) for v in layer[u])
            lines.append(f"P({word_text(u)})={perm}")
    return "\n".join(lines) + "\n"


def info_b_from_text(text: str) -> InfoVecB:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    m = re.fullmatch(r"q=(\d+) ell=(\d+)", lines[0])
    if not m:
        raise ValueError(f"bad message header: {lines[0]!r}")
    q, ell = int(m.group(1)), int(m.group(2))
    base_lines = [lines[1]]
    layer_lines = []
    for ln in lines[2:]:
        (layer_lines if ln.startswith("P(") else base_lines).append(ln)
    base = info_a_from_text(f"q={q}\n" + "\n".join(base_lines) + "\n")
    layers: list[dict[Word, tuple[int, ...]]] = [{} for _ in range(3, ell + 1)]
    for ln in layer_lines:
        lm = re.fullmatch(r"P\((\d+)\)=([\d,]+)", ln)
        if not lm:
            raise ValueError(f"bad layer line: {ln!r}")
        u = tuple(int(c) for c in lm.group(1))
        layers[len(u) + 1 - 3][u] = tuple(int(v) for v in lm.group(2).split(","))
    info = InfoVecB(base, tuple(layers))
    info.check()
    return info
