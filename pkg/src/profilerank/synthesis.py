"""Turning realizable vectors into witness strings.

Strings are circular sequences of symbol values; functions here return them
as ``bytes`` (one symbol value per byte, not ASCII digits), which keeps
multi-million-symbol outputs compact.  ``core.profile_of`` accepts that form
directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .core import (
    Params,
    ProfileVector,
    RankPermutation,
    Word,
    all_words,
    first_flow_violation,
    profile_of,
    satisfies,
    word_index,
    word_text,
)
from .feasibility import FeasibleVector


def integerize(chi: FeasibleVector) -> FeasibleVector:
    """Scale a rational vector by the LCM of its denominators.

    The scaling is positive, so the realized permutation and the flow
    balance are untouched; the price is a longer witness string.
    """
    chi.check()
    denoms = [
        e.denominator for e in chi.entries if isinstance(e, Fraction)
    ]
    factor = lcm(*denoms) if denoms else 1
    entries = tuple(int(e * factor) for e in chi.entries)
    return FeasibleVector(chi.params, entries)


def _active_nodes(p: ProfileVector) -> tuple[set[Word], dict[Word, list[Word]], dict[Word, list[Word]]]:
    q, ell = p.params.q, p.params.ell
    fwd: dict[Word, list[Word]] = {}
    back: dict[Word, list[Word]] = {}
    active: set[Word] = set()
    for w in p.params.words():
        if p[w] == 0:
            continue
        a, b = w[:-1], w[1:]
        fwd.setdefault(a, []).append(b)
        back.setdefault(b, []).append(a)
        active.add(a)
        active.add(b)
    return active, fwd, back


def check_connectivity(p: ProfileVector) -> bool:
    """Strong connectivity of the positive-support overlap graph.

    Zero-count words are removed, then isolated nodes; the remainder must be
    one strongly connected piece for an Eulerian witness to exist.
    """
    if p.total() == 0:
        raise ValueError("all-zero profile has no support graph")
    if p.params.ell >= 2 and first_flow_violation(p) is not None:
        raise ValueError("profile must conserve flow")
    active, fwd, back = _active_nodes(p)
    start = min(active)
    for adj in (fwd, back):
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if seen != active:
            return False
    return True


def eulerian_string(p: ProfileVector) -> bytes:
    """Deterministic circular witness whose profile is exactly ``p``.

    Walks the overlap multigraph with ``p[w]`` parallel copies of each edge,
    consuming out-edges in lexicographic order from the smallest active node.
    """
    if not check_connectivity(p):
        raise ValueError("support graph is not strongly connected")
    params = p.params
    q, ell = params.q, params.ell
    if q > 255:
        raise ValueError("byte-string synthesis supports q <= 255")
    if ell == 1:
        out = bytearray()
        for s, c in enumerate(p.counts):
            out.extend([s] * c)
        return bytes(out)

    remaining = list(p.counts)
    node_count = params.node_count
    sub = q ** (ell - 2)  # node -> suffix-node division, first-symbol extraction
    start = -1
    for u in range(node_count):
        if any(remaining[u * q + s] for s in range(q)):
            start = u
            break
    ptr = [0] * node_count
    stack = [start]
    trail: list[int] = []
    while stack:
        u = stack[-1]
        s = ptr[u]
        base = u * q
        while s < q and remaining[base + s] == 0:
            s += 1
        ptr[u] = s
        if s < q:
            remaining[base + s] -= 1
            stack.append((base + s) % node_count)  # suffix node of the edge word
        else:
            trail.append(stack.pop())
    trail.reverse()
    # trail is the closed node walk; emitting each node's first symbol yields
    # the circular string whose sliding windows are exactly the edges used.
    return bytes(u // sub for u in trail[:-1])


def verify(x: str | bytes | Sequence[int], perm: RankPermutation) -> bool:
    """Does the circular string realize the permutation?"""
    return satisfies(profile_of(x, perm.params), perm)


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic walk matrix supported on the overlap edges.

    Row ``a`` moves to the q words extending the tail of ``a``, with
    probability proportional to the target's weight.  Kept in exact
    rationals; rows sum to exactly 1.
    """

    params: Params
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]  # word idx -> ((dest, prob), ...)

    def row(self, w: Word) -> tuple[tuple[int, Fraction], ...]:
        return self.rows[word_index(w, self.params.q)]

    def is_stationary(self, s: Sequence[Fraction]) -> bool:
        """Exact check that ``s @ M == s``."""
        acc = [Fraction(0)] * self.params.word_count
        for a, row in enumerate(self.rows):
            sa = s[a]
            for b, prob in row:
                acc[b] += sa * prob
        return all(acc[i] == s[i] for i in range(self.params.word_count))


def normalized(p: ProfileVector) -> tuple[Fraction, ...]:
    total = p.total()
    if total == 0:
        raise ValueError("cannot normalize the zero profile")
    return tuple(Fraction(c, total) for c in p.counts)


def markov_matrix(s: Sequence[Fraction], params: Params) -> TransitionMatrix:
    """Walk matrix whose stationary distribution is ``s`` (exact).

    Requires ``s`` strictly positive with unit sum; flow conservation is what
    makes ``s`` stationary, so unbalanced inputs are rejected.
    """
    q, ell = params.q, params.ell
    vec = tuple(s)
    if len(vec) != params.word_count:
        raise ValueError("distribution length must be q^ell")
    if any(e <= 0 for e in vec):
        raise ValueError("distribution must be strictly positive")
    if sum(vec) != 1:
        raise ValueError("distribution must sum to exactly 1")
    if ell >= 2:
        for v in all_words(q, ell - 1):
            inflow = sum(vec[word_index((t,) + v, q)] for t in range(q))
            outflow = sum(vec[word_index(v + (t,), q)] for t in range(q))
            if inflow != outflow:
                raise ValueError(
                    f"flow violated at node {word_text(v)}: stationarity would fail"
                )
    rows = []
    for idx, a in enumerate(all_words(q, ell)):
        tail = a[1:]
        dests = [word_index(tail + (t,), q) for t in range(q)]
        denom = sum(vec[d] for d in dests)
        rows.append(tuple((d, vec[d] / denom) for d in dests))
    return TransitionMatrix(params, tuple(rows))


def markov_generate(
    s: Sequence[Fraction], params: Params, n: int, seed: int
) -> bytes:
    """Seeded random walk emitting a length-``n`` string.

    The walk visits ``n - ell + 1`` nodes (for n >= ell); the emitted linear
    string has exactly those words as its sliding windows, so long walks have
    empirical word frequencies near ``s``.  Fully reproducible per seed.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    matrix = markov_matrix(s, params)
    q, ell = params.q, params.ell
    rng = random.Random(seed)

    # Start node sampled from s itself.
    r = rng.random()
    acc = 0.0
    node = params.word_count - 1
    for idx in range(params.word_count):
        acc += float(s[idx])
        if r < acc:
            node = idx
            break

    cumrows: list[tuple[tuple[float, int], ...]] = []
    for row in matrix.rows:
        acc = 0.0
        cum = []
        for dest, prob in row:
            acc += float(prob)
            cum.append((acc, dest))
        cumrows.append(tuple(cum))

    words = [node]
    steps = max(1, n - ell + 1)
    for _ in range(steps - 1):
        r = rng.random()
        row = cumrows[node]
        node = row[-1][1]
        for edge_acc, dest in row:
            if r < edge_acc:
                node = dest
                break
        words.append(node)

    q_pow = [q**i for i in range(ell)]
    first = words[0]
    symbols = [(first // q_pow[ell - 1 - i]) % q for i in range(ell)]
    for w in words[1:]:
        symbols.append(w % q)
    return bytes(symbols[:n])
