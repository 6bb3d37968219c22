"""Deciding which rank permutations are realizable by profile vectors.

The decision procedure is an exact rational feasibility LP: a permutation is
realizable iff there is a vector with all entries >= 1, unit separation
between consecutive ranks, and equal in/out sums at every overlap node.  The
separation constraints are kept only between adjacent ranks (transitivity
makes the all-pairs version equivalent) and the LP is solved after the
substitution ``value(rank k) = k + e_1 + ... + e_k`` with slack variables
``e >= 0``, which folds the ordering and lower-bound constraints into plain
sign constraints and leaves one integer equality per node.  No floating point
appears anywhere on the decision path.

A cheap necessary condition is checked first: a node whose incoming words can
all be matched below (or all above) its outgoing words certifies that the
in/out sums cannot balance.  Existence of such a monochromatic matching is a
ballot test on the rank order restricted to the node's neighborhood.  For
window length 2 every node is a single letter, so the test drops the
self-loop word from both sides and applies the same flow argument to the
remaining pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._simplex import solve_nonnegative
from .core import (
    Entry,
    Params,
    ProfileVector,
    RankPermutation,
    Word,
    in_words,
    is_constant,
    out_words,
    satisfies,
    word_index,
    word_text,
)


@dataclass(frozen=True)
class FeasibleVector:
    """Exact-rational vector realizing a permutation.

    Invariants (enforced by :meth:`check`): every entry >= 1, entries pairwise
    distinct, and in/out sums balance at every node.
    """

    params: Params
    entries: tuple[Entry, ...]

    def __getitem__(self, w: Word) -> Entry:
        return self.entries[word_index(w, self.params.q)]

    def check(self, perm: RankPermutation | None = None) -> None:
        p = self.params
        if len(self.entries) != p.word_count:
            raise ValueError("entry count does not match q^ell")
        if any(e < 1 for e in self.entries):
            raise ValueError("entries must all be >= 1")
        if len(set(self.entries)) != len(self.entries):
            raise ValueError("entries must be pairwise distinct")
        if p.ell >= 2:
            for v in p.nodes():
                inflow = sum(self[w] for w in in_words(v, p.q))
                outflow = sum(self[w] for w in out_words(v, p.q))
                if inflow != outflow:
                    raise ValueError(f"flow violated at node {word_text(v)}")
        if perm is not None and not satisfies(self.entries, perm, p):
            raise ValueError("vector does not realize the stated permutation")

    def is_integral(self) -> bool:
        return all(
            isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1)
            for e in self.entries
        )

    def to_profile(self) -> ProfileVector:
        if not self.is_integral():
            raise ValueError("only integer vectors convert to profiles")
        return ProfileVector(self.params, tuple(int(e) for e in self.entries))

    def to_text(self) -> str:
        p = self.params
        lines = [f"q={p.q} ell={p.ell}"]
        for w, e in zip(p.words(), self.entries):
            lines.append(f"{word_text(w)} {e}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FeasibleVector":
        import re

        lines = [ln for ln in text.splitlines() if ln.strip()]
        m = re.fullmatch(r"q=(\d+) ell=(\d+)", lines[0].strip())
        if not m:
            raise ValueError(f"bad vector header: {lines[0]!r}")
        params = Params(int(m.group(1)), int(m.group(2)))
        entries: list[Entry] = [0] * params.word_count
        for ln in lines[1:]:
            ws, es = ln.split()
            val = Fraction(es)
            entries[word_index(tuple(int(c) for c in ws), params.q)] = (
                int(val) if val.denominator == 1 else val
            )
        return cls(params, tuple(entries))


@dataclass(frozen=True)
class MatchingWitness:
    """A node certifying infeasibility, plus the matching color found there."""

    node: Word
    color: str  # "green": all in-words below out-partners; "red": reversed

    def describe(self) -> str:
        return f"monochromatic {self.color} matching at node {word_text(self.node)}"


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    vector: FeasibleVector | None = None
    witness: str | None = None

    def to_text(self) -> str:
        if self.feasible:
            assert self.vector is not None
            return "status=feasible\n" + self.vector.to_text()
        return f"status=infeasible witness={self.witness}\n"


class _Tables:
    """Per-parameter constant data for the decision procedures."""

    def __init__(self, params: Params):
        self.params = params
        q, ell, n = params.q, params.ell, params.word_count
        self.lp_rows: list[list[int]] = []  # coefficient per word index
        self.check_nodes: list[tuple[Word, list[tuple[int, int]]]] = []
        if ell < 2:
            return
        for v in params.nodes():
            coef = [0] * n
            for w in out_words(v, q):
                coef[word_index(w, q)] += 1
            for w in in_words(v, q):
                coef[word_index(w, q)] -= 1
            self.lp_rows.append(coef)
            if ell == 2:
                # Single-letter node: cancel the self-loop, ballot the rest.
                members = [
                    (word_index(w, q), -1) for w in in_words(v, q) if not is_constant(w)
                ] + [
                    (word_index(w, q), +1) for w in out_words(v, q) if not is_constant(w)
                ]
                self.check_nodes.append((v, members))
            elif not is_constant(v):
                members = [(word_index(w, q), -1) for w in in_words(v, q)] + [
                    (word_index(w, q), +1) for w in out_words(v, q)
                ]
                self.check_nodes.append((v, members))


@lru_cache(maxsize=None)
def constraint_tables(params: Params) -> _Tables:
    return _Tables(params)


def order_precheck_witness(
    order: tuple[int, ...], tables: _Tables
) -> tuple[Word, str] | None:
    """Ballot test on a raw rank ordering; returns (node, color) or None."""
    pos = [0] * len(order)
    for k, idx in enumerate(order):
        pos[idx] = k
    for node, members in tables.check_nodes:
        ranked = sorted((pos[idx], sign) for idx, sign in members)
        green = red = True
        acc = 0
        for _, sign in ranked:
            acc += sign
            if acc > 0:
                green = False
            elif acc < 0:
                red = False
            if not (green or red):
                break
        if green:
            return node, "green"
        if red:
            return node, "red"
    return None


def _lp_system(order: tuple[int, ...], tables: _Tables):
    """Equality system over the slack variables for a given rank ordering."""
    n = len(order)
    rows: list[list[int]] = []
    rhs: list[int] = []
    for coef in tables.lp_rows:
        arr = [coef[idx] for idx in order]
        suffix = [0] * n
        acc = 0
        for i in range(n - 1, -1, -1):
            acc += arr[i]
            suffix[i] = acc
        if acc != 0:
            raise AssertionError("node coefficients must sum to zero")
        rows.append(suffix)
        rhs.append(-sum((k + 1) * a for k, a in enumerate(arr) if a))
    return rows, rhs


def order_lp_solution(
    order: tuple[int, ...], tables: _Tables
) -> list[Fraction] | None:
    """Exact entry values realizing the ordering, indexed by rank position."""
    if not tables.lp_rows:
        return [Fraction(k + 1) for k in range(len(order))]
    rows, rhs = _lp_system(order, tables)
    e = solve_nonnegative(rows, rhs)
    if e is None:
        return None
    values = []
    acc = Fraction(0)
    for k in range(len(order)):
        acc += e[k]
        values.append(acc + (k + 1))
    return values


def order_lp_feasible(order: tuple[int, ...], tables: _Tables) -> bool:
    if not tables.lp_rows:
        return True
    rows, rhs = _lp_system(order, tables)
    return solve_nonnegative(rows, rhs) is not None


def matching_precheck(perm: RankPermutation) -> MatchingWitness | None:
    """Fast necessary-condition scan; a witness proves infeasibility.

    Only a certificate of infeasibility: None does not imply feasibility.
    """
    if perm.params.ell < 2:
        raise ValueError("the matching pre-check needs ell >= 2")
    tables = constraint_tables(perm.params)
    hit = order_precheck_witness(perm.order, tables)
    if hit is None:
        return None
    return MatchingWitness(*hit)


def decide(perm: RankPermutation, *, use_precheck: bool = True) -> Verdict:
    """Exact feasibility verdict for a rank permutation.

    When the pre-check fires the LP is skipped (the witness is already a
    proof); when it stays silent the LP always runs.
    """
    params = perm.params
    tables = constraint_tables(params)
    if use_precheck and params.ell >= 2:
        witness = matching_precheck(perm)
        if witness is not None:
            return Verdict(False, witness=witness.describe())
    values = order_lp_solution(perm.order, tables)
    if values is None:
        return Verdict(
            False, witness="no nonnegative flow-conserving assignment exists"
        )
    entries: list[Entry] = [0] * params.word_count
    for k, idx in enumerate(perm.order):
        v = values[k]
        entries[idx] = int(v) if v.denominator == 1 else v
    vector = FeasibleVector(params, tuple(entries))
    vector.check(perm)
    return Verdict(True, vector=vector)


def alpha_star_lower(params: Params) -> int:
    """Certified lower bound on the loopless independence number."""
    q, ell = params.q, params.ell
    if q < 2 or ell < 2:
        raise ValueError("bound defined for q >= 2 and ell >= 2")
    return -((q**ell - q ** (ell - 2)) // -4)


def upper_bound(params: Params) -> Fraction:
    """Upper bound on the number of realizable permutations, exact rational.

    For ell >= 3 the shrinking factor is taken to the certified integer
    exponent from :func:`alpha_star_lower` one window size down (the bound is
    monotone in the exponent, so the integer version is still valid and stays
    rational).
    """
    q, ell = params.q, params.ell
    if q < 3 or ell < 2:
        raise ValueError("bound stated only for q >= 3 and ell >= 2")
    total = math.factorial(params.word_count)
    if ell == 2:
        return Fraction(total * (q - 1), q + 1)
    exponent = alpha_star_lower(Params(q, ell - 1))
    return total * Fraction(q - 1, q + 1) ** exponent
