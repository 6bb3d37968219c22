import math
import random
from fractions import Fraction
from itertools import permutations

import pytest

from profilerank._simplex import solve_nonnegative
from profilerank.core import Params, RankPermutation, rank_of
from profilerank.feasibility import (
    FeasibleVector,
    alpha_star_lower,
    decide,
    matching_precheck,
    upper_bound,
)

P32 = Params(3, 2)
CHANNEL_ORDER = "00,01,10,20,02,11,12,21,22"


# -- the phase-1 core ---------------------------------------------------------

def test_simplex_solves_simple_system():
    x = solve_nonnegative([[1, 1], [1, -1]], [4, 2])
    assert x == [Fraction(3), Fraction(1)]


def test_simplex_reports_infeasible():
    assert solve_nonnegative([[1, 1]], [-1]) is None
    assert solve_nonnegative([[0, 0]], [5]) is None


def test_simplex_handles_redundant_rows():
    x = solve_nonnegative([[1, 2], [2, 4], [0, 0]], [6, 12, 0])
    assert x is not None
    assert x[0] + 2 * x[1] == 6 and all(v >= 0 for v in x)


def test_simplex_random_systems_against_verification():
    rng = random.Random(9)
    for _ in range(300):
        m, n = rng.randint(1, 4), rng.randint(1, 6)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        x_true = [rng.randint(0, 5) for _ in range(n)]
        rhs = [sum(r * v for r, v in zip(row, x_true)) for row in rows]
        x = solve_nonnegative(rows, rhs)
        assert x is not None  # constructed feasibly
        for row, b in zip(rows, rhs):
            assert sum(r * v for r, v in zip(row, x)) == b
        assert all(v >= 0 for v in x)


# -- decide -------------------------------------------------------------------

def test_decide_channel_permutation_feasible():
    verdict = decide(RankPermutation.from_text(CHANNEL_ORDER))
    assert verdict.feasible
    vec = verdict.vector
    vec.check(RankPermutation.from_text(CHANNEL_ORDER))


def test_decide_vector_invariants_hold_exactly():
    rng = random.Random(4)
    words = list(range(9))
    seen_feasible = 0
    while seen_feasible < 20:
        order = tuple(rng.sample(words, 9))
        verdict = decide(RankPermutation(P32, order))
        if not verdict.feasible:
            continue
        seen_feasible += 1
        verdict.vector.check(RankPermutation(P32, order))


def test_decide_is_deterministic():
    perm = RankPermutation.from_text(CHANNEL_ORDER)
    assert decide(perm).vector.entries == decide(perm).vector.entries


def test_decide_all_infeasible_at_q2():
    p22 = Params(2, 2)
    for order in permutations(range(4)):
        verdict = decide(RankPermutation(p22, order))
        assert not verdict.feasible
        assert verdict.vector is None


def test_decide_window_one_always_feasible():
    p31 = Params(3, 1)
    for order in permutations(range(3)):
        verdict = decide(RankPermutation(p31, order))
        assert verdict.feasible
        ranked = rank_of(verdict.vector.entries, p31)
        assert ranked.order == order


def test_precheck_and_lp_agree_with_and_without_shortcut():
    rng = random.Random(5)
    for _ in range(200):
        order = tuple(rng.sample(range(9), 9))
        perm = RankPermutation(P32, order)
        assert decide(perm).feasible == decide(perm, use_precheck=False).feasible


def test_scaling_closure():
    verdict = decide(RankPermutation.from_text(CHANNEL_ORDER))
    chi = verdict.vector
    alpha, beta = Fraction(7, 3), Fraction(2)
    scaled = FeasibleVector(
        chi.params, tuple(alpha * e + beta for e in chi.entries)
    )
    scaled.check(RankPermutation.from_text(CHANNEL_ORDER))


# -- the matching pre-check ---------------------------------------------------

def test_precheck_fires_on_forced_pattern_window_two():
    # Rank order starting 10,20,01,02: both incoming words of node 0 sit
    # below both outgoing ones, certifying imbalance there.
    perm = RankPermutation.from_text("10,20,01,02,00,11,12,21,22")
    witness = matching_precheck(perm)
    assert witness is not None
    assert witness.node == (0,)
    assert not decide(perm).feasible


def test_precheck_silent_on_channel_permutation():
    assert matching_precheck(RankPermutation.from_text(CHANNEL_ORDER)) is None


def test_precheck_forced_green_at_window_three():
    # All incoming extensions of node 01 placed below all outgoing ones.
    p33 = Params(3, 3)
    ins = [(0, 0, 1), (1, 0, 1), (2, 0, 1)]
    outs = [(0, 1, 0), (0, 1, 1), (0, 1, 2)]
    rest = [w for w in p33.words() if w not in ins + outs]
    perm = RankPermutation.from_words(p33, ins + outs + rest)
    witness = matching_precheck(perm)
    assert witness is not None
    assert witness.node == (0, 1)
    assert witness.color == "green"


def test_precheck_rejects_window_one():
    with pytest.raises(ValueError):
        matching_precheck(RankPermutation(Params(3, 1), (0, 1, 2)))


def test_precheck_soundness_on_random_samples_window_three():
    rng = random.Random(6)
    p33 = Params(3, 3)
    fired = 0
    for _ in range(40):
        order = tuple(rng.sample(range(27), 27))
        perm = RankPermutation(p33, order)
        if matching_precheck(perm) is not None:
            fired += 1
            assert not decide(perm, use_precheck=False).feasible
    assert fired > 0  # random orders essentially always trip some node


# -- bound calculators --------------------------------------------------------

def test_upper_bound_window_two():
    assert upper_bound(P32) == Fraction(math.factorial(9), 2)
    assert upper_bound(P32) == 181440
    assert 30240 <= upper_bound(P32)


def test_upper_bound_window_three():
    assert upper_bound(Params(3, 3)) == math.factorial(27) * Fraction(1, 4)
    # independently: the exponent is the certified lower bound one level down
    assert alpha_star_lower(Params(3, 2)) == 2


def test_upper_bound_rejects_out_of_range():
    with pytest.raises(ValueError):
        upper_bound(Params(2, 2))
    with pytest.raises(ValueError):
        upper_bound(Params(3, 1))


def test_alpha_star_values():
    assert alpha_star_lower(Params(3, 2)) == 2
    assert alpha_star_lower(Params(2, 2)) == 1
    assert alpha_star_lower(Params(3, 3)) == 6
    # fourth power of three: (81 - 9) / 4 = 18
    assert alpha_star_lower(Params(3, 4)) == 18


def test_verdict_serialization_round_trip():
    verdict = decide(RankPermutation.from_text(CHANNEL_ORDER))
    text = verdict.to_text()
    assert text.startswith("status=feasible")
    restored = FeasibleVector.from_text("\n".join(text.splitlines()[1:]))
    assert restored.entries == verdict.vector.entries


def test_feasible_vector_check_rejects_violations():
    with pytest.raises(ValueError):
        FeasibleVector(P32, (0, 2, 3, 4, 5, 6, 7, 8, 9)).check()
    with pytest.raises(ValueError):
        FeasibleVector(P32, (1, 1, 3, 4, 5, 6, 7, 8, 9)).check()
    with pytest.raises(ValueError):
        FeasibleVector(P32, (1, 2, 3, 4, 5, 6, 7, 8, 9)).check()  # flow broken
