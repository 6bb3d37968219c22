import math
import random
from fractions import Fraction

import pytest

from profilerank.core import Params, homo_image, homo_preimages, rank_of, all_words
from profilerank.encoder import (
    BASE_COUNT,
    InfoVecA,
    InfoVecB,
    NotACodeword,
    Repository,
    ScaledVector,
    StageA,
    choose_y,
    count_lower_bound,
    decode_a,
    decode_b,
    encode_a,
    encode_b,
    extend_matrix,
    info_a_from_text,
    info_a_to_text,
    info_b_from_text,
    info_b_to_text,
    interleave,
    layer_domain,
    length_bounds,
    matrix_to_vector,
    random_info_a,
    random_info_b,
    rate_lower_bound,
)
from profilerank.feasibility import FeasibleVector

EQ3 = ((1, 2, 5), (3, 6, 7), (4, 8, 9))
PI4 = (2, 3, 4, 1)
T4 = (0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0)
EXPECTED4 = ((20, 40, 100, 48), (61, 120, 140, 51), (81, 160, 180, 83), (46, 52, 84, 44))


# -- interleave / choose_y ----------------------------------------------------

def test_interleave_worked_example():
    merged = interleave(T4, (11, 12, 13, 21), (5, 10, 15, 20, 25, 30, 35, 40, 45))
    assert merged == [5, 10, 11, 12, 13, 15, 20, 21, 25, 30, 35, 40, 45]


def test_interleave_degenerate_patterns():
    assert interleave((0, 0, 0), (), ("a", "b", "c")) == ["a", "b", "c"]
    assert interleave((1, 1), ("x", "y"), ()) == ["x", "y"]


def test_interleave_rejects_length_mismatch():
    with pytest.raises(ValueError):
        interleave((1, 0), ("a", "b"), ())


def test_choose_y_worked_example():
    sx = sorted(5 * e for row in EQ3 for e in row)
    assert choose_y(PI4, T4, sx) == [12, 13, 21, 11]


def test_choose_y_trailing_ones():
    # all new values above the maximum, dealt by rank
    j = 4
    t = (0,) * 9 + (1,) * 4
    sx = [5 * v for v in (1, 2, 3, 4, 5, 6, 7, 8, 9)]
    assert choose_y((1, 2, 3, 4), t, sx) == [46, 47, 48, 49]
    assert choose_y((4, 3, 2, 1), t, sx) == [49, 48, 47, 46]


def test_choose_y_leading_ones_anchor_at_one():
    t = (1, 1, 1, 1) + (0,) * 9
    sx = [5 * v for v in (1, 2, 3, 4, 5, 6, 7, 8, 9)]
    assert choose_y((1, 2, 3, 4), t, sx) == [1, 2, 3, 4]


# -- the alphabet recursion ---------------------------------------------------

def test_extend_matrix_worked_example():
    assert extend_matrix(EQ3, PI4, T4) == EXPECTED4


def test_extend_matrix_output_order():
    vec = matrix_to_vector(EXPECTED4)
    order = rank_of(vec, Params(4, 2)).to_text()
    assert order == "00,01,33,30,03,13,31,10,20,23,32,02,11,12,21,22"


def test_encode_a_base_case_returns_repository_matrix(repo):
    info = InfoVecA(61)
    assert encode_a(info, repo) == repo.matrix(61)
    assert repo.matrix(61) == EQ3  # minimal-entry realization of the worked order


def test_encode_a_outputs_validate(repo):
    rng = random.Random(0)
    for q in (4, 5):
        for _ in range(40):
            info = random_info_a(q, rng)
            vec = matrix_to_vector(encode_a(info, repo))
            FeasibleVector(Params(q, 2), vec).check()


def test_encode_a_order_preservation(repo):
    # restricting the grown order to old words reproduces the previous order
    rng = random.Random(1)
    for _ in range(20):
        info = random_info_a(5, rng)
        prev = encode_a(InfoVecA(info.base, info.stages[:-1]), repo)
        cur = encode_a(info, repo)
        q_prev = len(prev)
        prev_vals = [prev[i][j] for i in range(q_prev) for j in range(q_prev)]
        cur_vals = [cur[i][j] for i in range(q_prev) for j in range(q_prev)]
        assert rank_of(prev_vals, Params(q_prev, 2)).order == rank_of(
            cur_vals, Params(q_prev, 2)
        ).order


def test_decode_a_round_trip(repo):
    rng = random.Random(2)
    for q in (3, 4, 5, 6):
        for _ in range(30):
            info = random_info_a(q, rng)
            assert decode_a(encode_a(info, repo), repo) == info


def test_decode_a_worked_example(repo):
    info = InfoVecA(61, (StageA(PI4, T4),))
    assert encode_a(info, repo) == EXPECTED4
    assert decode_a(EXPECTED4, repo) == info


def test_decode_a_rejects_non_codeword(repo):
    with pytest.raises(NotACodeword):
        decode_a(((1, 2, 3), (4, 5, 6), (7, 8, 9)), repo)
    broken = tuple(tuple(row) for row in EXPECTED4[:-1]) + ((46, 52, 84, 45),)
    with pytest.raises(NotACodeword):
        decode_a(broken, repo)


def test_rank_level_injectivity_alphabet(repo):
    rng = random.Random(3)
    seen = {}
    for _ in range(250):
        info = random_info_a(4, rng)
        order = rank_of(matrix_to_vector(encode_a(info, repo)), Params(4, 2)).order
        if info in seen:
            continue
        for other, other_order in seen.items():
            if other != info:
                assert other_order != order
        seen[info] = order


# -- the window recursion -----------------------------------------------------

def test_layer_domain_size():
    for q in (3, 4):
        for i in (3, 4):
            expected = q ** (i - 1) - 2 * q ** (i - 2) + q ** (i - 3)
            assert len(layer_domain(q, i)) == expected
    assert layer_domain(3, 3) == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_encode_b_window_two_delegates(repo):
    rng = random.Random(4)
    info = random_info_b(4, 2, rng)
    sv = encode_b(info, repo)
    assert sv.params == Params(4, 2)
    assert sv.to_matrix() == encode_a(info.base, repo)


def test_encode_b_outputs_validate(repo):
    rng = random.Random(5)
    for q, ell in ((3, 3), (3, 4), (4, 3)):
        for _ in range(15):
            sv = encode_b(random_info_b(q, ell, rng), repo)
            sv.to_feasible().check()


def test_encode_b_interior_preimages_follow_layer(repo):
    rng = random.Random(6)
    for _ in range(10):
        info = random_info_b(3, 3, rng)
        sv = encode_b(info, repo)
        for w in layer_domain(3, 3):
            vals = [sv[v] for v in homo_preimages(w, 3)]
            ranks = [sorted(vals).index(v) for v in vals]
            assert tuple(ranks) == info.layers[0][w]


def test_encode_b_order_preservation_through_homomorphism(repo):
    rng = random.Random(7)
    for _ in range(10):
        info = random_info_b(3, 3, rng)
        prev = encode_b(InfoVecB(info.base, ()), repo)
        cur = encode_b(info, repo)
        q = 3
        for a in all_words(q, 3):
            for b in all_words(q, 3):
                ia, ib = homo_image(a, q), homo_image(b, q)
                if ia == ib:
                    continue
                assert (cur[a] < cur[b]) == (prev[ia] < prev[ib])


def test_decode_b_round_trip(repo):
    rng = random.Random(8)
    for q, ell in ((3, 3), (3, 4), (4, 3), (3, 2)):
        for _ in range(15):
            info = random_info_b(q, ell, rng)
            assert decode_b(encode_b(info, repo), repo) == info


def test_decode_b_rejects_tampering(repo):
    rng = random.Random(9)
    sv = encode_b(random_info_b(3, 3, rng), repo)
    entries = list(sv.entries)
    entries[0] += 1
    with pytest.raises(NotACodeword):
        decode_b(ScaledVector(sv.params, tuple(entries)), repo)


def test_rank_level_injectivity_window(repo):
    rng = random.Random(10)
    seen = {}
    for _ in range(120):
        info = random_info_b(3, 3, rng)
        order = rank_of(encode_b(info, repo).entries, Params(3, 3)).order
        key = (info.base, tuple(sorted(info.layers[0].items())))
        if key in seen:
            continue
        assert order not in set(seen.values())
        seen[key] = order


# -- calculators ---------------------------------------------------------------

def test_count_lower_bound_values():
    assert count_lower_bound(Params(3, 2)) == BASE_COUNT
    assert count_lower_bound(Params(3, 3)) == 30240 * 6**4
    assert count_lower_bound(Params(3, 3)) == 39191040
    assert count_lower_bound(Params(4, 2)) == 30240 * 24 * 715
    assert count_lower_bound(Params(4, 2)) == 30240 * math.factorial(4) * math.comb(13, 4)


def test_rate_lower_bound_spot_values():
    assert round(rate_lower_bound(Params(3, 3)), 4) == 0.0805
    assert round(rate_lower_bound(Params(5, 5)), 4) == 0.0944
    assert round(rate_lower_bound(Params(10, 10)), 4) == 0.0590


def test_length_bounds_window_two():
    b = length_bounds(Params(3, 2), 16)
    assert b.max_entry_pairs == 16
    assert b.length_pairs == 144
    b4 = length_bounds(Params(4, 2), 16)
    assert b4.max_entry_pairs == 640  # one unrolling of the 2q(q+1) recursion
    assert b4.length_pairs == 16 * 640


def test_length_bounds_window_three():
    b = length_bounds(Params(3, 3), 16)
    assert b.max_entry == 16 * 3 * 3**9
    assert b.length == Fraction(16 * 3 * 27**10, 18)


def test_encoder_outputs_within_length_bounds(repo):
    rng = random.Random(11)
    from profilerank.oracle import compute_c3

    c3 = compute_c3(repo)
    for q, ell in ((3, 2), (4, 2), (3, 3)):
        bounds = length_bounds(Params(q, ell), c3)
        for _ in range(10):
            sv = encode_b(random_info_b(q, ell, rng), repo)
            if ell == 2:
                assert max(sv.entries) <= bounds.max_entry_pairs
                assert sum(sv.entries) <= bounds.length_pairs
            else:
                assert max(sv.entries) <= bounds.max_entry
                assert sum(sv.entries) <= bounds.length


# -- repository and text formats ------------------------------------------------

def test_repository_save_load_round_trip(repo, tmp_path):
    path = tmp_path / "repo.txt"
    repo.save(path)
    again = Repository.load(path)
    assert again.vectors == repo.vectors


def test_repository_load_rejects_corruption(repo, tmp_path):
    path = tmp_path / "repo.txt"
    repo.save(path)
    lines = path.read_text().splitlines()
    lines[5] = "9 9 9 9 9 9 9 9 9"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError):
        Repository.load(path)


def test_repository_index_lookup(repo):
    assert repo.index_of(EQ3) == 61
    with pytest.raises(NotACodeword):
        repo.index_of(((1, 2, 3), (4, 5, 6), (7, 8, 9)))


def test_info_text_round_trips():
    rng = random.Random(12)
    info_a = random_info_a(5, rng)
    assert info_a_from_text(info_a_to_text(info_a)) == info_a
    info_b = random_info_b(3, 4, rng)
    assert info_b_from_text(info_b_to_text(info_b)) == info_b


def test_info_validation_rejects_malformed():
    with pytest.raises(ValueError):
        InfoVecA(0).check()
    with pytest.raises(ValueError):
        InfoVecA(1, (StageA((1, 2, 3), (1, 1, 1, 0, 0, 0, 0)),)).check()
    with pytest.raises(ValueError):
        InfoVecB(InfoVecA(1), ({(1, 1): (0, 1, 2)},)).check()
