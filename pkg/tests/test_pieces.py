from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from densitylab.pieces import (
    INVERSE,
    SAME,
    PieceMatch,
    brute_force_pair,
    brute_force_spectrum,
    find_relator_containing,
    find_relator_occurrences,
    find_sharing_pair,
    max_common_piece,
    piece_spectrum,
    small_cancellation_check,
)
from densitylab.presentation import Presentation, sample_presentation
from densitylab.words import format_word, invert, parse_word

from oracles import pair_oracle, piece_oracle


def P(*relators):
    return Presentation.from_relators(list(relators), m=2)


def random_small(seed):
    rng = np.random.default_rng(seed)
    ell = int(rng.integers(2, 11))
    n = int(rng.integers(1, 8))
    return sample_presentation(2, ell, 0.0, rng, count_override=min(n, 12 if ell == 2 else n))


def test_pair_examples():
    p = P("abab", "abAB")
    m = max_common_piece(p, 0, 1)
    assert m.length == 2 == pair_oracle(["abab", "abAB"], 0, 1)
    assert m.is_valid(p)
    q = P("aabb")
    s = max_common_piece(q, 0, 0)
    assert s.length == 1 == pair_oracle(["aabb"], 0, 0)
    assert (s.offset_i, s.orientation) != (s.offset_j, SAME)


def test_spectrum_examples():
    assert piece_spectrum(P("aaaa", "bbbb")).max_length == 0
    assert piece_spectrum(P("abab")).max_length == 0
    spec = piece_spectrum(P("aabb", "abAB"))
    assert (spec.max_length, spec.histogram) == piece_oracle(["aabb", "abAB"])
    assert spec.witness.length == 2 and spec.witness.is_valid(P("aabb", "abAB"))
    assert spec.to_csv().splitlines()[0] == "length,count"


def test_small_cancellation_examples():
    assert small_cancellation_check(P("aaaa", "bbbb"), Fraction(1, 4)).holds
    rep = small_cancellation_check(P("aabb", "abAB"), Fraction(1, 2))
    assert not rep.holds and rep.max_length == 2
    assert small_cancellation_check(sample_presentation(2, 12, 0.2, 3), 1).holds


@pytest.mark.parametrize("seed", range(60))
def test_fast_path_matches_string_oracle(seed):
    p = random_small(seed)
    words = [format_word(r) for r in p.relators]
    spec = piece_spectrum(p)
    assert (spec.max_length, spec.histogram) == piece_oracle(words)
    slow = brute_force_spectrum(p)
    assert (slow.max_length, slow.histogram, slow.witness) == (spec.max_length, spec.histogram, spec.witness)
    if spec.witness:
        assert spec.witness.is_valid(p)


@pytest.mark.parametrize("seed", range(30))
def test_pairs_match_string_oracle(seed):
    p = random_small(seed)
    words = [format_word(r) for r in p.relators]
    n = len(words)
    for i in range(n):
        for j in range(n):
            want = pair_oracle(words, i, j)
            got = max_common_piece(p, i, j)
            assert (got.length if got else 0) == want == brute_force_pair(p, i, j)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_symmetry_and_inversion_invariance(seed):
    p = random_small(seed)
    n = len(p.relators)
    for i in range(n):
        for j in range(n):
            a, b = max_common_piece(p, i, j), max_common_piece(p, j, i)
            assert (a.length if a else 0) == (b.length if b else 0)
    q = Presentation(p.m, p.ell, p.density, tuple(invert(r) for r in p.relators))
    assert piece_spectrum(q).max_length == piece_spectrum(p).max_length
    assert piece_spectrum(q).histogram == piece_spectrum(p).histogram


def test_full_length_coincidence_flagged():
    p = P("aabb", "abba")  # rotations of each other
    m = max_common_piece(p, 0, 1)
    assert m.length == 4 and m.full_length
    assert piece_spectrum(p).max_length == 4


def test_piece_match_text_roundtrip():
    m = PieceMatch(0, 1, 2, 3, INVERSE, 4)
    assert PieceMatch.from_text(m.to_text()) == m


def test_find_sharing_pair():
    p = sample_presentation(2, 20, 0.2, 4)
    assert find_sharing_pair(p, 1) is not None
    assert find_sharing_pair(p, p.ell + 1) is None
    m = find_sharing_pair(p, 5)
    assert m.i != m.j and m.length >= 5 and m.is_valid(p)
    exact = find_sharing_pair(p, m.length, m.length)
    assert exact.length == m.length
    # nothing smaller in key order is a qualifying piece
    words = [format_word(r) for r in p.relators]
    for i in range(m.i):
        for j in range(i + 1, len(words)):
            assert pair_oracle(words, i, j) < 5 or max_common_piece(p, i, j).length < 5
    skip = find_sharing_pair(p, 5, exclude={m.i})
    assert skip is None or m.i not in (skip.i, skip.j)


def test_find_relator_containing():
    p = sample_presentation(2, 12, 0.2, 8)
    r = p.relators[2]
    occ = find_relator_containing(p, r[3:4])
    assert occ is not None
    full = find_relator_occurrences(p, r[5:] + r[:5])
    assert any(o.relator == 2 and o.offset == 5 and o.orientation == SAME and o.full_length for o in full)
    back = find_relator_occurrences(p, invert(r[1:6]))
    assert any(o.relator == 2 and o.offset == 1 and o.orientation == INVERSE for o in back)
    for o in find_relator_occurrences(p, parse_word("abA")):
        word = p.relators[o.relator]
        sub = tuple(word[(o.offset + t) % p.ell] for t in range(3))
        assert sub == (parse_word("abA") if o.orientation == SAME else invert(parse_word("abA")))
