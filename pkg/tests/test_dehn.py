from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from densitylab.dehn import (
    DehnStep,
    DehnTrace,
    apply_step,
    brute_force_step,
    dehn_reduce,
    dehn_step,
    greendlinger_check,
    random_trivial_word,
    replay,
)
from densitylab.diagram import Diagram, DiagramError, glue_two_relators
from densitylab.pieces import max_common_piece, small_cancellation_check
from densitylab.presentation import Presentation, sample_presentation
from densitylab.words import format_word, free_reduce, invert, parse_word, sample_reduced_word

from oracles import cancel, dehn_oracle


def c16_presentations(count, seed0=0):
    """Presentations (m=3, ell=48, d=0.03) that pass the C'(1/6) check."""
    out = []
    s = seed0
    while len(out) < count:
        p = sample_presentation(3, 48, 0.03, s)
        if small_cancellation_check(p, Fraction(1, 6)).holds:
            out.append(p)
        s += 1
    return out


def test_whole_relator_one_step():
    p = sample_presentation(2, 12, 0.2, 1)
    r = p.relators[3]
    step = dehn_step(r, p)
    assert step.matched_length == 12 and step.replacement == ()
    t = dehn_reduce(r, p)
    assert t.final == () and len(t.steps) == 1


def test_short_and_empty_words():
    p = sample_presentation(2, 12, 0.2, 1)
    assert dehn_step(parse_word("a"), p) is None
    t = dehn_reduce((), p)
    assert t.final == () and t.steps == []


def test_embedded_half_relator_found():
    p = sample_presentation(2, 12, 0.2, 2)
    r = p.relators[0]
    k = 12 // 2 + 1 + 1
    prefix = sample_reduced_word(2, 5, 3)
    while prefix[-1] == -r[0]:
        prefix = prefix[:-1]
    w = free_reduce(prefix + r[:k])
    assert w[:len(prefix)] == prefix
    step = dehn_step(w, p)
    assert step is not None and step.position <= len(prefix)
    assert step == brute_force_step(w, p)


@pytest.mark.parametrize("seed", range(40))
def test_step_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    p = sample_presentation(2, 10, 0.15, rng)
    for _ in range(5):
        w = random_trivial_word(p, int(rng.integers(0, 4)), rng)
        assert dehn_step(w, p) == brute_force_step(w, p)
        # perturbed words too
        if w:
            v = free_reduce(w[: len(w) // 2] + sample_reduced_word(2, 3, rng))
            assert dehn_step(v, p) == brute_force_step(v, p)


@pytest.mark.parametrize("seed", range(10))
def test_trace_invariants_and_replay(seed):
    p = sample_presentation(2, 10, 0.2, seed)
    w = random_trivial_word(p, 3, seed)
    t = dehn_reduce(w, p)
    assert replay(t, p).ok
    assert len(t.steps) <= len(w)
    cur = t.input
    for s in t.steps:
        assert 2 * s.matched_length > p.ell
        nxt = apply_step(cur, s)
        assert len(nxt) < len(cur)
        cur = nxt
    assert cur == t.final
    assert DehnTrace.from_text(t.to_text()) == t


def test_replay_catches_tampering():
    p = sample_presentation(2, 10, 0.2, 4)
    t = dehn_reduce(p.relators[0] + p.relators[1], p)
    assert t.steps
    bad = DehnTrace(t.input, [DehnStep(**{**t.steps[0].__dict__, "replacement": (1,)})] + t.steps[1:], t.final)
    assert not replay(bad, p).ok


def test_conditional_completeness():
    for p in c16_presentations(5):
        for k in range(4):
            for s in range(5):
                w = random_trivial_word(p, k, s)
                assert dehn_reduce(w, p).final == ()


def test_conjugate_reduces_like_greedy_oracle():
    p = c16_presentations(1, 20)[0]
    words = [format_word(r) for r in p.relators]
    g = sample_reduced_word(3, 7, 1)
    w = free_reduce(g + p.relators[0] + invert(g))
    assert dehn_reduce(w, p).final == ()
    assert dehn_oracle(format_word(w), words) == ""


def test_cyclic_mode():
    p = sample_presentation(2, 10, 0.2, 5)
    r = p.relators[0]
    w = r[6:] + r[:6]
    assert dehn_reduce(w, p, cyclic=True).final == ()
    t = dehn_reduce(r[7:] + r[:7], p, cyclic=True)
    assert replay(t, p).ok


def test_random_trivial_word():
    p = sample_presentation(2, 10, 0.2, 6)
    assert random_trivial_word(p, 0, 1) == ()
    w = random_trivial_word(p, 2, 7)
    assert w == free_reduce(w)
    with pytest.raises(ValueError):
        random_trivial_word(p, -1, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3))
def test_dehn_output_is_reduced_and_equivalent_length_bound(seed, k):
    p = sample_presentation(2, 8, 0.2, seed % 50)
    w = random_trivial_word(p, k, seed)
    t = dehn_reduce(w, p)
    assert t.final == free_reduce(t.final)
    assert len(t.final) <= len(w)
    assert replay(t, p).ok
    assert cancel(format_word(t.final)) == format_word(t.final)


def test_greendlinger_examples():
    # ell = 20, d = 0.1: |w| = ceil(2 d ell) = 4, runs 16 > 20(1 - 5d/2) = 15
    ell = 20
    r1 = tuple(range(1, ell + 1))
    r2 = tuple(range(1, 5)) + tuple(range(ell + 1, 2 * ell - 3))
    p = Presentation(2 * ell, ell, 0.1, (r1, r2))
    D = glue_two_relators(p, max_common_piece(p, 0, 1))
    rep = greendlinger_check(D, 0.1, 0.01)
    assert rep.holds and rep.long_faces == [0, 1] and rep.runs == [16, 16]
    assert rep.threshold == Fraction(15) - Fraction(1, 10)
    assert rep.weak_count == 2
    with pytest.raises(DiagramError):
        greendlinger_check(Diagram.from_relator(p, 0), 0.1, 0.05)
    # at d = 1/5 and eps = 0 the run threshold is exactly ell/2
    assert greendlinger_check(D, 0.2, 0).threshold == Fraction(ell, 2)
