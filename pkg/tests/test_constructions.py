from fractions import Fraction

from hypothesis import given, strategies as st

from densitylab.constructions import (
    build_counterexample,
    build_three_face,
    build_two_face,
    half_target,
    piece_target,
    verify_no_dehn_face,
)
from densitylab.diagram import Diagram, glue_two_relators
from densitylab.pieces import max_common_piece
from densitylab.presentation import Presentation, sample_presentation

fractions = st.fractions(min_value=0, max_value=1, max_denominator=1000)


@given(fractions, fractions)
def test_boundary_share_identity(d, eps):
    assert 2 * (1 - Fraction(5, 2) * d + Fraction(3, 2) * eps) + (1 - d + eps) == 3 - 6 * d + 4 * eps


def test_rounded_targets():
    assert piece_target(40, 0.25, 0.05) == 18
    assert half_target(40, 0.25, 0.05) == 4
    assert piece_target(60, 0.1, 0.05) == 9
    assert half_target(10, 0.0, 0.05) == 1


def test_single_relator_has_no_pair():
    p = sample_presentation(2, 40, 0.0, 3)
    assert len(p.relators) == 1
    assert build_two_face(p, 0.05) is None
    assert build_three_face(p, 0.05) is None
    assert build_counterexample(p, 0.05) is None


def test_verify_no_dehn_face_small_cases():
    p = sample_presentation(2, 12, 0.2, 1)
    assert not verify_no_dehn_face(Diagram.from_relator(p, 0))
    ell = 20
    r1 = tuple(range(1, ell + 1))
    r2 = tuple(range(1, 5)) + tuple(range(ell + 1, 2 * ell - 3))
    q = Presentation(2 * ell, ell, 0.1, (r1, r2))
    assert not verify_no_dehn_face(glue_two_relators(q, max_common_piece(q, 0, 1)))


def test_two_face_success_rate(dense_runs):
    built = [r["two"] for r in dense_runs if "two" in r]
    assert len(built) >= 90
    for b in built:
        assert b["valid"] and b["reduced"]
        assert b["boundary"] == 2 * 40 - 2 * b["piece"]
        assert b["boundary"] <= 2 * (1 - 2 * 0.25 + 0.05) * 40
        assert b["piece"] >= b["target"]


def test_construction_outputs_valid(dense_runs):
    for r in dense_runs:
        if "three" in r:
            assert r["three"]["valid"] and r["three"]["reduced"]
            assert r["three"]["iso"]
        if "cx" in r:
            c = r["cx"]
            assert c["valid"] and c["reduced"] and c["faces"] == 6
            assert len(set(c["relators"])) == 6
            assert len(c["bad"]) == 2


def test_sharing_pair_and_relator_search_rates(dense_runs):
    assert sum(r["pair_found"] for r in dense_runs) >= 90
    assert sum(r["x_found"] for r in dense_runs) >= 90


def test_three_face_single_seed():
    p = sample_presentation(2, 40, 0.25, 0)
    c = build_three_face(p, 0.05)
    assert c.boundary_length == 68
    assert c.face_shares()[:2] == [18, 18]
    assert c.targets == {"piece": 18, "half": 4}
