import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from densitylab.constructions import (  # noqa: E402
    build_counterexample,
    build_three_face,
    build_two_face,
    piece_target,
    verify_no_dehn_face,
)
from densitylab.dehn import greendlinger_check  # noqa: E402
from densitylab.diagram import (  # noqa: E402
    bad_face_decomposition,
    is_reduced_diagram,
    isoperimetric_check,
    validate,
)
from densitylab.pieces import find_relator_containing, find_sharing_pair  # noqa: E402
from densitylab.presentation import sample_presentation  # noqa: E402
from densitylab.words import sample_reduced_word  # noqa: E402

DENSE = dict(m=2, ell=40, d=0.25, eps=0.05)
DENSE_SEEDS = 100


def _dense_record(seed):
    m, ell, d, eps = DENSE["m"], DENSE["ell"], DENSE["d"], DENSE["eps"]
    p = sample_presentation(m, ell, d, seed)
    rec = {"seed": seed, "relators": len(p.relators)}
    t = piece_target(ell, d, eps)
    rec["pair_found"] = find_sharing_pair(p, t) is not None
    x = sample_reduced_word(m, int(np.ceil((d - 0.05) * ell)), np.random.default_rng([seed, 1]))
    rec["x_found"] = find_relator_containing(p, x) is not None

    two = build_two_face(p, eps)
    if two is not None:
        D = two.diagram
        rec["two"] = {"boundary": D.boundary_length, "piece": two.notes["piece_length"], "target": t,
                      "valid": validate(D, p).valid, "reduced": is_reduced_diagram(D),
                      "dehn_face": not verify_no_dehn_face(D)}
    three = build_three_face(p, eps)
    if three is not None:
        D = three.diagram
        rec["three"] = {"boundary": D.boundary_length, "shares": three.face_shares(),
                        "valid": validate(D, p).valid, "reduced": is_reduced_diagram(D),
                        "iso": isoperimetric_check(D, d, eps).holds}
    cx = build_counterexample(p, eps)
    if cx is not None:
        D = cx.diagram
        g = greendlinger_check(D, d, eps)
        rec["cx"] = {"boundary": D.boundary_length, "valid": validate(D, p).valid,
                     "reduced": is_reduced_diagram(D), "no_dehn": verify_no_dehn_face(D),
                     "greendlinger": g.holds, "relators": cx.relators,
                     "bad": bad_face_decomposition(D).bad, "faces": D.n_faces}
    return rec


@pytest.fixture(scope="session")
def dense_runs():
    """Constructions on 100 seeded presentations at m=2, ell=40, d=0.25, eps=0.05."""
    return [_dense_record(s) for s in range(DENSE_SEEDS)]


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    ran = any("test_acceptance" in getattr(r, "nodeid", "")
              for reports in terminalreporter.stats.values() for r in reports)
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, acceptance_log.CRITERIA + 1):
        terminalreporter.write_line(acceptance_log.line(n))
