"""Explicit diagrams: the sharp 2-face witness, the 3-face block and the
6-face diagram on which Dehn's algorithm gets stuck.

Target lengths are real formulas rounded to integers; each result records
the integers it used in ``targets``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ._numbers import ceil_exact, exact
from .diagram import (
    Arc,
    Diagram,
    DiagramError,
    face_boundary_stats,
    glue_diagrams_along,
    glue_relator_to_boundary,
    glue_two_relators,
    is_reduced_diagram,
)
from .pieces import SAME, find_relator_occurrences, find_sharing_pair
from .words import invert, is_cyclically_reduced


@dataclass
class Construction:
    diagram: Diagram
    relators: Tuple[int, ...]
    targets: Dict[str, int] = field(default_factory=dict)
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def boundary_length(self) -> int:
        return self.diagram.boundary_length

    def face_shares(self) -> List[int]:
        return [s.total for s in face_boundary_stats(self.diagram)]

    def summary(self) -> Dict[str, object]:
        D = self.diagram
        out: Dict[str, object] = {
            "faces": D.n_faces,
            "relators": list(self.relators),
            "boundary": D.boundary_length,
            "face_boundary_edges": self.face_shares(),
            "face_max_runs": [s.max_run for s in face_boundary_stats(D)],
        }
        out.update({f"target_{k}": v for k, v in self.targets.items()})
        out.update(self.notes)
        return out


def piece_target(ell: int, d, eps) -> int:
    """ceil((2d - eps) ell), at least 1."""
    return max(1, ceil_exact((2 * exact(d) - exact(eps)) * ell))


def half_target(ell: int, d, eps) -> int:
    """ceil((d - eps) ell / 2), at least 1."""
    return max(1, ceil_exact((exact(d) - exact(eps)) * ell / 2))


def _sharing_pair(p, t: int, exclude=()):
    # an exact-length piece reproduces the intended boundary length; longer ones still qualify
    return find_sharing_pair(p, t, t, exclude) or find_sharing_pair(p, t, None, exclude)


def build_two_face(p, eps: float = 0.05, d: Optional[float] = None) -> Optional[Construction]:
    """Two relators glued along a common subword of length >= ceil((2d - eps) ell)."""
    d = p.density if d is None else d
    t = piece_target(p.ell, d, eps)
    if t >= p.ell or len(p.relators) < 2:
        return None
    match = _sharing_pair(p, t)
    if match is None or match.length >= p.ell:
        return None
    try:
        D = glue_two_relators(p, match)
    except DiagramError:
        return None
    return Construction(D, (match.i, match.j), {"piece": t}, {"piece_length": match.length})


def _switch_positions(D: Diagram, first: int, second: int) -> List[int]:
    """Boundary positions k where the boundary passes from one of the two faces to the other."""
    b = D.boundary
    fo = D.face_of
    out = []
    for k in range(len(b)):
        prev, cur = fo[b[k - 1]], fo[b[k]]
        if prev != cur and {prev, cur} == {first, second}:
            out.append(k)
    return out


def relator_placements(p, y) -> List[Tuple[int, int, int]]:
    """(relator, orientation, rotation) whose face word starts with ``y``."""
    k = len(y)
    out = []
    for occ in find_relator_occurrences(p, y):
        if occ.orientation == SAME:
            out.append((occ.relator, 1, occ.offset))
        else:
            out.append((occ.relator, -1, (p.ell - occ.offset - k) % p.ell))
    return out


def _three_face(p, eps, d, exclude=()) -> Optional[Construction]:
    ell = p.ell
    t = piece_target(ell, d, eps)
    h = half_target(ell, d, eps)
    if t >= ell or len(p.relators) < 3:
        return None
    match = _sharing_pair(p, t, exclude)
    if match is None or match.length >= ell:
        return None
    try:
        base = glue_two_relators(p, match)
    except DiagramError:
        return None
    used = set(exclude) | {match.i, match.j}
    fallback = None
    for k in _switch_positions(base, 0, 1):
        start = (k - h) % base.boundary_length
        x = base.arc_word(start, 2 * h)
        for relator, orientation, rotation in relator_placements(p, invert(x)):
            if relator in used:
                continue
            try:
                D = glue_relator_to_boundary(base, p, relator, orientation, rotation, Arc(start, 2 * h))
            except DiagramError:
                continue
            result = Construction(
                D, (match.i, match.j, relator),
                {"piece": t, "half": h},
                {"piece_length": match.length, "x_start": start,
                 "r3_orientation": orientation, "r3_rotation": rotation},
            )
            if is_cyclically_reduced(D.boundary_word):
                return result
            if fallback is None:
                fallback = result
    return fallback


def build_three_face(p, eps: float = 0.05, d: Optional[float] = None) -> Optional[Construction]:
    """r1 and r2 glued along a piece, then r3 glued along a boundary word x that
    straddles one end of the gluing with ceil((d - eps) ell / 2) edges on each side.

    Faces 0, 1, 2 carry r1, r2, r3.
    """
    d = p.density if d is None else d
    return _three_face(p, eps, d)


def _region(D: Diagram, face: int, width: int) -> List[int]:
    """Boundary positions of the ``width`` edges in the middle of the face's boundary run,
    nearest the middle first."""
    b = D.boundary
    fo = D.face_of
    on = [k for k in range(len(b)) if fo[b[k]] == face]
    if not on:
        return []
    # rotate so the run is contiguous in ``on``
    n = len(b)
    cut = next((idx for idx in range(len(on)) if (on[idx] - on[idx - 1]) % n != 1), 0)
    run = on[cut:] + on[:cut]
    mid = len(run) // 2
    lo = max(0, mid - width // 2)
    picked = run[lo:lo + width]
    centre = (len(run) - 1) / 2
    return sorted(picked, key=lambda k: (abs(run.index(k) - centre), run.index(k)))


def build_counterexample(p, eps: float = 0.05, d: Optional[float] = None) -> Optional[Construction]:
    """Two 3-face blocks on six distinct relators, joined along a single edge
    of r3 and r3' taken from the floor(ell/5) edges opposite their x-gluing.

    Absent when a second disjoint block or a joinable letter pair is missing.
    """
    d = p.density if d is None else d
    first = _three_face(p, eps, d)
    if first is None:
        return None
    second = _three_face(p, eps, d, exclude=first.relators)
    if second is None:
        return None
    ell = p.ell
    width = max(1, ell // 5)
    A, B = first.diagram, second.diagram
    region_a = _region(A, 2, width)
    region_b = _region(B, 2, width)
    fallback = None
    for pa in region_a:
        for pb in region_b:
            if B.label[B.boundary[pb]] != -A.label[A.boundary[pa]]:
                continue
            try:
                D = glue_diagrams_along(A, B, Arc(pa, 1), Arc(pb, 1))
            except DiagramError:
                continue
            result = Construction(
                D, first.relators + second.relators,
                {"piece": first.targets["piece"], "half": first.targets["half"], "region": width},
                {"join": (pa, pb), "block_boundaries": (A.boundary_length, B.boundary_length)},
            )
            if is_cyclically_reduced(D.boundary_word):
                return result
            if fallback is None:
                fallback = result
    return fallback


def verify_no_dehn_face(D: Diagram) -> bool:
    """True iff no face has more than ell/2 consecutive boundary edges."""
    return all(2 * s.max_run <= D.ell for s in face_boundary_stats(D))


def check_construction(c: Construction, p) -> Dict[str, bool]:
    from .diagram import validate

    return {"valid": validate(c.diagram, p).valid, "reduced": is_reduced_diagram(c.diagram)}
