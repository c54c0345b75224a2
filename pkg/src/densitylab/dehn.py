"""Dehn's algorithm, Greendlinger-type checks on diagrams, trivial words."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from ._numbers import exact
from .diagram import Diagram, DiagramError, face_boundary_stats
from .words import (
    Word,
    as_rng,
    cyclic_reduce,
    format_word,
    free_reduce,
    invert,
    parse_word,
    rotate,
    sample_reduced_word,
    word_to_codes,
)


@dataclass(frozen=True)
class DehnStep:
    """Replace ``w[position:position+matched_length]`` by ``replacement``.

    The matched subword is the first ``matched_length`` letters of the
    relator ``relator`` (inverted when ``orientation`` is -1) rotated by
    ``rotation``.  ``shift`` is a cyclic rotation applied to the word first;
    it stays 0 unless cyclic reduction is requested.
    """

    position: int
    relator: int
    orientation: int
    rotation: int
    matched_length: int
    replacement: Word
    shift: int = 0

    def to_text(self) -> str:
        doc = asdict(self)
        doc["replacement"] = format_word(self.replacement)
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_text(cls, text: str) -> "DehnStep":
        doc = json.loads(text)
        doc["replacement"] = parse_word(doc["replacement"])
        return cls(**doc)


@dataclass
class DehnTrace:
    input: Word
    steps: List[DehnStep] = field(default_factory=list)
    final: Word = ()
    cyclic: bool = False

    @property
    def succeeded(self) -> bool:
        return not self.final

    def to_text(self) -> str:
        lines = [json.dumps({"input": format_word(self.input), "cyclic": self.cyclic})]
        lines += [s.to_text() for s in self.steps]
        lines.append(json.dumps({"final": format_word(self.final)}))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DehnTrace":
        rows = [ln for ln in text.splitlines() if ln.strip()]
        head, tail = json.loads(rows[0]), json.loads(rows[-1])
        steps = [DehnStep.from_text(ln) for ln in rows[1:-1]]
        return cls(parse_word(head["input"]), steps, parse_word(tail["final"]), head.get("cyclic", False))


def _oriented(p, relator: int, orientation: int, rotation: int) -> Word:
    base = p.relators[relator]
    return rotate(invert(base) if orientation == -1 else base, rotation)


def _make_step(p, w: Word, position: int, relator: int, orientation: int, rotation: int,
               length: int, shift: int = 0) -> DehnStep:
    u = _oriented(p, relator, orientation, rotation)
    return DehnStep(position, relator, orientation, rotation, length, invert(u[length:]), shift)


def apply_step(w: Sequence[int], step: DehnStep) -> Word:
    w = rotate(tuple(w), step.shift)
    k = step.position
    return free_reduce(w[:k] + step.replacement + w[k + step.matched_length:])


def _longest_at(index, codes, start: int, lo_len: int, hi_len: int):
    """Longest L in [lo_len, hi_len] with codes[start:start+L] a rotation prefix."""
    if hi_len < lo_len:
        return 0, None
    lo, hi = index.prefix_range(codes[start:start + lo_len])
    if lo >= hi:
        return 0, None
    best, rng = lo_len, (lo, hi)
    a, b = lo_len + 1, hi_len
    while a <= b:
        mid = (a + b) // 2
        r = index.prefix_range(codes[start:start + mid])
        if r[0] < r[1]:
            best, rng = mid, r
            a = mid + 1
        else:
            b = mid - 1
    return best, rng


def dehn_step(w: Sequence[int], p, cyclic: bool = False) -> Optional[DehnStep]:
    """Leftmost subword of ``w`` agreeing with more than half a relator.

    Among matches at the leftmost position the longest wins, then the
    smallest (relator, orientation, rotation) with orientation +1 before -1.
    With ``cyclic`` the search also covers subwords wrapping around the end.
    """
    w = tuple(w)
    ell = p.ell
    need = ell // 2 + 1
    if len(w) < need or not p.relators:
        return None
    index = p.index
    codes = word_to_codes(w + w[:ell - 1] if cyclic else w)
    n = len(w)
    for start in range(n):
        limit = min(ell, n - start) if not cyclic else min(ell, n)
        length, rng = _longest_at(index, codes, start, need, limit)
        if not length:
            continue
        best = None
        for item in index.order[rng[0]:rng[1]].tolist():
            i, s, a = index.decode(item)
            key = (i, 0 if s == 0 else 1, a)
            if best is None or key < best:
                best = key
        i, s, a = best
        orientation = 1 if s == 0 else -1
        if cyclic and start + length > n:
            return _make_step(p, w, 0, i, orientation, a, length, shift=start)
        return _make_step(p, w, start, i, orientation, a, length)
    return None


def dehn_reduce(w: Sequence[int], p, cyclic: bool = False, max_steps: Optional[int] = None) -> DehnTrace:
    """Apply Dehn steps until none applies.  Each step shortens the word."""
    w = free_reduce(w)
    if cyclic:
        w = cyclic_reduce(w)
    trace = DehnTrace(w, cyclic=cyclic)
    limit = len(w) if max_steps is None else max_steps
    while len(trace.steps) < limit:
        step = dehn_step(w, p, cyclic)
        if step is None:
            break
        nxt = apply_step(w, step)
        if cyclic:
            nxt = cyclic_reduce(nxt)
        if len(nxt) >= len(w):
            raise RuntimeError("Dehn step failed to shorten the word")
        trace.steps.append(step)
        w = nxt
    trace.final = w
    return trace


def brute_force_step(w: Sequence[int], p) -> Optional[DehnStep]:
    """Non-cyclic :func:`dehn_step` by direct comparison against every rotation."""
    w = tuple(w)
    ell = p.ell
    for start in range(len(w)):
        best = None
        for i in range(len(p.relators)):
            for orientation in (1, -1):
                for a in range(ell):
                    u = _oriented(p, i, orientation, a)
                    L = 0
                    while L < ell and start + L < len(w) and w[start + L] == u[L]:
                        L += 1
                    if 2 * L > ell:
                        key = (-L, i, 0 if orientation == 1 else 1, a)
                        if best is None or key < best[0]:
                            best = (key, i, orientation, a, L)
        if best is not None:
            _, i, orientation, a, L = best
            return _make_step(p, w, start, i, orientation, a, L)
    return None


@dataclass
class ReplayReport:
    ok: bool
    problems: List[str]
    final: Word


def replay(trace: DehnTrace, p) -> ReplayReport:
    """Check a trace independently of the matching index."""
    problems = []
    w = tuple(trace.input)
    ell = p.ell
    for k, step in enumerate(trace.steps):
        if not 0 <= step.relator < len(p.relators):
            problems.append(f"step {k}: relator index out of range")
            break
        if 2 * step.matched_length <= ell:
            problems.append(f"step {k}: matched length {step.matched_length} is not more than half")
        cur = rotate(w, step.shift)
        u = _oriented(p, step.relator, step.orientation, step.rotation)
        got = cur[step.position:step.position + step.matched_length]
        if got != u[:step.matched_length] or len(got) != step.matched_length:
            problems.append(f"step {k}: subword does not match the relator")
        if step.replacement != invert(u[step.matched_length:]):
            problems.append(f"step {k}: replacement is not the inverse complement")
        nxt = free_reduce(cur[:step.position] + step.replacement + cur[step.position + step.matched_length:])
        if trace.cyclic:
            nxt = cyclic_reduce(nxt)
        if len(nxt) >= len(w):
            problems.append(f"step {k}: word did not shrink")
        w = nxt
    if w != tuple(trace.final):
        problems.append("replay does not reproduce the final word")
    return ReplayReport(not problems, problems, w)


def random_trivial_word(p, k: int, rng=None) -> Word:
    """Free reduction of k random conjugates g r^(+-1) g^-1, each |g| <= ell."""
    if k < 0:
        raise ValueError("k must be >= 0")
    gen = as_rng(rng)
    out: list = []
    for _ in range(k):
        size = int(gen.integers(0, p.ell + 1))
        g = sample_reduced_word(p.m, size, gen) if size else ()
        r = p.relators[int(gen.integers(0, len(p.relators)))]
        if gen.integers(0, 2):
            r = invert(r)
        out.extend(g + r + invert(g))
    return free_reduce(out)


# -- Greendlinger ----------------------------------------------------------------


@dataclass
class GreendlingerReport:
    holds: bool
    threshold: Fraction
    theorem_threshold: Fraction
    long_faces: List[int]
    runs: List[int]
    weak_threshold: Fraction
    weak_faces: List[int]

    @property
    def weak_count(self) -> int:
        return len(self.weak_faces)


def exact_greendlinger_threshold(ell: int, d, eps) -> Fraction:
    """ell/2 + (ell/2)(1 - 5d - eps), exactly."""
    half = Fraction(ell, 2)
    return half + half * (1 - 5 * exact(d) - exact(eps))


def greendlinger_check(D: Diagram, d: float, eps: float) -> GreendlingerReport:
    """Holds iff two or more faces have a boundary run longer than the threshold.

    The run threshold is ell/2 + (ell/2)(1-5d-eps), never below ell/2: above
    density 1/5 the formula drops under half a relator, where it no longer
    separates Dehn-reducible boundaries from the rest.
    """
    if D.n_faces < 2:
        raise DiagramError("greendlinger_check needs at least two faces")
    ell = D.ell
    theorem = exact_greendlinger_threshold(ell, d, eps)
    threshold = max(Fraction(ell, 2), theorem)
    stats = face_boundary_stats(D)
    runs = [s.max_run for s in stats]
    long_faces = [f for f, r in enumerate(runs) if r > threshold]
    weak = ell * (1 - Fraction(5, 2) * exact(d) - exact(eps))
    weak_faces = [f for f, s in enumerate(stats) if s.total >= weak]
    return GreendlingerReport(len(long_faces) >= 2, threshold, theorem, long_faces, runs, weak, weak_faces)
