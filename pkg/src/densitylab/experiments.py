"""Seeded Monte Carlo experiments over random presentations.

Every trial gets its own generator from ``SeedSequence([master_seed,
d_index, trial_index])``, so results do not depend on how trials are spread
across worker processes.  Experiments return CSV text: a header, trial rows
and summary rows, told apart by the ``row`` column.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence

import numpy as np

from ._numbers import ceil_exact, exact
from .constructions import build_counterexample, relator_placements, verify_no_dehn_face
from .dehn import greendlinger_check
from .diagram import Arc, Diagram, DiagramError, glue_relator_to_boundary, isoperimetric_check
from .pieces import piece_spectrum
from .presentation import sample_presentation
from .words import as_rng, invert

DEFAULT_EPSILON = 0.05


def trial_rng(master_seed: int, d_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, d_index, trial_index]))


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) or hasattr(x, "__float__"):
        return format(float(x), ".6g")
    return "" if x is None else str(x)


def to_csv(columns: Sequence[str], rows: List[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _run(fn: Callable, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


# -- growth ------------------------------------------------------------------


@dataclass
class GrowthResult:
    diagram: Diagram
    requested: int
    reached: int

    @property
    def complete(self) -> bool:
        return self.reached >= self.requested


def _grow(p, target: int, rng, eps: float, d: Optional[float]) -> Iterator[Diagram]:
    d = p.density if d is None else d
    ell = p.ell
    first = int(rng.integers(0, len(p.relators)))
    D = Diagram.from_relator(p, first, 1, 0)
    yield D
    cap0 = max(1, ceil_exact((exact(d) - exact(eps)) * ell))
    while D.n_faces < target:
        grown = None
        cap = min(cap0, ell - 1, D.boundary_length - 1)
        for k in range(cap, 0, -1):
            for start in rng.permutation(D.boundary_length).tolist():
                options = relator_placements(p, invert(D.arc_word(start, k)))
                if not options:
                    continue
                for pick in rng.permutation(len(options)).tolist():
                    relator, orientation, rotation = options[pick]
                    try:
                        grown = glue_relator_to_boundary(D, p, relator, orientation, rotation, Arc(start, k))
                        break
                    except DiagramError:
                        continue
                if grown is not None:
                    break
            if grown is not None:
                break
        if grown is None:
            return
        D = grown
        yield D


def grow_random_diagram(p, target_faces: int, rng=None, eps: float = DEFAULT_EPSILON,
                        d: Optional[float] = None) -> GrowthResult:
    """Grow a reduced disc diagram by gluing relators along boundary arcs.

    Each step takes the longest arc length up to ceil((d - eps) ell) for which
    some boundary arc's inverse occurs in a relator, then a random such arc
    and a random relator placement.  Stops early when nothing can be glued.
    """
    if target_faces < 1:
        raise ValueError("target_faces must be >= 1")
    gen = as_rng(rng)
    D = None
    for D in _grow(p, target_faces, gen, eps, d):
        pass
    return GrowthResult(D, target_faces, D.n_faces)


# -- pieces ------------------------------------------------------------------

PIECE_COLUMNS = ["row", "d", "trial", "relators", "max_piece", "max_piece_over_ell",
                 "n", "mean", "q10", "median", "q90"]


def _piece_trial(task):
    m, ell, d, d_index, trial, master_seed = task
    rng = trial_rng(master_seed, d_index, trial)
    p = sample_presentation(m, ell, d, rng)
    spec = piece_spectrum(p)
    return {"row": "trial", "d": d, "trial": trial, "relators": len(p.relators),
            "max_piece": spec.max_length, "max_piece_over_ell": spec.max_length / ell}


def run_piece_experiment(m: int, ell: int, d_grid: Sequence[float], trials: int,
                         master_seed: int = 0, workers: int = 1) -> str:
    """Largest piece per random presentation, with per-density summaries."""
    if not d_grid:
        raise ValueError("density grid is empty")
    tasks = [(m, ell, d, di, t, master_seed) for di, d in enumerate(d_grid) for t in range(trials)]
    rows = _run(_piece_trial, tasks, workers)
    out = list(rows)
    for d in d_grid:
        vals = np.array([r["max_piece_over_ell"] for r in rows if r["d"] == d])
        if vals.size:
            q10, med, q90 = np.quantile(vals, [0.1, 0.5, 0.9])
            out.append({"row": "summary", "d": d, "n": int(vals.size), "mean": float(vals.mean()),
                        "q10": float(q10), "median": float(med), "q90": float(q90)})
    return to_csv(PIECE_COLUMNS, out)


# -- Greendlinger --------------------------------------------------------------

GREENDLINGER_COLUMNS = ["row", "d", "trial", "faces", "reached", "holds", "long_faces", "threshold",
                        "counterexample", "no_dehn_face", "counterexample_boundary",
                        "n", "pass_rate", "built", "no_dehn_rate"]


def _greendlinger_trial(task):
    m, ell, d, d_index, trial, master_seed, faces, eps, counterexample = task
    rng = trial_rng(master_seed, d_index, trial)
    p = sample_presentation(m, ell, d, rng)
    grown = grow_random_diagram(p, faces, rng, eps)
    row = {"row": "trial", "d": d, "trial": trial, "faces": faces, "reached": grown.reached}
    if grown.complete:
        report = greendlinger_check(grown.diagram, d, eps)
        row.update(holds=report.holds, long_faces=len(report.long_faces), threshold=float(report.threshold))
    else:
        row.update(holds=False)
    if counterexample:
        c = build_counterexample(p, eps)
        row["counterexample"] = c is not None
        if c is not None:
            row["no_dehn_face"] = verify_no_dehn_face(c.diagram)
            row["counterexample_boundary"] = c.boundary_length
    return row


def run_greendlinger_experiment(m: int, ell: int, d_grid: Sequence[float], faces: int, trials: int,
                                master_seed: int = 0, eps: float = DEFAULT_EPSILON, workers: int = 1,
                                counterexample: bool = True) -> str:
    """Greendlinger check on grown diagrams plus counterexample attempts."""
    if faces < 2:
        raise DiagramError("greendlinger_check needs at least two faces")
    if not d_grid:
        raise ValueError("density grid is empty")
    tasks = [(m, ell, d, di, t, master_seed, faces, eps, counterexample)
             for di, d in enumerate(d_grid) for t in range(trials)]
    rows = _run(_greendlinger_trial, tasks, workers)
    out = list(rows)
    for d in d_grid:
        sub = [r for r in rows if r["d"] == d]
        if not sub:
            continue
        built = [r for r in sub if r.get("counterexample")]
        summary = {"row": "summary", "d": d, "faces": faces, "n": len(sub),
                   "pass_rate": sum(bool(r["holds"]) for r in sub) / len(sub)}
        if counterexample:
            summary["built"] = len(built)
            if built:
                summary["no_dehn_rate"] = sum(bool(r["no_dehn_face"]) for r in built) / len(built)
        out.append(summary)
    return to_csv(GREENDLINGER_COLUMNS, out)


# -- isoperimetry --------------------------------------------------------------

ISOPERIMETRY_COLUMNS = ["row", "d", "trial", "faces", "boundary", "ratio", "threshold", "holds",
                        "n", "min_ratio", "violations"]


def _isoperimetry_trial(task):
    m, ell, d, d_index, trial, master_seed, faces_grid, eps = task
    rng = trial_rng(master_seed, d_index, trial)
    p = sample_presentation(m, ell, d, rng)
    wanted = set(faces_grid)
    rows = []
    for D in _grow(p, max(faces_grid), rng, eps, None):
        if D.n_faces in wanted:
            rep = isoperimetric_check(D, d, eps)
            rows.append({"row": "trial", "d": d, "trial": trial, "faces": D.n_faces,
                         "boundary": rep.boundary, "ratio": float(rep.ratio),
                         "threshold": rep.threshold, "holds": rep.holds})
    return rows


def run_isoperimetry_experiment(m: int, ell: int, d_grid: Sequence[float], faces_grid: Sequence[int],
                                trials: int, master_seed: int = 0, eps: float = DEFAULT_EPSILON,
                                workers: int = 1) -> str:
    """Boundary-to-area ratios of grown diagrams against 1 - 2d - eps.

    One diagram is grown per (d, trial) up to the largest requested size and
    measured at every size in ``faces_grid`` it passes through.
    """
    faces_grid = sorted(set(int(f) for f in faces_grid))
    if not d_grid or not faces_grid:
        raise ValueError("empty grid")
    if faces_grid[0] < 1:
        raise ValueError("face counts must be >= 1")
    tasks = [(m, ell, d, di, t, master_seed, faces_grid, eps)
             for di, d in enumerate(d_grid) for t in range(trials)]
    rows = [r for chunk in _run(_isoperimetry_trial, tasks, workers) for r in chunk]
    out = list(rows)
    for d in d_grid:
        for f in faces_grid:
            sub = [r for r in rows if r["d"] == d and r["faces"] == f]
            if sub:
                out.append({"row": "summary", "d": d, "faces": f, "n": len(sub),
                            "min_ratio": min(r["ratio"] for r in sub),
                            "threshold": 1 - 2 * d - eps,
                            "violations": sum(not r["holds"] for r in sub)})
    return to_csv(ISOPERIMETRY_COLUMNS, out)
