"""Command line interface: ``densitylab <command> ...``.

Exit status is 0 on success, 2 when a check fails and 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import bounds as bounds_mod
from .constructions import build_counterexample, build_three_face, build_two_face, check_construction
from .dehn import dehn_reduce, greendlinger_check, random_trivial_word, replay
from .diagram import (
    Diagram,
    bad_face_decomposition,
    depth_profile,
    is_reduced_diagram,
    isoperimetric_check,
    narrowness_check,
    validate,
)
from .experiments import (
    DEFAULT_EPSILON,
    run_greendlinger_experiment,
    run_isoperimetry_experiment,
    run_piece_experiment,
)
from .pieces import piece_spectrum, small_cancellation_check
from .presentation import dumps, loads, sample_presentation
from .words import format_word, parse_word

OK, ERROR, CHECK_FAILED = 0, 1, 2


def _floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _presentation(args):
    if getattr(args, "presentation", None):
        with open(args.presentation) as fh:
            return loads(fh.read())
    return sample_presentation(args.m, args.ell, args.density, args.seed)


def _add_common(sp, density=0.1, ell=40, presentation=True):
    sp.add_argument("--m", type=int, default=2, help="number of generators")
    sp.add_argument("--ell", type=int, default=ell, help="relator length")
    sp.add_argument("--density", type=float, default=density)
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write the main output here instead of stdout")
    if presentation:
        sp.add_argument("--presentation", help="read a presentation file instead of sampling")


def cmd_sample(args) -> int:
    p = sample_presentation(args.m, args.ell, args.density, args.seed, count_override=args.count)
    _emit(dumps(p), args.out)
    return OK


def cmd_pieces(args) -> int:
    p = _presentation(args)
    spec = piece_spectrum(p)
    _emit(spec.to_csv(), args.out)
    witness = spec.witness.to_text() if spec.witness else "none"
    print(f"max_piece={spec.max_length} ell={p.ell} witness={witness}", file=sys.stderr)
    return OK


def cmd_cancellation(args) -> int:
    p = _presentation(args)
    lam = Fraction(args.lam)
    rep = small_cancellation_check(p, lam)
    worst = rep.worst.to_text() if rep.worst else "none"
    _emit(f"C'({lam}) holds={rep.holds} max_piece={rep.max_length} bound={float(rep.bound):g} "
          f"worst={worst}\n", args.out)
    return OK if rep.holds else CHECK_FAILED


def cmd_dehn(args) -> int:
    p = _presentation(args)
    if args.word is not None:
        w = parse_word(args.word, p.m)
    else:
        w = random_trivial_word(p, args.trivial, args.seed)
    trace = dehn_reduce(w, p, cyclic=args.cyclic)
    _emit(trace.to_text(), args.out)
    rep = replay(trace, p)
    print(f"steps={len(trace.steps)} final={format_word(trace.final) or '(empty)'} "
          f"replay={'ok' if rep.ok else 'FAILED'}", file=sys.stderr)
    if not rep.ok:
        return ERROR
    return OK if trace.succeeded else CHECK_FAILED


def cmd_diagram(args) -> int:
    with open(args.file) as fh:
        D = Diagram.loads(fh.read())
    p = None
    if args.presentation:
        with open(args.presentation) as fh:
            p = loads(fh.read())
    if args.action == "validate":
        rep = validate(D, p)
        for v in rep.violations:
            print(v)
        print(f"valid={rep.valid} faces={D.n_faces} boundary={D.boundary_length}")
        return OK if rep.valid else CHECK_FAILED
    d, eps = args.density, args.epsilon
    iso = isoperimetric_check(D, d, eps)
    lines = [
        f"reduced={is_reduced_diagram(D)}",
        f"isoperimetry holds={iso.holds} boundary={iso.boundary} required={iso.required} "
        f"ratio={float(iso.ratio):.6g} threshold={iso.threshold:.6g}",
        f"depths={depth_profile(D)}",
    ]
    ok = iso.holds
    C = 1 - 2 * d - eps
    if 0 < C <= 1:
        nar = narrowness_check(D, C)
        lines.append(f"narrowness holds={nar.holds} max_depth={nar.max_depth}")
    if D.n_faces >= 2:
        g = greendlinger_check(D, d, eps)
        lines.append(f"greendlinger holds={g.holds} threshold={float(g.threshold):g} long_faces={g.long_faces}")
        ok = ok and g.holds
    bad = bad_face_decomposition(D)
    lines.append(f"bad_faces={bad.bad} extremal_parts={bad.extremal}")
    print("\n".join(lines))
    return OK if ok else CHECK_FAILED


def cmd_construct(args) -> int:
    p = _presentation(args)
    build = {"two-face": build_two_face, "three-face": build_three_face,
             "counterexample": build_counterexample}[args.kind]
    c = build(p, args.epsilon)
    if c is None:
        print(f"{args.kind}: no construction found", file=sys.stderr)
        return CHECK_FAILED
    _emit(c.diagram.dumps(), args.out)
    summary = c.summary()
    summary.update(check_construction(c, p))
    if args.kind == "counterexample":
        from .constructions import verify_no_dehn_face

        summary["no_dehn_face"] = verify_no_dehn_face(c.diagram)
        summary["greendlinger_holds"] = greendlinger_check(c.diagram, p.density, args.epsilon).holds
    print(json.dumps(summary, default=str), file=sys.stderr if not args.out else sys.stdout)
    return OK


def cmd_bounds(args) -> int:
    rows = bounds_mod.bounds_table(args.C, args.density, args.epsilon, args.ell)
    width = max(len(name) for name, _ in rows)
    text = "".join(f"{name:<{width}}  {value:.10g}\n" if isinstance(value, float) and not isinstance(value, bool)
                   else f"{name:<{width}}  {value}\n" for name, value in rows)
    _emit(text, args.out)
    return OK


def cmd_experiment(args) -> int:
    grid = _floats(args.densities) if args.densities else [args.density]
    if args.kind == "pieces":
        text = run_piece_experiment(args.m, args.ell, grid, args.trials, args.seed, args.workers)
    elif args.kind == "greendlinger":
        text = run_greendlinger_experiment(args.m, args.ell, grid, args.faces, args.trials, args.seed,
                                           args.epsilon, args.workers, not args.no_counterexample)
    else:
        faces = _ints(args.faces_grid) if args.faces_grid else list(range(1, args.faces + 1))
        text = run_isoperimetry_experiment(args.m, args.ell, grid, faces, args.trials, args.seed,
                                           args.epsilon, args.workers)
    _emit(text, args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="densitylab", description="Random groups in the density model.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="sample a presentation")
    _add_common(sp, presentation=False)
    sp.add_argument("--count", type=int, help="override the relator count")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("pieces", help="piece length histogram (CSV)")
    _add_common(sp)
    sp.set_defaults(func=cmd_pieces)

    sp = sub.add_parser("cancellation", help="check C'(lambda)")
    _add_common(sp)
    sp.add_argument("--lambda", dest="lam", default="1/6", help="fraction, e.g. 1/6")
    sp.set_defaults(func=cmd_cancellation)

    sp = sub.add_parser("dehn", help="run Dehn's algorithm on a word")
    _add_common(sp, density=0.03, ell=48)
    sp.add_argument("--word", help="word to reduce, e.g. abAB")
    sp.add_argument("--trivial", type=int, default=2, help="conjugates in a random trivial word")
    sp.add_argument("--cyclic", action="store_true", help="also match around the end of the word")
    sp.set_defaults(func=cmd_dehn)

    sp = sub.add_parser("diagram", help="validate or check a diagram file")
    sp.add_argument("action", choices=["validate", "check"])
    sp.add_argument("file")
    sp.add_argument("--presentation", help="presentation the face labels refer to")
    sp.add_argument("--density", type=float, default=0.1)
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    sp.set_defaults(func=cmd_diagram)

    sp = sub.add_parser("construct", help="build an explicit diagram")
    sp.add_argument("kind", choices=["two-face", "three-face", "counterexample"])
    _add_common(sp, density=0.25, ell=40)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("bounds", help="table of closed-form bounds")
    sp.add_argument("--C", type=float, default=0.5)
    sp.add_argument("--density", type=float, default=0.1)
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    sp.add_argument("--ell", type=float, default=100)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("experiment", help="Monte Carlo experiments (CSV)")
    sp.add_argument("kind", choices=["pieces", "greendlinger", "isoperimetry"])
    _add_common(sp, ell=60, presentation=False)
    sp.add_argument("--densities", help="comma-separated density grid (default: --density)")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--faces", type=int, default=4, help="diagram size (largest size for isoperimetry)")
    sp.add_argument("--faces-grid", help="comma-separated sizes for isoperimetry")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-counterexample", action="store_true", help="skip counterexample attempts")
    sp.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OverflowError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
