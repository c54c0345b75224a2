"""Density-model presentations <a_1, ..., a_m | R> and their text format.

At density d the relator set R consists of round((2m-1)^(d*ell)) distinct
reduced, cyclically reduced words of length ell, drawn uniformly.
"""

from __future__ import annotations

import bisect
import json
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Optional, Sequence, Tuple

import numpy as np

from .words import (
    Word,
    as_rng,
    format_word,
    is_cyclically_reduced,
    is_reduced,
    parse_word,
    sample_reduced_codes,
    word_to_codes,
)

DEFAULT_CAP = 10**6
REJECTION_FACTOR = 100


class PresentationError(ValueError):
    pass


class PresentationFormatError(PresentationError):
    """Malformed presentation file; carries the offending line and field."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.message = message
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


def relator_count(m: int, ell: int, d: float) -> int:
    """round((2m-1)^(d*ell)), rounding half up, never below 1."""
    if m < 2:
        raise ValueError("density model needs m >= 2")
    if ell < 1:
        raise ValueError("relator length must be >= 1")
    if not 0 <= d <= 1:
        raise ValueError("density must lie in [0, 1]")
    x = float(2 * m - 1) ** (d * ell)
    if not math.isfinite(x) or x >= 2.0**63:
        raise OverflowError(
            f"(2m-1)^(d*ell) = {x:.3g} exceeds 2^63; pass an explicit count_override"
        )
    return max(1, math.floor(x + 0.5))


def _check_relator(r: Word, m: int, ell: int) -> Optional[str]:
    if any(x == 0 or abs(x) > m for x in r):
        return "relator uses a letter outside the generators"
    if not is_reduced(r):
        return "relator not reduced"
    if len(r) != ell:
        return "relator length mismatch"
    if not is_cyclically_reduced(r):
        return "relator not cyclically reduced"
    return None


@dataclass(frozen=True)
class Presentation:
    m: int
    ell: int
    density: float
    relators: Tuple[Word, ...]
    seed: Optional[int] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        if self.m < 1 or self.ell < 1:
            raise PresentationError("need m >= 1 and ell >= 1")
        if any(len(r) != self.ell for r in self.relators):
            k = next(k for k, r in enumerate(self.relators) if len(r) != self.ell)
            raise PresentationError(f"relator {k}: relator length mismatch")
        if not self.relators:
            return
        letters = np.array(self.relators, dtype=np.int64)
        bad = ((letters == 0) | (np.abs(letters) > self.m)).any(axis=1)
        bad |= (letters[:, 1:] == -letters[:, :-1]).any(axis=1)
        bad |= letters[:, 0] == -letters[:, -1]
        if bad.any():
            k = int(np.argmax(bad))
            raise PresentationError(f"relator {k}: {_check_relator(self.relators[k], self.m, self.ell)}")
        if len(set(self.relators)) != len(self.relators):
            seen = set()
            for k, r in enumerate(self.relators):
                if r in seen:
                    raise PresentationError(f"relator {k}: duplicate relator")
                seen.add(r)
        codes = (2 * (np.abs(letters) - 1) + (letters < 0)).astype(np.uint8)
        self.__dict__["codes"] = codes

    @classmethod
    def from_relators(cls, relators: Sequence, m: Optional[int] = None,
                      density: Optional[float] = None, seed: Optional[int] = None):
        """Build from words or letter-case strings; ``m`` and ``density`` are inferred if omitted."""
        words = [parse_word(r) if isinstance(r, str) else tuple(r) for r in relators]
        if not words:
            raise PresentationError("no relators")
        ell = len(words[0])
        if m is None:
            m = max(max(abs(x) for x in w) for w in words)
        if density is None:
            density = 0.0 if m < 2 else math.log(len(words)) / (ell * math.log(2 * m - 1))
        return cls(m=m, ell=ell, density=density, relators=tuple(words), seed=seed)

    def __len__(self):
        return len(self.relators)

    @cached_property
    def codes(self) -> np.ndarray:
        """Relators as an (n, ell) array of letter codes."""
        if not self.relators:
            return np.zeros((0, self.ell), dtype=np.uint8)
        return np.stack([word_to_codes(r) for r in self.relators])

    @cached_property
    def index(self):
        """Sorted index of all relator rotations in both orientations."""
        from .pieces import RotationIndex

        return RotationIndex(self)

    @property
    def expected_count(self) -> int:
        return relator_count(self.m, self.ell, self.density)

    def __repr__(self):
        return (f"Presentation(m={self.m}, ell={self.ell}, density={self.density:g}, "
                f"relators=<{len(self.relators)}>, seed={self.seed})")


def sample_presentation(m: int, ell: int, d: float, rng=None,
                        count_override: Optional[int] = None, cap: int = DEFAULT_CAP) -> Presentation:
    """Sample a density-model presentation.

    Relators are drawn uniformly among reduced words; words that are not
    cyclically reduced or already drawn are rejected, so R is a set.
    ``rng`` may be an integer seed (recorded in the result) or a Generator.
    """
    target = relator_count(m, ell, d) if count_override is None else int(count_override)
    if target < 0:
        raise ValueError("negative relator count")
    if target > cap:
        raise ValueError(f"relator count {target} exceeds cap {cap}")
    seed = int(rng) if isinstance(rng, (int, np.integer)) else None
    gen = as_rng(rng)

    kept: list[np.ndarray] = []
    seen: set[bytes] = set()
    drawn = 0
    budget = REJECTION_FACTOR * max(target, 1)
    while len(kept) < target:
        if drawn >= budget:
            raise PresentationError(
                f"rejection sampling exceeded {budget} draws: density too high for ell={ell}"
            )
        batch = min(max(2 * (target - len(kept)), 16), budget - drawn)
        rows = sample_reduced_codes(m, ell, batch, gen)
        drawn += batch
        if ell > 1:
            rows = rows[rows[:, 0] != (rows[:, -1] ^ 1)]
        for row in rows:
            key = row.tobytes()
            if key in seen:
                continue
            seen.add(key)
            kept.append(row)
            if len(kept) == target:
                break
    if kept:
        block = np.stack(kept).astype(np.int64)
        letters = (block // 2 + 1) * (1 - 2 * (block & 1))
        relators = tuple(map(tuple, letters.tolist()))
    else:
        relators = ()
    return Presentation(m=m, ell=ell, density=d, relators=relators, seed=seed)


def dumps(p: Presentation) -> str:
    doc = {
        "m": p.m,
        "ell": p.ell,
        "density": p.density,
        "seed": p.seed,
        "relators": [format_word(r) for r in p.relators],
    }
    return json.dumps(doc, indent=2) + "\n"


def store(p: Presentation, sink: IO[str]) -> None:
    sink.write(dumps(p))


_STRING = re.compile(r'"((?:[^"\\]|\\.)*)"')


def _relator_lines(text: str) -> list[int]:
    key = re.search(r'"relators"\s*:\s*\[', text)
    if key is None:
        return []
    breaks = [i for i, ch in enumerate(text) if ch == "\n"]
    return [bisect.bisect_left(breaks, mt.start()) + 1 for mt in _STRING.finditer(text, key.end())]


def loads(text: str) -> Presentation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationFormatError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise PresentationFormatError("top level must be an object", line=1)

    def need(name, kinds):
        if name not in doc:
            raise PresentationFormatError("missing field", field=name)
        value = doc[name]
        if not isinstance(value, kinds) or isinstance(value, bool):
            raise PresentationFormatError(f"wrong type {type(value).__name__}", field=name)
        return value

    m = need("m", int)
    ell = need("ell", int)
    density = float(need("density", (int, float)))
    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise PresentationFormatError("seed must be an integer or null", field="seed")
    raw = need("relators", list)
    if m < 1 or ell < 1:
        raise PresentationFormatError("m and ell must be positive", field="m" if m < 1 else "ell")

    lines = _relator_lines(text)
    relators = []
    seen = set()
    for k, s in enumerate(raw):
        line = lines[k] if k < len(lines) else None
        name = f"relators[{k}]"
        if not isinstance(s, str):
            raise PresentationFormatError("relator must be a string", line=line, field=name)
        try:
            r = parse_word(s)
        except ValueError as exc:
            raise PresentationFormatError(str(exc), line=line, field=name) from None
        problem = _check_relator(r, m, ell)
        if problem:
            raise PresentationFormatError(problem, line=line, field=name)
        if r in seen:
            raise PresentationFormatError("duplicate relator", line=line, field=name)
        seen.add(r)
        relators.append(r)
    return Presentation(m=m, ell=ell, density=density, relators=tuple(relators), seed=seed)


def load(source: IO[str]) -> Presentation:
    return loads(source.read())
