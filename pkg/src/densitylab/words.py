"""Words over the generators a_1, ..., a_m and their inverses.

A letter is a nonzero integer: ``g`` stands for the generator a_g and ``-g``
for its inverse.  A word is a tuple of letters.  In text, generator g is the
g-th lowercase letter and its inverse the matching uppercase letter, so
``"abBA"`` is ``(1, 2, -2, -1)``.  Presentations with more than 26 generators
switch to tokens ``g27`` / ``G27``.
"""

from __future__ import annotations

import re
import string
from typing import Iterable, Sequence, Tuple

import numpy as np

Letter = int
Word = Tuple[int, ...]

EMPTY: Word = ()

_TOKEN = re.compile(r"([gG])(\d+)")


def as_rng(rng) -> np.random.Generator:
    """Accept a Generator, a SeedSequence or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def check_letter(letter: int, m: int | None = None) -> None:
    if not isinstance(letter, (int, np.integer)) or letter == 0:
        raise ValueError(f"invalid letter {letter!r}")
    if m is not None and abs(letter) > m:
        raise ValueError(f"letter {letter} outside generators 1..{m}")


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[k] != -w[k + 1] for k in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def free_reduce(raw: Iterable[int]) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[int] = []
    for x in raw:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(int(x))
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return tuple(w[i:j])


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def rotate(w: Sequence[int], k: int) -> Word:
    if not w:
        return tuple(w)
    k %= len(w)
    return tuple(w[k:]) + tuple(w[:k])


def cyclic_subword(w: Sequence[int], start: int, length: int) -> Word:
    """The subword of the cyclic word ``w`` of given length starting at ``start``."""
    n = len(w)
    return tuple(w[(start + t) % n] for t in range(length))


def count_reduced_words(m: int, ell: int) -> int:
    """Exact number 2m(2m-1)^(ell-1) of reduced words of length ell."""
    if m < 1:
        raise ValueError("need at least one generator")
    if ell < 0:
        raise ValueError("negative length")
    if ell == 0:
        return 1
    return 2 * m * (2 * m - 1) ** (ell - 1)


# numpy sampling works on letter codes 0..2m-1: code 2(g-1) is a_g and
# code 2(g-1)+1 is its inverse, so ``code ^ 1`` inverts.


def letter_to_code(x: int) -> int:
    return 2 * (abs(x) - 1) + (x < 0)


def code_to_letter(c: int) -> int:
    g = c // 2 + 1
    return -g if c & 1 else g


def codes_to_word(row) -> Word:
    return tuple(-(c // 2 + 1) if c & 1 else c // 2 + 1 for c in row.tolist())


def word_to_codes(w: Sequence[int]) -> np.ndarray:
    return np.fromiter((letter_to_code(x) for x in w), dtype=np.uint8, count=len(w))


def sample_reduced_codes(m: int, ell: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform reduced words as an array of letter codes.

    The first letter is uniform over the 2m letters, each later one uniform
    over the 2m-1 letters that do not cancel the previous one.
    """
    if m < 1 or ell < 1:
        raise ValueError("need m >= 1 and ell >= 1")
    codes = np.empty((count, ell), dtype=np.uint8)
    codes[:, 0] = rng.integers(0, 2 * m, size=count)
    if ell > 1:
        rest = rng.integers(0, 2 * m - 1, size=(count, ell - 1))
        for j in range(1, ell):
            forbidden = codes[:, j - 1] ^ 1
            c = rest[:, j - 1]
            codes[:, j] = c + (c >= forbidden)
    return codes


def sample_reduced_word(m: int, ell: int, rng) -> Word:
    return codes_to_word(sample_reduced_codes(m, ell, 1, as_rng(rng))[0])


def format_word(w: Sequence[int]) -> str:
    if not w:
        return ""
    if max(abs(x) for x in w) > 26:
        return "".join(f"g{x}" if x > 0 else f"G{-x}" for x in w)
    lower = string.ascii_lowercase
    return "".join(lower[x - 1] if x > 0 else lower[-x - 1].upper() for x in w)


def parse_word(text: str, m: int | None = None) -> Word:
    """Inverse of :func:`format_word`; checks letters against ``m`` if given."""
    text = text.strip()
    if any(ch.isdigit() for ch in text):
        pos = 0
        out = []
        for tok in _TOKEN.finditer(text):
            if tok.start() != pos:
                raise ValueError(f"bad token at position {pos} in {text!r}")
            g = int(tok.group(2))
            out.append(g if tok.group(1) == "g" else -g)
            pos = tok.end()
        if pos != len(text):
            raise ValueError(f"bad token at position {pos} in {text!r}")
    else:
        out = []
        for pos, ch in enumerate(text):
            if ch not in string.ascii_letters:
                raise ValueError(f"bad letter {ch!r} at position {pos} in {text!r}")
            g = string.ascii_lowercase.index(ch.lower()) + 1
            out.append(g if ch.islower() else -g)
    for x in out:
        check_letter(x, m)
    return tuple(out)
