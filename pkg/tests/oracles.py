"""Slow, obviously-correct reference computations used as test oracles.

Everything here works on plain strings in the letter-case encoding so it
shares no code with the package.
"""

from __future__ import annotations

import itertools
from collections import Counter


def inv_letter(ch: str) -> str:
    return ch.lower() if ch.isupper() else ch.upper()


def inv(w: str) -> str:
    return "".join(inv_letter(c) for c in reversed(w))


def reduced(w: str) -> bool:
    return all(w[k + 1] != inv_letter(w[k]) for k in range(len(w) - 1))


def cancel(w: str) -> str:
    """Free reduction by repeated scanning (quadratic, no stack)."""
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            if w[k + 1] == inv_letter(w[k]):
                w = w[:k] + w[k + 2:]
                changed = True
                break
    return w


def alphabet(m: int) -> str:
    low = "abcdefghijklmnopqrstuvwxyz"[:m]
    return low + low.upper()


def all_reduced(m: int, ell: int):
    return ["".join(t) for t in itertools.product(alphabet(m), repeat=ell) if reduced("".join(t))]


def rotations(w: str):
    return [w[a:] + w[:a] for a in range(len(w))]


def symmetrized(relators):
    """(relator index, rotation word, forward position or None) for every rotation of r and r^-1."""
    out = []
    for i, r in enumerate(relators):
        for a, u in enumerate(rotations(r)):
            out.append((i, u, a))
        for u in rotations(inv(r)):
            out.append((i, u, None))
    return out


def common_prefix(u: str, v: str) -> int:
    n = 0
    while n < len(u) and n < len(v) and u[n] == v[n]:
        n += 1
    return n


def piece_oracle(relators):
    """(max piece, histogram over forward positions of the longest piece starting there).

    Two rotations form a piece unless they come from the same relator and
    spell the same word.
    """
    items = symmetrized(relators)
    best_at = {}
    best = 0
    for x, (i, u, a) in enumerate(items):
        top = 0
        for y, (j, v, _) in enumerate(items):
            if x == y or (i == j and u == v):
                continue
            top = max(top, common_prefix(u, v))
        best = max(best, top)
        if a is not None:
            best_at[(i, a)] = top
    return best, dict(sorted(Counter(best_at.values()).items()))


def pair_oracle(relators, i: int, j: int) -> int:
    ri = [(u) for u in rotations(relators[i])]
    rj = rotations(relators[j]) + rotations(inv(relators[j]))
    best = 0
    for u in ri:
        for v in rj:
            if i == j and u == v:
                continue
            best = max(best, common_prefix(u, v))
    return best


def dehn_oracle(word: str, relators) -> str:
    """Greedy Dehn reduction: replace any subword that is more than half of a
    relator rotation; the result is whatever is left when nothing applies."""
    ell = len(relators[0])
    cyc = [u for r in relators for u in rotations(r) + rotations(inv(r))]
    w = cancel(word)
    while True:
        for u in cyc:
            for L in range(ell, ell // 2, -1):
                k = w.find(u[:L])
                if k >= 0:
                    w = cancel(w[:k] + inv(u[L:]) + w[k + L:])
                    break
            else:
                continue
            break
        else:
            return w
