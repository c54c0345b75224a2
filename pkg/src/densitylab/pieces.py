"""Pieces: common subwords between relator occurrences.

A piece is a common prefix of two distinct words of the symmetrized relator
set, i.e. of two cyclic rotations of relators or of their inverses.  Two
rotations of the same relator that spell the same word (a proper power, or a
relator conjugate to its own inverse) are one element and never form a piece;
identical rotations of *different* relators do, and are flagged as full-length.

The fast path sorts every rotation of every relator and of its inverse (the
doubled-word windows of length ell) and reads pieces off longest common
prefixes of neighbours, as with a suffix array.  :func:`brute_force_spectrum`
scans every offset pair and orientation directly and is kept as the oracle.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .words import Word, cyclic_subword, invert, word_to_codes

SAME = 1
INVERSE = -1


@dataclass(frozen=True)
class PieceMatch:
    """Relator ``i`` at ``offset_i`` spells the same ``length`` letters as
    relator ``j`` at ``offset_j`` (orientation SAME) or as the inverse of that
    subword of ``j`` (orientation INVERSE)."""

    i: int
    j: int
    offset_i: int
    offset_j: int
    orientation: int
    length: int
    full_length: bool = False

    def key(self):
        return (self.i, self.j, self.offset_i, self.offset_j, 0 if self.orientation == SAME else 1)

    def swapped(self) -> "PieceMatch":
        return PieceMatch(self.j, self.i, self.offset_j, self.offset_i,
                          self.orientation, self.length, self.full_length)

    def word(self, p) -> Word:
        return cyclic_subword(p.relators[self.i], self.offset_i, self.length)

    def is_valid(self, p) -> bool:
        ri, rj = p.relators[self.i], p.relators[self.j]
        u = cyclic_subword(ri, self.offset_i, self.length)
        v = cyclic_subword(rj, self.offset_j, self.length)
        return u == (v if self.orientation == SAME else invert(v))

    def to_text(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_text(cls, text: str) -> "PieceMatch":
        return cls(**json.loads(text))


@dataclass(frozen=True)
class Occurrence:
    """Relator ``relator`` contains the query at ``offset`` (SAME) or its
    inverse at ``offset`` (INVERSE)."""

    relator: int
    offset: int
    orientation: int
    length: int
    full_length: bool = False


def _bit_length(x: np.ndarray) -> np.ndarray:
    """Exact bit length of uint64 values (frexp is exact below 2^53)."""
    hi = (x >> np.uint64(32)).astype(np.float64)
    lo = (x & np.uint64(0xFFFFFFFF)).astype(np.float64)
    bl_hi = np.frexp(hi)[1]
    bl_lo = np.frexp(lo)[1]
    return np.where(hi > 0, bl_hi + 32, bl_lo).astype(np.int64)


class RotationIndex:
    """All rotations of all relators and their inverses, sorted.

    Item ``(2*i + s)*ell + a`` is the rotation starting at ``a`` of relator
    ``i`` (s = 0) or of its inverse (s = 1).  ``order`` lists items in
    lexicographic order of their rotations (letter codes, ties by item id) and
    ``lcp[k]`` is the common prefix length of ``order[k]`` and ``order[k+1]``.
    """

    def __init__(self, p=None, codes: Optional[np.ndarray] = None, m: Optional[int] = None):
        if p is not None:
            codes, m = p.codes, p.m
        codes = np.asarray(codes, dtype=np.uint8)
        self.n, self.ell = codes.shape
        self.m = m
        ell = self.ell
        inverse = codes[:, ::-1] ^ 1
        both = np.stack([codes, inverse], axis=1)  # (n, 2, ell)
        self.doubled = np.ascontiguousarray(np.concatenate([both, both], axis=2))
        self.bits = max(1, int(2 * m - 1).bit_length())
        self.per = 64 // self.bits
        self.chunks = -(-ell // self.per)

        self.size = 2 * self.n * ell
        keys = self._chunk_keys()
        if self.size == 0:
            self.order = np.zeros(0, dtype=np.int64)
            self.sorted_keys = keys
            self.lcp = np.zeros(0, dtype=np.int32)
            return
        self.order = self._sort(keys)
        self.sorted_keys = [k[self.order] for k in keys]
        del keys
        self.lcp = self._adjacent_lcp()

    def _window_keys(self, width: int, cache: dict) -> np.ndarray:
        """Packed codes of every length-``width`` window of the doubled words."""
        if width in cache:
            return cache[width]
        if width == 1:
            out = self.doubled.astype(np.uint64)
        else:
            half = width // 2
            left = self._window_keys(half, cache)
            right = self._window_keys(width - half, cache)
            shift = np.uint64(self.bits * (width - half))
            out = (left[:, :, :left.shape[2] - (width - half)] << shift) | right[:, :, half:]
        cache[width] = out
        return out

    def _chunk_keys(self) -> list:
        ell, cache = self.ell, {}
        keys = []
        for c in range(self.chunks):
            start = c * self.per
            width = min(self.per, ell - start)
            win = self._window_keys(width, cache)[:, :, start:start + ell]
            key = win << np.uint64(self.bits * (self.per - width))
            keys.append(np.ascontiguousarray(key).reshape(-1))
        return keys

    def _sort(self, keys: list) -> np.ndarray:
        """Lexicographic order of rotations, ties broken by item id."""
        order = np.argsort(keys[0], kind="quicksort")
        first = keys[0][order]
        tied = first[1:] == first[:-1]
        if not tied.any():
            return order
        in_run = np.zeros(order.size, dtype=bool)
        in_run[1:] |= tied
        in_run[:-1] |= tied
        pos = np.flatnonzero(in_run)
        starts = np.ones(pos.size, dtype=bool)
        starts[1:] = ~tied[pos[1:] - 1]
        run_id = np.cumsum(starts)
        sub = order[pos]
        sort_keys = [sub] + [k[sub] for k in keys[:0:-1]] + [run_id]
        order[pos] = sub[np.lexsort(sort_keys)]
        return order

    def _adjacent_lcp(self) -> np.ndarray:
        total = np.zeros(self.size - 1, dtype=np.int32)
        still_equal = np.ones(self.size - 1, dtype=bool)
        for c, sk in enumerate(self.sorted_keys):
            width = min(self.ell, (c + 1) * self.per) - c * self.per
            diff = sk[1:] ^ sk[:-1]
            same = diff == 0
            # index of the first differing letter inside the chunk
            first = np.where(same, width,
                             self.per - 1 - (_bit_length(diff) - 1) // self.bits)
            total += np.where(still_equal, first, 0).astype(np.int32)
            still_equal &= same
        return total

    # -- items -----------------------------------------------------------

    def decode(self, item: int):
        """Item id -> (relator, side, offset); side 0 is the relator, 1 its inverse."""
        block, a = divmod(int(item), self.ell)
        i, s = divmod(block, 2)
        return i, s, a

    def relator_of(self, items: np.ndarray) -> np.ndarray:
        return items // (2 * self.ell)

    def rotation_codes(self, item: int, length: Optional[int] = None) -> np.ndarray:
        i, s, a = self.decode(item)
        return self.doubled[i, s, a:a + (self.ell if length is None else length)]

    # -- prefix search ---------------------------------------------------

    def prefix_range(self, query: Sequence[int]):
        """[lo, hi) positions in sorted order whose rotation starts with ``query`` (letter codes)."""
        q = [int(c) for c in query]
        if len(q) > self.ell:
            return 0, 0
        lo, hi = 0, self.size
        for c in range(self.chunks):
            part = q[c * self.per:(c + 1) * self.per]
            if not part:
                break
            base = 0
            for t, code in enumerate(part):
                base |= code << (self.bits * (self.per - 1 - t))
            free = self.bits * (self.per - len(part))
            low_key = np.uint64(base)
            high_key = np.uint64(base | ((1 << free) - 1))
            sk = self.sorted_keys[c]
            new_lo = lo + int(np.searchsorted(sk[lo:hi], low_key, side="left"))
            new_hi = lo + int(np.searchsorted(sk[lo:hi], high_key, side="right"))
            lo, hi = new_lo, new_hi
            if lo >= hi or len(part) < self.per:
                break
        return lo, hi

    def prefix_items(self, query: Sequence[int]) -> np.ndarray:
        lo, hi = self.prefix_range(query)
        return self.order[lo:hi]

    # -- pieces ----------------------------------------------------------

    def _group_bounds(self):
        """Start positions of runs of identical rotations in sorted order."""
        breaks = np.flatnonzero(self.lcp < self.ell) + 1
        return np.concatenate([[0], breaks, [self.size]])

    def longest_piece_per_item(self) -> np.ndarray:
        """For each sorted position, the longest piece starting at that rotation."""
        ell = self.ell
        bounds = self._group_bounds()
        starts, ends = bounds[:-1], bounds[1:]
        rel = self.relator_of(self.order)
        rel_min = np.minimum.reduceat(rel, starts)
        rel_max = np.maximum.reduceat(rel, starts)
        padded = np.concatenate([[0], self.lcp, [0]])
        left = padded[starts]
        right = padded[ends]
        value = np.where(rel_min != rel_max, ell, np.maximum(left, right))
        return np.repeat(value, ends - starts)


def _canonical(p, first, second, length: int) -> PieceMatch:
    """Convert two (relator, side, offset) rotations with a common prefix into a maximal PieceMatch."""
    ell = p.ell
    i, si, a = first
    j, sj, b = second
    if si == 0 and sj == 0:
        oi, oj, orient = a, b, SAME
    elif si == 0:
        oi, oj, orient = a, (ell - b - length) % ell, INVERSE
    elif sj == 0:
        oi, oj, orient = (ell - a - length) % ell, b, INVERSE
    else:
        oi, oj, orient = (ell - a - length) % ell, (ell - b - length) % ell, SAME
    return _extend(p, PieceMatch(i, j, oi, oj, orient, length))


def _extend(p, m: PieceMatch) -> PieceMatch:
    ell = p.ell
    ri, rj = p.relators[m.i], p.relators[m.j]
    oi, oj, L = m.offset_i, m.offset_j, m.length
    if m.orientation == SAME:
        while L < ell and ri[(oi - 1) % ell] == rj[(oj - 1) % ell]:
            oi, oj, L = (oi - 1) % ell, (oj - 1) % ell, L + 1
        while L < ell and ri[(oi + L) % ell] == rj[(oj + L) % ell]:
            L += 1
    else:
        while L < ell and ri[(oi - 1) % ell] == -rj[(oj + L) % ell]:
            oi, L = (oi - 1) % ell, L + 1
        while L < ell and ri[(oi + L) % ell] == -rj[(oj - 1) % ell]:
            oj, L = (oj - 1) % ell, L + 1
    return PieceMatch(m.i, m.j, oi, oj, m.orientation, L, full_length=(L == ell))


def _best_of_block(p, index: RotationIndex, items: np.ndarray, length: int,
                   pair_ok=None) -> Optional[PieceMatch]:
    """Smallest canonical match among qualifying item pairs of a block sharing ``length`` letters."""
    decoded = [index.decode(x) for x in items.tolist()]
    rotations = [bytes(index.rotation_codes(x)) for x in items.tolist()]
    best = None
    for u in range(len(decoded)):
        for v in range(len(decoded)):
            if u == v:
                continue
            x, y = decoded[u], decoded[v]
            if x[0] == y[0] and rotations[u] == rotations[v]:
                continue
            if pair_ok is not None and not pair_ok(x[0], y[0]):
                continue
            if best is not None and x[0] > best.i:
                continue
            common = length
            if rotations[u] == rotations[v]:
                common = p.ell
            match = _canonical(p, x, y, common)
            if best is None or match.key() < best.key():
                best = match
    return best


@dataclass
class PieceSpectrum:
    """Longest piece starting at each relator position, and the global maximum."""

    max_length: int
    witness: Optional[PieceMatch]
    histogram: dict
    ell: int

    def rows(self):
        return sorted(self.histogram.items())

    def to_csv(self) -> str:
        lines = ["length,count"]
        lines += [f"{k},{v}" for k, v in self.rows()]
        return "\n".join(lines) + "\n"


def piece_spectrum(p) -> PieceSpectrum:
    """Histogram over relator positions (i, a) of the longest piece starting
    there, plus the global maximum piece and its lexicographically smallest witness."""
    index = p.index
    if index.size == 0:
        return PieceSpectrum(0, None, {}, p.ell)
    value = index.longest_piece_per_item()
    forward = (index.order // p.ell) % 2 == 0
    hist = Counter(value[forward].tolist())
    best = int(value.max())
    witness = _global_witness(p, index, best) if best > 0 else None
    return PieceSpectrum(best, witness, dict(sorted(hist.items())), p.ell)


def _global_witness(p, index: RotationIndex, best: int) -> Optional[PieceMatch]:
    ell = p.ell
    if best == ell:
        bounds = index._group_bounds()
    else:
        bounds = np.concatenate([[0], np.flatnonzero(index.lcp < best) + 1, [index.size]])
    found = None
    for lo, hi in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
        if hi - lo < 2:
            continue
        cand = _best_of_block(p, index, index.order[lo:hi], best)
        if cand is not None and cand.length == best and (found is None or cand.key() < found.key()):
            found = cand
    return found


def max_common_piece(p, i: int, j: int) -> Optional[PieceMatch]:
    """Longest piece between relators ``i`` and ``j`` (``i == j`` for self-pieces)."""
    from .presentation import Presentation

    rels = [p.relators[i]] if i == j else [p.relators[i], p.relators[j]]
    sub = Presentation(m=p.m, ell=p.ell, density=p.density, relators=tuple(rels))
    index = sub.index
    value = index.longest_piece_per_item()
    rel = index.relator_of(index.order)
    ell = p.ell
    if i == j:
        best = int(value.max())
    else:
        # cross-relator maximum: adjacent pairs in sorted order from different relators
        cross = rel[1:] != rel[:-1]
        best = int(index.lcp[cross].max()) if cross.any() else 0
    if best == 0:
        return None
    bounds = np.concatenate([[0], np.flatnonzero(index.lcp < best) + 1, [index.size]])
    found = None
    ok = None if i == j else (lambda a, b: a != b)
    for lo, hi in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
        if hi - lo < 2:
            continue
        cand = _best_of_block(sub, index, index.order[lo:hi], best, ok)
        if cand is None or cand.length != best:
            continue
        if i != j and cand.i != 0:
            cand = cand.swapped()
        if found is None or cand.key() < found.key():
            found = cand
    if found is None:
        return None
    mapping = {0: i, 1: j}
    return PieceMatch(mapping[found.i], mapping[found.j], found.offset_i, found.offset_j,
                      found.orientation, found.length, found.full_length)


@dataclass
class SmallCancellationReport:
    holds: bool
    worst: Optional[PieceMatch]
    max_length: int
    bound: Fraction


def small_cancellation_check(p, lam) -> SmallCancellationReport:
    """C'(lam): every piece is strictly shorter than lam * ell."""
    lam = Fraction(lam)
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    spec = piece_spectrum(p)
    bound = lam * p.ell
    return SmallCancellationReport(spec.max_length < bound, spec.witness, spec.max_length, bound)


def find_sharing_pair(p, min_length: int, max_length: Optional[int] = None,
                      exclude=()) -> Optional[PieceMatch]:
    """First (in key order) maximal piece between two distinct relators whose
    length lies in [min_length, max_length], skipping relators in ``exclude``."""
    if min_length < 1:
        raise ValueError("min_length must be >= 1")
    if min_length > p.ell or len(p.relators) < 2:
        return None
    index = p.index
    return _scan_pairs(p, index, min_length, max_length, exclude=frozenset(exclude))


def _scan_pairs(p, index, min_length, max_length, exclude) -> Optional[PieceMatch]:
    hits = np.flatnonzero(index.lcp >= min_length)
    if hits.size == 0:
        return None
    # group consecutive adjacent hits into blocks of positions
    splits = np.flatnonzero(np.diff(hits) > 1) + 1
    rel = index.relator_of(index.order)
    best = None
    for run in np.split(hits, splits):
        lo, hi = int(run[0]), int(run[-1]) + 2
        block_rel = rel[lo:hi]
        if block_rel.min() == block_rel.max():
            continue
        if best is not None and int(block_rel.min()) > best.i:
            continue
        items = index.order[lo:hi].tolist()
        decoded = [index.decode(x) for x in items]
        for u in range(len(items)):
            for v in range(len(items)):
                x, y = decoded[u], decoded[v]
                if x[0] >= y[0] or x[0] in exclude or y[0] in exclude:
                    continue
                if best is not None and x[0] > best.i:
                    continue
                common = int(index.lcp[lo + min(u, v):lo + max(u, v)].min())
                match = _canonical(p, x, y, common)
                if match.length < min_length or (max_length is not None and match.length > max_length):
                    continue
                if best is None or match.key() < best.key():
                    best = match
    return best


def find_relator_occurrences(p, x: Sequence[int]) -> list:
    """All occurrences of ``x`` (SAME) or ``x^-1`` (INVERSE) as a cyclic subword of a relator, in key order."""
    x = tuple(x)
    if len(x) > p.ell:
        return []
    index = p.index
    items = index.prefix_items(word_to_codes(x))
    out = set()
    k = len(x)
    for item in items.tolist():
        i, s, a = index.decode(item)
        if s == 0:
            out.add((i, a, SAME))
        else:
            out.add((i, (p.ell - a - k) % p.ell, INVERSE))
    ordered = sorted(out, key=lambda t: (t[0], t[1], 0 if t[2] == SAME else 1))
    return [Occurrence(i, a, o, k, k == p.ell) for i, a, o in ordered]


def find_relator_containing(p, x: Sequence[int]) -> Optional[Occurrence]:
    occ = find_relator_occurrences(p, x)
    return occ[0] if occ else None


# -- brute-force oracle ------------------------------------------------------


def _run_lengths(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """L[i, j, a, c] = longest t <= ell with X[i, a:a+t] == Y[j, c:c+t] cyclically."""
    ell = X.shape[1]
    eq = X[:, None, :, None] == Y[None, :, None, :]
    alive = np.ones_like(eq)
    length = np.zeros(eq.shape, dtype=np.int32)
    for t in range(ell):
        alive &= np.roll(eq, (-t, -t), axis=(2, 3))
        length += alive
    return length


def brute_force_spectrum(p) -> PieceSpectrum:
    """Exhaustive offset x offset x orientation scan; test oracle for :func:`piece_spectrum`."""
    ell, n = p.ell, len(p.relators)
    if n == 0:
        return PieceSpectrum(0, None, {}, ell)
    X = np.array(p.relators, dtype=np.int64)
    Xinv = -X[:, ::-1]
    same = _run_lengths(X, X)
    inv = _run_lengths(X, Xinv)
    for i in range(n):
        same[i, i][same[i, i] == ell] = -1
        inv[i, i][inv[i, i] == ell] = -1
    per_pos = np.maximum(same.max(axis=(1, 3)), inv.max(axis=(1, 3))).clip(min=0)
    hist = Counter(per_pos.reshape(-1).tolist())
    best = int(per_pos.max())
    witness = None
    if best > 0:
        cands = []
        for arr, orient in ((same, SAME), (inv, INVERSE)):
            for i, j, a, c in zip(*np.nonzero(arr == best)):
                i, j, a, c = int(i), int(j), int(a), int(c)
                oj = c if orient == SAME else (ell - c - best) % ell
                cands.append(PieceMatch(i, j, a, oj, orient, best, best == ell))
        witness = min(cands, key=PieceMatch.key)
    return PieceSpectrum(best, witness, dict(sorted(hist.items())), ell)


def brute_force_pair(p, i: int, j: int) -> int:
    """Exhaustive maximum piece length between relators i and j."""
    ell = p.ell
    X = np.array([p.relators[i]], dtype=np.int64)
    Y = np.array([p.relators[j]], dtype=np.int64)
    same = _run_lengths(X, Y)[0, 0]
    inv = _run_lengths(X, -Y[:, ::-1])[0, 0]
    if i == j:
        same = np.where(same == ell, 0, same)
        inv = np.where(inv == ell, 0, inv)
    return int(max(same.max(), inv.max()))

