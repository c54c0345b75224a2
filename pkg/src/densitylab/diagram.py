"""Disc van Kampen diagrams as half-edge combinatorial maps.

Every face is a cycle of ``ell`` half-edges read counterclockwise; the cycle
spells the face's relator (or its inverse), rotated.  An interior edge has
two half-edges, one in each adjacent face, running in opposite directions
with mutually inverse labels.  A boundary edge has a single half-edge whose
twin is ``BOUNDARY``.  Reading the boundary half-edges in circuit order gives
the boundary word, counterclockwise.

Diagrams are immutable; surgery returns new diagrams.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

from ._numbers import ceil_exact, exact
from .words import Word, format_word, invert, parse_word, rotate

BOUNDARY = -1


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    relator: int
    orientation: int
    rotation: int
    start: int


def face_word(p, relator: int, orientation: int = 1, rotation: int = 0) -> Word:
    """The word a face carrying ``relator`` spells from its first half-edge."""
    base = p.relators[relator]
    if orientation == -1:
        base = invert(base)
    return rotate(base, rotation)


class Diagram:
    """Half-edge tables plus face records.

    ``twin[h]``, ``nxt[h]``, ``label[h]`` and ``origin[h]`` describe half-edge
    ``h``; the target of ``h`` is ``origin[nxt[h]]``.
    """

    def __init__(self, ell: int, twin: Sequence[int], nxt: Sequence[int], label: Sequence[int],
                 origin: Sequence[int], faces: Sequence[Face]):
        self.ell = ell
        self.twin = tuple(twin)
        self.nxt = tuple(nxt)
        self.label = tuple(label)
        self.origin = tuple(origin)
        self.faces = tuple(faces)
        n = len(self.twin)
        if not (len(self.nxt) == len(self.label) == len(self.origin) == n):
            raise DiagramError("half-edge tables have different lengths")

    # -- basic structure -------------------------------------------------

    @classmethod
    def single_face(cls, word: Sequence[int], relator: int = 0, orientation: int = 1,
                    rotation: int = 0) -> "Diagram":
        ell = len(word)
        return cls(ell, [BOUNDARY] * ell, [(k + 1) % ell for k in range(ell)], list(word),
                   list(range(ell)), [Face(relator, orientation, rotation, 0)])

    @classmethod
    def from_relator(cls, p, relator: int, orientation: int = 1, rotation: int = 0) -> "Diagram":
        return cls.single_face(face_word(p, relator, orientation, rotation), relator, orientation, rotation)

    def __len__(self):
        return len(self.faces)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_half_edges(self) -> int:
        return len(self.twin)

    def target(self, h: int) -> int:
        return self.origin[self.nxt[h]]

    def face_cycle(self, f: int) -> List[int]:
        start = self.faces[f].start
        cycle = [start]
        h = self.nxt[start]
        while h != start:
            cycle.append(h)
            if len(cycle) > len(self.nxt):
                raise DiagramError(f"face {f}: next pointers do not close up")
            h = self.nxt[h]
        return cycle

    @cached_property
    def face_of(self) -> Tuple[int, ...]:
        out = [-1] * self.n_half_edges
        for f in range(self.n_faces):
            for h in self.face_cycle(f):
                out[h] = f
        return tuple(out)

    @cached_property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.origin)))

    @property
    def boundary_half_edges(self) -> List[int]:
        return [h for h, t in enumerate(self.twin) if t == BOUNDARY]

    @property
    def interior_edge_count(self) -> int:
        return sum(1 for t in self.twin if t != BOUNDARY) // 2

    @property
    def boundary_length(self) -> int:
        return sum(1 for t in self.twin if t == BOUNDARY)

    @property
    def edge_count(self) -> int:
        return self.interior_edge_count + self.boundary_length

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - self.edge_count + self.n_faces

    def next_on_boundary(self, h: int) -> int:
        """The boundary half-edge leaving the target of boundary half-edge ``h``."""
        g = self.nxt[h]
        for _ in range(self.n_half_edges + 1):
            if self.twin[g] == BOUNDARY:
                return g
            g = self.nxt[self.twin[g]]
        raise DiagramError("boundary walk does not terminate")

    @cached_property
    def boundary_circuits(self) -> Tuple[Tuple[int, ...], ...]:
        """Boundary circuits, each starting at its smallest half-edge id."""
        todo = set(self.boundary_half_edges)
        circuits = []
        while todo:
            start = min(todo)
            circuit = [start]
            todo.discard(start)
            h = self.next_on_boundary(start)
            while h != start:
                if h not in todo:
                    raise DiagramError("boundary walk revisits a half-edge")
                circuit.append(h)
                todo.discard(h)
                h = self.next_on_boundary(h)
            circuits.append(tuple(circuit))
        return tuple(sorted(circuits))

    @property
    def boundary(self) -> Tuple[int, ...]:
        """The outer boundary circuit (the first circuit for non-disc complexes)."""
        circuits = self.boundary_circuits
        return circuits[0] if circuits else ()

    @property
    def boundary_word(self) -> Word:
        return tuple(self.label[h] for h in self.boundary)

    def boundary_vertices(self) -> List[int]:
        return [self.origin[h] for h in self.boundary]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for h in range(self.n_half_edges):
            u, v = self.origin[h], self.target(h)
            adj[u].add(v)
            adj[v].add(u)
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(self.vertices)

    @property
    def is_disc(self) -> bool:
        try:
            return (self.n_faces > 0 and self.is_connected() and self.euler_characteristic == 1
                    and len(self.boundary_circuits) == 1)
        except DiagramError:
            return False

    def arc(self, start: int, length: int) -> List[int]:
        """``length`` consecutive boundary half-edges from circuit position ``start``."""
        b = self.boundary
        return [b[(start + t) % len(b)] for t in range(length)]

    def arc_word(self, start: int, length: int) -> Word:
        return tuple(self.label[h] for h in self.arc(start, length))

    def face_adjacency(self) -> List[set]:
        adj = [set() for _ in range(self.n_faces)]
        fo = self.face_of
        for h, t in enumerate(self.twin):
            if t != BOUNDARY and fo[h] != fo[t]:
                adj[fo[h]].add(fo[t])
        return adj

    # -- text format -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "half_edges": [
                {"id": h, "twin": self.twin[h], "next": self.nxt[h],
                 "label": format_word((self.label[h],)), "origin": self.origin[h]}
                for h in range(self.n_half_edges)
            ],
            "faces": [
                {"relator": f.relator, "orientation": f.orientation, "rotation": f.rotation,
                 "start": f.start}
                for f in self.faces
            ],
            "boundary": list(self.boundary),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "Diagram":
        rows = sorted(doc["half_edges"], key=lambda r: r["id"])
        if [r["id"] for r in rows] != list(range(len(rows))):
            raise DiagramError("half-edge ids must be 0..H-1")
        faces = [Face(f["relator"], f["orientation"], f["rotation"], f["start"]) for f in doc["faces"]]
        return cls(doc["ell"], [r["twin"] for r in rows], [r["next"] for r in rows],
                   [parse_word(r["label"])[0] for r in rows], [r["origin"] for r in rows], faces)

    @classmethod
    def loads(cls, text: str) -> "Diagram":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (self.ell, self.twin, self.nxt, self.label, self.origin, self.faces) == \
            (other.ell, other.twin, other.nxt, other.label, other.origin, other.faces)

    def __hash__(self):
        return hash((self.twin, self.nxt, self.label, self.origin, self.faces))

    def __repr__(self):
        return f"Diagram(faces={self.n_faces}, boundary={self.boundary_length}, ell={self.ell})"


# -- validation --------------------------------------------------------------


@dataclass
class ValidationReport:
    valid: bool
    violations: List[str]
    faces: int = 0
    boundary: int = 0
    euler_characteristic: Optional[int] = None

    def __bool__(self):
        return self.valid


def validate(D: Diagram, p=None) -> ValidationReport:
    """Check every structural invariant; with ``p``, also face labels against relators."""
    bad: List[str] = []
    H = D.n_half_edges
    if D.n_faces == 0:
        bad.append("no faces")
    if sorted(D.nxt) != list(range(H)):
        bad.append("next is not a permutation of the half-edges")
        return ValidationReport(False, bad, D.n_faces)
    covered = [0] * H
    for f, face in enumerate(D.faces):
        if not 0 <= face.start < H:
            bad.append(f"face {f}: start half-edge out of range")
            continue
        cycle = D.face_cycle(f)
        if len(cycle) != D.ell:
            bad.append(f"face {f}: cycle has {len(cycle)} half-edges, expected {D.ell}")
        for h in cycle:
            covered[h] += 1
        if p is not None:
            if not 0 <= face.relator < len(p.relators):
                bad.append(f"face {f}: relator index {face.relator} out of range")
            elif face.orientation not in (1, -1):
                bad.append(f"face {f}: orientation must be +1 or -1")
            else:
                want = face_word(p, face.relator, face.orientation, face.rotation)
                got = tuple(D.label[h] for h in cycle)
                if got != want:
                    bad.append(f"face {f}: spells {format_word(got)}, relator gives {format_word(want)}")
    if any(c != 1 for c in covered):
        bad.append("face cycles do not partition the half-edges")
    for h, t in enumerate(D.twin):
        if t == BOUNDARY:
            continue
        if not 0 <= t < H or t == h:
            bad.append(f"half-edge {h}: invalid twin {t}")
            continue
        if D.twin[t] != h:
            bad.append(f"half-edge {h}: twin is not an involution")
        if D.label[t] != -D.label[h]:
            bad.append(f"half-edge {h}: twin label is not inverse")
        if D.origin[t] != D.target(h) or D.target(t) != D.origin[h]:
            bad.append(f"half-edge {h}: twin endpoints do not match")
    if bad:
        return ValidationReport(False, bad, D.n_faces)
    if not D.is_connected():
        bad.append("complex is not connected")
    chi = D.euler_characteristic
    if chi != 1:
        bad.append(f"Euler characteristic {chi} != 1")
    try:
        circuits = D.boundary_circuits
        if len(circuits) != 1:
            bad.append(f"{len(circuits)} boundary circuits, a disc has exactly 1")
    except DiagramError as exc:
        bad.append(str(exc))
    return ValidationReport(not bad, bad, D.n_faces, D.boundary_length, chi)


def cancellable_edges(D: Diagram) -> List[int]:
    """Interior half-edges whose two faces are mirror images across them.

    Across half-edge h (face f) and its twin t (face g) the pair cancels
    when g read from t spells the inverse of f read from next(h); for
    distinct relators this means the same relator with opposite
    orientations glued position-to-position.
    """
    out = []
    fo = D.face_of
    cycles = {}
    for h, t in enumerate(D.twin):
        if t == BOUNDARY or t < h:
            continue
        f, g = fo[h], fo[t]
        cf = cycles.setdefault(f, D.face_cycle(f))
        cg = cycles.setdefault(g, D.face_cycle(g))
        kf, kg = cf.index(h), cg.index(t)
        f_from_next = [D.label[x] for x in cf[kf + 1:] + cf[:kf + 1]]
        g_from_t = [D.label[x] for x in cg[kg:] + cg[:kg]]
        if tuple(g_from_t) == invert(f_from_next):
            out.append(h)
    return out


def is_reduced_diagram(D: Diagram) -> bool:
    return not cancellable_edges(D)


# -- isoperimetry ------------------------------------------------------------


@dataclass
class IsoperimetryReport:
    faces: int
    boundary: int
    ratio: Fraction
    threshold: float
    required: int
    holds: bool


def isoperimetric_check(D: Diagram, d: float, eps: float) -> IsoperimetryReport:
    """|boundary| >= ceil((1 - 2d - eps) * ell * |D|), compared in integers."""
    faces, boundary = D.n_faces, D.boundary_length
    c = 1 - 2 * exact(d) - exact(eps)
    required = ceil_exact(c * D.ell * faces)
    ratio = Fraction(boundary, D.ell * faces)
    return IsoperimetryReport(faces, boundary, ratio, float(c), required, boundary >= required)


def macroscopic_cancellation_check(D1: Diagram, D2: Diagram, w_length: int, d: float, eps: float) -> bool:
    """|w| <= d (|dD1| + |dD2|)(1 + eps)."""
    return w_length <= exact(d) * (D1.boundary_length + D2.boundary_length) * (1 + exact(eps))


# -- surgery -----------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """``length`` consecutive boundary half-edges from position ``start`` of the boundary circuit."""

    start: int
    length: int


def _arc_vertices(D: Diagram, hs: List[int]) -> List[int]:
    return [D.origin[hs[0]]] + [D.target(h) for h in hs]


def glue_diagrams_along(D1: Diagram, D2: Diagram, arc1: Arc, arc2: Arc,
                        check_reduced: bool = True) -> Diagram:
    """Glue D2 to D1 along boundary arcs spelling w and w^-1."""
    if D1.ell != D2.ell:
        raise DiagramError("diagrams over different relator lengths")
    k = arc1.length
    if arc2.length != k or k < 1:
        raise DiagramError("arcs must have the same positive length")
    for D, a in ((D1, arc1), (D2, arc2)):
        if len(D.boundary_circuits) != 1:
            raise DiagramError("non-disc result: diagram boundary is not a single circuit")
        if k >= len(D.boundary):
            raise DiagramError("non-disc result: arc covers the whole boundary")
    h1 = D1.arc(arc1.start, k)
    h2 = D2.arc(arc2.start, k)
    w1 = tuple(D1.label[h] for h in h1)
    w2 = tuple(D2.label[h] for h in h2)
    if w2 != invert(w1):
        raise DiagramError(f"arc word mismatch: {format_word(w1)} vs {format_word(w2)}")
    for D, hs in ((D1, h1), (D2, h2)):
        vs = _arc_vertices(D, hs)
        if len(set(vs)) != len(vs):
            raise DiagramError("non-disc result: arc is not a simple path")

    shift_h = D1.n_half_edges
    shift_v = max(D1.origin) + 1
    twin = list(D1.twin) + [t if t == BOUNDARY else t + shift_h for t in D2.twin]
    nxt = list(D1.nxt) + [x + shift_h for x in D2.nxt]
    label = list(D1.label) + list(D2.label)
    vmap = {}
    for s in range(k):
        a = h1[s]
        b = h2[k - 1 - s]
        twin[a] = b + shift_h
        twin[b + shift_h] = a
        for v2, v1 in ((D2.origin[b], D1.target(a)), (D2.target(b), D1.origin[a])):
            if vmap.setdefault(v2, v1) != v1:
                raise DiagramError("non-disc result: inconsistent vertex identification")
    origin = list(D1.origin) + [vmap.get(v, v + shift_v) for v in D2.origin]
    faces = list(D1.faces) + [Face(f.relator, f.orientation, f.rotation, f.start + shift_h) for f in D2.faces]
    D = Diagram(D1.ell, twin, nxt, label, origin, faces)
    if check_reduced:
        glued = set(h1)
        if any(h in glued or D.twin[h] in glued for h in cancellable_edges(D)):
            raise DiagramError("unreduced gluing: cancellable pair across the glued arc")
    return D


def glue_two_relators(p, match) -> Diagram:
    """The 2-face diagram of relators i and j glued along a piece."""
    ell, L = p.ell, match.length
    if L >= ell:
        raise DiagramError("full-length match would close up a sphere")
    if L < 1:
        raise DiagramError("empty match")
    if not match.is_valid(p):
        raise DiagramError("match does not describe a common subword")
    D1 = Diagram.from_relator(p, match.i, 1, 0)
    if match.orientation == 1:
        D2 = Diagram.from_relator(p, match.j, -1, 0)
        start2 = (ell - match.offset_j - L) % ell
    else:
        D2 = Diagram.from_relator(p, match.j, 1, 0)
        start2 = match.offset_j
    return glue_diagrams_along(D1, D2, Arc(match.offset_i, L), Arc(start2, L))


def glue_relator_to_boundary(D: Diagram, p, relator: int, orientation: int, rotation: int,
                             arc: Arc) -> Diagram:
    """Attach a new face along ``arc``; the face word read from ``rotation``
    must begin with the inverse of the arc word."""
    if arc.length > p.ell:
        raise DiagramError("arc longer than a relator")
    if arc.length >= p.ell:
        raise DiagramError("non-disc result: arc uses the whole relator")
    face = Diagram.from_relator(p, relator, orientation, rotation)
    return glue_diagrams_along(D, face, arc, Arc(0, arc.length))


# -- face removal --------------------------------------------------------------


@dataclass
class Removal:
    components: List[Diagram]
    disc_flags: List[bool]
    face_maps: List[List[int]]

    @property
    def boundary_length(self) -> int:
        return sum(c.boundary_length for c in self.components)

    @property
    def all_discs(self) -> bool:
        return all(self.disc_flags)


def subdiagram(D: Diagram, faces: Iterable[int]) -> Diagram:
    """The faces listed, with edges to other faces turned into boundary."""
    faces = sorted(set(faces))
    keep = [h for f in faces for h in D.face_cycle(f)]
    new_id = {h: k for k, h in enumerate(keep)}
    twin = [new_id.get(D.twin[h], BOUNDARY) if D.twin[h] != BOUNDARY else BOUNDARY for h in keep]
    nxt = [new_id[D.nxt[h]] for h in keep]
    label = [D.label[h] for h in keep]
    origin = [D.origin[h] for h in keep]
    new_faces = [Face(D.faces[f].relator, D.faces[f].orientation, D.faces[f].rotation,
                      new_id[D.faces[f].start]) for f in faces]
    return Diagram(D.ell, twin, nxt, label, origin, new_faces)


def _components(n: int, adj: List[set], allowed: set) -> List[List[int]]:
    seen = set()
    comps = []
    for f in range(n):
        if f not in allowed or f in seen:
            continue
        comp = [f]
        seen.add(f)
        queue = deque([f])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in allowed and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def remove_face(D: Diagram, face: int) -> Removal:
    """Delete one open face; the rest splits into edge-connected components.

    Components that are not discs (an annulus around a removed interior
    face, for instance) come back flagged.
    """
    if not 0 <= face < D.n_faces:
        raise IndexError("face index out of range")
    rest = set(range(D.n_faces)) - {face}
    comps = _components(D.n_faces, D.face_adjacency(), rest)
    parts = [subdiagram(D, c) for c in comps]
    return Removal(parts, [c.is_disc for c in parts], comps)


# -- depth and cuts ------------------------------------------------------------


def depth_profile(D: Diagram) -> List[Optional[int]]:
    """Distance of each face to the boundary; boundary-adjacent faces are at 1."""
    fo = D.face_of
    depth: List[Optional[int]] = [None] * D.n_faces
    queue = deque()
    for h in D.boundary_half_edges:
        f = fo[h]
        if depth[f] is None:
            depth[f] = 1
            queue.append(f)
    adj = D.face_adjacency()
    while queue:
        f = queue.popleft()
        for g in sorted(adj[f]):
            if depth[g] is None:
                depth[g] = depth[f] + 1
                queue.append(g)
    return depth


@dataclass
class NarrownessReport:
    holds: bool
    max_depth: int
    depth_bound: float
    alpha: float
    layer_counts: List[int]
    layer_bounds: List[float]


def narrowness_check(D: Diagram, C: float) -> NarrownessReport:
    """max depth <= 1 + alpha log|D| and #{depth >= k} <= (1-C)^(k-1) |D|."""
    if not 0 < C <= 1:
        raise ValueError("C must lie in (0, 1]")
    alpha = 0.0 if C == 1 else 1.0 / math.log(1.0 / (1.0 - C))
    depths = [x for x in depth_profile(D) if x is not None]
    n = D.n_faces
    max_depth = max(depths) if depths else 0
    bound = 1 + alpha * math.log(n) if n else 1.0
    counts = [sum(1 for x in depths if x >= k) for k in range(1, max_depth + 1)]
    layer_bounds = [(1 - C) ** (k - 1) * n for k in range(1, max_depth + 1)]
    ok = max_depth <= bound + 1e-12 and all(c <= b + 1e-9 for c, b in zip(counts, layer_bounds))
    return NarrownessReport(ok, max_depth, bound, alpha, counts, layer_bounds)


@dataclass
class QuarterCut:
    path: List[int]
    half_edges: List[int]
    arcs: Tuple[int, int]
    sides: Tuple[List[int], List[int]]

    @property
    def length(self) -> int:
        return len(self.path) - 1


def quarter_cut(D: Diagram) -> Optional[QuarterCut]:
    """Shortest chord through the interior leaving >= floor(L/4) boundary edges on each side.

    Every pair of boundary vertices is tried, which covers every placement of
    four marks at spacing L/4.  Ties go to the lexicographically smallest
    vertex sequence.  Returns None if no such chord exists.
    """
    if D.n_faces < 2:
        raise DiagramError("no cut needed: diagram has a single face")
    bverts = D.boundary_vertices()
    L = len(bverts)
    pos = {v: k for k, v in enumerate(bverts)}
    quarter = L // 4
    adj: dict = {}
    for h, t in enumerate(D.twin):
        if t == BOUNDARY:
            continue
        u, v = D.origin[h], D.target(h)
        adj.setdefault(u, {})
        if v not in adj[u] or h < adj[u][v]:
            adj[u][v] = h

    def valid_targets(p):
        out = set()
        for q, k in pos.items():
            if q == p:
                continue
            a = (k - pos[p]) % L
            if a >= quarter and L - a >= quarter:
                out.add(q)
        return out

    def bfs(sources, stop):
        dist = {s: 0 for s in sources}
        queue = deque(sources)
        while queue:
            u = queue.popleft()
            if u in stop and dist[u] > 0:
                continue
            for v in adj.get(u, {}):
                if v in dist:
                    continue
                if v in pos and v not in stop:
                    continue
                dist[v] = dist[u] + 1
                queue.append(v)
        return dist

    best_len, best_p = None, None
    for p in sorted(bverts):
        targets = valid_targets(p)
        dist = bfs([p], targets)
        reach = [dist[q] for q in targets if q in dist]
        if reach and (best_len is None or min(reach) < best_len):
            best_len, best_p = min(reach), p
    if best_len is None:
        return None
    # smallest start with a chord of minimal length
    for p in sorted(bverts):
        targets = valid_targets(p)
        dist = bfs([p], targets)
        if any(dist.get(q) == best_len for q in targets):
            best_p = p
            break
    targets = valid_targets(best_p)
    back = bfs(sorted(targets), set())  # distances to the targets through interior vertices
    path = [best_p]
    cur = best_p
    for step in range(best_len, 0, -1):
        options = []
        for v in adj.get(cur, {}):
            if step == 1:
                if v in targets:
                    options.append(v)
            elif v not in pos and back.get(v) == step - 1 and v not in path:
                options.append(v)
        cur = min(options)
        path.append(cur)
    edges = [adj[a][b] for a, b in zip(path, path[1:])]

    cut = set(edges) | {D.twin[h] for h in edges}
    fo = D.face_of
    fadj = [set() for _ in range(D.n_faces)]
    for h, t in enumerate(D.twin):
        if t != BOUNDARY and h not in cut:
            fadj[fo[h]].add(fo[t])
    comps = _components(D.n_faces, fadj, set(range(D.n_faces)))
    start_h = D.boundary[pos[best_p]]
    side_a = next(c for c in comps if fo[start_h] in c)
    side_b = sorted(set(range(D.n_faces)) - set(side_a))
    a = (pos[path[-1]] - pos[best_p]) % L
    result = QuarterCut(path, edges, (a, L - a), (side_a, side_b))
    assert min(result.arcs) >= quarter
    return result


# -- face/boundary contact -----------------------------------------------------


@dataclass(frozen=True)
class FaceBoundaryStats:
    total: int
    max_run: int
    run_count: int


def face_boundary_stats(D: Diagram) -> List[FaceBoundaryStats]:
    """Per face: boundary edges, longest consecutive run on the boundary, number of runs."""
    out = []
    for f in range(D.n_faces):
        flags = [D.twin[h] == BOUNDARY for h in D.face_cycle(f)]
        total = sum(flags)
        if total == 0:
            out.append(FaceBoundaryStats(0, 0, 0))
            continue
        if total == len(flags):
            out.append(FaceBoundaryStats(total, total, 1))
            continue
        k = flags.index(False)
        flags = flags[k:] + flags[:k]
        runs, cur = [], 0
        for x in flags:
            if x:
                cur += 1
            elif cur:
                runs.append(cur)
                cur = 0
        if cur:
            runs.append(cur)
        out.append(FaceBoundaryStats(total, max(runs), len(runs)))
    return out


@dataclass
class BadFaceDecomposition:
    good: List[int]
    bad: List[int]
    internal: List[int]
    parts: List[List[int]]
    contacts: List[List[int]]

    @property
    def extremal(self) -> List[List[int]]:
        return [part for part, c in zip(self.parts, self.contacts) if len(c) == 1]


def bad_face_decomposition(D: Diagram) -> BadFaceDecomposition:
    """Good faces meet the boundary in one run, bad faces in two or more.

    Parts are the edge-connected components left after deleting bad faces;
    a part is extremal when it shares edges with exactly one bad face.
    """
    stats = face_boundary_stats(D)
    good = [f for f, s in enumerate(stats) if s.run_count == 1]
    bad = [f for f, s in enumerate(stats) if s.run_count >= 2]
    internal = [f for f, s in enumerate(stats) if s.run_count == 0]
    adj = D.face_adjacency()
    bad_set = set(bad)
    parts = _components(D.n_faces, adj, set(range(D.n_faces)) - bad_set)
    contacts = [sorted({g for f in part for g in adj[f] if g in bad_set}) for part in parts]
    return BadFaceDecomposition(good, bad, internal, parts, contacts)
