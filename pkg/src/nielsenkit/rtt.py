"""Invariant filtrations of graph selfmaps, stratum classification, the
Perron-Frobenius expansion data, and indivisible Nielsen paths.

A filtration level is the vertex set plus a prefix union of strongly connected
components of the edge-crossing digraph; every level is invariant by
construction and re-verified.  Stratum types:

* type1: every stratum edge maps into the lower level;
* type2: the stratum transition matrix is a cyclic permutation (images may
  wander through lower strata between the single top crossing);
* type3: irreducible transition matrix with expansion > 1 whose derivative
  keeps stratum darts in the stratum.

An expanding train-track stratum carries at most one indivisible Nielsen path
crossing it; finding two there is a structure violation of the input.
Permutation strata outside normal form may carry several, and then only their
merges are trusted.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .graphs import (
    Dart,
    EdgePath,
    GraphMap,
    derivative,
    fixed_directions,
    fixed_vertices,
    map_path,
    turn_degenerates_in_one_step,
    trivial_path,
)


class StructureViolation(RuntimeError):
    pass


@dataclass
class Filtration:
    """Cumulative invariant levels; level 0 is the vertex set, stratum i is
    levels[i] minus levels[i-1]."""

    strata: list[tuple[str, ...]]

    @property
    def depth(self) -> int:
        return len(self.strata)

    def level_edges(self, i: int) -> tuple[str, ...]:
        out: list[str] = []
        for s in self.strata[:i]:
            out.extend(s)
        return tuple(out)

    def to_json(self) -> list[list[str]]:
        return [list(s) for s in self.strata]


def crossed_edges(f: GraphMap, e: str) -> set[str]:
    return {d.name for d in f.edge_map[e].darts}


def crossing_count(f: GraphMap, e: str, target: str) -> int:
    return sum(1 for d in f.edge_map[e].darts if d.name == target)


def derive_filtration(f: GraphMap) -> Filtration:
    """Condense the edge-crossing digraph into strongly connected components,
    lowest strata first; ties broken by edge name for determinism."""
    edges = list(f.graph.edges)
    succ = {e: sorted(crossed_edges(f, e)) for e in edges}

    # Tarjan SCC, iterative, deterministic over sorted adjacency.
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: dict[str, bool] = {}
    stack: list[str] = []
    comps: list[tuple[str, ...]] = []
    counter = [0]

    def strongconnect(root: str) -> None:
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if on_stack.get(w):
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))

    for e in sorted(edges):
        if e not in index:
            strongconnect(e)

    comp_of = {e: i for i, c in enumerate(comps) for e in c}
    # Edges of the condensation: component of e depends on components it crosses.
    deps: dict[int, set[int]] = {i: set() for i in range(len(comps))}
    for e in edges:
        for w in succ[e]:
            if comp_of[w] != comp_of[e]:
                deps[comp_of[e]].add(comp_of[w])
    # Kahn with lexicographic tie-break: dependencies (lower strata) first.
    remaining = dict(deps)
    placed: list[int] = []
    done: set[int] = set()
    while len(placed) < len(comps):
        ready = sorted((i for i in remaining if remaining[i] <= done),
                       key=lambda i: comps[i])
        if not ready:
            raise AssertionError("condensation is not a DAG")
        i = ready[0]
        placed.append(i)
        done.add(i)
        del remaining[i]
    filt = Filtration([comps[i] for i in placed])
    verify_filtration(f, filt)
    return filt


def verify_filtration(f: GraphMap, filt: Filtration) -> None:
    seen: list[str] = []
    all_edges = set(f.graph.edges)
    for s in filt.strata:
        for e in s:
            if e not in all_edges:
                raise ValueError(f"filtration names unknown edge {e}")
        seen.extend(s)
        level = set(seen)
        for e in level:
            if not crossed_edges(f, e) <= level:
                raise ValueError(f"level through {s} is not invariant: edge {e} escapes")
    if set(seen) != all_edges or len(seen) != len(all_edges):
        raise ValueError("filtration does not partition the edge set")


def filtration_from_lists(f: GraphMap, strata: Sequence[Sequence[str]]) -> Filtration:
    filt = Filtration([tuple(s) for s in strata])
    verify_filtration(f, filt)
    return filt


# ---------------------------------------------------------------------------
# Perron-Frobenius data.


def transition_matrix(f: GraphMap, stratum: Sequence[str]) -> list[list[int]]:
    """M[i][j] = number of times the image of stratum edge j crosses edge i."""
    return [[crossing_count(f, ej, ei) for ej in stratum] for ei in stratum]


def _support_irreducible(m: list[list[int]]) -> bool:
    n = len(m)
    for start in range(n):
        seen = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if m[j][i] > 0 and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != n:
            return False
    return True


@dataclass
class ExpansionData:
    lam: float
    lengths: list  # Fractions when exact, floats otherwise
    residual: float
    exact: bool


def pf_metric(m: list[list[int]], tol: float = 1e-9) -> ExpansionData:
    """Perron-Frobenius eigenvalue and positive eigenvector, min entry 1.

    1x1 and rational 2x2 cases are exact; otherwise deterministic power
    iteration with a Rayleigh quotient.  Raises for reducible matrices and for
    spectral radius <= 1 (not an expanding stratum).
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    if any(x < 0 for row in m for x in row):
        raise ValueError("matrix must be nonnegative")
    if not _support_irreducible(m):
        raise ValueError("matrix is reducible")
    if n == 1:
        lam = m[0][0]
        if lam <= 1:
            raise ValueError(f"spectral radius {lam} is not > 1")
        return ExpansionData(float(lam), [Fraction(1)], 0.0, True)
    if n == 2:
        tr = m[0][0] + m[1][1]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        disc = tr * tr - 4 * det
        root = math.isqrt(disc)
        if root * root == disc and (tr + root) % 2 == 0:
            lam_q = Fraction(tr + root, 2)
            if lam_q <= 1:
                raise ValueError(f"spectral radius {lam_q} is not > 1")
            # Solve (M - lam I) v = 0 exactly.
            if m[0][1] != 0:
                v = [Fraction(m[0][1]), lam_q - m[0][0]]
            else:
                v = [lam_q - m[1][1], Fraction(m[1][0])]
            lo = min(v)
            if lo <= 0:
                raise ValueError("eigenvector is not positive; matrix not irreducible")
            v = [x / lo for x in v]
            return ExpansionData(float(lam_q), v, 0.0, True)
    a = np.array(m, dtype=float)
    # Warm start: power iteration applied through repeated squaring of the
    # normalized operator collapses slow spectral gaps, then plain Rayleigh
    # steps on the original matrix polish the estimate.
    b = a / np.abs(a).max()
    for _ in range(24):
        b = b @ b
        top = np.abs(b).max()
        if top == 0:
            raise ValueError("matrix is nilpotent on the iteration vector")
        b /= top
    v = b @ np.ones(n)
    if np.linalg.norm(v) == 0:
        v = np.ones(n)
    lam = 0.0
    for _ in range(10_000):
        w = a @ v
        nrm = np.linalg.norm(w)
        if nrm == 0:
            raise ValueError("matrix is nilpotent on the iteration vector")
        w /= nrm
        lam = float(w @ a @ w) / float(w @ w)
        v = w
        if v.min() > 0:
            scaled = v / v.min()
            if float(np.max(np.abs(a @ scaled - lam * scaled))) <= tol / 4:
                break
    v = v / v.min()
    residual = float(np.max(np.abs(a @ v - lam * v)))
    if lam <= 1 + tol:
        raise ValueError(f"spectral radius {lam} is not > 1")
    return ExpansionData(lam, [float(x) for x in v], residual, False)


# ---------------------------------------------------------------------------
# Stratum classification.


@dataclass
class StratumInfo:
    index: int
    edges: tuple[str, ...]
    stype: str  # type1 | type2 | type3 | unclassifiable
    note: str = ""
    matrix: list[list[int]] = field(default_factory=list)
    expansion: Optional[ExpansionData] = None
    illegal_turns: list[tuple[Dart, Dart]] = field(default_factory=list)
    inp: Optional["NielsenPathData"] = None
    # found | certified-none | none-within-bound | multiple | unsearched
    inp_status: str = "unsearched"
    inp_multi: list["NielsenPathData"] = field(default_factory=list)
    # Set when the stratum meets the transition-matrix and derivative
    # conditions for an expanding stratum but is not a train track (some image
    # takes an illegal turn or loses a connecting piece): the classification
    # "counts", the invariant bookkeeping above it does not.
    expanding_not_train_track: bool = False

    def metric(self, e: str):
        """L-value of an edge: the eigenvector entry on the stratum, 0 below."""
        if self.expansion is None:
            return Fraction(0)
        try:
            return self.expansion.lengths[self.edges.index(e)]
        except ValueError:
            return Fraction(0) if self.expansion.exact else 0.0

    def path_length(self, p: EdgePath):
        return sum((self.metric(d.name) for d in p.darts), start=Fraction(0))


def classify_stratum(f: GraphMap, filt: Filtration, i: int, tol: float = 1e-9) -> StratumInfo:
    stratum = filt.strata[i]
    m = transition_matrix(f, stratum)
    info = StratumInfo(index=i, edges=stratum, stype="unclassifiable", matrix=m)
    if all(x == 0 for row in m for x in row):
        info.stype = "type1"
        info.note = "all stratum edges map into the lower level"
        return info
    cols = [sum(m[r][c] for r in range(len(m))) for c in range(len(m))]
    rows = [sum(m[r][c] for c in range(len(m))) for r in range(len(m))]
    if all(c == 1 for c in cols) and all(r == 1 for r in rows):
        # permutation matrix; SCC construction makes it a single cycle
        info.stype = "type2"
        info.note = "images cross the stratum in a single cyclic permutation"
        return info
    try:
        info.expansion = pf_metric(m, tol)
    except ValueError as exc:
        info.note = f"transition matrix not expanding/irreducible: {exc}"
        return info
    for e in stratum:
        for d in (Dart(e, True), Dart(e, False)):
            dd = derivative(f, d)
            if dd is None or dd.name not in stratum:
                info.note = (f"derivative of {d} leaves the stratum; "
                             "refine the filtration")
                return info
    # Expanding strata must also be train tracks: adjacent stratum darts in an
    # image may not form an illegal turn (iterated images would cancel and
    # crossing Nielsen paths would lose their leg structure), and the lower
    # connecting pieces must never collapse entirely.  Turns against lower
    # darts cannot degenerate, so they need no check.
    from .graphs import classify_turn, map_path
    in_stratum = set(stratum)
    for e in stratum:
        img = f.edge_map[e].darts
        for d1, d2 in zip(img, img[1:]):
            if d1.name in in_stratum and d2.name in in_stratum:
                if classify_turn(f, d1.rev, d2) == "illegal":
                    info.note = (f"image of {e} takes the illegal turn "
                                 f"({d1.rev}, {d2}); not a train track map")
                    info.expanding_not_train_track = True
                    return info
        run: list[Dart] = []
        runs: list[tuple[Dart, ...]] = []
        for d in img:
            if d.name in in_stratum:
                if run:
                    runs.append(tuple(run))
                    run = []
            else:
                run.append(d)
        for tau in runs:
            p = EdgePath(tau)
            for _ in range(20):
                p = map_path(f, p)
                if p.is_trivial:
                    info.note = (f"a lower connecting piece of the image of {e} "
                                 "collapses under iteration")
                    info.expanding_not_train_track = True
                    return info
                if len(p.darts) > 512:
                    break
    info.stype = "type3"
    info.illegal_turns = illegal_turns_in(f, filt.level_edges(i + 1))
    return info


def illegal_turns_in(f: GraphMap, edges: Iterable[str]) -> list[tuple[Dart, Dart]]:
    """All illegal turns among directions of the given subgraph."""
    from .graphs import classify_turn  # local import to keep module tops light
    names = list(edges)
    out = []
    darts = f.graph.darts(names)
    for a_i in range(len(darts)):
        for b_i in range(a_i + 1, len(darts)):
            a, b = darts[a_i], darts[b_i]
            if f.graph.origin(a) != f.graph.origin(b):
                continue
            if classify_turn(f, a, b) == "illegal":
                out.append((a, b))
    return out


# ---------------------------------------------------------------------------
# Nielsen paths.


def verify_nielsen_path(f: GraphMap, p: EdgePath) -> bool:
    """True iff the tight image of p equals p; endpoints must be fixed."""
    if p.is_trivial:
        raise ValueError("Nielsen paths are nontrivial")
    src, dst = f.graph.path_endpoints(p)
    if f.vertex_map[src] != src or f.vertex_map[dst] != dst:
        raise ValueError("endpoints of a Nielsen-path candidate must be fixed")
    return map_path(f, p) == p


def _path_is_nielsen(f: GraphMap, darts: tuple[Dart, ...]) -> bool:
    return map_path(f, EdgePath(darts)) == EdgePath(darts)


def is_indivisible(f: GraphMap, p: EdgePath) -> bool:
    """No split at an intermediate fixed vertex into two Nielsen subpaths."""
    fixed = set(fixed_vertices(f))
    for j in range(1, len(p.darts)):
        v = f.graph.terminus(p.darts[j - 1])
        if v not in fixed:
            continue
        left, right = p.darts[:j], p.darts[j:]
        if _path_is_nielsen(f, left) and _path_is_nielsen(f, right):
            return False
    return True


def _canonical(p: EdgePath) -> tuple:
    # Reversal-invariant key; forward darts sort first.
    a = tuple((d.name, not d.fwd) for d in p.darts)
    b = tuple((d.name, not d.fwd) for d in p.reverse().darts)
    return min(a, b)


_image_cache: "weakref.WeakKeyDictionary[GraphMap, dict]" = weakref.WeakKeyDictionary()


def dart_images(f: GraphMap) -> dict[Dart, tuple[Dart, ...]]:
    cached = _image_cache.get(f)
    if cached is None:
        cached = {}
        for e in f.graph.edges:
            cached[Dart(e, True)] = f.edge_map[e].darts
            cached[Dart(e, False)] = f.edge_map[e].reverse().darts
        _image_cache[f] = cached
    return cached


def nielsen_paths_brute(f: GraphMap, max_len: int,
                        within: Optional[Iterable[str]] = None,
                        crossing: Optional[Iterable[str]] = None,
                        indivisible_only: bool = False) -> list[EdgePath]:
    """Exhaustive tight-path search for Nielsen paths of length <= max_len.

    Starts only at fixed vertices, optionally restricted to a subgraph and to
    paths crossing given edges; results are deduplicated up to reversal.  The
    image of the growing path is maintained incrementally with an undo journal,
    so each extension costs the image length of one dart.
    """
    g = f.graph
    names = list(g.edges) if within is None else list(within)
    must = set(names) if crossing is None else set(crossing)
    fixed = set(fixed_vertices(f))
    imgs = dart_images(f)
    rev_of = {d: d.rev for d in imgs}
    out_at = {v: [d for d in g.darts_at(v, names)] for v in g.vertices}
    found: dict[tuple, EdgePath] = {}

    path: list[Dart] = []
    img: list[Dart] = []
    journal: list[list] = []

    def push(d: Dart) -> None:
        ops: list = []
        for x in imgs[d]:
            if img and img[-1] == rev_of[x]:
                ops.append(img.pop())
            else:
                img.append(x)
                ops.append(None)
        path.append(d)
        journal.append(ops)

    def pop() -> None:
        path.pop()
        for op in reversed(journal.pop()):
            if op is None:
                img.pop()
            else:
                img.append(op)

    def visit(start: str) -> None:
        at = g.terminus(path[-1]) if path else start
        if path and at in fixed and len(img) == len(path) and img == path:
            if must is None or any(d.name in must for d in path):
                p = EdgePath(tuple(path))
                if not indivisible_only or is_indivisible(f, p):
                    found.setdefault(_canonical(p), p)
        if len(path) >= max_len:
            return
        last_rev = rev_of[path[-1]] if path else None
        for d in out_at[at]:
            if d == last_rev:
                continue
            push(d)
            visit(start)
            pop()

    for start in sorted(fixed):
        visit(start)
    return sorted(found.values(), key=lambda p: (len(p.darts), _canonical(p)))


def nielsen_partition_oracle(f: GraphMap, max_len: int) -> list[frozenset[str]]:
    """Partition of the fixed vertices by bounded Nielsen-path search."""
    fixed = sorted(fixed_vertices(f))
    parent = {v: v for v in fixed}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    if len(fixed) > 1:
        for p in nielsen_paths_brute(f, max_len):
            a, b = f.graph.path_endpoints(p)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, set[str]] = {}
    for v in fixed:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(s) for s in groups.values()), key=sorted)


@dataclass
class NielsenPathData:
    """An indivisible Nielsen path, with its leg decomposition when one exists
    in the expanding-stratum sense (legs grow off a one-step-degenerate turn)."""

    path: EdgePath
    endpoints: tuple[str, str]
    leg1: Optional[EdgePath] = None
    leg2: Optional[EdgePath] = None
    turn_vertex: Optional[str] = None
    tail: Optional[EdgePath] = None


def _leg_decomposition(f: GraphMap, p: EdgePath) -> NielsenPathData:
    g = f.graph
    data = NielsenPathData(p, g.path_endpoints(p))
    for j in range(1, len(p.darts)):
        leg1 = EdgePath(p.darts[:j])
        leg2 = EdgePath(tuple(d.rev for d in reversed(p.darts[j:])))
        t1, t2 = leg1.darts[-1].rev, leg2.darts[-1].rev
        if not turn_degenerates_in_one_step(f, t1, t2):
            continue
        data.leg1, data.leg2 = leg1, leg2
        data.turn_vertex = g.terminus(leg1.darts[-1])
        img1 = map_path(f, leg1)
        if len(img1.darts) >= len(leg1.darts) and img1.darts[:len(leg1.darts)] == leg1.darts:
            data.tail = EdgePath(img1.darts[len(leg1.darts):]) if len(img1.darts) > len(leg1.darts) \
                else trivial_path(g.terminus(leg1.darts[-1]))
        break
    return data


def _ray_prefixes(f: GraphMap, d: Dart, dart_cap: int) -> list[tuple[Dart, ...]]:
    """Prefixes (length 1..dart_cap) of the expanding ray grown from a fixed
    direction d with Df(d) = d; the ray extends because images are legal."""
    current: tuple[Dart, ...] = (d,)
    while len(current) < dart_cap + 1:
        img = map_path(f, EdgePath(current))
        if img.darts[:len(current)] != current or len(img.darts) <= len(current):
            break  # not an expanding direction after all
        current = img.darts
    return [current[:n] for n in range(1, min(dart_cap, len(current)) + 1)]


def find_inp(f: GraphMap, filt: Filtration, info: StratumInfo, max_len: int = 8,
             lower_classes: Optional[Sequence[frozenset]] = None) -> StratumInfo:
    """Locate the at-most-one indivisible Nielsen path crossing the stratum.

    type1 and multi-edge type2 strata certify `none`.  Single-edge type2
    strata get a bounded combinatorial search within the level; candidates
    differing only by insertion of lower-level Nielsen loops join the same
    lower classes and collapse to the shortest representative.  type3 strata
    enumerate prefix pairs of the expanding rays grown from fixed stratum
    directions; when the metric bound is exhausted, `none` is certified.
    """
    level = filt.level_edges(info.index + 1)
    stratum = set(info.edges)

    def class_of(v: str):
        if lower_classes is not None:
            for i, c in enumerate(lower_classes):
                if v in c:
                    return i
        return v

    def record(cands: list[EdgePath], status_if_empty: str) -> None:
        uniq: dict[tuple, EdgePath] = {}
        for p in cands:
            uniq.setdefault(_canonical(p), p)
        # Candidates joining the same pair of lower classes induce the same
        # merge; keep the shortest representative per pair.
        by_pair: dict[frozenset, EdgePath] = {}
        for p in sorted(uniq.values(), key=lambda p: (len(p.darts), _canonical(p))):
            a, b = f.graph.path_endpoints(p)
            by_pair.setdefault(frozenset((class_of(a), class_of(b))), p)
        if len(by_pair) > 1:
            if info.stype == "type3":
                # An expanding train-track stratum carries at most one; two
                # survivors mean the input structure is broken.
                raise StructureViolation(
                    f"distinct indivisible Nielsen paths cross stratum {info.edges}: "
                    + "; ".join(str(p) for p in by_pair.values()))
            # Outside normal form a permutation stratum can carry several
            # (e.g. a merging path plus an independent loop); the merges are
            # all real, the rank bookkeeping is not pinned down.
            info.inp_multi = [_leg_decomposition(f, p) for p in by_pair.values()]
            info.inp_status = "multiple"
        elif by_pair:
            p = next(iter(by_pair.values()))
            info.inp = _leg_decomposition(f, p)
            info.inp_status = "found"
        else:
            info.inp_status = status_if_empty

    if info.stype == "type1" or (info.stype == "type2" and len(info.edges) > 1):
        info.inp_status = "certified-none"
        return info

    if info.stype == "type2":
        cands = nielsen_paths_brute(f, max_len, within=level, crossing=stratum,
                                    indivisible_only=True)
        record(cands, "none-within-bound")
        return info

    if info.stype != "type3":
        info.inp_status = "unsearched"
        return info

    if not info.illegal_turns:
        info.inp_status = "certified-none"
        return info

    exp = info.expansion
    lam = exp.lam
    metric_cap = (lam * sum(float(x) for x in exp.lengths)) * lam / (lam - 1.0)
    seeds = []
    for v in fixed_vertices(f):
        seeds.extend(fixed_directions(f, v, info.edges))
    dart_cap = max(max_len, 16 * (int(metric_cap) + 2))
    rays = {d: _ray_prefixes(f, d, dart_cap) for d in seeds}

    def metric_len(darts: tuple[Dart, ...]) -> float:
        return sum(float(info.metric(d.name)) for d in darts)

    cands: list[EdgePath] = []
    for ia in range(len(seeds)):
        for ib in range(ia + 1, len(seeds)):
            d1, d2 = seeds[ia], seeds[ib]
            for q1 in rays[d1]:
                if metric_len(q1) > metric_cap:
                    break
                for q2 in rays[d2]:
                    if metric_len(q2) > metric_cap:
                        break
                    if f.graph.terminus(q1[-1]) != f.graph.terminus(q2[-1]):
                        continue
                    if q1[-1] == q2[-1]:
                        continue
                    if not turn_degenerates_in_one_step(f, q1[-1].rev, q2[-1].rev):
                        continue
                    darts = q1 + tuple(d.rev for d in reversed(q2))
                    p = EdgePath(darts)
                    if _path_is_nielsen(f, darts) and is_indivisible(f, p):
                        cands.append(p)
    # A ray that never reached the metric cap within max_len prefixes leaves
    # part of the search region uncovered.
    exhausted = all(
        rays[d] and metric_len(rays[d][-1]) > metric_cap for d in seeds
    ) if seeds else True
    record(cands, "certified-none" if exhausted else "none-within-bound")
    return info


def classify_all(f: GraphMap, filt: Filtration, max_len: int = 8,
                 tol: float = 1e-9,
                 lower_classes_per_level: Optional[Sequence[Sequence[frozenset]]] = None,
                 ) -> list[StratumInfo]:
    infos = []
    for i in range(filt.depth):
        info = classify_stratum(f, filt, i, tol)
        if info.stype in ("type1", "type2", "type3"):
            lower = None
            if lower_classes_per_level is not None:
                lower = lower_classes_per_level[i]
            find_inp(f, filt, info, max_len, lower_classes=lower)
        infos.append(info)
    return infos
