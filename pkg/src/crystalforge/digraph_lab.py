"""Digraph constructions, homomorphism search, and chromatic iteration.

Cliques, line digraphs and shift digraphs are the instance/template
families used downstream; ``homomorphism_exists`` is a brute-force
backtracking decider for the small sizes in scope; the a/b iteration
functions and ``fooling_parameters`` compute the parameters of the
fooling-instance argument (where only the iteration count and the bit
length of the resulting clique size are reportable at desk scale).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

Edge = tuple[int, int]


class DigraphError(ValueError):
    pass


class InvalidParams(DigraphError):
    pass


@dataclass(frozen=True)
class Digraph:
    vertex_count: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise DigraphError("need at least one vertex")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise DigraphError(f"edge ({u},{v}) out of range")
        object.__setattr__(self, "edges", edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def is_loopless(self) -> bool:
        return all(u != v for u, v in self.edges)


def clique(n: int) -> Digraph:
    """K_n: every ordered pair of distinct vertices is an edge."""
    if n < 1:
        raise DigraphError("clique size must be >= 1")
    return Digraph(n, frozenset((u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v))


def line_digraph(x: Digraph) -> tuple[Digraph, list[Edge]]:
    """The line digraph and its vertex labelling.

    Vertices are the edges of ``x`` in lexicographic order (label list is
    1-based via position); (e, f) is an edge iff e = (u,v) and f = (v,w).
    """
    labels = x.sorted_edges()
    pos = {e: i + 1 for i, e in enumerate(labels)}
    edges = set()
    by_tail: dict[int, list[Edge]] = {}
    for f in labels:
        by_tail.setdefault(f[0], []).append(f)
    for e in labels:
        for f in by_tail.get(e[1], ()):
            edges.add((pos[e], pos[f]))
    return Digraph(max(len(labels), 1), frozenset(edges)), labels


def shift_digraph(q: int, i: int) -> Digraph:
    """S_{q,0} = K_q and S_{q,i} = line digraph of S_{q,i-1}."""
    if q < 1 or i < 0:
        raise DigraphError("need q >= 1 and i >= 0")
    g = clique(q)
    for _ in range(i):
        g, _ = line_digraph(g)
    return g


def homomorphism_exists(x: Digraph, a: Digraph) -> Optional[dict[int, int]]:
    """Backtracking edge-preserving map search; None when exhausted.

    Vertices are assigned in order of decreasing out-degree; forward
    checking prunes candidate sets of the unassigned vertices.
    """
    n = x.vertex_count
    out_deg = [0] * (n + 1)
    for u, _ in x.edges:
        out_deg[u] += 1
    order = sorted(range(1, n + 1), key=lambda v: (-out_deg[v], v))
    rank = {v: i for i, v in enumerate(order)}
    succ: dict[int, list[int]] = {v: [] for v in order}
    pred: dict[int, list[int]] = {v: [] for v in order}
    for u, v in x.edges:
        succ[u].append(v)
        pred[v].append(u)
    a_verts = list(range(1, a.vertex_count + 1))
    a_edges = a.edges
    out_ok = {c: [d for d in a_verts if (c, d) in a_edges] for c in a_verts}
    in_ok = {c: [d for d in a_verts if (d, c) in a_edges] for c in a_verts}

    domains = {v: set(a_verts) for v in order}
    # a vertex with a loop in X needs a looped image
    for u, v in x.edges:
        if u == v:
            domains[u] &= {c for c in a_verts if (c, c) in a_edges}
    assignment: dict[int, int] = {}

    def place(pos: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        for c in sorted(domains[v]):
            trimmed: list[tuple[int, set[int]]] = []
            ok = True
            for neighbours, lookup, forward in ((succ[v], out_ok, True), (pred[v], in_ok, False)):
                for w in neighbours:
                    if w in assignment:
                        e = (c, assignment[w]) if forward else (assignment[w], c)
                        if e not in a_edges:
                            ok = False
                            break
                    elif rank[w] > pos:
                        allowed = domains[w] & set(lookup[c])
                        if not allowed:
                            ok = False
                            break
                        if allowed != domains[w]:
                            trimmed.append((w, domains[w]))
                            domains[w] = allowed
                if not ok:
                    break
            if ok:
                assignment[v] = c
                if place(pos + 1):
                    return True
                del assignment[v]
            for w, old in reversed(trimmed):
                domains[w] = old
        return False

    if place(0):
        return dict(assignment)
    return None


def check_homomorphism(x: Digraph, a: Digraph, f: dict[int, int]) -> bool:
    return all(v in f for v in range(1, x.vertex_count + 1)) and all(
        (f[u], f[v]) in a.edges for u, v in x.edges
    )


def iterate_a(p: int, i: int) -> int:
    """i-fold iteration of a(p) = 2^p (i = 0 returns p)."""
    if p < 1 or i < 0:
        raise InvalidParams("need p >= 1 and i >= 0")
    for _ in range(i):
        p = 2 ** p
    return p


def iterate_b(p: int, i: int) -> int:
    """i-fold iteration of b(p) = binom(p, floor(p/2)) (i = 0 returns p)."""
    if p < 1 or i < 0:
        raise InvalidParams("need p >= 1 and i >= 0")
    for _ in range(i):
        p = math.comb(p, p // 2)
    return p


@dataclass(frozen=True)
class ChromaticParams:
    i: int
    q_bits: int
    q: Optional[int]  # exact value when it fits in 64 bits, else None
    b_iterates: tuple[int, ...]
    thresholds: tuple[int, ...]


# beyond this exponent the next a-iterate is too large to even materialize
_MAX_EXP = 10 ** 7


def fooling_parameters(c: int, d: int, k: int) -> ChromaticParams:
    """Smallest i with b^(i)(c) >= k^2 * 4^i, plus the clique size q = a^(i)(d) + 1.

    ``q`` is astronomically large in general, so it is reported by bit
    length, with the exact value included only when it fits in 64 bits.
    """
    if c < 4:
        raise InvalidParams("c must be >= 4 (smaller c needs a separate reduction)")
    if d < c or k < 2:
        raise InvalidParams("need d >= c and k >= 2")
    b_iterates = []
    thresholds = []
    b_val = c
    i = 0
    while True:
        i += 1
        b_val = math.comb(b_val, b_val // 2)
        b_iterates.append(b_val)
        thresholds.append(k * k * 4 ** i)
        if b_val >= thresholds[-1]:
            break
    a_val: Optional[int] = d
    for _ in range(i):
        if a_val is None or a_val > _MAX_EXP:
            a_val = None
        else:
            a_val = 2 ** a_val
    if a_val is None:
        raise InvalidParams(
            f"q = a^({i})({d}) + 1 exceeds representable size (tower of height {i})"
        )
    q = a_val + 1
    return ChromaticParams(
        i=i,
        q_bits=q.bit_length(),
        q=q if q.bit_length() <= 64 else None,
        b_iterates=tuple(b_iterates),
        thresholds=tuple(thresholds),
    )


# ---------------------------------------------------------------------------
# JSON interchange: {"vertices": n, "edges": [[u, v], ...]} with sorted edges
# ---------------------------------------------------------------------------


def digraph_to_json(g: Digraph) -> str:
    return json.dumps(
        {"vertices": g.vertex_count, "edges": [list(e) for e in g.sorted_edges()]}
    ) + "\n"


def digraph_from_json(text: str) -> Digraph:
    try:
        doc = json.loads(text)
        n = int(doc["vertices"])
        edges = frozenset((int(u), int(v)) for u, v in doc["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DigraphError(f"bad digraph JSON: {exc}") from exc
    return Digraph(n, edges)
