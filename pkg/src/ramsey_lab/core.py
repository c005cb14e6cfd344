"""Loose path and cycle templates over 1-based vertex labels.

A k-uniform loose path with n edges spans n*(k-1) + 1 vertices; consecutive
edges share exactly one vertex and non-consecutive edges are disjoint.  The
loose cycle with n edges (n >= 3) closes up on n*(k-1) vertices.  Edge i of
either template is {1, ..., k} shifted by (i-1)*(k-1), reduced into the label
range for cycles.  All vertex labels are 1-based everywhere in this library.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Tuple

Edge = Tuple[int, ...]

PATH = "path"
CYCLE = "cycle"


def as_edge(vertices: Iterable[int], k: int | None = None,
            n_vertices: int | None = None) -> Edge:
    """Normalize an iterable of labels to a sorted edge tuple, validating it."""
    e = tuple(sorted(int(v) for v in vertices))
    if len(set(e)) != len(e):
        raise ValueError(f"edge has repeated vertices: {e}")
    if k is not None and len(e) != k:
        raise ValueError(f"edge {e} has {len(e)} vertices, expected k={k}")
    if e and e[0] < 1:
        raise ValueError(f"vertex labels are 1-based, got {e[0]}")
    if n_vertices is not None and e and e[-1] > n_vertices:
        raise ValueError(f"vertex {e[-1]} out of range 1..{n_vertices}")
    return e


def shift(s: Iterable[int], t: int, modulus: int) -> Edge:
    """Shift every label by t, wrapping into 1..modulus.

    The wrap is x -> ((x + t - 1) mod modulus) + 1, so label arithmetic stays
    1-based.  Labels outside 1..modulus are rejected.
    """
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    out = []
    for x in s:
        if not 1 <= x <= modulus:
            raise ValueError(f"label {x} out of range 1..{modulus}")
        out.append((x + t - 1) % modulus + 1)
    return tuple(sorted(out))


@dataclass(frozen=True)
class EdgeEndpoints:
    first: int
    last: int


@dataclass(frozen=True)
class LooseTemplate:
    """A k-uniform loose path (kind="path") or loose cycle (kind="cycle").

    n is the number of edges.  Paths allow n >= 1, cycles n >= 3; k >= 3
    throughout (k = 2 would collapse connectors and interiors).
    """

    kind: str
    k: int
    n: int

    def __post_init__(self):
        if self.kind not in (PATH, CYCLE):
            raise ValueError(f"kind must be 'path' or 'cycle', got {self.kind!r}")
        if self.k < 3:
            raise ValueError(f"k must be >= 3, got {self.k}")
        if self.kind == PATH and self.n < 1:
            raise ValueError(f"path needs n >= 1 edges, got {self.n}")
        if self.kind == CYCLE and self.n < 3:
            raise ValueError(f"cycle needs n >= 3 edges, got {self.n}")

    @property
    def n_vertices(self) -> int:
        if self.kind == PATH:
            return self.n * (self.k - 1) + 1
        return self.n * (self.k - 1)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return _template_edges(self.kind, self.k, self.n)

    def __str__(self) -> str:
        return f"{self.kind}:{self.n} (k={self.k})"


def path_template(k: int, n: int) -> LooseTemplate:
    """The loose path P^k_n on n(k-1)+1 vertices."""
    return LooseTemplate(PATH, k, n)


def cycle_template(k: int, n: int) -> LooseTemplate:
    """The loose cycle C^k_n on n(k-1) vertices; needs n >= 3."""
    return LooseTemplate(CYCLE, k, n)


def endpoints(t: LooseTemplate, i: int) -> EdgeEndpoints:
    """First and last vertex labels of template edge i (1-based edge index).

    Edge i covers template vertices (i-1)(k-1)+1 .. i(k-1)+1; for cycles the
    labels are reduced modulo n(k-1), so the last edge wraps back to vertex 1.
    """
    if not 1 <= i <= t.n:
        raise ValueError(f"edge index {i} out of range 1..{t.n}")
    first = (i - 1) * (t.k - 1) + 1
    last = i * (t.k - 1) + 1
    if t.kind == CYCLE:
        m = t.n_vertices
        first = (first - 1) % m + 1
        last = (last - 1) % m + 1
    return EdgeEndpoints(first, last)


@lru_cache(maxsize=None)
def _template_edges(kind: str, k: int, n: int) -> tuple[Edge, ...]:
    edges = []
    for i in range(1, n + 1):
        raw = [(i - 1) * (k - 1) + j for j in range(1, k + 1)]
        if kind == CYCLE:
            m = n * (k - 1)
            raw = [(x - 1) % m + 1 for x in raw]
        edges.append(tuple(sorted(raw)))
    return tuple(edges)


def is_loose_sequence(edges: list[Edge], kind: str) -> bool:
    """Check the pairwise intersection pattern of an edge sequence.

    Consecutive edges (cyclically for kind="cycle") must share exactly one
    vertex; all other pairs must be disjoint.  Single-edge paths are valid.
    """
    n = len(edges)
    if n == 0 or (kind == CYCLE and n < 3):
        return False
    sets = [frozenset(e) for e in edges]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j == i + 1) or (kind == CYCLE and i == 0 and j == n - 1)
            want = 1 if adjacent else 0
            if len(sets[i] & sets[j]) != want:
                return False
    return True
