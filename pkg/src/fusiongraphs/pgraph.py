"""Candidate principal graphs: assembly, exact weights, canonical forms, export.

A graph is stored as its adjacency matrix with one row per simple of the ring
(the even vertices, row 0 is the marked vertex) and one column per odd vertex.
Column 0 is the generating odd vertex; its entries are the coefficients of the
algebra object.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .fusionring import FusionRing, ObjectVec, dim_of
from .gramsearch import IntMatrix, as_matrix, columns_of, from_columns, matmul_t
from .qfield import QuadExt, RadicalWeight, format_quad, parse_quad

__all__ = [
    "PrincipalGraph",
    "GraphRejected",
    "assemble_graph",
    "fusion_matrix",
    "odd_weights",
    "graph_canonical",
    "graphs_equivalent",
    "galois_group",
    "export_dot",
    "export_report",
    "graph_from_record",
]


class GraphRejected(ValueError):
    """Assembly failed; ``reason`` is a short tag."""

    def __init__(self, reason: str, detail: str):
        super().__init__(f"{reason}: {detail}")
        self.reason = reason
        self.detail = detail


def fusion_matrix(ring: FusionRing, gamma: ObjectVec | Sequence[int]) -> IntMatrix:
    """``F[i][j]`` = multiplicity of simple ``j`` in ``gamma * x_i``."""
    a = np.array(list(gamma), dtype=np.int64)
    F = np.einsum("k,kij->ij", a, ring.N)
    return as_matrix(F.tolist())


@dataclass(frozen=True, eq=False)
class PrincipalGraph:
    ring: FusionRing
    gamma: ObjectVec
    adjacency: IntMatrix
    index: QuadExt
    odd_weights: tuple[RadicalWeight, ...]

    @property
    def n_odd(self) -> int:
        return len(self.adjacency[0])

    @property
    def weight_squares(self) -> tuple[QuadExt, ...]:
        return tuple(w.square for w in self.odd_weights)

    def reduced_factor(self) -> IntMatrix:
        return tuple(row[1:] for row in self.adjacency[1:])

    def edges(self) -> list[tuple[int, int, int]]:
        """``(even, odd, multiplicity)`` for every nonzero entry."""
        return [(i, j, m) for i, row in enumerate(self.adjacency) for j, m in enumerate(row) if m]

    def components(self) -> list[tuple[list[int], list[int]]]:
        return _components(self.adjacency)

    @property
    def connected(self) -> bool:
        return len(self.components()) == 1

    def degree(self, even: int) -> int:
        return sum(self.adjacency[even])

    def __repr__(self) -> str:
        return f"PrincipalGraph({self.ring.name}, gamma={self.gamma}, index={self.index.pretty()}, odd={self.n_odd})"


def _components(A: IntMatrix) -> list[tuple[list[int], list[int]]]:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    seen_e = [False] * rows
    seen_o = [False] * cols
    comps = []
    for start in range(rows):
        if seen_e[start]:
            continue
        evens, odds = [], []
        queue = deque([("e", start)])
        seen_e[start] = True
        while queue:
            kind, v = queue.popleft()
            if kind == "e":
                evens.append(v)
                for j in range(cols):
                    if A[v][j] and not seen_o[j]:
                        seen_o[j] = True
                        queue.append(("o", j))
            else:
                odds.append(v)
                for i in range(rows):
                    if A[i][v] and not seen_e[i]:
                        seen_e[i] = True
                        queue.append(("e", i))
        comps.append((sorted(evens), sorted(odds)))
    return comps


def _column_dims(ring: FusionRing, A: IntMatrix) -> list[QuadExt]:
    return [dim_of(ring, col) for col in columns_of(A)]


def odd_weights(g: PrincipalGraph) -> tuple[RadicalWeight, ...]:
    return g.odd_weights


def assemble_graph(ring: FusionRing, gamma: ObjectVec, Ar: Sequence[Sequence[int]], *,
                   require_connected: bool = True) -> PrincipalGraph:
    """Build the full graph from a reduced factor ``Ar`` of ``gamma``'s reduced fusion matrix.

    Raises :class:`GraphRejected` if the adjacency does not reproduce the
    fusion matrix, the weight vector is not an eigenvector, or (when
    ``require_connected``) the graph is disconnected.
    """
    r = ring.rank
    if gamma[0] != 1:
        raise GraphRejected("not-unital", f"unit multiplicity of {gamma} is {gamma[0]}")
    Ar = as_matrix(Ar)
    if len(Ar) != r - 1:
        raise GraphRejected("shape", f"reduced factor has {len(Ar)} rows, expected {r - 1}")
    m = len(Ar[0]) if Ar else 0
    adjacency = ((1,) + (0,) * m,) + tuple((gamma[i + 1],) + tuple(Ar[i]) for i in range(r - 1))

    F = fusion_matrix(ring, gamma)
    if matmul_t(adjacency) != F:
        raise GraphRejected("gram-mismatch", "adjacency * adjacency^T differs from the fusion matrix")
    index = dim_of(ring, gamma)
    for i in range(r):
        lhs = sum((F[i][j] * ring.dims[j] for j in range(r) if F[i][j]), QuadExt(0))
        if lhs != index * ring.dims[i]:
            raise GraphRejected("eigen", f"fusion matrix row {ring.labels[i]} breaks the eigen-relation")
    if require_connected:
        comps = _components(adjacency)
        if len(comps) > 1:
            lost = [ring.labels[i] for i in comps[1][0]]
            raise GraphRejected("disconnected", f"{len(comps)} components; e.g. {{{', '.join(lost)}}} "
                                "is cut off from the marked vertex")
    weights = tuple(RadicalWeight(s * s / index) for s in _column_dims(ring, adjacency))
    return PrincipalGraph(ring, gamma, adjacency, index, weights)


# ---------------------------------------------------------------------------
# canonical forms


def _canonical_under(A: IntMatrix, perm: Sequence[int]) -> IntMatrix:
    rows = [None] * len(A)
    for i, p in enumerate(perm):
        rows[p] = A[i]
    B = tuple(rows)
    cols = columns_of(B)
    rest = sorted(cols[1:], reverse=True)
    return from_columns([cols[0]] + rest, len(B))


def graph_canonical(g: PrincipalGraph, relabelings: Iterable[Sequence[int]] = ()) -> IntMatrix:
    """Lexicographically minimal adjacency over the allowed relabelings.

    Odd columns after the first are freely permutable; even rows move only by
    the supplied permutations (``perm[i]`` is the new position of row ``i``).
    """
    identity = tuple(range(g.ring.rank))
    forms = [_canonical_under(g.adjacency, p) for p in {identity, *map(tuple, relabelings)}]
    return min(forms)


def graphs_equivalent(g1: PrincipalGraph, g2: PrincipalGraph,
                      relabelings: Iterable[Sequence[int]] = ()) -> bool:
    if g1.index != g2.index:
        return False
    relabelings = list(relabelings)
    return graph_canonical(g1, relabelings) == graph_canonical(g2, relabelings)


def galois_group(g: PrincipalGraph) -> list[int]:
    """Invertible even vertices read off the graph, closed under the ring product."""
    ring = g.ring
    gens = [0]
    for v in range(1, ring.rank):
        # depth-2 even vertices are exactly those sharing the first odd vertex with *
        if ring.dims[v] == 1 and g.adjacency[v][0] > 0 and g.degree(v) == 1:
            gens.append(v)
    group = set(gens)
    frontier = list(gens)
    while frontier:
        x = frontier.pop()
        for y in list(group):
            for z in (_product_simple(ring, x, y), _product_simple(ring, y, x)):
                if z not in group:
                    group.add(z)
                    frontier.append(z)
    return sorted(group)


def _product_simple(ring: FusionRing, x: int, y: int) -> int:
    return int(np.flatnonzero(ring.N[x, y])[0])


# ---------------------------------------------------------------------------
# export


def export_report(g: PrincipalGraph, relabelings: Iterable[Sequence[int]] = ()) -> dict:
    ring = g.ring
    return {
        "ring": ring.name,
        "gamma": list(g.gamma.coeffs),
        "gamma_str": str(g.gamma),
        "index": format_quad(g.index),
        "index_pretty": g.index.pretty(),
        "adjacency": [list(r) for r in g.adjacency],
        "odd_weight_squares": [format_quad(s) for s in g.weight_squares],
        "galois_group": [ring.labels[i] for i in galois_group(g)],
        "connected": g.connected,
        "canonical": [list(r) for r in graph_canonical(g, relabelings)],
    }


def graph_from_record(ring: FusionRing, record: dict) -> PrincipalGraph:
    gamma = ring.obj(record["gamma"])
    A = as_matrix(record["adjacency"])
    g = assemble_graph(ring, gamma, tuple(row[1:] for row in A[1:]), require_connected=False)
    if g.index != parse_quad(record["index"]):
        raise ValueError("recorded index does not match the rebuilt graph")
    return g


def to_dot(g: PrincipalGraph) -> str:
    ring = g.ring
    lines = [f'graph "{ring.name}: {g.gamma}" {{', "  // index " + format_quad(g.index)]
    for i, lab in enumerate(ring.labels):
        attrs = f'label="{lab}"'
        if i == 0:
            attrs += ', shape=doublecircle, xlabel="*"'
        lines.append(f"  e{i} [{attrs}];")
    for j, s in enumerate(g.weight_squares):
        shape = "box" if j == 0 else "circle"
        lines.append(f'  o{j} [label="w²={format_quad(s)}", shape={shape}];')
    for i, j, m in g.edges():
        for _ in range(m):
            lines.append(f"  e{i} -- o{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: PrincipalGraph, path) -> None:
    Path(path).write_text(to_dot(g), encoding="utf-8")
