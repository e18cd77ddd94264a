"""Classification pipeline for candidate simple algebra objects.

For every candidate ``gamma = 1 + sum a_i x_i`` allowed by the coefficient
bound ``a_i <= dim(x_i)``, the reduced fusion matrix is factored as
``A A^T`` over the nonnegative integers; each factor gives a candidate
principal graph, which is then put through the odd-vertex filters.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Sequence

from .fusionring import FusionRing, ObjectVec, conjugation_group, dim_of
from .gramsearch import IntMatrix, gram_factorizations, is_psd_exact
from .pgraph import GraphRejected, PrincipalGraph, assemble_graph, export_report, fusion_matrix, graph_canonical
from .qfield import QuadExt, format_quad, jones_admissible, parse_quad, quad_floor, quad_sign

__all__ = [
    "SearchOptions",
    "SearchReport",
    "CandidateEntry",
    "ScanRefused",
    "enumerate_candidates",
    "reduced_fusion_matrix",
    "fusion_matrix",
    "expressibility_check",
    "odd_vertex_tests",
    "odd_vertex_failures",
    "analyze_candidate",
    "scan_ring",
    "index_obstruction",
    "REASONS",
]

REASONS = (
    "negative-entry",
    "not-PSD",
    "no-integer-factorization",
    "disconnected",
    "jones",
    "expressibility",
    "recursive",
    "index-cap",
)

MAX_RECURSION = 3
# I2(n) candidate spaces grow like (floor(d)+1)^n; beyond this size a scan needs a cap
FULL_SCAN_LIMIT = 10**6


class ScanRefused(ValueError):
    """The candidate space is too large for a full scan without a cap."""


@dataclass(frozen=True)
class SearchOptions:
    self_dual_filter: bool = True
    inner_orbit_dedup: bool = True
    recursion_depth: int = 1
    max_index: QuadExt | None = None
    jones_filter: bool = True
    expressibility_filter: bool = True
    connectivity_filter: bool = False

    def __post_init__(self):
        if not 0 <= self.recursion_depth <= MAX_RECURSION:
            raise ValueError(f"recursion_depth must be in [0, {MAX_RECURSION}], got {self.recursion_depth}")
        if isinstance(self.max_index, str):
            object.__setattr__(self, "max_index", parse_quad(self.max_index))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["max_index"] = None if self.max_index is None else format_quad(self.max_index)
        return d


# ---------------------------------------------------------------------------
# candidates


def _orbit_rep(coeffs: tuple[int, ...], perms: Sequence[Sequence[int]]) -> tuple[int, ...]:
    best = coeffs
    for perm in perms:
        c = [0] * len(coeffs)
        for i, a in enumerate(coeffs):
            c[perm[i]] = a
        t = tuple(c)
        if t < best:
            best = t
    return best


def _candidate_space_size(ring: FusionRing, self_dual: bool) -> int:
    floors = ring.floors
    size = 1
    seen = set()
    for i in range(1, ring.rank):
        if self_dual:
            j = ring.dual[i]
            if j in seen:
                continue
            seen.update((i, j))
        size *= floors[i] + 1
    return size


def _iter_coefficients(ring: FusionRing, self_dual: bool, max_index: QuadExt | None = None,
                       exact_dim: QuadExt | None = None):
    """DFS over coefficient vectors with ``a_0 = 1`` and ``a_i <= floor(d_i)``."""
    r = ring.rank
    floors = ring.floors
    dims = ring.dims
    order = []
    seen = set()
    for i in range(1, r):
        if i in seen:
            continue
        j = ring.dual[i] if self_dual else i
        seen.update((i, j))
        order.append((i, j))
    coeffs = [0] * r
    coeffs[0] = 1
    cap = exact_dim if exact_dim is not None else max_index

    # dimension still reachable after position k, for pruning exact targets
    tail_max = [QuadExt(0)] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        i, j = order[k]
        step = dims[i] * floors[i] * (1 if i == j else 2)
        tail_max[k] = tail_max[k + 1] + step

    def rec(k: int, acc: QuadExt):
        if cap is not None and quad_sign(cap - acc) < 0:
            return
        if exact_dim is not None and quad_sign(acc + tail_max[k] - exact_dim) < 0:
            return
        if k == len(order):
            if exact_dim is None or acc == exact_dim:
                yield tuple(coeffs)
            return
        i, j = order[k]
        unit = dims[i] if i == j else dims[i] + dims[j]
        for a in range(floors[i] + 1):
            coeffs[i] = a
            coeffs[j] = a
            yield from rec(k + 1, acc + a * unit)
        coeffs[i] = 0
        coeffs[j] = 0

    yield from rec(0, QuadExt(1))


def enumerate_candidates(ring: FusionRing, opts: SearchOptions = SearchOptions()) -> list[ObjectVec]:
    """All candidate algebra objects allowed by the coefficient bound and filters."""
    perms = conjugation_group(ring) if opts.inner_orbit_dedup else []
    out = []
    seen = set()
    for coeffs in _iter_coefficients(ring, opts.self_dual_filter, opts.max_index):
        if perms:
            rep = _orbit_rep(coeffs, perms)
            if rep in seen:
                continue
            seen.add(rep)
            coeffs = rep
        out.append(ObjectVec(ring, coeffs))
    out.sort(key=lambda v: v.coeffs)
    return out


def reduced_fusion_matrix(ring: FusionRing, gamma: ObjectVec | Sequence[int]) -> IntMatrix:
    """``F[i][j] - a_i a_j`` for ``i, j >= 1`` (entries may be negative)."""
    F = fusion_matrix(ring, gamma)
    a = list(gamma)
    r = ring.rank
    return tuple(tuple(F[i][j] - a[i] * a[j] for j in range(1, r)) for i in range(1, r))


# ---------------------------------------------------------------------------
# odd-vertex filters


def expressibility_check(ring: FusionRing, target: QuadExt, exclude_unit: bool = True) -> bool:
    """Whether ``target`` is a nonnegative integer combination of simple dimensions."""
    target = QuadExt._coerce(target)
    if quad_sign(target) < 0:
        return False
    start = 1 if exclude_unit else 0
    values = tuple(sorted(set(ring.dims[start:]), reverse=True))
    return _express(values, target, {})


def _express(values: tuple[QuadExt, ...], target: QuadExt, memo: dict) -> bool:
    if target == 0:
        return True
    if not values:
        return False
    key = (len(values), target)
    if key in memo:
        return memo[key]
    head, rest = values[0], values[1:]
    found = False
    for c in range(quad_floor(target / head), -1, -1):
        if _express(rest, target - c * head, memo):
            found = True
            break
    memo[key] = found
    return found


@dataclass
class _Context:
    ring: FusionRing
    opts: SearchOptions
    cache: dict = field(default_factory=dict)


def odd_vertex_failures(ring: FusionRing, g: PrincipalGraph, opts: SearchOptions = SearchOptions(),
                        _ctx: _Context | None = None) -> list[tuple[str, str]]:
    """Every ``(reason, witness)`` the odd vertices of ``g`` trigger, in filter order."""
    ctx = _ctx or _Context(ring, opts)
    failures = []
    for j, s in enumerate(g.weight_squares):
        if opts.jones_filter and not jones_admissible(s):
            failures.append(("jones", f"odd vertex {j} has weight^2 {s.pretty()}"))
        if j == 0:
            continue
        if opts.expressibility_filter and not expressibility_check(ring, s - 1):
            failures.append(("expressibility",
                             f"odd vertex {j}: weight^2 - 1 = {(s - 1).pretty()} is not a sum of dimensions"))
        # below 4 the Jones filter is the relevant test
        if opts.recursion_depth > 0 and s >= 4:
            if not _admits_graph(ctx, s, opts.recursion_depth - 1):
                failures.append(("recursive", f"odd vertex {j}: no admissible graph at index {s.pretty()}"))
    order = {r: k for k, r in enumerate(REASONS)}
    failures.sort(key=lambda f: order[f[0]])
    return failures


def odd_vertex_tests(ring: FusionRing, g: PrincipalGraph, opts: SearchOptions = SearchOptions(),
                     _ctx: _Context | None = None) -> tuple[str, str] | None:
    """``None`` if ``g`` passes; otherwise the first ``(reason, witness)`` by filter order."""
    failures = odd_vertex_failures(ring, g, opts, _ctx)
    return failures[0] if failures else None


def _admits_graph(ctx: _Context, index: QuadExt, depth: int) -> bool:
    key = (index, depth)
    if key in ctx.cache:
        return ctx.cache[key]
    sub = replace(ctx.opts, recursion_depth=depth, max_index=None)
    found = False
    for coeffs in _iter_coefficients(ctx.ring, sub.self_dual_filter, exact_dim=index):
        entry = analyze_candidate(ctx.ring, ObjectVec(ctx.ring, coeffs), sub, _ctx=ctx, stop_at_first=True)
        if entry.survivors:
            found = True
            break
    ctx.cache[key] = found
    return found


# ---------------------------------------------------------------------------
# per-candidate analysis


@dataclass
class CandidateEntry:
    gamma: ObjectVec
    index: QuadExt
    reason: str | None = None          # candidate-level elimination
    detail: str = ""
    survivors: list[PrincipalGraph] = field(default_factory=list)
    # (graph or None, primary reason, witness, every failing filter)
    eliminated: list[tuple[PrincipalGraph | None, str, str, tuple[str, ...]]] = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return bool(self.survivors)


def analyze_candidate(ring: FusionRing, gamma: ObjectVec, opts: SearchOptions = SearchOptions(), *,
                      _ctx: _Context | None = None, stop_at_first: bool = False) -> CandidateEntry:
    ctx = _ctx or _Context(ring, opts)
    entry = CandidateEntry(gamma, dim_of(ring, gamma))
    R = reduced_fusion_matrix(ring, gamma)
    neg = [(i, j) for i, row in enumerate(R) for j, x in enumerate(row) if x < 0]
    if neg:
        i, j = neg[0]
        entry.reason = "negative-entry"
        entry.detail = f"reduced entry ({ring.labels[i + 1]}, {ring.labels[j + 1]}) = {R[i][j]}"
        return entry
    symmetric = all(R[i][j] == R[j][i] for i in range(len(R)) for j in range(i))
    if not symmetric or not is_psd_exact(R):
        entry.reason = "not-PSD"
        entry.detail = "reduced fusion matrix is not symmetric" if not symmetric else \
            "reduced fusion matrix is not positive semidefinite"
        return entry
    factors = gram_factorizations(R)
    if not factors:
        entry.reason = "no-integer-factorization"
        entry.detail = "no nonnegative integer A with A A^T equal to the reduced matrix"
        return entry
    for Ar in factors:
        try:
            g = assemble_graph(ring, gamma, Ar, require_connected=opts.connectivity_filter)
        except GraphRejected as exc:
            entry.eliminated.append((None, exc.reason, exc.detail, (exc.reason,)))
            continue
        failures = odd_vertex_failures(ring, g, opts, _ctx=ctx)
        if not failures:
            entry.survivors.append(g)
            if stop_at_first:
                return entry
        else:
            reasons = tuple(dict.fromkeys(r for r, _ in failures))
            entry.eliminated.append((g, failures[0][0], failures[0][1], reasons))
    return entry


# ---------------------------------------------------------------------------
# ring scans


@dataclass
class SearchReport:
    ring: str
    options: SearchOptions
    entries: list[CandidateEntry]
    orbit_representatives: list[tuple[int, ...]]
    relabelings: list[tuple[int, ...]]
    index_capped: bool = False

    def surviving_graphs(self, include_trivial: bool = False) -> list[PrincipalGraph]:
        """Survivors deduplicated by canonical form, in candidate order."""
        seen = set()
        out = []
        for e in self.entries:
            if not include_trivial and sum(e.gamma.coeffs) == 1:
                continue
            for g in e.survivors:
                key = graph_canonical(g, self.relabelings)
                if key not in seen:
                    seen.add(key)
                    out.append(g)
        return out

    def surviving_indices(self, include_trivial: bool = False) -> list[QuadExt]:
        return [g.index for g in self.surviving_graphs(include_trivial)]

    def reason_counts(self) -> Counter:
        c = Counter()
        for e in self.entries:
            if e.reason:
                c[e.reason] += 1
            for _, reason, _, _ in e.eliminated:
                c[reason] += 1
        return c

    def to_dict(self) -> dict:
        entries = []
        for e in self.entries:
            rec = {
                "gamma": list(e.gamma.coeffs),
                "gamma_str": str(e.gamma),
                "index": format_quad(e.index),
                "index_pretty": e.index.pretty(),
                "status": "admissible" if e.survivors else "eliminated",
            }
            if e.reason:
                rec["reason"] = e.reason
                rec["detail"] = e.detail
            rec["graphs"] = [export_report(g, self.relabelings) for g in e.survivors]
            rec["eliminated_graphs"] = [
                {"reason": reason, "detail": detail, "failed_filters": list(failed),
                 **({"adjacency": [list(r) for r in g.adjacency],
                     "odd_weight_squares": [format_quad(s) for s in g.weight_squares]} if g else {})}
                for g, reason, detail, failed in e.eliminated
            ]
            entries.append(rec)
        survivors = self.surviving_graphs()
        return {
            "ring": self.ring,
            "note": "surviving graphs pass necessary conditions only; admissibility does not prove an algebra exists",
            "options": self.options.to_dict(),
            "candidates": len(self.entries),
            "index_capped": self.index_capped,
            "relabelings": [list(p) for p in self.relabelings],
            "orbit_representatives": [list(c) for c in self.orbit_representatives],
            "reason_counts": dict(sorted(self.reason_counts().items())),
            "surviving": [
                {"gamma": str(g.gamma), "index": format_quad(g.index), "index_pretty": g.index.pretty()}
                for g in survivors
            ],
            "entries": entries,
        }


def _worker_count() -> int:
    raw = os.environ.get("FUSIONGRAPHS_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _analyze_chunk(args):
    ring, coeff_list, opts = args
    ctx = _Context(ring, opts)
    return [analyze_candidate(ring, ObjectVec(ring, c), opts, _ctx=ctx) for c in coeff_list]


def scan_ring(ring: FusionRing, opts: SearchOptions = SearchOptions(), *,
              candidates: Iterable[ObjectVec] | None = None, workers: int | None = None) -> SearchReport:
    """Run the full pipeline over every candidate of ``ring``.

    ``workers`` (default from ``FUSIONGRAPHS_WORKERS``) spreads candidates over
    processes; the merged report is identical for any worker count.
    """
    if candidates is None:
        if opts.max_index is None and _candidate_space_size(ring, opts.self_dual_filter) > FULL_SCAN_LIMIT:
            raise ScanRefused(
                f"ring {ring.name} has {_candidate_space_size(ring, opts.self_dual_filter)} candidates; "
                "pass max_index or an explicit candidate list")
        cands = enumerate_candidates(ring, opts)
    else:
        cands = sorted(candidates, key=lambda v: v.coeffs)
        if opts.max_index is not None:
            cands = [v for v in cands if dim_of(ring, v) <= opts.max_index]

    workers = workers or _worker_count()
    coeffs = [v.coeffs for v in cands]
    if workers <= 1 or len(coeffs) < 2:
        entries = _analyze_chunk((ring, coeffs, opts))
    else:
        # round-robin chunks balance cheap and expensive candidates
        chunks = [coeffs[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_analyze_chunk, [(ring, ch, opts) for ch in chunks]))
        entries = [e for part in parts for e in part]
        order = {c: k for k, c in enumerate(coeffs)}
        entries.sort(key=lambda e: order[e.gamma.coeffs])
        for e in entries:
            # rebind to the parent's ring object after pickling
            e.gamma = ObjectVec(ring, e.gamma.coeffs)
    relabelings = conjugation_group(ring) if opts.inner_orbit_dedup else []
    return SearchReport(
        ring=ring.name,
        options=opts,
        entries=entries,
        orbit_representatives=[c for c in coeffs] if opts.inner_orbit_dedup else [],
        relabelings=relabelings,
        index_capped=opts.max_index is not None,
    )


def index_obstruction(ring: FusionRing, index: QuadExt, opts: SearchOptions = SearchOptions()) -> bool:
    """True iff no candidate of dimension ``index`` admits a surviving graph."""
    index = QuadExt._coerce(index)
    ctx = _Context(ring, opts)
    return not _admits_graph(ctx, index, opts.recursion_depth)
