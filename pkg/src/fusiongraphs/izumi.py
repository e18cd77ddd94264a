"""Izumi-family specializations.

Saturated candidates (every coefficient at its bound ``floor(d_i)``), the
graph with one extra odd vertex joined to each non-invertible simple, the
exact index identities for ``d = (n + sqrt(n^2 + 4))/2``, and a feasibility
check for the conjectured algebra object in rings shaped like ``I_1(n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algsearch import SearchOptions, analyze_candidate, expressibility_check, reduced_fusion_matrix
from .fusionring import FusionRing, ObjectVec, dim_of, invertibles
from .gramsearch import gram_factorizations
from .pgraph import GraphRejected, assemble_graph, export_report
from .qfield import QuadExt, format_quad

__all__ = [
    "IzumiParams",
    "RingShapeError",
    "saturated_object",
    "saturated_analysis",
    "izumi_identities",
    "conjecture_check",
    "i1_shape",
]


class RingShapeError(ValueError):
    """The ring does not have the shape an Izumi-family check needs."""


@dataclass(frozen=True)
class IzumiParams:
    n: int

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"n must be odd and >= 3, got {self.n}")

    @property
    def d(self) -> QuadExt:
        return QuadExt(Fraction(self.n, 2), Fraction(1, 2), self.n * self.n + 4)

    @property
    def D(self) -> int:
        return self.d.D


def saturated_object(ring: FusionRing) -> ObjectVec:
    """``1 + sum floor(d_i) x_i``."""
    floors = ring.floors
    return ring.obj((1,) + tuple(floors[1:]))


def _expected_pattern(ring: FusionRing) -> tuple[tuple[int, ...], ...]:
    inv = set(invertibles(ring))
    idx = range(1, ring.rank)
    return tuple(tuple(int(i not in inv and j not in inv) for j in idx) for i in idx)


def saturated_analysis(ring: FusionRing, kind: str | None = None) -> dict:
    """Reduced matrix, factorization, extra-vertex weight and verdict for the saturated object.

    ``kind`` is ``"I1-like"`` (only the unit is invertible) or ``"I2-like"``;
    it is inferred when omitted.  The reduced matrix is expected to be 1 on
    every pair of non-invertible simples and 0 elsewhere (for an I1-like ring
    that is the all-ones matrix).
    """
    inv = invertibles(ring)
    inferred = "I1-like" if len(inv) == 1 else "I2-like"
    kind = kind or inferred
    if kind not in ("I1-like", "I2-like"):
        raise ValueError(f"unknown kind {kind!r}")
    gamma = saturated_object(ring)
    R = reduced_fusion_matrix(ring, gamma)
    pattern = _expected_pattern(ring)
    pattern_ok = R == pattern
    record: dict = {
        "ring": ring.name,
        "kind": kind,
        "inferred_kind": inferred,
        "gamma": str(gamma),
        "coefficients": list(gamma.coeffs),
        "reduced_matrix": [list(r) for r in R],
        "reduced_size": len(R),
        "all_ones": all(x == 1 for row in R for x in row),
        "pattern_ok": pattern_ok,
    }
    index = dim_of(ring, gamma)
    record["dim"] = format_quad(index)
    record["dim_pretty"] = index.pretty()
    n = len(inv) if kind == "I2-like" else ring.rank - 1
    record["n"] = n
    d = _largest_noninvertible_dim(ring)
    if d is not None:
        expected_dim = n + n * n * d
        record["expected_dim"] = format_quad(expected_dim)
        record["dim_ok"] = index == expected_dim
    if not pattern_ok:
        record["verdict"] = "pattern-violation"
        return record

    factors = gram_factorizations(R)
    record["factorizations"] = [[list(r) for r in A] for A in factors]
    record["unique_factorization"] = len(factors) == 1
    if len(factors) != 1:
        record["verdict"] = "pattern-violation"
        return record
    try:
        graph = assemble_graph(ring, gamma, factors[0], require_connected=False)
    except GraphRejected as exc:
        record["verdict"] = f"rejected: {exc.reason}"
        return record
    extra = graph.weight_squares[1]
    record["graph"] = export_report(graph)
    record["extra_weight_square"] = format_quad(extra)
    record["extra_weight_ok"] = extra == n
    target = extra - 1
    record["expressibility_target"] = format_quad(target)
    expressible = expressibility_check(ring, target)
    record["expressible"] = expressible
    record["verdict"] = "admissible" if expressible else "eliminated"
    if not expressible:
        record["witness_target"] = format_quad(target)
    return record


def _largest_noninvertible_dim(ring: FusionRing) -> QuadExt | None:
    # the dimension d of the Izumi generator: the one with d^2 = 1 + n d
    inv = set(invertibles(ring))
    for i in range(1, ring.rank):
        if i in inv:
            continue
        d = ring.dims[i]
        for n in range(1, 2 * ring.rank):
            if d * d == 1 + n * d:
                return d
    return None


def izumi_identities(n: int) -> dict:
    """Exact checks of ``d^2 = 1 + n d`` and ``(n d)^2/(d + 1) = n (1 + (n-1) d)``."""
    p = IzumiParams(n)
    d = p.d
    lhs = (n * d) ** 2 / (d + 1)
    rhs = n * (1 + (n - 1) * d)
    checks = {
        "d^2 = 1+n*d": d * d == 1 + n * d,
        "(n*d)^2/(d+1) = n*(1+(n-1)*d)": lhs == rhs,
        "n^2*(1+n*d) = n*(1+(n-1)*d)*(d+1)": n * n * (1 + n * d) == n * (1 + (n - 1) * d) * (d + 1),
    }
    return {
        "n": n,
        "D": p.D,
        "d": format_quad(d),
        "index": format_quad(lhs),
        "index_pretty": lhs.pretty(),
        "intermediate_index": format_quad(1 + (n - 1) * d),
        "checks": checks,
        "ok": all(checks.values()),
    }


def i1_shape(ring: FusionRing) -> dict:
    """Locate ``d`` and the simples of dimension ``d+1`` and ``d-1`` in an I1-shaped ring."""
    n = ring.rank - 1
    if n < 3 or n % 2 == 0:
        raise RingShapeError(f"rank {ring.rank} is not n+1 for odd n >= 3")
    dims = ring.dims
    for k in range(1, ring.rank):
        d = dims[k]
        if d * d != 1 + n * d:
            continue
        nus = [i for i in range(1, ring.rank) if dims[i] == d + 1]
        mus = [i for i in range(1, ring.rank) if dims[i] == d - 1]
        if len(nus) == len(mus) == (n - 1) // 2 and len(nus) + len(mus) + 2 == ring.rank:
            return {"n": n, "d": d, "eta": k, "nu": nus, "mu": mus}
    raise RingShapeError(f"ring {ring.name} does not have dims 1, d, (n-1)/2 x (d+1), (n-1)/2 x (d-1)")


def conjecture_check(i1_ring: FusionRing, opts: SearchOptions = SearchOptions()) -> dict:
    """Feasibility of ``1 + sum_j (nu_j + mu_j)`` as an algebra object; never a proof."""
    shape = i1_shape(i1_ring)
    n, d = shape["n"], shape["d"]
    coeffs = [0] * i1_ring.rank
    coeffs[0] = 1
    for i in shape["nu"] + shape["mu"]:
        coeffs[i] = 1
    gamma = i1_ring.obj(coeffs)
    index = dim_of(i1_ring, gamma)
    expected = 1 + (n - 1) * d
    entry = analyze_candidate(i1_ring, gamma, opts)
    return {
        "ring": i1_ring.name,
        "n": n,
        "gamma": str(gamma),
        "dim": format_quad(index),
        "dim_pretty": index.pretty(),
        "expected_dim": format_quad(expected),
        "dim_ok": index == expected,
        "candidate_reason": entry.reason,
        "surviving_graphs": [export_report(g) for g in entry.survivors],
        "eliminated_graphs": [{"reason": r, "detail": det} for _, r, det, _ in entry.eliminated],
        "feasible": bool(entry.survivors),
        "status": "feasible (necessary conditions only)" if entry.survivors else "infeasible",
    }
