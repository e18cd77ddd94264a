"""Index bookkeeping for intermediate subfactors.

Everything here is a necessary condition: an index ``delta`` can only split
as ``delta_1 * delta_2`` through an intermediate if both factors are indices
of admissible graphs.  Nothing in this module asserts that an intermediate
exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .algsearch import SearchReport
from .qfield import QuadExt, format_quad, quad_sign

__all__ = [
    "NECESSARY_CONDITION_BANNER",
    "AdmissibleIndexSet",
    "IntermediatePair",
    "intermediate_candidates",
    "galois_orbit_report",
    "lattice_dot",
]

NECESSARY_CONDITION_BANNER = (
    "necessary conditions only: listed factorizations are index-compatible, "
    "not proven intermediate subfactors"
)


@dataclass(frozen=True)
class AdmissibleIndexSet:
    name: str
    indices: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset(QuadExt._coerce(x) for x in self.indices) | {QuadExt(1)})

    @classmethod
    def from_report(cls, report: SearchReport) -> "AdmissibleIndexSet":
        return cls(report.ring, frozenset(report.surviving_indices(include_trivial=True)))

    def union(self, other: "AdmissibleIndexSet") -> "AdmissibleIndexSet":
        return AdmissibleIndexSet(f"{self.name}+{other.name}", self.indices | other.indices)

    def __contains__(self, x) -> bool:
        return QuadExt._coerce(x) in self.indices

    def sorted(self) -> list[QuadExt]:
        return sorted(self.indices)


@dataclass(frozen=True)
class IntermediatePair:
    upper: QuadExt   # [M:P]
    lower: QuadExt   # [P:N]
    trivial: bool

    def to_dict(self) -> dict:
        return {"upper": format_quad(self.upper), "lower": format_quad(self.lower),
                "upper_pretty": self.upper.pretty(), "lower_pretty": self.lower.pretty(),
                "trivial": self.trivial}


def intermediate_candidates(delta: QuadExt, upper: AdmissibleIndexSet | Iterable,
                            lower: AdmissibleIndexSet | Iterable) -> list[IntermediatePair]:
    """All ``(delta_1, delta_2)`` with ``delta_1 * delta_2 == delta`` drawn from the two sets."""
    delta = QuadExt._coerce(delta)
    if quad_sign(delta - 1) <= 0:
        raise ValueError(f"index must exceed 1, got {delta}")
    up = set(upper.indices if isinstance(upper, AdmissibleIndexSet) else map(QuadExt._coerce, upper))
    low = set(lower.indices if isinstance(lower, AdmissibleIndexSet) else map(QuadExt._coerce, lower))
    up |= {QuadExt(1), delta}
    low |= {QuadExt(1), delta}
    pairs = []
    for d1 in sorted(up):
        d2 = delta / d1
        if d2 in low:
            pairs.append(IntermediatePair(d1, d2, d1 == 1 or d2 == 1))
    return pairs


def galois_orbit_report(gal_order: int, dual_gal_order: int, bimodule_classes: int) -> int:
    """Count of intermediates when the Galois group acts freely on each bimodule class.

    One orbit of size ``gal_order`` per bimodule class; the dual Galois group
    permutes the classes, so in the free case ``bimodule_classes`` equals
    ``dual_gal_order``.  Pure bookkeeping.
    """
    for name, v in (("gal_order", gal_order), ("dual_gal_order", dual_gal_order),
                    ("bimodule_classes", bimodule_classes)):
        if int(v) != v or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")
    return bimodule_classes * gal_order


def lattice_dot(delta: QuadExt, pairs: Iterable[IntermediatePair]) -> str:
    """DOT sketch of the candidate divisor lattice: N at the bottom, M at the top."""
    lines = [f'digraph "index {format_quad(delta)}" {{', "  rankdir=BT;",
             '  N [shape=box]; M [shape=box];']
    for k, p in enumerate(pairs):
        if p.trivial:
            continue
        lines.append(f'  P{k} [label="[P:N]={p.lower.pretty()}"];')
        lines.append(f'  N -> P{k} [label="{p.lower.pretty()}"];')
        lines.append(f'  P{k} -> M [label="{p.upper.pretty()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
