"""Fusion rings as validated structure-constant tensors.

``N[i][j][k]`` is the multiplicity of the simple ``k`` in the product of
simples ``i`` and ``j``.  Index 0 is always the unit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .qfield import QuadExt, format_quad, parse_quad, quad_floor

__all__ = [
    "FusionRing",
    "ObjectVec",
    "ValidationReport",
    "RingFormatError",
    "RingAxiomError",
    "ring_h4",
    "ring_h6",
    "ring_izumi_i2",
    "ring_load",
    "ring_save",
    "ring_from_dict",
    "ring_to_dict",
    "validate",
    "dim_of",
    "conjugate_by_invertible",
    "conjugation_permutation",
    "conjugation_group",
    "dual_object",
    "invertibles",
    "builtin_ring",
    "resolve_ring",
]


class RingFormatError(ValueError):
    """A ring file could not be parsed."""


class RingAxiomError(ValueError):
    """A ring violates a fusion-ring axiom."""

    def __init__(self, axiom: str, witness: str):
        super().__init__(f"{axiom} axiom violated: {witness}")
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True, eq=False)
class FusionRing:
    name: str
    labels: tuple[str, ...]
    dual: tuple[int, ...]
    N: np.ndarray
    D: int
    dims: tuple[QuadExt, ...]
    unit: int = 0

    def __post_init__(self):
        N = np.array(self.N, dtype=np.int64)
        N.setflags(write=False)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dual", tuple(int(x) for x in self.dual))
        object.__setattr__(self, "dims", tuple(QuadExt._coerce(x) for x in self.dims))
        r = len(self.labels)
        if N.shape != (r, r, r) or len(self.dual) != r or len(self.dims) != r:
            raise RingFormatError(f"inconsistent sizes: rank {r}, N {N.shape}, "
                                  f"dual {len(self.dual)}, dims {len(self.dims)}")
        if self.unit != 0:
            raise RingFormatError("the unit must be simple 0")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (self.name == other.name and self.labels == other.labels and self.dual == other.dual
                and self.D == other.D and self.dims == other.dims and np.array_equal(self.N, other.N))

    def __hash__(self):
        return hash((self.name, self.labels, self.D))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"ring {self.name!r} has no simple {label!r}") from None

    def simple(self, i: int) -> "ObjectVec":
        c = [0] * self.rank
        c[i] = 1
        return ObjectVec(self, tuple(c))

    def obj(self, coeffs: Sequence[int]) -> "ObjectVec":
        return ObjectVec(self, tuple(int(c) for c in coeffs))

    def parse_object(self, text: str) -> "ObjectVec":
        """Parse ``"1+2nu+mu"``-style sums of labels (``+`` separated terms)."""
        c = [0] * self.rank
        for term in text.replace(" ", "").split("+"):
            if not term:
                raise ValueError(f"empty term in {text!r}")
            k = 0
            while k < len(term) and term[k].isdigit():
                k += 1
            coef = int(term[:k]) if k else 1
            label = term[k:].lstrip("*")
            if not label:
                # bare integer is a multiple of the unit
                c[0] += coef
                continue
            c[self.index_of(label)] += coef
        return ObjectVec(self, tuple(c))

    @property
    def floors(self) -> tuple[int, ...]:
        return tuple(quad_floor(d) for d in self.dims)

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "FusionRing":
        """Ring with old simple ``perm[i]`` renamed to position ``i``."""
        perm = list(perm)
        if perm[0] != 0:
            raise ValueError("relabeling must fix the unit")
        inv = [0] * len(perm)
        for new, old in enumerate(perm):
            inv[old] = new
        N = self.N[np.ix_(perm, perm, perm)]
        return FusionRing(
            name=name or self.name,
            labels=tuple(self.labels[o] for o in perm),
            dual=tuple(inv[self.dual[o]] for o in perm),
            N=N,
            D=self.D,
            dims=tuple(self.dims[o] for o in perm),
        )


@dataclass(frozen=True)
class ObjectVec:
    """A (not necessarily simple) object, as nonnegative multiplicities of simples."""

    ring: FusionRing = field(compare=False, repr=False)
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ring.rank:
            raise ValueError(f"object has {len(self.coeffs)} coefficients, ring rank is {self.ring.rank}")
        if any(c < 0 for c in self.coeffs):
            raise ValueError(f"negative multiplicity in {self.coeffs}")

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "ObjectVec") -> "ObjectVec":
        return ObjectVec(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "ObjectVec") -> "ObjectVec":
        """Tensor product, expanded through the structure constants."""
        a = np.array(self.coeffs, dtype=object)
        b = np.array(other.coeffs, dtype=object)
        out = np.einsum("i,j,ijk->k", a, b, self.ring.N.astype(object))
        return ObjectVec(self.ring, tuple(int(x) for x in out))

    @property
    def dim(self) -> QuadExt:
        return dim_of(self.ring, self)

    def __str__(self) -> str:
        terms = []
        for c, lab in zip(self.coeffs, self.ring.labels):
            if c == 0:
                continue
            terms.append(lab if c == 1 else f"{c}{lab}")
        return "+".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ring: str
    results: dict[str, str | None] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(w is None for w in self.results.values())

    def first_failure(self) -> tuple[str, str] | None:
        for axiom, witness in self.results.items():
            if witness is not None:
                return axiom, witness
        return None

    def lines(self) -> list[str]:
        return [f"{axiom:<14} {'PASS' if w is None else 'FAIL: ' + w}" for axiom, w in self.results.items()]


def _check_unit(ring: FusionRing) -> str | None:
    N, r = ring.N, ring.rank
    eye = np.eye(r, dtype=np.int64)
    for j in range(r):
        if not np.array_equal(N[0, j], eye[j]):
            return f"1*{ring.labels[j]} = {ring.obj(N[0, j])}"
        if not np.array_equal(N[j, 0], eye[j]):
            return f"{ring.labels[j]}*1 = {ring.obj(N[j, 0])}"
    return None


def _check_duality(ring: FusionRing) -> str | None:
    N, r = ring.N, ring.rank
    for i in range(r):
        if ring.dual[ring.dual[i]] != i:
            return f"dual is not an involution at {ring.labels[i]}"
        for j in range(r):
            want = 1 if j == ring.dual[i] else 0
            if N[i, j, 0] != want:
                return f"N[{ring.labels[i]}][{ring.labels[j]}][1] = {N[i, j, 0]}, expected {want}"
    return None


def _check_associativity(ring: FusionRing) -> str | None:
    N = ring.N.astype(object)
    left = np.einsum("ijm,mkl->ijkl", N, N)
    right = np.einsum("jkm,iml->ijkl", N, N)
    bad = np.argwhere(left != right)
    if len(bad):
        i, j, k, l = bad[0]
        lab = ring.labels
        return (f"({lab[i]}*{lab[j]})*{lab[k]} has {left[i, j, k, l]} copies of {lab[l]}, "
                f"{lab[i]}*({lab[j]}*{lab[k]}) has {right[i, j, k, l]}")
    return None


def _check_frobenius(ring: FusionRing) -> str | None:
    N, lab, dual = ring.N, ring.labels, ring.dual
    for i, j, k in product(range(ring.rank), repeat=3):
        a = N[i, j, k]
        if a != N[dual[i], k, j] or a != N[k, dual[j], i]:
            return f"N[{lab[i]}][{lab[j]}][{lab[k]}] = {a} but reciprocal entries differ"
    return None


def _check_dimensions(ring: FusionRing) -> str | None:
    if ring.dims[0] != 1:
        return f"dim of unit is {ring.dims[0]}"
    for d in ring.dims:
        if not d.is_rational and d.D != ring.D:
            return f"dimension {d} lies outside Q(sqrt({ring.D}))"
    for i, j in product(range(ring.rank), repeat=2):
        lhs = ring.dims[i] * ring.dims[j]
        rhs = sum((int(ring.N[i, j, k]) * ring.dims[k] for k in range(ring.rank)), QuadExt(0))
        if lhs != rhs:
            return f"d({ring.labels[i]})*d({ring.labels[j]}) = {lhs} != {rhs}"
    return None


def _check_invertibility(ring: FusionRing) -> str | None:
    for i in range(ring.rank):
        d = ring.dims[i]
        if d < 1:
            return f"d({ring.labels[i]}) = {d} < 1"
        # invertible iff multiplication by it permutes the basis
        row = ring.N[i]
        is_perm = bool((row.sum(axis=1) == 1).all() and (row.sum(axis=0) == 1).all())
        if (d == 1) != is_perm:
            return f"d({ring.labels[i]}) = {d} but invertible is {is_perm}"
    return None


def _check_nonnegative(ring: FusionRing) -> str | None:
    if (ring.N < 0).any():
        i, j, k = np.argwhere(ring.N < 0)[0]
        return f"N[{i}][{j}][{k}] = {ring.N[i, j, k]}"
    return None


_AXIOMS = (
    ("nonnegative", _check_nonnegative),
    ("unit", _check_unit),
    ("duality", _check_duality),
    ("associativity", _check_associativity),
    ("frobenius", _check_frobenius),
    ("dimension", _check_dimensions),
    ("invertibility", _check_invertibility),
)


def validate(ring: FusionRing) -> ValidationReport:
    """Check every fusion-ring axiom exhaustively; failures carry a witness."""
    report = ValidationReport(ring.name)
    for name, check in _AXIOMS:
        report.results[name] = check(ring)
    return report


# ---------------------------------------------------------------------------
# object-level helpers


def dim_of(ring: FusionRing, v: ObjectVec | Sequence[int]) -> QuadExt:
    total = QuadExt(0)
    for c, d in zip(v, ring.dims):
        if c:
            total = total + c * d
    return total


def invertibles(ring: FusionRing) -> list[int]:
    return [i for i, d in enumerate(ring.dims) if d == 1]


def dual_object(ring: FusionRing, v: ObjectVec) -> ObjectVec:
    c = [0] * ring.rank
    for i, a in enumerate(v):
        c[ring.dual[i]] += a
    return ObjectVec(ring, tuple(c))


def conjugation_permutation(ring: FusionRing, g: int) -> tuple[int, ...]:
    """``perm[i] = k`` where ``g * x_i * g^* = x_k``."""
    if ring.dims[g] != 1:
        raise ValueError(f"{ring.labels[g]} is not invertible")
    perm = []
    gd = ring.dual[g]
    for i in range(ring.rank):
        left = ring.N[g, i]
        k1 = int(np.flatnonzero(left)[0])
        k = int(np.flatnonzero(ring.N[k1, gd])[0])
        perm.append(k)
    return tuple(perm)


def conjugate_by_invertible(ring: FusionRing, g: int, v: ObjectVec) -> ObjectVec:
    perm = conjugation_permutation(ring, g)
    c = [0] * ring.rank
    for i, a in enumerate(v):
        c[perm[i]] += a
    return ObjectVec(ring, tuple(c))


def conjugation_group(ring: FusionRing) -> list[tuple[int, ...]]:
    """Distinct basis permutations induced by conjugation with invertibles, sorted."""
    perms = {conjugation_permutation(ring, g) for g in invertibles(ring)}
    return sorted(perms)


# ---------------------------------------------------------------------------
# built-in rings


def _ring_from_products(name, labels, dual, products, D, dims) -> FusionRing:
    r = len(labels)
    N = np.zeros((r, r, r), dtype=np.int64)
    for (i, j), out in products.items():
        for k, m in out.items():
            N[i, j, k] = m
    return FusionRing(name=name, labels=tuple(labels), dual=tuple(dual), N=N, D=D, dims=tuple(dims))


def ring_h4() -> FusionRing:
    """The commutative rank-4 Haagerup ring with simples 1, ν, η, μ."""
    one, nu, eta, mu = range(4)
    table = {
        (nu, nu): {one: 1, nu: 2, eta: 2, mu: 1},
        (nu, eta): {nu: 2, eta: 1, mu: 1},
        (nu, mu): {nu: 1, eta: 1, mu: 1},
        (eta, eta): {one: 1, nu: 1, eta: 1, mu: 1},
        (eta, mu): {nu: 1, eta: 1},
        (mu, mu): {one: 1, nu: 1},
    }
    products = {}
    for i in range(4):
        products[(0, i)] = {i: 1}
        products[(i, 0)] = {i: 1}
    for (i, j), out in table.items():
        products[(i, j)] = out
        products[(j, i)] = out
    d = QuadExt(Fraction(3, 2), Fraction(1, 2), 13)
    return _ring_from_products("h4", ("1", "ν", "η", "μ"), (0, 1, 2, 3), products, 13,
                               (QuadExt(1), d + 1, d, d - 1))


def _izumi_products(n: int) -> dict:
    # simples: alpha_g at index g, alpha_g xi at index n + g
    products = {}
    for g in range(n):
        for h in range(n):
            products[(g, h)] = {(g + h) % n: 1}
            products[(g, n + h)] = {n + (g + h) % n: 1}
            products[(n + h, g)] = {n + (h - g) % n: 1}
            out = {(g - h) % n: 1}
            for k in range(n):
                out[n + k] = 1
            products[(n + g, n + h)] = out
    return products


def ring_izumi_i2(n: int) -> FusionRing:
    """The noncommutative Izumi ring on Z/n with an orbit of objects α_g ξ."""
    if not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise ValueError(f"Izumi I2(n) needs odd n >= 3, got {n!r}")
    d = QuadExt(Fraction(n, 2), Fraction(1, 2), n * n + 4)
    D = d.D  # squarefree part of n^2 + 4
    group = ["1"] + [f"α^{g}" if g > 1 else "α" for g in range(1, n)]
    labels = group + ["ξ"] + [f"{a}ξ" for a in group[1:]]
    dual = [(-g) % n for g in range(n)] + [n + g for g in range(n)]
    dims = [QuadExt(1)] * n + [d] * n
    return _ring_from_products(f"i2_{n}", labels, dual, _izumi_products(n), D, dims)


def ring_h6() -> FusionRing:
    """The noncommutative rank-6 Haagerup ring with simples 1, α, α², ξ, αξ, α²ξ."""
    one, a, a2, x, ax, a2x = range(6)
    Z = {x: 1, ax: 1, a2x: 1}
    table = [
        [{one: 1}, {a: 1}, {a2: 1}, {x: 1}, {ax: 1}, {a2x: 1}],
        [{a: 1}, {a2: 1}, {one: 1}, {ax: 1}, {a2x: 1}, {x: 1}],
        [{a2: 1}, {one: 1}, {a: 1}, {a2x: 1}, {x: 1}, {ax: 1}],
        [{x: 1}, {a2x: 1}, {ax: 1}, {one: 1, **Z}, {a2: 1, **Z}, {a: 1, **Z}],
        [{ax: 1}, {x: 1}, {a2x: 1}, {a: 1, **Z}, {one: 1, **Z}, {a2: 1, **Z}],
        [{a2x: 1}, {ax: 1}, {x: 1}, {a2: 1, **Z}, {a: 1, **Z}, {one: 1, **Z}],
    ]
    products = {(i, j): table[i][j] for i in range(6) for j in range(6)}
    d = QuadExt(Fraction(3, 2), Fraction(1, 2), 13)
    return _ring_from_products("h6", ("1", "α", "α²", "ξ", "αξ", "α²ξ"), (0, 2, 1, 3, 4, 5), products, 13,
                               (QuadExt(1), QuadExt(1), QuadExt(1), d, d, d))


# ---------------------------------------------------------------------------
# file codec


def ring_to_dict(ring: FusionRing) -> dict:
    return {
        "name": ring.name,
        "D": ring.D,
        "rank": ring.rank,
        "labels": list(ring.labels),
        "unit": ring.unit,
        "dual": list(ring.dual),
        "dims": [format_quad(d) for d in ring.dims],
        "N": ring.N.tolist(),
    }


def ring_from_dict(data: dict, *, check: bool = True) -> FusionRing:
    try:
        rank = int(data["rank"])
        labels = [str(x) for x in data["labels"]]
        dual = [int(x) for x in data["dual"]]
        dims = [parse_quad(str(x)) for x in data["dims"]]
        N = np.array(data["N"], dtype=np.int64)
        D = int(data["D"])
        unit = int(data.get("unit", 0))
        name = str(data.get("name", "ring"))
    except (KeyError, TypeError, ValueError) as exc:
        raise RingFormatError(f"malformed ring data: {exc}") from exc
    if len(labels) != rank:
        raise RingFormatError(f"rank {rank} but {len(labels)} labels")
    if N.shape != (rank, rank, rank):
        raise RingFormatError(f"N has shape {N.shape}, expected {(rank,) * 3}")
    ring = FusionRing(name=name, labels=tuple(labels), dual=tuple(dual), N=N, D=D, dims=tuple(dims), unit=unit)
    if check:
        failure = validate(ring).first_failure()
        if failure is not None:
            raise RingAxiomError(*failure)
    return ring


def ring_save(ring: FusionRing, path) -> None:
    data = ring_to_dict(ring)
    # one N row per line keeps the files diffable
    rows = ",\n    ".join(json.dumps(block) for block in data.pop("N"))
    head = json.dumps(data, indent=2, ensure_ascii=False)
    text = head[:-2] + f',\n  "N": [\n    {rows}\n  ]\n}}\n'
    Path(path).write_text(text, encoding="utf-8")


def ring_load(path) -> FusionRing:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RingFormatError(f"{path}: {exc}") from exc
    return ring_from_dict(data)


def builtin_ring(name: str) -> FusionRing:
    """Resolve ``h4``, ``h6`` or ``i2:<n>``."""
    if name == "h4":
        return ring_h4()
    if name == "h6":
        return ring_h6()
    if name.startswith("i2:") or name.startswith("i2_"):
        return ring_izumi_i2(int(name[3:]))
    raise KeyError(f"unknown builtin ring {name!r}")


def resolve_ring(selector: str) -> FusionRing:
    """A builtin name or a path to a ring file."""
    try:
        return builtin_ring(selector)
    except (KeyError, ValueError):
        if Path(selector).exists():
            return ring_load(selector)
        raise


def iter_objects(ring: FusionRing, bounds: Iterable[int]):
    for coeffs in product(*(range(b + 1) for b in bounds)):
        yield ObjectVec(ring, coeffs)
