import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from fusiongraphs.algsearch import (FULL_SCAN_LIMIT, ScanRefused, SearchOptions, analyze_candidate,
                                    enumerate_candidates, expressibility_check, index_obstruction,
                                    odd_vertex_failures, odd_vertex_tests, reduced_fusion_matrix, scan_ring)
from fusiongraphs.fusionring import conjugation_group, ring_from_dict, ring_izumi_i2
from fusiongraphs.pgraph import GraphRejected, assemble_graph, graph_canonical
from fusiongraphs.qfield import parse_quad

from oracles import gram_oracle

H4_INDICES = ["5/2+1/2*sqrt(13)", "12+3*sqrt(13)", "4+sqrt(13)", "11/2+3/2*sqrt(13)",
              "15/2+3/2*sqrt(13)", "19/2+5/2*sqrt(13)", "7/2+1/2*sqrt(13)"]
H6_INDICES = ["5/2+1/2*sqrt(13)", "12+3*sqrt(13)", "4+sqrt(13)", "11/2+3/2*sqrt(13)",
              "15/2+3/2*sqrt(13)", "33/2+9/2*sqrt(13)", "3"]
I25_INDICES = ["7/2+1/2*sqrt(29)", "55+10*sqrt(29)", "11+2*sqrt(29)", "27/2+5/2*sqrt(29)",
               "35/2+5/2*sqrt(29)", "135/2+25/2*sqrt(29)", "5"]


def multiset(xs):
    return Counter(parse_quad(x) if isinstance(x, str) else x for x in xs)


def fib_ring():
    return ring_from_dict({"name": "fib", "D": 5, "rank": 2, "labels": ["1", "τ"], "dual": [0, 1],
                           "dims": ["1", "1/2+1/2*sqrt(5)"],
                           "N": [[[1, 0], [0, 1]], [[0, 1], [1, 1]]]})


def ising_ring():
    N = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
         [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
         [[0, 0, 1], [0, 0, 1], [1, 1, 0]]]
    return ring_from_dict({"name": "ising", "D": 2, "rank": 3, "labels": ["1", "ψ", "σ"], "dual": [0, 1, 2],
                           "dims": ["1", "1", "sqrt(2)"], "N": N})


def z3_ring():
    N = [[[int((i + j) % 3 == k) for k in range(3)] for j in range(3)] for i in range(3)]
    return ring_from_dict({"name": "z3", "D": 1, "rank": 3, "labels": ["1", "g", "g2"], "dual": [0, 2, 1],
                           "dims": ["1", "1", "1"], "N": N})


def test_h4_candidate_bounds(h4):
    assert h4.floors == (1, 4, 3, 2)
    assert len(enumerate_candidates(h4)) == 60
    assert enumerate_candidates(h4)[0].coeffs == (1, 0, 0, 0)


def test_h6_orbit_collapse(h6):
    with_dedup = {v.coeffs for v in enumerate_candidates(h6)}
    without = {v.coeffs for v in enumerate_candidates(h6, SearchOptions(inner_orbit_dedup=False))}
    assert len(with_dedup) == 48
    ones = {(1, 0, 0, 1, 0, 0), (1, 0, 0, 0, 1, 0), (1, 0, 0, 0, 0, 1)}
    assert ones <= without
    assert len(ones & with_dedup) == 1


def test_self_dual_filter(h6):
    all_c = enumerate_candidates(h6, SearchOptions(self_dual_filter=False, inner_orbit_dedup=False))
    sd = enumerate_candidates(h6, SearchOptions(inner_orbit_dedup=False))
    assert len(all_c) == 2 * 2 * 4 ** 3
    assert all(v.coeffs[1] == v.coeffs[2] for v in sd)


def test_reduced_matrices(h4):
    assert reduced_fusion_matrix(h4, h4.parse_object("1+ν")) == ((2, 2, 1), (2, 2, 1), (1, 1, 2))
    assert reduced_fusion_matrix(h4, h4.parse_object("1+2ν")) == ((1, 4, 2), (4, 3, 2), (2, 2, 3))
    assert reduced_fusion_matrix(h4, h4.parse_object("1")) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_expressibility_examples(h4, h6):
    assert not expressibility_check(h4, parse_quad("2"))
    assert expressibility_check(h6, parse_quad("2"))
    d = h6.dims[3]
    assert expressibility_check(h6, d)
    assert expressibility_check(h4, h4.dims[1] + 2 * h4.dims[3])
    assert expressibility_check(h4, parse_quad("0"))
    assert not expressibility_check(h4, parse_quad("-1"))
    assert expressibility_check(h4, parse_quad("1"), exclude_unit=False)
    assert not expressibility_check(h4, parse_quad("1"))


@given(st.lists(st.integers(0, 3), min_size=3, max_size=3), st.integers(-2, 4))
def test_expressibility_against_enumeration(coeffs, shift):
    from fusiongraphs.fusionring import ring_h4
    h4 = ring_h4()
    target = sum((c * d for c, d in zip(coeffs, h4.dims[1:])), parse_quad("0")) + shift
    brute = any(sum((c * d for c, d in zip(cs, h4.dims[1:])), parse_quad("0")) == target
                for cs in itertools.product(range(8), repeat=3))
    assert expressibility_check(h4, target) == brute


def test_saturated_h4_fails_expressibility(h4):
    g = assemble_graph(h4, h4.parse_object("1+4ν+3η+2μ"), ((1,), (1,), (1,)))
    reason, detail = odd_vertex_tests(h4, g)
    assert reason == "expressibility"
    assert "= 2 " in detail
    assert [r for r, _ in odd_vertex_failures(h4, g)] == ["expressibility"]


def test_h6_one_plus_xi_passes(h6):
    gamma = h6.parse_object("1+ξ")
    entry = analyze_candidate(h6, gamma)
    assert len(entry.survivors) == 1
    g = entry.survivors[0]
    assert any(s == 1 + h6.dims[3] for s in g.weight_squares)
    assert odd_vertex_tests(h6, g) is None


def test_h4_scan(h4_scan):
    assert multiset(h4_scan.surviving_indices()) == multiset(H4_INDICES)
    assert h4_scan.reason_counts()["negative-entry"] == 34


def test_h6_scan(h6_scan):
    assert multiset(h6_scan.surviving_indices()) == multiset(H6_INDICES)


def test_i2_5_scan(i2_5_scan):
    assert multiset(i2_5_scan.surviving_indices()) == multiset(I25_INDICES)
    recursive = [e for entry in i2_5_scan.entries for e in entry.eliminated if "recursive" in e[3]]
    assert len(recursive) >= 6


def test_trivial_algebra_survives(h4_scan):
    assert h4_scan.surviving_indices(include_trivial=True)[0] == 1


def test_index_obstruction(h4):
    assert index_obstruction(h4, parse_quad("33/2+9/2*sqrt(13)"))
    assert not index_obstruction(h4, parse_quad("7/2+1/2*sqrt(13)"))
    assert not index_obstruction(h4, parse_quad("1"))


def test_large_scan_refused():
    ring = ring_izumi_i2(7)
    with pytest.raises(ScanRefused):
        scan_ring(ring)
    capped = scan_ring(ring, SearchOptions(max_index="12"))
    assert capped.index_capped
    assert all(e.index <= 12 for e in capped.entries)


def test_recursion_depth_guard():
    with pytest.raises(ValueError):
        SearchOptions(recursion_depth=9)


def test_report_dict_records_every_failing_filter(i2_5_scan):
    d = i2_5_scan.to_dict()
    assert d["note"].startswith("surviving graphs pass necessary conditions only")
    failed = [g["failed_filters"] for e in d["entries"] for g in e["eliminated_graphs"]]
    assert any(set(f) >= {"expressibility", "recursive"} for f in failed)


# -- oracle: brute force over (gamma, A) on small rings -----------------------


def brute_force_scan(ring, opts):
    bound = max(max(r) for r in ring.N.reshape(-1, ring.rank)) * sum(ring.floors) ** 2 + 1
    found = set()
    for tail in itertools.product(*(range(f + 1) for f in ring.floors[1:])):
        coeffs = (1, *tail)
        if opts.self_dual_filter and any(coeffs[i] != coeffs[ring.dual[i]] for i in range(ring.rank)):
            continue
        gamma = ring.obj(coeffs)
        R = reduced_fusion_matrix(ring, gamma)
        if any(x < 0 for row in R for x in row):
            continue
        table = gram_oracle(len(R), max(bound, max(max(r) for r in R)))
        for cols in table.get(R, ()):
            Ar = tuple(tuple(c[i] for c in cols) for i in range(len(R)))
            try:
                g = assemble_graph(ring, gamma, Ar, require_connected=opts.connectivity_filter)
            except GraphRejected:
                continue
            if odd_vertex_tests(ring, g, opts) is None:
                found.add(graph_canonical(g, conjugation_group(ring)))
    return found


@pytest.mark.parametrize("make", [fib_ring, ising_ring, z3_ring])
def test_scan_matches_brute_force(make):
    ring = make()
    opts = SearchOptions(inner_orbit_dedup=False)
    report = scan_ring(ring, opts)
    got = {graph_canonical(g, conjugation_group(ring)) for g in report.surviving_graphs(include_trivial=True)}
    assert got == brute_force_scan(ring, opts)


def test_fibonacci_catalog():
    report = scan_ring(fib_ring())
    assert multiset(report.surviving_indices()) == multiset(["3/2+1/2*sqrt(5)"])


# -- properties ---------------------------------------------------------------

FILTERS = ("jones_filter", "expressibility_filter", "connectivity_filter", "self_dual_filter")


def _canon_set(report):
    return {graph_canonical(g, report.relabelings) for g in report.surviving_graphs(include_trivial=True)}


@settings(max_examples=12)
@given(st.sampled_from(["h4", "h6"]), st.sampled_from(FILTERS), st.sampled_from([0, 1]))
def test_disabling_a_filter_never_shrinks(name, flt, depth):
    from fusiongraphs.fusionring import builtin_ring
    ring = builtin_ring(name)
    base = SearchOptions(recursion_depth=depth)
    # every flag in FILTERS is stricter when True
    strict = scan_ring(ring, SearchOptions(**{**base.to_dict(), flt: True}))
    loose = scan_ring(ring, SearchOptions(**{**base.to_dict(), flt: False}))
    assert _canon_set(strict) <= _canon_set(loose)


def test_recursion_off_never_shrinks(i2_5, i2_5_scan):
    loose = scan_ring(i2_5, SearchOptions(recursion_depth=0))
    assert _canon_set(i2_5_scan) <= _canon_set(loose)
    assert len(loose.surviving_graphs()) > len(i2_5_scan.surviving_graphs())


def test_orbit_consistency(h6, h6_scan):
    full = scan_ring(h6, SearchOptions(inner_orbit_dedup=False))
    rel = h6_scan.relabelings
    deduped = {graph_canonical(g, rel) for g in h6_scan.surviving_graphs(include_trivial=True)}
    closure = {graph_canonical(g, rel) for g in full.surviving_graphs(include_trivial=True)}
    assert deduped == closure
    # every orbit member of a surviving candidate also survives
    surviving = {e.gamma.coeffs for e in full.entries if e.survivors}
    for c in surviving:
        for perm in rel:
            moved = [0] * len(c)
            for i, a in enumerate(c):
                moved[perm[i]] = a
            assert tuple(moved) in surviving


@settings(max_examples=6)
@given(st.permutations(range(1, 4)))
def test_scan_invariant_under_relabeling(perm):
    from fusiongraphs.fusionring import ring_h4
    h4 = ring_h4()
    full = [0, *perm]
    relabeled = h4.relabel(full)
    a = sorted(g.index for g in scan_ring(h4).surviving_graphs())
    b = sorted(g.index for g in scan_ring(relabeled).surviving_graphs())
    assert a == b
    # adjacency rows follow the relabeling exactly
    inv = {old: new for new, old in enumerate(full)}
    base = {g.gamma.coeffs: g for g in scan_ring(h4).surviving_graphs()}
    for g in scan_ring(relabeled).surviving_graphs():
        orig_coeffs = tuple(g.gamma.coeffs[inv[i]] for i in range(4))
        h = base[orig_coeffs]
        rows = tuple(h.adjacency[full[k]] for k in range(4))
        back = assemble_graph(relabeled, g.gamma, tuple(r[1:] for r in rows[1:]), require_connected=False)
        assert graph_canonical(back) == graph_canonical(g)


def test_full_scan_limit_constant():
    assert FULL_SCAN_LIMIT == 10 ** 6


def test_parallel_scan_is_deterministic(h6):
    assert scan_ring(h6, workers=3).to_dict() == scan_ring(h6, workers=1).to_dict()
