"""Exact combinatorial search for principal graphs of algebra objects in fusion rings."""

from .qfield import QuadExt, RadicalWeight, parse_quad, format_quad, quad_sign, quad_floor, jones_admissible
from .fusionring import FusionRing, ObjectVec, builtin_ring, resolve_ring, validate, ring_load, ring_save
from .gramsearch import gram_factorizations, is_psd_exact
from .pgraph import PrincipalGraph, assemble_graph, graph_canonical, export_report, export_dot
from .algsearch import SearchOptions, SearchReport, scan_ring, index_obstruction, expressibility_check
from .izumi import saturated_object, saturated_analysis, izumi_identities, conjecture_check
from .lattice import AdmissibleIndexSet, intermediate_candidates, galois_orbit_report

__version__ = "0.1.0"

__all__ = [
    "QuadExt", "RadicalWeight", "parse_quad", "format_quad", "quad_sign", "quad_floor", "jones_admissible",
    "FusionRing", "ObjectVec", "builtin_ring", "resolve_ring", "validate", "ring_load", "ring_save",
    "gram_factorizations", "is_psd_exact",
    "PrincipalGraph", "assemble_graph", "graph_canonical", "export_report", "export_dot",
    "SearchOptions", "SearchReport", "scan_ring", "index_obstruction", "expressibility_check",
    "saturated_object", "saturated_analysis", "izumi_identities", "conjecture_check",
    "AdmissibleIndexSet", "intermediate_candidates", "galois_orbit_report",
]
