"""Certified colouring paths on stable Kneser graphs and the non-test-graph witness."""

from .graph_core import Graph, Mapping, VertexPartition
from .homotopy import HomPath, path_for_even, path_to_automorphism, validate_path
from .kneser import DihedralElement, KneserParams, canonical_colouring, make_graph
from .witness import build_sg_witness, build_witness, certify_connectivity, verify_bundle

__all__ = [
    "DihedralElement",
    "Graph",
    "HomPath",
    "KneserParams",
    "Mapping",
    "VertexPartition",
    "build_sg_witness",
    "build_witness",
    "canonical_colouring",
    "certify_connectivity",
    "make_graph",
    "path_for_even",
    "path_to_automorphism",
    "validate_path",
    "verify_bundle",
]
