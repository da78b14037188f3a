"""Exact minimal A-infinity models for the A2 quiver and its
preprojective algebra: quiver representations, windowed projective
resolutions with contraction data, homotopy transfer over decorated
planar binary trees, and verification suites for the resulting operation
tables and functors."""

__version__ = "0.1.0"
