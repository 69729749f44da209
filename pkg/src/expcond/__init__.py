"""Convex-geometric calculus of exponential sums: mixed volumes and
pseudovolumes, the polytope ring, tropical weighted fans and intersection
indices of exponential hypersurfaces."""

__version__ = "0.1.0"
