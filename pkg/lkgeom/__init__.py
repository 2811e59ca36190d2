"""lkgeom: Lipschitz-Killing curvatures, local germ invariants and motivic zeta functions."""

__version__ = "0.3.0"
