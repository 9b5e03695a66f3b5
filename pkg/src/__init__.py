"""BodySlice - slices of the GL(n) action on symmetric convex bodies"""

__version__ = "1.0.0"
