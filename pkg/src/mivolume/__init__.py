"""Exact polytope geometry, mixed-integer volume measures and centerpoint search."""

from .errors import GeometryError
from .mixed_integer import FiberSet, MixedIntegerBody, mu, total_volume
from .polytope import Halfspace, Polytope, centroid, volume

__all__ = ["GeometryError", "FiberSet", "Halfspace", "MixedIntegerBody", "Polytope",
           "centroid", "mu", "total_volume", "volume"]
__version__ = "0.1.0"
