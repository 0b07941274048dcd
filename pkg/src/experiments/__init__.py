"""
Ready-made experiment configurations.

Each module holds plain config dictionaries and a `criteria` list pairing an
acceptance label with the configs that decide it. ACCEPTANCE_SUITE is the
default suite run by `adialab suite`.
"""

from . import heisenberg, semiclassical, sol, torus

ACCEPTANCE_SUITE = torus.criteria + semiclassical.criteria + heisenberg.criteria + sol.criteria

__all__ = ["ACCEPTANCE_SUITE", "heisenberg", "semiclassical", "sol", "torus"]
