"""Multi-time wave functions for a lattice Dirac fermion coupled to a
lattice Dirac boson, with hypersurface evolution and verification suites."""
__version__ = "0.1.0"

from .fock_space import FockVector, ModelParams, enumerate_basis
from .hypersurface import Hypersurface, SurfaceState, flat_surface, make_surface, surface_evolve
from .multitime_engine import Engine, SpacetimeConfig, eval_phi
from .scenario import Scenario, default_scenario, load_scenario
from .spinor_dirac import LatticeGrid

__all__ = ["FockVector", "ModelParams", "enumerate_basis", "Hypersurface", "SurfaceState",
           "flat_surface", "make_surface", "surface_evolve", "Engine", "SpacetimeConfig",
           "eval_phi", "Scenario", "default_scenario", "load_scenario", "LatticeGrid", "__version__"]
