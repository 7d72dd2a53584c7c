"""Generalized rank invariants and generalized persistence diagrams on finite grids."""

from .diagram import Diagram
from .grid import Grid2, Interval2, enumerate_intervals
from .homology import SimplicialComplex
from .bifiltration import Bifiltration
from .pmodule import GridModule, generalized_rank, gri, module_from_bifiltration
from .inversion import Barcode, gpd_direct, gpd_from_gri, support_size

__all__ = [
    "Barcode", "Bifiltration", "Diagram", "Grid2", "GridModule", "Interval2",
    "SimplicialComplex", "enumerate_intervals", "generalized_rank", "gpd_direct",
    "gpd_from_gri", "gri", "module_from_bifiltration", "support_size",
]
