"""Connectivity restoration in unit-disk networks.

Minimum-Steiner-point placement, movement-based restoration (MCR), the reduction
that solves the former with an exact solver for the latter, and brute-force
oracles to check all of them on small instances.
"""

from .disk_graph import DiskGraph, Instance, components, euclidean_mst, induce, is_connected
from .errors import (BudgetExceededError, ConnRestoreError, InfeasibleError,
                     InvalidParameterError, IterationCapExceededError, ParseError)
from .geometry import EPS, BoundingBox, Grid, Point, covering_grid, distance, grid_points
from .mcr_solver import CostModel, Mapping, solve_heuristic, total_cost, verify_mapping
from .reduction import ReductionResult, iteration_bound, st_via_mcr, verify_theorem1
from .st_solver import SteinerSolution, steinerized_mst, verify_solution

__version__ = "0.1.0"
