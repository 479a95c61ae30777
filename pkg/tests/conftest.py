"""Shared fixtures, plus a session-wide feasibility audit.

Every solver entry point is wrapped before the test modules import it, so any
SteinerSolution or Mapping produced anywhere in the suite is re-verified on the
spot and an infeasible one fails the test that produced it.
"""

import functools

import pytest

import connrestore.cli
import connrestore.mcr_solver as mcr_solver
import connrestore.reduction as reduction
import connrestore.st_solver as st_solver
from connrestore.disk_graph import Instance
from connrestore.geometry import Grid, Point

AUDITED = {"steiner": 0, "mapping": 0}


def _audit_steiner(fn):
    @functools.wraps(fn)
    def wrapper(instance, *args, **kwargs):
        sol = fn(instance, *args, **kwargs)
        assert st_solver.verify_solution(instance, sol), f"{fn.__name__} returned an infeasible solution"
        AUDITED["steiner"] += 1
        return sol
    return wrapper


def _audit_mapping(fn):
    @functools.wraps(fn)
    def wrapper(instance, *args, **kwargs):
        mapping = fn(instance, *args, **kwargs)
        assert mcr_solver.verify_mapping(instance, mapping), f"{fn.__name__} returned a disconnected mapping"
        AUDITED["mapping"] += 1
        return mapping
    return wrapper


def _audit_reduction(fn):
    @functools.wraps(fn)
    def wrapper(instance, *args, **kwargs):
        result = fn(instance, *args, **kwargs)
        assert st_solver.verify_solution(instance, result.placements)
        assert mcr_solver.verify_mapping(instance.with_nodes(
            list(instance.nodes) + list(result.placements)), result.mapping)
        AUDITED["steiner"] += 1
        return result
    return wrapper


st_solver.solve_exact_grid = _audit_steiner(st_solver.solve_exact_grid)
st_solver.steinerized_mst = _audit_steiner(st_solver.steinerized_mst)
mcr_solver.solve_exact_grid = _audit_mapping(mcr_solver.solve_exact_grid)
mcr_solver.solve_heuristic = _audit_mapping(mcr_solver.solve_heuristic)
reduction.mcr_exact = mcr_solver.solve_exact_grid
reduction.st_via_mcr = _audit_reduction(reduction.st_via_mcr)
connrestore.cli.st_via_mcr = reduction.st_via_mcr


@pytest.fixture
def unit_square():
    return Instance([(0, 0), (0, 1), (1, 1), (1, 0)], 1.0)


@pytest.fixture
def two_apart():
    """Two nodes at distance 2 with r = 1 and the integer lattice between them."""
    return Instance([(0, 0), (0, 2)], 1.0), Grid(Point(0, 0), 1.0, 1, 3)


# --- acceptance report ---------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if report.when == "call" or report.failed:
        _ACCEPTANCE[number] = ("PASS" if report.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] {number}. {title}" + (f" -- {detail}" if detail else ""))
