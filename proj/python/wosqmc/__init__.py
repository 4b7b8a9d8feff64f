"""Walk-on-spheres estimators driven by randomized quasi-Monte Carlo points."""

import os as _os

_here = _os.path.dirname(__file__)
_packaged_data = _os.path.join(_here, "data")
if "WOSQMC_DATA_DIR" not in _os.environ and _os.path.isdir(_packaged_data):
    _os.environ["WOSQMC_DATA_DIR"] = _packaged_data

from ._wosqmc import (  # noqa: E402
    WosqmcError,
    boundary_box_count,
    circle_map,
    data_dir,
    distance,
    exact_solution,
    example_info,
    examples,
    fit_loglog,
    green,
    growth_exponent,
    parse_n_grid,
    run_study,
    vrf,
)


def cli_path():
    """Path of the bundled command-line tool, or None."""
    exe = _os.path.join(_here, "bin", "wosqmc")
    return exe if _os.path.exists(exe) else None


__all__ = [
    "WosqmcError",
    "boundary_box_count",
    "circle_map",
    "cli_path",
    "data_dir",
    "distance",
    "exact_solution",
    "example_info",
    "examples",
    "fit_loglog",
    "green",
    "growth_exponent",
    "parse_n_grid",
    "run_study",
    "vrf",
]
