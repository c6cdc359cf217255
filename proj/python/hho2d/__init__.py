"""Discontinuous-skeletal solver for advection-diffusion-reaction problems
on general polygonal meshes, with face-polynomial unknowns of arbitrary
order and static condensation of the cell unknowns."""

from ._hho2d import (
    Mesh,
    eoc,
    flux_profile,
    generate_mesh,
    load_mesh,
    run_convergence,
    solve_problem,
)

__all__ = [
    "Mesh",
    "eoc",
    "flux_profile",
    "generate_mesh",
    "load_mesh",
    "run_convergence",
    "solve_problem",
]
