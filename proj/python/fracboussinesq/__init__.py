"""Pseudo-spectral solver and numerical audit harness for the Boussinesq
system with fractional dissipation on a periodic box.

The heavy lifting lives in the compiled extension ``fracboussinesq._core``;
this package re-exports its public surface.
"""

from ._core import (  # noqa: F401
    BlowUpError,
    PreconditionError,
    ScalarField,
    SpectralGrid,
    VectorField,
    __version__,
    advect,
    advect_vec,
    char_integral,
    check_interpolation,
    commutator,
    committed_seeds,
    embedding_exponent,
    estimate_constants,
    free_solution_total,
    gradient_part,
    hdot_norm,
    heat_flow,
    imaginary_power,
    lambda_power,
    leray_project,
    lp_norm,
    make_grid,
    picard_solve,
    random_field,
    random_solenoidal,
    read_scalar_snapshot,
    read_vector_snapshot,
    smoothing_bound,
    smoothing_ratio,
    write_snapshot,
)
