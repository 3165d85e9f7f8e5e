"""Single source of truth for numerical tolerances used across the library.

Test thresholds reference these constants so there is exactly one place
where a tolerance can be tightened or relaxed.
"""

# Structural Hermiticity of stored density matrices.
HERMITICITY_TOL = 1e-12

# Agreement between closed-form criteria and brute-force matrix computation.
ORACLE_TOL = 1e-9

# Maximum admissible imaginary part of Tr(rho O) for Hermitian O.
TRACE_IMAG_TOL = 1e-10

# Entrywise agreement between independent constructions of the mapped
# two-qubit state.
MAP_CONSISTENCY_TOL = 1e-10

# Allowed negative excursion of density-matrix diagonals and eigenvalues.
POSITIVITY_TOL = 1e-10

# Default admissible probability mass lost to Fock-space truncation.
DEFAULT_TAIL_BOUND = 1e-10

# Relative off-diagonal norm at which the Jacobi eigensolver stops.
JACOBI_OFFDIAG_TOL = 1e-12

# Hard cap on Jacobi sweeps before declaring non-convergence.
JACOBI_MAX_SWEEPS = 100

# Integrand magnitude at the grid boundary must fall below this fraction
# of its peak for a quadrature domain to be accepted.
BOUNDARY_MASS_RATIO = 1e-8
