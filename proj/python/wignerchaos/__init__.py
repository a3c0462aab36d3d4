"""Exact moments of multiple Wigner integrals with step kernels."""

import json

from ._wignerchaos import (
    StepKernel,
    WignerChaosError,
    adjoint,
    catalan,
    classical_joint_moment,
    contract,
    contraction_norms,
    enumerate_pairings,
    enumerate_respectful,
    family_kernels,
    fourth_moment_gap,
    free_joint_moment,
    full_contraction,
    gaussian_family_moment,
    inner,
    is_connected,
    is_fully_symmetric,
    is_mirror_symmetric,
    is_noncrossing,
    pairing_integral,
    refine,
    semicircular_family_moment,
    semicircular_moment,
)
from ._wignerchaos import _run_experiment_json, _simulate_json

__version__ = "0.1.0"


def run_experiment(family="tensor_sum", order=2, rho=0.5, ks=(1, 4, 16, 64), mode="component", max_order=6):
    """Convergence report as a dict (same layout as the CLI's JSON output)."""
    return json.loads(_run_experiment_json(family, order, rho, list(ks), mode, max_order))


def simulate(words, dim=300, samples=200, seed=20110516, covariance=((1.0,),), jobs=1):
    """Empirical GUE trace moments as a dict (same layout as the CLI's JSON output)."""
    words = [[int(c) for c in w] if isinstance(w, str) else list(w) for w in words]
    cov = [list(row) for row in covariance]
    return json.loads(_simulate_json(words, dim, samples, seed, cov, jobs))
