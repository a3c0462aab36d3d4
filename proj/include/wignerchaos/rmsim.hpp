#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "wignerchaos/moment.hpp"

namespace wigner {

/// Correlated GUE model of a semicircular family.
///
/// Sample s draws d independent standardized GUE matrices G_1..G_d and sets
/// X_i = sum_j F_ij G_j, F the pivoted Cholesky factor of the covariance.
///
/// Reproducibility contract. Sample s uses its own std::mt19937_64 seeded with
/// splitmix64(seed ^ splitmix64(s)). Normals come from the Box-Muller
/// transform of two 53-bit uniforms (u1 in (0,1], u2 in [0,1)), cosine branch
/// first. Matrices are filled in order G_1..G_d; within each, the strict
/// upper triangle row-major (real part then imaginary part, each with
/// variance 1/(2N)), then the diagonal (variance 1/N).
struct SimConfig {
    int dim = 300;
    int samples = 200;
    std::uint64_t seed = 20110516;
    CovarianceMatrix covariance = CovarianceMatrix::identity(1);
    int jobs = 1;
};

struct EmpiricalMoment {
    std::vector<int> word;
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(samples); 0 for one sample

    bool operator==(const EmpiricalMoment&) const = default;
};

/// Throws InvalidArgument for dim < 2 or samples < 1.
void validate(const SimConfig& cfg);

std::uint64_t splitmix64(std::uint64_t x);

/// The d matrices X_1..X_d of sample `sample_index`.
std::vector<Eigen::MatrixXcd> sample_family(const SimConfig& cfg, std::uint64_t sample_index);

/// Re[(1/N) Tr(X_{i1} ... X_{ir})] for one sample's matrices.
double normalized_trace(const std::vector<Eigen::MatrixXcd>& xs, const std::vector<int>& word);

EmpiricalMoment empirical_trace_moment(const SimConfig& cfg, const std::vector<int>& word);

/// All words evaluated on the same samples.
std::vector<EmpiricalMoment> empirical_trace_moments(const SimConfig& cfg,
                                                     const std::vector<std::vector<int>>& words);

}  // namespace wigner
