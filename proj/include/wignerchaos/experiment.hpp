#pragma once

#include <string>
#include <vector>

#include "wignerchaos/kernel.hpp"
#include "wignerchaos/moment.hpp"

namespace wigner {

enum class FamilyKind { TensorSum, CorrelatedPair, StaticBad };

std::string to_string(FamilyKind kind);
/// Accepts "tensor_sum", "correlated_pair", "static_bad"; throws InvalidArgument.
FamilyKind parse_family_kind(const std::string& name);

/// Explicit kernel sequences indexed by k, all on Grid(delta=1, cells=2k).
///
///  tensor_sum(n, k)          k^{-1/2} sum_{j<k} e_j^{(x)n}
///  correlated_pair(n, k, r)  (f_k, r f_k + sqrt(1-r^2) f'_k), f'_k the same
///                            tensor sum on cells k..2k-1
///  static_bad(n)             e_0^{(x)n}, independent of k
struct KernelFamily {
    FamilyKind kind = FamilyKind::TensorSum;
    int order = 2;
    double rho = 0.0;

    static KernelFamily tensor_sum(int order);
    static KernelFamily correlated_pair(int order, double rho);
    static KernelFamily static_bad(int order);

    int dimension() const { return kind == FamilyKind::CorrelatedPair ? 2 : 1; }
    std::vector<StepKernel> kernels(int k) const;
    /// Covariance of the kernels (exact for every k for the shipped families).
    CovarianceMatrix limit_covariance() const;
    std::string name() const;
};

struct MomentRow {
    int k = 0;
    std::vector<int> word;
    double measured = 0.0;
    double target = 0.0;
    double gap = 0.0;  // |measured - target|
    Engine engine = Engine::Free;

    bool operator==(const MomentRow&) const = default;
};

struct KDiagnostics {
    int k = 0;
    std::vector<std::vector<double>> covariance;          // measured phi[I(f_i) I(f_j)]
    std::vector<double> fourth_moments;                   // phi[I(f_i)^4]
    std::vector<double> fourth_moment_gaps;
    std::vector<std::vector<double>> contraction_norms;   // per kernel, p = 1..n-1

    bool operator==(const KDiagnostics&) const = default;
};

struct ConvergenceReport {
    std::string mode;    // component | joint | transfer
    std::string family;  // family names joined by '+'
    double norm_bound = 0.0;  // M = max over k and kernels of ||f_k||
    std::vector<KDiagnostics> per_k;
    std::vector<MomentRow> rows;
    /// Every gap at the largest k is below 5 / k_max. Reporting only.
    bool converged = false;
    std::string rate_note;

    bool operator==(const ConvergenceReport&) const = default;
};

/// Words of length 1..max_length over {1..d}, one per cyclic class (the
/// lexicographically least rotation), ordered by length then lexicographically.
std::vector<std::vector<int>> cyclic_representatives(int d, int max_length);

ConvergenceReport run_component_convergence(const KernelFamily& family, const std::vector<int>& ks,
                                            const EvalOptions& opts = {});

/// Free joint moments of the concatenated family kernels against the
/// semicircular family with covariance c. max_order <= 8.
/// Throws CovarianceMismatch if a measured second moment differs from c by
/// more than 0.5 at the largest k.
ConvergenceReport run_joint_convergence(const std::vector<KernelFamily>& families,
                                        const CovarianceMatrix& c, const std::vector<int>& ks,
                                        int max_order, const EvalOptions& opts = {});

/// Free moments against semicircular targets and classical moments against
/// Gaussian targets with covariance sqrt(n_i! n_j!) c(i,j), c being the
/// measured free covariance at each k. Throws NotFullySymmetric.
ConvergenceReport run_transfer_principle(const std::vector<KernelFamily>& families,
                                         const std::vector<int>& ks, int max_order,
                                         const EvalOptions& opts = {});

}  // namespace wigner
