#pragma once

#include <span>
#include <string>
#include <vector>

#include "wignerchaos/kernel.hpp"
#include "wignerchaos/pairing.hpp"

namespace wigner {

/// Real symmetric positive-semidefinite d x d matrix, row-major.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;
    /// Throws InvalidArgument if not square/symmetric within 1e-12, NotPSD if
    /// the pivoted Cholesky probe finds an eigen-direction below -1e-10.
    explicit CovarianceMatrix(std::vector<std::vector<double>> rows);

    static CovarianceMatrix identity(int d);

    int dim() const noexcept { return d_; }
    /// 1-based access, matching index words.
    double operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>((i - 1) * d_ + (j - 1))];
    }
    std::vector<std::vector<double>> rows() const;

    /// F with F F^T = c (row-major d x d), from a diagonally pivoted Cholesky
    /// factorization that tolerates rank deficiency.
    const std::vector<double>& factor() const noexcept { return factor_; }

private:
    int d_ = 0;
    std::vector<double> entries_;
    std::vector<double> factor_;
};

/// Pivoted Cholesky with tolerance. Returns row-major F with F F^T = a.
/// Throws NotPSD.
std::vector<double> pivoted_cholesky(std::span<const double> a, int d, double tol);

/// How a pairing integral is evaluated.
///  - Auto: Contraction for non-crossing pairings, Naive otherwise.
///  - Contraction: sweep over the kernels in nesting order (natural order when
///    non-crossing, greedy fewest-open-pairs order otherwise), summing over
///    each pair's cell index as soon as both endpoints have been visited.
///  - Naive: enumerate one cell index per pair, no intermediate summation.
enum class Strategy { Auto, Contraction, Naive };

/// Integral of f1 (x) ... (x) fr against the diagonal measure of pi, exact for
/// step kernels:
///   delta^(n/2) * sum over one cell index per pair of prod_q f_q[slots of q].
/// Throws SizeMismatch (sum of orders != |pi|) and GridMismatch.
Complex pairing_integral(std::span<const StepKernel> kernels, const Pairing& pi,
                         Strategy strategy = Strategy::Auto);

/// Same integral evaluated as the product over the connected components of
/// C_pi (blocks = the kernel orders, all positive). Throws NotRespectful.
Complex factorized_pairing_integral(std::span<const StepKernel> kernels, const Pairing& pi);

enum class Engine { Free, Classical };
std::string to_string(Engine engine);

struct MomentRequest {
    std::vector<StepKernel> kernels;  // d kernels on one grid
    std::vector<int> word;            // 1-based letters in 1..d
};

struct Contribution {
    Pairing pairing;
    Complex value;
};

struct MomentReport {
    Complex total;
    std::vector<Contribution> contributions;
    BlockStructure block_structure;
    Engine engine = Engine::Free;
    std::vector<int> word;
    std::vector<std::string> warnings;
};

struct EvalOptions {
    Strategy strategy = Strategy::Auto;
    int jobs = 1;
};

/// phi[I(f_{i1}) ... I(f_{ir})] as the sum of pairing integrals over the
/// non-crossing pairings respecting n_{i1} (x) ... (x) n_{ir}.
///
/// Order-0 kernels act as scalars and contribute no block. The empty word
/// gives 1 (one empty pairing); an odd total degree gives 0 with no
/// contributions. Kernels that are not mirror symmetric produce a warning.
MomentReport free_joint_moment(const MomentRequest& req, const EvalOptions& opts = {});

/// E[I^W(f_{i1}) ... I^W(f_{ir})] as the sum over all respectful pairings,
/// crossings allowed. Every kernel referenced by the word must be fully
/// symmetric (NotFullySymmetric).
MomentReport classical_joint_moment(const MomentRequest& req, const EvalOptions& opts = {});

/// sum over NC_2(r) of prod c(i_a, i_b).
double semicircular_family_moment(const CovarianceMatrix& c, std::span<const int> word);

/// sum over P_2(r) of prod c(i_a, i_b) (Wick).
double gaussian_family_moment(const CovarianceMatrix& c, std::span<const int> word);

/// Moments of S(0, t): zero for odd orders, C_m t^m for order 2m.
double semicircular_moment(double t, int order);

/// phi[I(f)^4] - 2 phi[I(f)^2]^2. Throws NotMirrorSymmetric.
double fourth_moment_gap(const StepKernel& f, const EvalOptions& opts = {});

/// (||f ~p f||) for p = 1 .. n-1. Requires order >= 2.
std::vector<double> contraction_norms(const StepKernel& f);

struct ConnectedBound {
    Complex value;
    double bound = 0.0;
    int first_block = 0;  // 1-based block q whose contraction with its cyclic successor gave the bound
    int p = 0;
};

/// Pairing integral of a connected non-crossing pairing together with the
/// majorant ||f_q ~p f_{q+1}|| * prod_{l != q, q+1} ||f_l||, minimized over all
/// cyclically adjacent block pairs linked by a non-trivial contraction.
/// `kernels` are listed in block order. Throws NotRespectful, NotConnected,
/// NotMirrorSymmetric, and BoundViolation if |value| > bound + 1e-10.
ConnectedBound connected_integral_bound(std::span<const StepKernel> kernels, const Pairing& pi,
                                        const BlockStructure& blocks);

}  // namespace wigner
