#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace wigner {

using Complex = std::complex<double>;
using CellIndex = std::uint32_t;

/// Uniform discretization of R_+ into `cells` half-open intervals of width
/// `delta`. Kernels of order n live on the product grid [0, cells*delta)^n.
struct Grid {
    double delta = 1.0;
    std::uint32_t cells = 1;

    Grid() = default;
    Grid(double delta, std::uint32_t cells);

    bool operator==(const Grid&) const = default;
};

/// Piecewise-constant element of L^2(R_+^n).
///
/// Coefficients are stored sparsely as a flat, lexicographically sorted list
/// of index tuples with their values; an absent tuple is a zero coefficient.
/// Exact zeros are never stored. Values are immutable after construction.
///
/// Order 0 is a scalar: at most one coefficient, keyed by the empty tuple.
class StepKernel {
public:
    struct Entry {
        std::vector<CellIndex> index;
        Complex value;
    };

    StepKernel() = default;

    /// Validating constructor. Throws IndexOutOfRange, DuplicateIndex or
    /// OrderMismatch.
    StepKernel(int order, Grid grid, std::vector<Entry> entries);

    static StepKernel scalar(Complex value);

    int order() const noexcept { return order_; }
    const Grid& grid() const noexcept { return grid_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const CellIndex> index(std::size_t entry) const noexcept {
        return {indices_.data() + entry * static_cast<std::size_t>(order_),
                static_cast<std::size_t>(order_)};
    }
    Complex value(std::size_t entry) const noexcept { return values_[entry]; }
    std::span<const Complex> values() const noexcept { return values_; }

    /// Coefficient at `idx` (zero when absent).
    Complex coefficient(std::span<const CellIndex> idx) const;

    /// delta^n, the Lebesgue measure of one grid cell of the product grid.
    double cell_volume() const;

    double norm() const;
    double squared_norm() const;

    /// Exact coefficient-level equality (same order, grid and stored values).
    bool operator==(const StepKernel& other) const;

private:
    friend class KernelBuilder;

    int order_ = 0;
    Grid grid_;
    std::vector<CellIndex> indices_;  // nnz * order, row-major, sorted
    std::vector<Complex> values_;
};

/// Accumulates (index, value) contributions and produces a StepKernel.
/// Duplicate indices are summed in insertion order.
class KernelBuilder {
public:
    KernelBuilder(int order, Grid grid);

    void add(std::span<const CellIndex> index, Complex value);
    StepKernel build() &&;

private:
    int order_;
    Grid grid_;
    std::vector<CellIndex> indices_;
    std::vector<Complex> values_;
};

StepKernel make_kernel(int order, const Grid& grid, std::vector<StepKernel::Entry> entries);

/// Plain L^2 inner product, delta^n * sum f[j] * conj(g[j]).
Complex inner(const StepKernel& f, const StepKernel& g);

/// f*(t1..tn) = conj(f(tn..t1)).
StepKernel adjoint(const StepKernel& f);

inline constexpr double kDefaultSymmetryTol = 1e-10;

/// ||f - f*|| <= tol * ||f||.
bool is_mirror_symmetric(const StepKernel& f, double tol = kDefaultSymmetryTol);

/// Real-valued and invariant under permutations of the arguments, both up to
/// tol * ||f|| in L^2. All n! permutations are checked for n <= 8; above that
/// the adjacent transpositions are checked, since they generate the group.
bool is_fully_symmetric(const StepKernel& f, double tol = kDefaultSymmetryTol);

/// p-th contraction: the last p arguments of f are integrated against the
/// first p arguments of g taken in reverse order,
///
///   (f ~p g)[t, u] = delta^p * sum_s f[t, s1..sp] * g[sp..s1, u].
///
/// Summation over s is lexicographic, so results are bitwise reproducible.
StepKernel contract(const StepKernel& f, const StepKernel& g, int p);

/// f ~0 g.
StepKernel tensor(const StepKernel& f, const StepKernel& g);

/// phi[I(f) I(g)]: inner(f, adjoint(g)) when the orders agree, zero otherwise.
Complex full_contraction(const StepKernel& f, const StepKernel& g);

/// L^2-equal kernel on Grid(delta / factor, cells * factor).
StepKernel refine(const StepKernel& f, std::uint32_t factor);

/// Applies index permutation: result(t1..tn) = f(t_perm[0]..t_perm[n-1]).
StepKernel permute_arguments(const StepKernel& f, std::span<const int> perm);

StepKernel operator+(const StepKernel& f, const StepKernel& g);
StepKernel operator-(const StepKernel& f, const StepKernel& g);
StepKernel operator*(Complex a, const StepKernel& f);

void require_same_grid(const StepKernel& f, const StepKernel& g);

}  // namespace wigner
