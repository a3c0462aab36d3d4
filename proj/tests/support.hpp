#pragma once

// Test-only helpers: hand-rolled generators and brute-force oracles that do
// not share code paths with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "wignerchaos/kernel.hpp"
#include "wignerchaos/moment.hpp"
#include "wignerchaos/pairing.hpp"

namespace testing {

using wigner::CellIndex;
using wigner::Complex;
using wigner::Grid;
using wigner::Pairing;
using wigner::StepKernel;

// ---------------------------------------------------------------- kernels

/// Unit basis kernel e_{j1} (x) ... (x) e_{jn} with 0-based cells.
inline StepKernel basis(std::vector<CellIndex> idx, Grid grid = Grid(1.0, 4), Complex value = 1.0) {
    const int order = static_cast<int>(idx.size());
    return StepKernel(order, grid, {{std::move(idx), value}});
}

inline StepKernel tensor_sum(int order, int k) {
    wigner::KernelBuilder b(order, Grid(1.0, 2 * static_cast<std::uint32_t>(k)));
    for (int j = 0; j < k; ++j) {
        std::vector<CellIndex> idx(static_cast<std::size_t>(order), static_cast<CellIndex>(j));
        b.add(idx, 1.0 / std::sqrt(static_cast<double>(k)));
    }
    return std::move(b).build();
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

    /// Sparse random kernel with complex coefficients; fill ~ density.
    StepKernel kernel(int order, const Grid& grid, double density = 0.4, bool real = false) {
        wigner::KernelBuilder b(order, grid);
        std::vector<CellIndex> idx(static_cast<std::size_t>(order), 0);
        const std::size_t total = ipow(grid.cells, order);
        for (std::size_t lin = 0; lin < total; ++lin) {
            std::size_t rest = lin;
            for (int a = order - 1; a >= 0; --a) {
                idx[static_cast<std::size_t>(a)] = static_cast<CellIndex>(rest % grid.cells);
                rest /= grid.cells;
            }
            if (!coin(density)) continue;
            b.add(idx, Complex(uniform(-1, 1), real ? 0.0 : uniform(-1, 1)));
        }
        return std::move(b).build();
    }

    StepKernel mirror_symmetric(int order, const Grid& grid, double density = 0.4) {
        const StepKernel f = kernel(order, grid, density);
        return Complex(0.5) * (f + wigner::adjoint(f));
    }

    StepKernel fully_symmetric(int order, const Grid& grid, double density = 0.4) {
        const StepKernel f = kernel(order, grid, density, true);
        std::vector<int> perm(static_cast<std::size_t>(order));
        std::iota(perm.begin(), perm.end(), 0);
        StepKernel acc(order, grid, {});
        int count = 0;
        do {
            acc = acc + wigner::permute_arguments(f, perm);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return Complex(1.0 / count) * acc;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    static std::size_t ipow(std::size_t b, int e) {
        std::size_t r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }
    std::mt19937_64 rng_;
};

// ------------------------------------------------------------- pairings

/// All perfect matchings of [n] by "pair the smallest free element with each
/// other free element", then sorted into canonical order.
inline std::vector<Pairing> brute_pairings(int n) {
    std::vector<Pairing> out;
    std::vector<Pairing::Pair> cur;
    std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
    std::function<void()> rec = [&] {
        int a = 1;
        while (a <= n && used[static_cast<std::size_t>(a)]) ++a;
        if (a > n) {
            out.emplace_back(cur);
            return;
        }
        used[static_cast<std::size_t>(a)] = true;
        for (int b = a + 1; b <= n; ++b) {
            if (used[static_cast<std::size_t>(b)]) continue;
            used[static_cast<std::size_t>(b)] = true;
            cur.emplace_back(a, b);
            rec();
            cur.pop_back();
            used[static_cast<std::size_t>(b)] = false;
        }
        used[static_cast<std::size_t>(a)] = false;
    };
    if (n % 2 == 0) rec();
    std::sort(out.begin(), out.end());
    return out;
}

inline bool brute_noncrossing(const Pairing& pi) {
    for (auto [a, b] : pi.pairs()) {
        for (auto [c, d] : pi.pairs()) {
            if (a < c && c < b && b < d) return false;
        }
    }
    return true;
}

inline std::vector<int> block_labels(const std::vector<int>& sizes) {
    std::vector<int> label{0};
    for (std::size_t q = 0; q < sizes.size(); ++q) {
        for (int i = 0; i < sizes[q]; ++i) label.push_back(static_cast<int>(q));
    }
    return label;
}

inline bool brute_respects(const Pairing& pi, const std::vector<int>& sizes) {
    const auto label = block_labels(sizes);
    for (auto [a, b] : pi.pairs()) {
        if (label[static_cast<std::size_t>(a)] == label[static_cast<std::size_t>(b)]) return false;
    }
    return true;
}

/// Number of connected components of the block link graph, by repeated
/// relaxation of a component label array.
inline int brute_components(const Pairing& pi, const std::vector<int>& sizes) {
    const auto label = block_labels(sizes);
    std::vector<int> comp(sizes.size());
    std::iota(comp.begin(), comp.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [a, b] : pi.pairs()) {
            int& x = comp[static_cast<std::size_t>(label[static_cast<std::size_t>(a)])];
            int& y = comp[static_cast<std::size_t>(label[static_cast<std::size_t>(b)])];
            if (x != y) {
                x = y = std::min(x, y);
                changed = true;
            }
        }
    }
    return static_cast<int>(std::set<int>(comp.begin(), comp.end()).size());
}

inline std::vector<Pairing> filter_pairings(int n, bool nc, const std::vector<int>* sizes) {
    std::vector<Pairing> out;
    for (auto& pi : brute_pairings(n)) {
        if (nc && !brute_noncrossing(pi)) continue;
        if (sizes && !brute_respects(pi, *sizes)) continue;
        out.push_back(pi);
    }
    return out;
}

// ------------------------------------------------------- dense integrals

/// Direct evaluation: delta^(n/2) * sum over every assignment of one cell per
/// pair of the product of coefficients (looked up with `coefficient`).
inline Complex dense_pairing_integral(const std::vector<StepKernel>& ks, const Pairing& pi) {
    int n = 0;
    for (const auto& f : ks) n += f.order();
    const int half = n / 2;
    std::uint32_t m = 1;
    double delta = 1.0;
    for (const auto& f : ks) {
        if (f.order() > 0) {
            m = f.grid().cells;
            delta = f.grid().delta;
        }
    }
    std::vector<CellIndex> slot(static_cast<std::size_t>(n + 1));
    std::vector<std::uint32_t> choice(static_cast<std::size_t>(half), 0);
    Complex total = 0.0;
    while (true) {
        for (int p = 0; p < half; ++p) {
            auto [a, b] = pi.pairs()[static_cast<std::size_t>(p)];
            slot[static_cast<std::size_t>(a)] = choice[static_cast<std::size_t>(p)];
            slot[static_cast<std::size_t>(b)] = choice[static_cast<std::size_t>(p)];
        }
        Complex prod = 1.0;
        int pos = 1;
        for (const auto& f : ks) {
            std::vector<CellIndex> idx(slot.begin() + pos, slot.begin() + pos + f.order());
            prod *= f.coefficient(idx);
            pos += f.order();
            if (prod == Complex(0.0)) break;
        }
        total += prod;
        int p = 0;
        while (p < half && ++choice[static_cast<std::size_t>(p)] == m) choice[static_cast<std::size_t>(p++)] = 0;
        if (p == half) break;
    }
    return total * std::pow(delta, half);
}

/// Dense contraction straight from the defining sum.
inline Complex dense_contraction_coeff(const StepKernel& f, const StepKernel& g, int p,
                                       const std::vector<CellIndex>& t, const std::vector<CellIndex>& u) {
    const std::uint32_t m = f.grid().cells;
    std::vector<CellIndex> s(static_cast<std::size_t>(p), 0);
    Complex total = 0.0;
    while (true) {
        std::vector<CellIndex> fi(t);
        fi.insert(fi.end(), s.begin(), s.end());
        std::vector<CellIndex> gi(s.rbegin(), s.rend());
        gi.insert(gi.end(), u.begin(), u.end());
        total += f.coefficient(fi) * g.coefficient(gi);
        int q = 0;
        while (q < p && ++s[static_cast<std::size_t>(q)] == m) s[static_cast<std::size_t>(q++)] = 0;
        if (q == p) break;
    }
    return total * std::pow(f.grid().delta, p);
}

/// Pairing integral of diagonal kernels f_q = sum_j a_q[j] e_j^{(x)n_q} with
/// unit cells. Every kernel forces its slots equal, so the sum runs over one
/// cell per connected component of the graph (kernels, pairs).
inline Complex diagonal_pairing_integral(const std::vector<StepKernel>& ks, const Pairing& pi) {
    std::vector<int> owner{-1};
    for (std::size_t q = 0; q < ks.size(); ++q) {
        for (int i = 0; i < ks[q].order(); ++i) owner.push_back(static_cast<int>(q));
    }
    std::vector<int> comp(ks.size());
    std::iota(comp.begin(), comp.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [a, b] : pi.pairs()) {
            int& x = comp[static_cast<std::size_t>(owner[static_cast<std::size_t>(a)])];
            int& y = comp[static_cast<std::size_t>(owner[static_cast<std::size_t>(b)])];
            if (x != y) {
                x = y = std::min(x, y);
                changed = true;
            }
        }
    }
    const std::uint32_t m = ks.front().grid().cells;
    Complex total = 1.0;
    for (int c : std::set<int>(comp.begin(), comp.end())) {
        Complex sum = 0.0;
        for (std::uint32_t j = 0; j < m; ++j) {
            Complex prod = 1.0;
            for (std::size_t q = 0; q < ks.size(); ++q) {
                if (comp[q] != c) continue;
                prod *= ks[q].coefficient(std::vector<CellIndex>(static_cast<std::size_t>(ks[q].order()), j));
            }
            sum += prod;
        }
        total *= sum;
    }
    return total;
}

// --------------------------------------------------------- target moments

/// Semicircular or Gaussian family moment by brute-force pairing sums.
inline double brute_family_moment(const std::vector<std::vector<double>>& c, const std::vector<int>& word,
                                  bool noncrossing_only) {
    const int r = static_cast<int>(word.size());
    if (r == 0) return 1.0;
    if (r % 2) return 0.0;
    double total = 0.0;
    for (const auto& pi : brute_pairings(r)) {
        if (noncrossing_only && !brute_noncrossing(pi)) continue;
        double prod = 1.0;
        for (auto [a, b] : pi.pairs()) {
            prod *= c[static_cast<std::size_t>(word[static_cast<std::size_t>(a - 1)] - 1)]
                     [static_cast<std::size_t>(word[static_cast<std::size_t>(b - 1)] - 1)];
        }
        total += prod;
    }
    return total;
}

/// Composite Simpson quadrature of x^order against the semicircle density of
/// variance t, after the substitution x = 2 sqrt(t) sin(theta).
inline double quadrature_semicircle_moment(double t, int order, int panels = 20000) {
    const double r = 2.0 * std::sqrt(t);
    const double pi = std::acos(-1.0);
    auto integrand = [&](double th) {
        const double x = r * std::sin(th);
        const double c = std::cos(th);
        // density sqrt(4t - x^2)/(2 pi t) dx = (r c)(r c)/(2 pi t) dth
        return std::pow(x, order) * (r * c) * (r * c) / (2.0 * pi * t);
    };
    const double a = -pi / 2, b = pi / 2;
    const double h = (b - a) / panels;
    double s = integrand(a) + integrand(b);
    for (int i = 1; i < panels; ++i) s += integrand(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline bool approx(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

inline bool approx_rel(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
