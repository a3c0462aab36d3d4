#include "wignerchaos/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wignerchaos/error.hpp"

namespace wigner {

namespace {

bool lex_less(std::span<const CellIndex> a, std::span<const CellIndex> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool lex_equal(std::span<const CellIndex> a, std::span<const CellIndex> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

std::string describe(std::span<const CellIndex> idx) {
    std::string out = "(";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(idx[i]);
    }
    return out + ")";
}

// Merge-walks two kernels over the union of their supports.
template <typename Fn>
void merge_walk(const StepKernel& f, const StepKernel& g, Fn&& fn) {
    std::size_t i = 0, j = 0;
    const Complex zero{};
    while (i < f.nnz() || j < g.nnz()) {
        if (j == g.nnz() || (i < f.nnz() && lex_less(f.index(i), g.index(j)))) {
            fn(f.index(i), f.value(i), zero);
            ++i;
        } else if (i == f.nnz() || lex_less(g.index(j), f.index(i))) {
            fn(g.index(j), zero, g.value(j));
            ++j;
        } else {
            fn(f.index(i), f.value(i), g.value(j));
            ++i;
            ++j;
        }
    }
}

void require_same_order(const StepKernel& f, const StepKernel& g) {
    if (f.order() != g.order()) {
        throw Error(ErrorKind::OrderMismatch, "kernel orders " + std::to_string(f.order()) +
                                                  " and " + std::to_string(g.order()) + " differ");
    }
}

double squared_distance(const StepKernel& f, const StepKernel& g) {
    double acc = 0.0;
    merge_walk(f, g, [&](auto, Complex a, Complex b) { acc += std::norm(a - b); });
    return acc * f.cell_volume();
}

}  // namespace

Grid::Grid(double delta_, std::uint32_t cells_) : delta(delta_), cells(cells_) {
    if (!(delta_ > 0.0) || !std::isfinite(delta_)) {
        throw Error(ErrorKind::InvalidArgument, "grid delta must be positive and finite");
    }
    if (cells_ < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one cell");
}

KernelBuilder::KernelBuilder(int order, Grid grid) : order_(order), grid_(grid) {
    if (order < 0) throw Error(ErrorKind::InvalidArgument, "kernel order must be nonnegative");
}

void KernelBuilder::add(std::span<const CellIndex> index, Complex value) {
    indices_.insert(indices_.end(), index.begin(), index.end());
    values_.push_back(value);
}

StepKernel KernelBuilder::build() && {
    const auto n = static_cast<std::size_t>(order_);
    std::vector<std::size_t> perm(values_.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto idx = [&](std::size_t e) {
        return std::span<const CellIndex>(indices_.data() + e * n, n);
    };
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return lex_less(idx(a), idx(b)); });

    StepKernel k;
    k.order_ = order_;
    k.grid_ = grid_;
    for (std::size_t p = 0; p < perm.size();) {
        Complex sum = values_[perm[p]];
        std::size_t q = p + 1;
        while (q < perm.size() && lex_equal(idx(perm[q]), idx(perm[p]))) sum += values_[perm[q++]];
        if (sum != Complex{}) {
            auto i = idx(perm[p]);
            k.indices_.insert(k.indices_.end(), i.begin(), i.end());
            k.values_.push_back(sum);
        }
        p = q;
    }
    return k;
}

StepKernel::StepKernel(int order, Grid grid, std::vector<Entry> entries) {
    if (order < 0) throw Error(ErrorKind::InvalidArgument, "kernel order must be nonnegative");
    for (const auto& e : entries) {
        if (e.index.size() != static_cast<std::size_t>(order)) {
            throw Error(ErrorKind::OrderMismatch, "index " + describe(e.index) + " has length " +
                                                      std::to_string(e.index.size()) +
                                                      ", expected " + std::to_string(order));
        }
        for (auto j : e.index) {
            if (j >= grid.cells) {
                throw Error(ErrorKind::IndexOutOfRange,
                            "index " + describe(e.index) + " outside grid of " +
                                std::to_string(grid.cells) + " cells");
            }
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].index == entries[i - 1].index) {
            throw Error(ErrorKind::DuplicateIndex, "index " + describe(entries[i].index));
        }
    }
    order_ = order;
    grid_ = grid;
    for (const auto& e : entries) {
        if (e.value == Complex{}) continue;
        indices_.insert(indices_.end(), e.index.begin(), e.index.end());
        values_.push_back(e.value);
    }
}

StepKernel StepKernel::scalar(Complex value) {
    KernelBuilder b(0, Grid{});
    b.add({}, value);
    return std::move(b).build();
}

Complex StepKernel::coefficient(std::span<const CellIndex> idx) const {
    if (idx.size() != static_cast<std::size_t>(order_)) {
        throw Error(ErrorKind::OrderMismatch, "coefficient lookup with wrong tuple length");
    }
    std::size_t lo = 0, hi = nnz();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (lex_less(index(mid), idx)) lo = mid + 1;
        else hi = mid;
    }
    if (lo < nnz() && lex_equal(index(lo), idx)) return values_[lo];
    return {};
}

double StepKernel::cell_volume() const { return std::pow(grid_.delta, order_); }

double StepKernel::squared_norm() const {
    // Summed in sorted order so argument permutations leave the result unchanged.
    std::vector<double> sq(values_.size());
    std::transform(values_.begin(), values_.end(), sq.begin(), [](Complex v) { return std::norm(v); });
    std::sort(sq.begin(), sq.end());
    return std::accumulate(sq.begin(), sq.end(), 0.0) * cell_volume();
}

double StepKernel::norm() const { return std::sqrt(squared_norm()); }

bool StepKernel::operator==(const StepKernel& other) const {
    return order_ == other.order_ && grid_ == other.grid_ && indices_ == other.indices_ &&
           values_ == other.values_;
}

StepKernel make_kernel(int order, const Grid& grid, std::vector<StepKernel::Entry> entries) {
    return StepKernel(order, grid, std::move(entries));
}

void require_same_grid(const StepKernel& f, const StepKernel& g) {
    // Order-0 scalars carry no grid information and combine with anything.
    if (f.order() == 0 || g.order() == 0) return;
    if (!(f.grid() == g.grid())) {
        throw Error(ErrorKind::GridMismatch,
                    "grids (delta=" + std::to_string(f.grid().delta) +
                        ", cells=" + std::to_string(f.grid().cells) + ") and (delta=" +
                        std::to_string(g.grid().delta) + ", cells=" +
                        std::to_string(g.grid().cells) + ") differ");
    }
}

Complex inner(const StepKernel& f, const StepKernel& g) {
    require_same_grid(f, g);
    require_same_order(f, g);
    Complex acc{};
    std::size_t i = 0, j = 0;
    while (i < f.nnz() && j < g.nnz()) {
        if (lex_less(f.index(i), g.index(j))) ++i;
        else if (lex_less(g.index(j), f.index(i))) ++j;
        else acc += f.value(i++) * std::conj(g.value(j++));
    }
    return acc * f.cell_volume();
}

StepKernel adjoint(const StepKernel& f) {
    KernelBuilder b(f.order(), f.grid());
    std::vector<CellIndex> rev(static_cast<std::size_t>(f.order()));
    for (std::size_t e = 0; e < f.nnz(); ++e) {
        auto idx = f.index(e);
        std::reverse_copy(idx.begin(), idx.end(), rev.begin());
        b.add(rev, std::conj(f.value(e)));
    }
    return std::move(b).build();
}

bool is_mirror_symmetric(const StepKernel& f, double tol) {
    if (tol < 0) throw Error(ErrorKind::InvalidArgument, "tolerance must be nonnegative");
    return std::sqrt(squared_distance(f, adjoint(f))) <= tol * f.norm();
}

StepKernel permute_arguments(const StepKernel& f, std::span<const int> perm) {
    if (perm.size() != static_cast<std::size_t>(f.order())) {
        throw Error(ErrorKind::OrderMismatch, "permutation length differs from kernel order");
    }
    KernelBuilder b(f.order(), f.grid());
    std::vector<CellIndex> out(perm.size());
    for (std::size_t e = 0; e < f.nnz(); ++e) {
        auto idx = f.index(e);
        // result(t) = f(t o perm)  <=>  result[j] = f[i] with i[q] = j[perm[q]].
        for (std::size_t q = 0; q < perm.size(); ++q) out[static_cast<std::size_t>(perm[q])] = idx[q];
        b.add(out, f.value(e));
    }
    return std::move(b).build();
}

bool is_fully_symmetric(const StepKernel& f, double tol) {
    if (tol < 0) throw Error(ErrorKind::InvalidArgument, "tolerance must be nonnegative");
    const double scale = tol * f.norm();
    double imag_sq = 0.0;
    for (auto v : f.values()) imag_sq += v.imag() * v.imag();
    if (std::sqrt(imag_sq * f.cell_volume()) > scale) return false;

    const int n = f.order();
    if (n < 2) return true;
    auto invariant_under = [&](std::span<const int> perm) {
        return std::sqrt(squared_distance(f, permute_arguments(f, perm))) <= scale;
    };
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    if (n <= 8) {
        while (std::next_permutation(perm.begin(), perm.end())) {
            if (!invariant_under(perm)) return false;
        }
        return true;
    }
    for (int q = 0; q + 1 < n; ++q) {
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[static_cast<std::size_t>(q)], perm[static_cast<std::size_t>(q + 1)]);
        if (!invariant_under(perm)) return false;
    }
    return true;
}

StepKernel contract(const StepKernel& f, const StepKernel& g, int p) {
    require_same_grid(f, g);
    if (p < 0 || p > std::min(f.order(), g.order())) {
        throw Error(ErrorKind::ContractionOrderTooLarge,
                    "p=" + std::to_string(p) + " for orders " + std::to_string(f.order()) + " and " +
                        std::to_string(g.order()));
    }
    const auto up = static_cast<std::size_t>(p);
    const auto fn = static_cast<std::size_t>(f.order());
    const auto gn = static_cast<std::size_t>(g.order());
    const Grid grid = f.order() > 0 ? f.grid() : g.grid();

    // Keys: the contracted tuple (s1..sp) as it appears in f, and the
    // reversed leading tuple of g, which is the same (s1..sp) by definition.
    std::vector<CellIndex> gkeys(g.nnz() * up);
    for (std::size_t e = 0; e < g.nnz(); ++e) {
        auto idx = g.index(e);
        std::reverse_copy(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(up),
                          gkeys.begin() + static_cast<std::ptrdiff_t>(e * up));
    }
    auto fkey = [&](std::size_t e) { return f.index(e).subspan(fn - up); };
    auto gkey = [&](std::size_t e) {
        return std::span<const CellIndex>(gkeys.data() + e * up, up);
    };
    std::vector<std::size_t> fo(f.nnz()), go(g.nnz());
    std::iota(fo.begin(), fo.end(), std::size_t{0});
    std::iota(go.begin(), go.end(), std::size_t{0});
    std::stable_sort(fo.begin(), fo.end(),
                     [&](std::size_t a, std::size_t b) { return lex_less(fkey(a), fkey(b)); });
    std::stable_sort(go.begin(), go.end(),
                     [&](std::size_t a, std::size_t b) { return lex_less(gkey(a), gkey(b)); });

    KernelBuilder b(f.order() + g.order() - 2 * p, grid);
    const double scale = std::pow(grid.delta, p);
    std::vector<CellIndex> out(fn + gn - 2 * up);
    std::size_t i = 0, j = 0;
    while (i < fo.size() && j < go.size()) {
        auto ki = fkey(fo[i]);
        auto kj = gkey(go[j]);
        if (lex_less(ki, kj)) { ++i; continue; }
        if (lex_less(kj, ki)) { ++j; continue; }
        std::size_t i_end = i, j_end = j;
        while (i_end < fo.size() && lex_equal(fkey(fo[i_end]), ki)) ++i_end;
        while (j_end < go.size() && lex_equal(gkey(go[j_end]), kj)) ++j_end;
        for (std::size_t a = i; a < i_end; ++a) {
            auto fi = f.index(fo[a]);
            std::copy(fi.begin(), fi.end() - static_cast<std::ptrdiff_t>(up), out.begin());
            for (std::size_t c = j; c < j_end; ++c) {
                auto gi = g.index(go[c]);
                std::copy(gi.begin() + static_cast<std::ptrdiff_t>(up), gi.end(),
                          out.begin() + static_cast<std::ptrdiff_t>(fn - up));
                b.add(out, f.value(fo[a]) * g.value(go[c]));
            }
        }
        i = i_end;
        j = j_end;
    }
    StepKernel result = std::move(b).build();
    if (p == 0) return result;
    KernelBuilder scaled(result.order(), result.grid());
    for (std::size_t e = 0; e < result.nnz(); ++e) scaled.add(result.index(e), result.value(e) * scale);
    return std::move(scaled).build();
}

StepKernel tensor(const StepKernel& f, const StepKernel& g) { return contract(f, g, 0); }

Complex full_contraction(const StepKernel& f, const StepKernel& g) {
    require_same_grid(f, g);
    if (f.order() != g.order()) return {};
    return inner(f, adjoint(g));
}

StepKernel refine(const StepKernel& f, std::uint32_t factor) {
    if (factor < 1) throw Error(ErrorKind::InvalidArgument, "refinement factor must be >= 1");
    if (factor == 1) return f;
    const Grid fine(f.grid().delta / factor, f.grid().cells * factor);
    const auto n = static_cast<std::size_t>(f.order());
    KernelBuilder b(f.order(), fine);
    std::vector<CellIndex> sub(n, 0), out(n);
    for (std::size_t e = 0; e < f.nnz(); ++e) {
        auto idx = f.index(e);
        std::fill(sub.begin(), sub.end(), 0);
        while (true) {
            for (std::size_t q = 0; q < n; ++q) out[q] = idx[q] * factor + sub[q];
            b.add(out, f.value(e));
            std::size_t q = n;
            while (q > 0) {
                if (++sub[q - 1] < factor) break;
                sub[q - 1] = 0;
                --q;
            }
            if (q == 0) break;
        }
    }
    return std::move(b).build();
}

StepKernel operator+(const StepKernel& f, const StepKernel& g) {
    require_same_grid(f, g);
    require_same_order(f, g);
    KernelBuilder b(f.order(), f.grid());
    merge_walk(f, g, [&](auto idx, Complex a, Complex c) { b.add(idx, a + c); });
    return std::move(b).build();
}

StepKernel operator-(const StepKernel& f, const StepKernel& g) {
    require_same_grid(f, g);
    require_same_order(f, g);
    KernelBuilder b(f.order(), f.grid());
    merge_walk(f, g, [&](auto idx, Complex a, Complex c) { b.add(idx, a - c); });
    return std::move(b).build();
}

StepKernel operator*(Complex a, const StepKernel& f) {
    KernelBuilder b(f.order(), f.grid());
    for (std::size_t e = 0; e < f.nnz(); ++e) b.add(f.index(e), a * f.value(e));
    return std::move(b).build();
}

}  // namespace wigner
