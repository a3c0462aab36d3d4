#include "wignerchaos/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "wignerchaos/error.hpp"

namespace wigner {

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::TensorSum: return "tensor_sum";
        case FamilyKind::CorrelatedPair: return "correlated_pair";
        case FamilyKind::StaticBad: return "static_bad";
    }
    return "unknown";
}

FamilyKind parse_family_kind(const std::string& name) {
    if (name == "tensor_sum") return FamilyKind::TensorSum;
    if (name == "correlated_pair") return FamilyKind::CorrelatedPair;
    if (name == "static_bad") return FamilyKind::StaticBad;
    throw Error(ErrorKind::InvalidArgument, "unknown family '" + name + "'");
}

KernelFamily KernelFamily::tensor_sum(int order) { return {FamilyKind::TensorSum, order, 0.0}; }

KernelFamily KernelFamily::correlated_pair(int order, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw Error(ErrorKind::InvalidArgument, "rho must lie in [-1, 1]");
    return {FamilyKind::CorrelatedPair, order, rho};
}

KernelFamily KernelFamily::static_bad(int order) { return {FamilyKind::StaticBad, order, 0.0}; }

namespace {

// scale * sum_{j in [first, first+count)} e_j^{(x)n}
void add_diagonal(KernelBuilder& b, int order, std::uint32_t first, std::uint32_t count, double scale) {
    std::vector<CellIndex> idx(static_cast<std::size_t>(order));
    for (std::uint32_t j = first; j < first + count; ++j) {
        std::fill(idx.begin(), idx.end(), j);
        b.add(idx, Complex{scale, 0.0});
    }
}

}  // namespace

std::vector<StepKernel> KernelFamily::kernels(int k) const {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "family parameter k must be >= 1");
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "family order must be >= 1");
    const auto uk = static_cast<std::uint32_t>(k);
    const Grid grid(1.0, 2 * uk);
    const double s = 1.0 / std::sqrt(static_cast<double>(k));
    switch (kind) {
        case FamilyKind::TensorSum: {
            KernelBuilder b(order, grid);
            add_diagonal(b, order, 0, uk, s);
            return {std::move(b).build()};
        }
        case FamilyKind::CorrelatedPair: {
            KernelBuilder f(order, grid), g(order, grid);
            add_diagonal(f, order, 0, uk, s);
            add_diagonal(g, order, 0, uk, rho * s);
            add_diagonal(g, order, uk, uk, std::sqrt(1.0 - rho * rho) * s);
            return {std::move(f).build(), std::move(g).build()};
        }
        case FamilyKind::StaticBad: {
            KernelBuilder b(order, grid);
            add_diagonal(b, order, 0, 1, 1.0);
            return {std::move(b).build()};
        }
    }
    return {};
}

CovarianceMatrix KernelFamily::limit_covariance() const {
    if (kind == FamilyKind::CorrelatedPair) return CovarianceMatrix({{1.0, rho}, {rho, 1.0}});
    return CovarianceMatrix::identity(1);
}

std::string KernelFamily::name() const {
    std::string out = to_string(kind) + "(n=" + std::to_string(order);
    if (kind == FamilyKind::CorrelatedPair) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ",rho=%g", rho);
        out += buf;
    }
    return out + ")";
}

std::vector<std::vector<int>> cyclic_representatives(int d, int max_length) {
    std::vector<std::vector<int>> out;
    for (int len = 1; len <= max_length; ++len) {
        std::vector<int> w(static_cast<std::size_t>(len), 1);
        while (true) {
            bool least = true;
            for (int s = 1; s < len && least; ++s) {
                std::vector<int> rot(w.begin() + s, w.end());
                rot.insert(rot.end(), w.begin(), w.begin() + s);
                if (rot < w) least = false;
            }
            if (least) out.push_back(w);
            int pos = len - 1;
            while (pos >= 0 && w[static_cast<std::size_t>(pos)] == d) w[static_cast<std::size_t>(pos--)] = 1;
            if (pos < 0) break;
            ++w[static_cast<std::size_t>(pos)];
        }
    }
    return out;
}

namespace {

void require_ks(const std::vector<int>& ks) {
    if (ks.empty()) throw Error(ErrorKind::InvalidArgument, "ks must be nonempty");
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 1 || (i > 0 && ks[i] <= ks[i - 1])) {
            throw Error(ErrorKind::InvalidArgument, "ks must be positive and strictly increasing");
        }
    }
}

std::string joined_name(const std::vector<KernelFamily>& families) {
    std::string out;
    for (const auto& f : families) out += (out.empty() ? "" : "+") + f.name();
    return out;
}

std::vector<StepKernel> all_kernels(const std::vector<KernelFamily>& families, int k) {
    if (families.empty()) throw Error(ErrorKind::InvalidArgument, "at least one family is required");
    std::vector<StepKernel> out;
    for (const auto& f : families) {
        for (auto& kern : f.kernels(k)) out.push_back(std::move(kern));
    }
    return out;
}

double real_moment(const std::vector<StepKernel>& kernels, std::vector<int> word, Engine engine,
                   const EvalOptions& opts) {
    MomentRequest req{kernels, std::move(word)};
    return (engine == Engine::Free ? free_joint_moment(req, opts) : classical_joint_moment(req, opts))
        .total.real();
}

KDiagnostics diagnostics(const std::vector<StepKernel>& kernels, int k, const EvalOptions& opts) {
    KDiagnostics diag;
    diag.k = k;
    const int d = static_cast<int>(kernels.size());
    for (int i = 1; i <= d; ++i) {
        std::vector<double> row;
        for (int j = 1; j <= d; ++j) row.push_back(real_moment(kernels, {i, j}, Engine::Free, opts));
        diag.covariance.push_back(std::move(row));
        const double m4 = real_moment(kernels, {i, i, i, i}, Engine::Free, opts);
        const double m2 = diag.covariance.back()[static_cast<std::size_t>(i - 1)];
        diag.fourth_moments.push_back(m4);
        diag.fourth_moment_gaps.push_back(m4 - 2.0 * m2 * m2);
        const auto& f = kernels[static_cast<std::size_t>(i - 1)];
        diag.contraction_norms.push_back(f.order() >= 2 ? contraction_norms(f) : std::vector<double>{});
    }
    return diag;
}

double norm_bound(const std::vector<StepKernel>& kernels, double current) {
    for (const auto& f : kernels) current = std::max(current, f.norm());
    return current;
}

void classify(ConvergenceReport& report, int k_max) {
    report.converged = std::all_of(report.rows.begin(), report.rows.end(), [&](const MomentRow& r) {
        return r.k != k_max || r.gap < 5.0 / k_max;
    });
    report.rate_note = "observed rates are properties of the chosen family, not general guarantees";
}

double factorial(int n) {
    double out = 1.0;
    for (int i = 2; i <= n; ++i) out *= i;
    return out;
}

MomentRow make_row(int k, std::vector<int> word, double measured, double target, Engine engine) {
    return {k, std::move(word), measured, target, std::abs(measured - target), engine};
}

}  // namespace

ConvergenceReport run_component_convergence(const KernelFamily& family, const std::vector<int>& ks,
                                            const EvalOptions& opts) {
    require_ks(ks);
    ConvergenceReport report;
    report.mode = "component";
    report.family = family.name();
    const CovarianceMatrix c = family.limit_covariance();
    for (int k : ks) {
        const auto kernels = family.kernels(k);
        report.norm_bound = norm_bound(kernels, report.norm_bound);
        KDiagnostics diag = diagnostics(kernels, k, opts);
        for (int i = 1; i <= c.dim(); ++i) {
            const auto ii = static_cast<std::size_t>(i - 1);
            report.rows.push_back(make_row(k, {i, i}, diag.covariance[ii][ii], c(i, i), Engine::Free));
            report.rows.push_back(make_row(k, {i, i, i, i}, diag.fourth_moments[ii],
                                           2.0 * c(i, i) * c(i, i), Engine::Free));
        }
        report.per_k.push_back(std::move(diag));
    }
    classify(report, ks.back());
    return report;
}

ConvergenceReport run_joint_convergence(const std::vector<KernelFamily>& families,
                                        const CovarianceMatrix& c, const std::vector<int>& ks,
                                        int max_order, const EvalOptions& opts) {
    require_ks(ks);
    if (max_order < 1 || max_order > 8) throw Error(ErrorKind::InvalidArgument, "max_order must lie in 1..8");
    ConvergenceReport report;
    report.mode = "joint";
    report.family = joined_name(families);
    const auto words = cyclic_representatives(c.dim(), max_order);
    for (int k : ks) {
        const auto kernels = all_kernels(families, k);
        if (static_cast<int>(kernels.size()) != c.dim()) {
            throw Error(ErrorKind::SizeMismatch, "families provide " + std::to_string(kernels.size()) +
                                                     " kernels for a " + std::to_string(c.dim()) +
                                                     "-dimensional covariance");
        }
        report.norm_bound = norm_bound(kernels, report.norm_bound);
        KDiagnostics diag = diagnostics(kernels, k, opts);
        if (k == ks.back()) {
            for (int i = 1; i <= c.dim(); ++i) {
                for (int j = 1; j <= c.dim(); ++j) {
                    const double m = diag.covariance[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
                    if (std::abs(m - c(i, j)) > 0.5) {
                        throw Error(ErrorKind::CovarianceMismatch,
                                    "measured phi[I(f_" + std::to_string(i) + ")I(f_" + std::to_string(j) +
                                        ")] = " + std::to_string(m) + " vs c = " + std::to_string(c(i, j)));
                    }
                }
            }
        }
        std::vector<MomentRow> rows(words.size());
        detail::parallel_for(words.size(), opts.jobs, [&](std::size_t w) {
            const double measured = real_moment(kernels, words[w], Engine::Free, {opts.strategy, 1});
            rows[w] = make_row(k, words[w], measured, semicircular_family_moment(c, words[w]), Engine::Free);
        });
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        report.per_k.push_back(std::move(diag));
    }
    classify(report, ks.back());
    return report;
}

ConvergenceReport run_transfer_principle(const std::vector<KernelFamily>& families,
                                         const std::vector<int>& ks, int max_order,
                                         const EvalOptions& opts) {
    require_ks(ks);
    if (max_order < 1 || max_order > 8) throw Error(ErrorKind::InvalidArgument, "max_order must lie in 1..8");
    ConvergenceReport report;
    report.mode = "transfer";
    report.family = joined_name(families);
    for (int k : ks) {
        const auto kernels = all_kernels(families, k);
        for (std::size_t i = 0; i < kernels.size(); ++i) {
            if (!is_fully_symmetric(kernels[i])) {
                throw Error(ErrorKind::NotFullySymmetric, "kernel " + std::to_string(i + 1));
            }
        }
        report.norm_bound = norm_bound(kernels, report.norm_bound);
        KDiagnostics diag = diagnostics(kernels, k, opts);
        const int d = static_cast<int>(kernels.size());
        const CovarianceMatrix c(diag.covariance);
        std::vector<std::vector<double>> scaled = diag.covariance;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                scaled[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *=
                    std::sqrt(factorial(kernels[static_cast<std::size_t>(i)].order()) *
                              factorial(kernels[static_cast<std::size_t>(j)].order()));
            }
        }
        const CovarianceMatrix cw(scaled);
        const auto words = cyclic_representatives(d, max_order);
        std::vector<MomentRow> rows(2 * words.size());
        detail::parallel_for(rows.size(), opts.jobs, [&](std::size_t t) {
            const auto& w = words[t / 2];
            const EvalOptions inner{opts.strategy, 1};
            if (t % 2 == 0) {
                rows[t] = make_row(k, w, real_moment(kernels, w, Engine::Free, inner),
                                   semicircular_family_moment(c, w), Engine::Free);
            } else {
                rows[t] = make_row(k, w, real_moment(kernels, w, Engine::Classical, inner),
                                   gaussian_family_moment(cw, w), Engine::Classical);
            }
        });
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        report.per_k.push_back(std::move(diag));
    }
    classify(report, ks.back());
    return report;
}

}  // namespace wigner
