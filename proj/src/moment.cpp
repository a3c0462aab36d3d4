#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "parallel.hpp"
#include "wignerchaos/error.hpp"
#include "wignerchaos/moment.hpp"

namespace wigner {

std::string to_string(Engine engine) { return engine == Engine::Free ? "free" : "classical"; }

namespace {

constexpr std::size_t kBatch = 256;

struct PreparedWord {
    std::vector<StepKernel> kernels;  // positive-order kernels in word order
    Complex scalar{1.0, 0.0};         // product of order-0 kernels
    std::vector<int> sizes;
    int degree = 0;
};

PreparedWord prepare_word(const MomentRequest& req) {
    PreparedWord pw;
    const StepKernel* ref = nullptr;
    const int d = static_cast<int>(req.kernels.size());
    for (int letter : req.word) {
        if (letter < 1 || letter > d) {
            throw Error(ErrorKind::IndexOutOfRange,
                        "word letter " + std::to_string(letter) + " outside 1.." + std::to_string(d));
        }
        const auto& k = req.kernels[static_cast<std::size_t>(letter - 1)];
        if (k.order() == 0) {
            pw.scalar *= k.nnz() ? k.value(0) : Complex{};
            continue;
        }
        if (ref) require_same_grid(*ref, k);
        else ref = &k;
        pw.kernels.push_back(k);
        pw.sizes.push_back(k.order());
        pw.degree += k.order();
    }
    return pw;
}

// Sums pairing integrals over a pairing stream, evaluating batches in
// parallel and appending them in stream order.
MomentReport sum_over(PairingStream stream, const PreparedWord& pw, const EvalOptions& opts,
                      MomentReport report) {
    std::vector<Pairing> batch;
    std::vector<Complex> values;
    auto flush = [&] {
        values.assign(batch.size(), Complex{});
        detail::parallel_for(batch.size(), opts.jobs, [&](std::size_t i) {
            values[i] = pw.scalar * pairing_integral(pw.kernels, batch[i], opts.strategy);
        });
        for (std::size_t i = 0; i < batch.size(); ++i) {
            report.contributions.push_back({std::move(batch[i]), values[i]});
        }
        batch.clear();
    };
    while (auto pi = stream.next()) {
        batch.push_back(std::move(*pi));
        if (batch.size() == kBatch) flush();
    }
    flush();
    report.total = Complex{};
    for (const auto& c : report.contributions) report.total += c.value;
    return report;
}

MomentReport evaluate(const MomentRequest& req, const EvalOptions& opts, Engine engine) {
    PreparedWord pw = prepare_word(req);
    MomentReport report;
    report.engine = engine;
    report.word = req.word;

    if (engine == Engine::Free) {
        std::vector<int> seen;
        for (int letter : req.word) {
            if (std::find(seen.begin(), seen.end(), letter) != seen.end()) continue;
            seen.push_back(letter);
            if (!is_mirror_symmetric(req.kernels[static_cast<std::size_t>(letter - 1)])) {
                report.warnings.push_back("kernel " + std::to_string(letter) +
                                          " is not mirror symmetric; moment is not of a self-adjoint word");
            }
        }
    } else {
        for (int letter : req.word) {
            if (!is_fully_symmetric(req.kernels[static_cast<std::size_t>(letter - 1)])) {
                throw Error(ErrorKind::NotFullySymmetric,
                            "kernel " + std::to_string(letter) + " is not fully symmetric");
            }
        }
    }

    if (pw.degree % 2 != 0) {
        report.block_structure = BlockStructure(pw.sizes);
        report.total = Complex{};
        return report;
    }
    report.block_structure = BlockStructure(pw.sizes);
    auto stream = engine == Engine::Free ? enumerate_respectful_nc(report.block_structure)
                                         : enumerate_respectful(report.block_structure);
    return sum_over(std::move(stream), pw, opts, std::move(report));
}

double family_moment(const CovarianceMatrix& c, std::span<const int> word, bool noncrossing) {
    for (int letter : word) {
        if (letter < 1 || letter > c.dim()) {
            throw Error(ErrorKind::IndexOutOfRange,
                        "word letter " + std::to_string(letter) + " outside 1.." + std::to_string(c.dim()));
        }
    }
    const int r = static_cast<int>(word.size());
    if (r % 2 != 0) return 0.0;
    auto stream = noncrossing ? enumerate_nc_pairings(r) : enumerate_pairings(r);
    double total = 0.0;
    while (auto pi = stream.next()) {
        double prod = 1.0;
        for (auto [a, b] : pi->pairs()) {
            prod *= c(word[static_cast<std::size_t>(a - 1)], word[static_cast<std::size_t>(b - 1)]);
        }
        total += prod;
    }
    return total;
}

}  // namespace

MomentReport free_joint_moment(const MomentRequest& req, const EvalOptions& opts) {
    return evaluate(req, opts, Engine::Free);
}

MomentReport classical_joint_moment(const MomentRequest& req, const EvalOptions& opts) {
    return evaluate(req, opts, Engine::Classical);
}

double semicircular_family_moment(const CovarianceMatrix& c, std::span<const int> word) {
    return family_moment(c, word, true);
}

double gaussian_family_moment(const CovarianceMatrix& c, std::span<const int> word) {
    return family_moment(c, word, false);
}

double semicircular_moment(double t, int order) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "variance t must be positive");
    if (order < 0) throw Error(ErrorKind::InvalidArgument, "moment order must be nonnegative");
    if (order % 2 != 0) return 0.0;
    const int m = order / 2;
    return static_cast<double>(catalan(m)) * std::pow(t, m);
}

double fourth_moment_gap(const StepKernel& f, const EvalOptions& opts) {
    if (!is_mirror_symmetric(f)) throw Error(ErrorKind::NotMirrorSymmetric, "fourth_moment_gap");
    MomentRequest req{{f}, {1, 1, 1, 1}};
    const double m4 = free_joint_moment(req, opts).total.real();
    req.word = {1, 1};
    const double m2 = free_joint_moment(req, opts).total.real();
    return m4 - 2.0 * m2 * m2;
}

std::vector<double> contraction_norms(const StepKernel& f) {
    if (f.order() < 2) throw Error(ErrorKind::InvalidArgument, "contraction norms need order >= 2");
    std::vector<double> out;
    for (int p = 1; p < f.order(); ++p) out.push_back(contract(f, f, p).norm());
    return out;
}

ConnectedBound connected_integral_bound(std::span<const StepKernel> kernels, const Pairing& pi,
                                        const BlockStructure& blocks) {
    const int r = blocks.blocks();
    if (static_cast<int>(kernels.size()) != r) {
        throw Error(ErrorKind::SizeMismatch, "one kernel per block is required");
    }
    for (int q = 0; q < r; ++q) {
        if (kernels[static_cast<std::size_t>(q)].order() != blocks.sizes()[static_cast<std::size_t>(q)]) {
            throw Error(ErrorKind::SizeMismatch, "kernel order differs from block size");
        }
    }
    if (r < 3) throw Error(ErrorKind::InvalidArgument, "the contraction bound needs r >= 3 blocks");
    if (!is_connected(pi, blocks)) throw Error(ErrorKind::NotConnected, "pairing does not connect the blocks");
    if (!is_noncrossing(pi)) throw Error(ErrorKind::InvalidArgument, "pairing must be non-crossing");
    for (const auto& k : kernels) {
        if (!is_mirror_symmetric(k)) throw Error(ErrorKind::NotMirrorSymmetric, "connected_integral_bound");
    }

    ConnectedBound out;
    out.value = pairing_integral(kernels, pi);
    std::vector<double> norms;
    for (const auto& k : kernels) norms.push_back(k.norm());

    std::optional<double> best;
    for (int q = 1; q <= r; ++q) {
        const int next = q % r + 1;
        int p = 0;
        for (auto [a, b] : pi.pairs()) {
            const int qa = blocks.block_of(a), qb = blocks.block_of(b);
            if ((qa == q && qb == next) || (qa == next && qb == q)) ++p;
        }
        const int nq = blocks.sizes()[static_cast<std::size_t>(q - 1)];
        const int nn = blocks.sizes()[static_cast<std::size_t>(next - 1)];
        if (p == 0 || 2 * p >= nq + nn) continue;
        double bound = contract(kernels[static_cast<std::size_t>(q - 1)],
                                kernels[static_cast<std::size_t>(next - 1)], p)
                           .norm();
        for (int l = 1; l <= r; ++l) {
            if (l != q && l != next) bound *= norms[static_cast<std::size_t>(l - 1)];
        }
        if (!best || bound < *best) {
            best = bound;
            out.first_block = q;
            out.p = p;
        }
    }
    if (!best) {
        throw Error(ErrorKind::InvalidArgument, "no non-trivial linking contraction between adjacent blocks");
    }
    out.bound = *best;
    if (std::abs(out.value) > out.bound + 1e-10) {
        throw Error(ErrorKind::BoundViolation,
                    "|integral| = " + std::to_string(std::abs(out.value)) + " exceeds bound " +
                        std::to_string(out.bound));
    }
    return out;
}

}  // namespace wigner
