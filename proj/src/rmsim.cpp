#include "wignerchaos/rmsim.hpp"

#include <cmath>
#include <random>
#include <string>

#include "parallel.hpp"
#include "wignerchaos/error.hpp"

namespace wigner {

namespace {

class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;
        const double u2 = static_cast<double>(engine_() >> 11) * kScale;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void validate(const SimConfig& cfg) {
    if (cfg.dim < 2) throw Error(ErrorKind::InvalidArgument, "dim must be >= 2");
    if (cfg.samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
}

std::vector<Eigen::MatrixXcd> sample_family(const SimConfig& cfg, std::uint64_t sample_index) {
    validate(cfg);
    const int n = cfg.dim;
    const int d = cfg.covariance.dim();
    NormalSource normal(splitmix64(cfg.seed ^ splitmix64(sample_index)));
    const double off_sd = std::sqrt(1.0 / (2.0 * n));
    const double diag_sd = std::sqrt(1.0 / n);

    std::vector<Eigen::MatrixXcd> gs;
    gs.reserve(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) {
        Eigen::MatrixXcd g(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double re = off_sd * normal.next();
                const double im = off_sd * normal.next();
                g(i, j) = {re, im};
                g(j, i) = {re, -im};
            }
        }
        for (int i = 0; i < n; ++i) g(i, i) = {diag_sd * normal.next(), 0.0};
        gs.push_back(std::move(g));
    }

    const auto& f = cfg.covariance.factor();
    std::vector<Eigen::MatrixXcd> xs;
    for (int i = 0; i < d; ++i) {
        Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
        for (int j = 0; j < d; ++j) {
            const double w = f[static_cast<std::size_t>(i * d + j)];
            if (w != 0.0) x += w * gs[static_cast<std::size_t>(j)];
        }
        xs.push_back(std::move(x));
    }
    return xs;
}

double normalized_trace(const std::vector<Eigen::MatrixXcd>& xs, const std::vector<int>& word) {
    const int d = static_cast<int>(xs.size());
    for (int letter : word) {
        if (letter < 1 || letter > d) {
            throw Error(ErrorKind::IndexOutOfRange,
                        "word letter " + std::to_string(letter) + " outside 1.." + std::to_string(d));
        }
    }
    if (word.empty()) return 1.0;
    auto at = [&](std::size_t q) -> const Eigen::MatrixXcd& {
        return xs[static_cast<std::size_t>(word[q] - 1)];
    };
    const double n = static_cast<double>(at(0).rows());
    if (word.size() == 1) return at(0).trace().real() / n;
    Eigen::MatrixXcd prod = at(0);
    for (std::size_t q = 1; q + 1 < word.size(); ++q) prod = prod * at(q);
    // Tr(A B) = sum_ab A_ab B_ba
    const auto& last = at(word.size() - 1);
    return prod.cwiseProduct(last.transpose()).sum().real() / n;
}

std::vector<EmpiricalMoment> empirical_trace_moments(const SimConfig& cfg,
                                                     const std::vector<std::vector<int>>& words) {
    validate(cfg);
    for (const auto& w : words) {
        for (int letter : w) {
            if (letter < 1 || letter > cfg.covariance.dim()) {
                throw Error(ErrorKind::IndexOutOfRange, "word letter " + std::to_string(letter));
            }
        }
    }
    const auto samples = static_cast<std::size_t>(cfg.samples);
    std::vector<std::vector<double>> per_sample(samples);
    detail::parallel_for(samples, cfg.jobs, [&](std::size_t s) {
        const auto xs = sample_family(cfg, s);
        auto& out = per_sample[s];
        for (const auto& w : words) out.push_back(normalized_trace(xs, w));
    });

    std::vector<EmpiricalMoment> result;
    for (std::size_t w = 0; w < words.size(); ++w) {
        double mean = 0.0;
        for (std::size_t s = 0; s < samples; ++s) mean += per_sample[s][w];
        mean /= static_cast<double>(samples);
        double var = 0.0;
        for (std::size_t s = 0; s < samples; ++s) {
            const double dev = per_sample[s][w] - mean;
            var += dev * dev;
        }
        const double se =
            samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) / std::sqrt(static_cast<double>(samples))
                        : 0.0;
        result.push_back({words[w], mean, se});
    }
    return result;
}

EmpiricalMoment empirical_trace_moment(const SimConfig& cfg, const std::vector<int>& word) {
    return empirical_trace_moments(cfg, {word}).front();
}

}  // namespace wigner
