// Acceptance suite: one pass/fail line per criterion. Oracles come from
// tests/support.hpp and never call the code under test for expected values.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "support.hpp"
#include "wignerchaos/error.hpp"
#include "wignerchaos/experiment.hpp"
#include "wignerchaos/moment.hpp"
#include "wignerchaos/pairing.hpp"
#include "wignerchaos/rmsim.hpp"

using namespace wigner;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string word_string(const std::vector<int>& w) {
    std::string s;
    for (int x : w) s += std::to_string(x);
    return s;
}

int jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// 1. pairing counts
void criterion1(Outcome& o) {
    const auto t0 = Clock::now();
    for (int m = 0; m <= 5; ++m) {
        std::uint64_t dfact = 1;
        for (int i = 2 * m - 1; i > 1; i -= 2) dfact *= static_cast<std::uint64_t>(i);
        const auto got = collect(enumerate_pairings(2 * m)).size();
        o.require(got == dfact, "|P2(" + std::to_string(2 * m) + ")|=" + std::to_string(got));
    }
    std::vector<std::uint64_t> cat{1};
    for (int m = 0; m < 8; ++m) {
        std::uint64_t s = 0;
        for (int i = 0; i <= m; ++i) s += cat[static_cast<std::size_t>(i)] * cat[static_cast<std::size_t>(m - i)];
        cat.push_back(s);
    }
    for (int m = 0; m <= 8; ++m) {
        const auto got = collect(enumerate_nc_pairings(2 * m)).size();
        o.require(got == cat[static_cast<std::size_t>(m)], "|NC2(" + std::to_string(2 * m) + ")|=" + std::to_string(got));
    }
    for (int n = 0; n <= 10; n += 2) {
        std::vector<Pairing> filtered;
        for (const auto& pi : collect(enumerate_pairings(n))) {
            if (testing::brute_noncrossing(pi)) filtered.push_back(pi);
        }
        o.require(collect(enumerate_nc_pairings(n)) == filtered, "NC2(" + std::to_string(n) + ") != filtered P2");
    }
    const double t = seconds_since(t0);
    o.require(t < 10.0, "runtime " + fmt(t) + "s");
    o.detail << (o.pass ? "counts exact for m<=5 / m<=8, filter cross-check n<=10, " + fmt(t) + "s" : "");
}

// 2. respectful non-crossing ground truth
void criterion2(Outcome& o) {
    const std::vector<Pairing> expected4{Pairing({{1, 4}, {2, 3}, {5, 8}, {6, 7}}),
                                         Pairing({{1, 8}, {2, 3}, {4, 5}, {6, 7}}),
                                         Pairing({{1, 8}, {2, 7}, {3, 6}, {4, 5}})};
    const auto got4 = collect(enumerate_respectful_nc(BlockStructure({2, 2, 2, 2})));
    o.require(got4 == expected4, "NC2(2x2x2x2) has " + std::to_string(got4.size()) + " pairings or wrong set");
    const std::vector<int> sizes{2, 2, 2, 2};
    o.require(testing::filter_pairings(8, true, &sizes) == expected4, "brute-force filter disagrees with listed set");
    const auto got3 = collect(enumerate_respectful_nc(BlockStructure({2, 2, 2})));
    o.require(got3.size() == 1, "|NC2(2x2x2)|=" + std::to_string(got3.size()));
    o.detail << (o.pass ? "|NC2(2x2x2x2)|=3 with the listed pairings, |NC2(2x2x2)|=1" : "");
}

// 3. fourth-moment targets
void criterion3(Outcome& o) {
    const auto t0 = Clock::now();
    const EvalOptions opts{Strategy::Auto, jobs()};
    const StepKernel e1 = testing::basis({0});
    const double m1 = free_joint_moment({{e1}, {1, 1, 1, 1}}, opts).total.real();
    o.require(std::abs(m1 - 2.0) <= 1e-12, "order-1 fourth moment " + fmt(m1));

    // phi((s^2 - 1)^4) by binomial expansion over semicircle moments from quadrature
    double oracle = 0.0;
    const int binom[] = {1, 4, 6, 4, 1};
    for (int j = 0; j <= 4; ++j) {
        const double mom = std::round(testing::quadrature_semicircle_moment(1.0, 2 * j));
        oracle += binom[j] * ((4 - j) % 2 ? -1.0 : 1.0) * mom;
    }
    const double m2 = free_joint_moment({{testing::basis({0, 0})}, {1, 1, 1, 1}}, opts).total.real();
    o.require(std::abs(m2 - oracle) <= 1e-12, "e1(x)e1 fourth moment " + fmt(m2) + " vs " + fmt(oracle));

    double worst_m = 0.0, worst_c = 0.0;
    for (int k : {1, 2, 4, 8, 16, 32, 64}) {
        const StepKernel f = testing::tensor_sum(2, k);
        const double m = free_joint_moment({{f}, {1, 1, 1, 1}}, opts).total.real();
        worst_m = std::max(worst_m, std::abs(m - (2.0 + 1.0 / k)));
        for (double c : contraction_norms(f)) worst_c = std::max(worst_c, std::abs(c - 1.0 / std::sqrt(k)));
    }
    o.require(worst_m <= 1e-9, "tensor_sum fourth moment error " + fmt(worst_m));
    o.require(worst_c <= 1e-9, "contraction norm error " + fmt(worst_c));
    const double t = seconds_since(t0);
    o.require(t < 30.0, "runtime " + fmt(t) + "s");
    if (o.pass) {
        o.detail << "e1: 2, e1(x)e1: 3, tensor_sum max err " << fmt(worst_m) << ", norms max err " << fmt(worst_c)
                 << ", " << fmt(t) << "s";
    }
}

// 4. multidimensional convergence for correlated_pair(2, k, 0.5)
void criterion4(Outcome& o) {
    const double rho = 0.5;
    const std::vector<std::vector<double>> c{{1.0, rho}, {rho, 1.0}};
    const KernelFamily fam = KernelFamily::correlated_pair(2, rho);
    const EvalOptions opts{Strategy::Auto, jobs()};
    std::vector<std::vector<int>> words;
    for (int len = 1; len <= 6; ++len) {
        for (int mask = 0; mask < (1 << len); ++mask) {
            std::vector<int> w;
            for (int a = 0; a < len; ++a) w.push_back(((mask >> (len - 1 - a)) & 1) + 1);
            words.push_back(w);
        }
    }
    int violations = 0;
    std::ostringstream worst_by_k;
    for (int k : {4, 16, 64}) {
        const auto ks = fam.kernels(k);
        double worst = 0.0;
        std::vector<int> worst_word;
        for (const auto& w : words) {
            const double measured = free_joint_moment({ks, w}, opts).total.real();
            const double target = testing::brute_family_moment(c, w, true);
            const double gap = std::abs(measured - target);
            if (w.size() == 2) {
                o.require(gap <= 1e-12, "r=2 word " + word_string(w) + " gap " + fmt(gap) + " at k=" + std::to_string(k));
            }
            if (gap > 3.0 / k) ++violations;
            if (gap > worst) worst = gap, worst_word = w;
        }
        worst_by_k << " k=" << k << ": max gap " << fmt(worst) << " (" << word_string(worst_word) << ") vs 3/k="
                   << fmt(3.0 / k) << ";";
    }
    o.require(violations == 0, std::to_string(violations) + " (k, word) gaps exceed 3/k;" + worst_by_k.str());
    for (int k : {1, 4, 16, 64}) {
        const auto bad = KernelFamily::static_bad(2).kernels(k);
        const double m = free_joint_moment({bad, {1, 1, 1, 1}}, opts).total.real();
        o.require(std::abs(std::abs(m - 2.0) - 1.0) <= 1e-12, "static_bad gap " + fmt(m - 2.0) + " at k=" + std::to_string(k));
    }
    if (o.pass) o.detail << "all words of length <= 6 within 3/k;" << worst_by_k.str() << " static_bad gap 1";
}

// 5. connected pairings are controlled by contractions
void criterion5(Outcome& o) {
    int checked = 0;
    for (const std::vector<int>& sizes : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 2, 2, 2}}) {
        const BlockStructure b(sizes);
        for (const auto& pi : collect(enumerate_respectful_nc(b))) {
            if (testing::brute_components(pi, sizes) != 1) continue;
            double prev_value = std::numeric_limits<double>::infinity();
            double prev_bound = std::numeric_limits<double>::infinity();
            for (int k : {1, 4, 16, 64}) {
                const std::vector<StepKernel> ks(sizes.size(), testing::tensor_sum(2, k));
                ConnectedBound cb;
                try {
                    cb = connected_integral_bound(ks, pi, b);
                } catch (const Error& e) {
                    o.require(false, std::string(e.what()));
                    continue;
                }
                const double v = std::abs(testing::dense_pairing_integral(ks, pi));
                o.require(std::abs(std::abs(cb.value) - v) <= 1e-12, "value disagrees with dense oracle");
                o.require(v <= cb.bound + 1e-10, "|value| " + fmt(v) + " > bound " + fmt(cb.bound));
                o.require(v < prev_value && cb.bound < prev_bound, "not strictly decreasing at k=" + std::to_string(k));
                prev_value = v;
                prev_bound = cb.bound;
                ++checked;
            }
        }
    }
    o.require(checked == 8, "expected 2 connected pairings x 4 k values, got " + std::to_string(checked));
    if (o.pass) o.detail << "bound holds and both sides decrease strictly over k=1,4,16,64 for every connected pairing";
}

// 6. factorization and traciality
void criterion6(Outcome& o) {
    testing::Gen gen(20240601);
    const Grid grid(0.75, 3);
    int checked = 0;
    double worst = 0.0;
    while (checked < 100) {
        const int r = gen.uniform_int(1, 4);
        std::vector<StepKernel> ks;
        std::vector<int> sizes;
        for (int q = 0; q < r; ++q) {
            ks.push_back(gen.mirror_symmetric(gen.uniform_int(1, 3), grid));
            sizes.push_back(ks.back().order());
        }
        const auto pis = collect(enumerate_respectful_nc(BlockStructure(sizes)));
        if (pis.empty()) continue;
        const Pairing& pi = pis[static_cast<std::size_t>(gen.uniform_int(0, static_cast<int>(pis.size()) - 1))];
        const Complex direct = testing::dense_pairing_integral(ks, pi);
        const Complex fact = factorized_pairing_integral(ks, pi);
        const double rel = std::abs(fact - direct) / std::max(1.0, std::abs(direct));
        worst = std::max(worst, rel);
        ++checked;
    }
    o.require(worst <= 1e-12, "factorization relative error " + fmt(worst));

    double worst_rot = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        const int d = gen.uniform_int(1, 3);
        std::vector<StepKernel> ks;
        for (int i = 0; i < d; ++i) ks.push_back(gen.mirror_symmetric(gen.uniform_int(1, 3), grid));
        std::vector<int> w;
        for (int a = gen.uniform_int(2, 4); a > 0; --a) w.push_back(gen.uniform_int(1, d));
        const Complex base = free_joint_moment({ks, w}).total;
        for (std::size_t s = 1; s < w.size(); ++s) {
            std::rotate(w.begin(), w.begin() + 1, w.end());
            const Complex rot = free_joint_moment({ks, w}).total;
            worst_rot = std::max(worst_rot, std::abs(rot - base) / std::max(1.0, std::abs(base)));
        }
    }
    o.require(worst_rot <= 1e-12, "cyclic rotation changes moment by " + fmt(worst_rot));
    if (o.pass) {
        o.detail << "100 factorizations max rel err " << fmt(worst) << ", rotations max rel diff " << fmt(worst_rot);
    }
}

// 7. transfer principle on tensor_sum(2, k)
void criterion7(Outcome& o) {
    const std::vector<int> sizes{2, 2, 2, 2};
    const auto respectful = testing::filter_pairings(8, false, &sizes);
    auto oracle_e4 = [&](const StepKernel& f) {
        Complex s = 0.0;
        const std::vector<StepKernel> ks(4, f);
        for (const auto& pi : respectful) s += testing::diagonal_pairing_integral(ks, pi);
        return s.real();
    };
    const EvalOptions opts{Strategy::Auto, jobs()};
    double e4_first = 0.0, e4_last = 0.0, f4_first = 0.0, f4_last = 0.0;
    for (int k : {1, 4, 16, 64}) {
        const StepKernel f = testing::tensor_sum(2, k);
        const double e2 = classical_joint_moment({{f}, {1, 1}}, opts).total.real();
        o.require(e2 == 2.0, "E[F^2]=" + fmt(e2) + " at k=" + std::to_string(k));
        const double e4 = classical_joint_moment({{f}, {1, 1, 1, 1}}, opts).total.real();
        o.require(std::abs(e4 - oracle_e4(f)) <= 1e-9, "E[F^4] disagrees with diagram oracle at k=" + std::to_string(k));
        const double f4 = free_joint_moment({{f}, {1, 1, 1, 1}}, opts).total.real();
        if (k == 1) e4_first = e4, f4_first = f4;
        e4_last = e4, f4_last = f4;
    }
    o.require(std::abs(e4_last - 12.0) < std::abs(e4_first - 12.0), "classical gap did not shrink");
    o.require(std::abs(e4_last - 12.0) <= 0.5,
              "E[F^4] at k=64 is " + fmt(e4_last) + ", |E[F^4]-12|=" + fmt(std::abs(e4_last - 12.0)) + " > 0.5");
    o.require(std::abs(f4_last - 2.0) < std::abs(f4_first - 2.0), "free gap did not shrink");
    o.detail << (o.pass ? "" : " | ") << "E[F^2]=2, E[F^4]: k=1 " << fmt(e4_first) << ", k=64 " << fmt(e4_last)
             << "; phi4: k=1 " << fmt(f4_first) << ", k=64 " << fmt(f4_last);
}

// 8. GUE Monte Carlo cross-check
void criterion8(Outcome& o) {
    const auto t0 = Clock::now();
    SimConfig cfg;
    cfg.dim = 300;
    cfg.samples = 200;
    cfg.jobs = jobs();
    const auto single = empirical_trace_moment(cfg, {1, 1, 1, 1});
    o.require(std::abs(single.mean - 2.0) <= 0.05, "GUE fourth moment " + fmt(single.mean));
    o.detail << "phi4=" << fmt(single.mean) << " (se " << fmt(single.std_error) << ")";
    for (double rho : {0.0, 0.5}) {
        cfg.covariance = CovarianceMatrix({{1.0, rho}, {rho, 1.0}});
        const auto m = empirical_trace_moment(cfg, {1, 2, 1, 2});
        o.require(std::abs(m.mean - 2 * rho * rho) <= 0.05, "phi(s1s2s1s2) " + fmt(m.mean) + " at rho=" + fmt(rho));
        o.detail << ", rho=" << fmt(rho) << ": " << fmt(m.mean) << " (se " << fmt(m.std_error) << ")";
    }
    const double t = seconds_since(t0);
    o.require(t < 60.0, "runtime " + fmt(t) + "s");
    o.detail << ", " << fmt(t) << "s";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"combinatorial counts", criterion1},          {"respectful NC ground truth", criterion2},
        {"fourth-moment targets", criterion3},         {"multidimensional convergence", criterion4},
        {"connected-pairing control", criterion5},     {"factorization and traciality", criterion6},
        {"transfer principle", criterion7},            {"Monte Carlo cross-check", criterion8}};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("AC%zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
