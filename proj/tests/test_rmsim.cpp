#include "doctest.h"
#include "wignerchaos/error.hpp"
#include "wignerchaos/rmsim.hpp"

using namespace wigner;

TEST_SUITE("rmsim") {

TEST_CASE("validation") {
    SimConfig cfg;
    cfg.dim = 1;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg.dim = 2;
    cfg.samples = 0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg.samples = 1;
    CHECK_NOTHROW(validate(cfg));
    CHECK_THROWS_AS(empirical_trace_moment(cfg, {2}), Error);
}

TEST_CASE("splitmix64 reference values") {
    // first outputs of the reference generator started at state 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("samples are Hermitian and deterministic") {
    SimConfig cfg;
    cfg.dim = 40;
    cfg.covariance = CovarianceMatrix({{1.0, 0.3}, {0.3, 1.0}});
    for (std::uint64_t s : {0ULL, 1ULL, 17ULL}) {
        const auto a = sample_family(cfg, s);
        const auto b = sample_family(cfg, s);
        REQUIRE(a.size() == 2);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK((a[i] - a[i].adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(a[i] == b[i]);
        }
    }
    CHECK(sample_family(cfg, 0)[0] != sample_family(cfg, 1)[0]);
}

TEST_CASE("rank-one covariance gives identical matrices") {
    SimConfig cfg;
    cfg.dim = 20;
    cfg.covariance = CovarianceMatrix({{1.0, 1.0}, {1.0, 1.0}});
    const auto xs = sample_family(cfg, 3);
    CHECK((xs[0] - xs[1]).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("normalized trace") {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
    CHECK(normalized_trace({2.0 * id}, {1, 1}) == doctest::Approx(4.0));
    CHECK(normalized_trace({id}, {}) == doctest::Approx(1.0));
}

TEST_CASE("empirical moments") {
    SimConfig cfg;
    cfg.dim = 120;
    cfg.samples = 40;
    const auto second = empirical_trace_moment(cfg, {1, 1});
    CHECK(std::abs(second.mean - 1.0) <= std::max(0.05, 3 * second.std_error));
    const auto odd = empirical_trace_moment(cfg, {1, 1, 1});
    CHECK(std::abs(odd.mean) <= 3 * odd.std_error);

    cfg.covariance = CovarianceMatrix({{1.0, 0.5}, {0.5, 1.0}});
    const auto rows = empirical_trace_moments(cfg, {{1, 2}, {1, 2, 1, 2}, {1, 1, 2, 2}});
    CHECK(std::abs(rows[0].mean - 0.5) <= std::max(0.05, 3 * rows[0].std_error));
    CHECK(std::abs(rows[1].mean - 0.5) <= std::max(0.05, 3 * rows[1].std_error));
    CHECK(std::abs(rows[2].mean - 1.25) <= std::max(0.05, 3 * rows[2].std_error));

    cfg.samples = 1;
    CHECK(empirical_trace_moment(cfg, {1, 1}).std_error == 0.0);
}

TEST_CASE("serial and parallel runs agree bitwise") {
    SimConfig cfg;
    cfg.dim = 30;
    cfg.samples = 12;
    cfg.jobs = 1;
    const auto a = empirical_trace_moments(cfg, {{1, 1}, {1, 1, 1, 1}});
    cfg.jobs = 4;
    const auto b = empirical_trace_moments(cfg, {{1, 1}, {1, 1, 1, 1}});
    CHECK(a == b);
}

}  // TEST_SUITE
