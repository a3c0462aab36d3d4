#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wignerchaos/error.hpp"
#include "wignerchaos/moment.hpp"

namespace wigner {

std::vector<double> pivoted_cholesky(std::span<const double> a, int d, double tol) {
    const auto n = static_cast<std::size_t>(d);
    std::vector<double> s(a.begin(), a.end());  // Schur complement, updated in place
    std::vector<double> f(n * n, 0.0);
    std::vector<char> done(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t piv = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] && (piv == n || s[i * n + i] > s[piv * n + piv])) piv = i;
        }
        const double pivot = s[piv * n + piv];
        if (pivot <= tol) {
            // Remaining block must vanish up to tolerance.
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (done[i] || done[j]) continue;
                    if ((i == j && s[i * n + i] < -tol) || (i != j && std::abs(s[i * n + j]) > std::sqrt(tol))) {
                        throw Error(ErrorKind::NotPSD, "covariance has a negative direction");
                    }
                }
            }
            break;
        }
        const double root = std::sqrt(pivot);
        done[piv] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] || i == piv) f[i * n + step] = s[i * n + piv] / root;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (done[j]) continue;
                s[i * n + j] -= f[i * n + step] * f[j * n + step];
            }
        }
    }
    return f;
}

CovarianceMatrix::CovarianceMatrix(std::vector<std::vector<double>> rows) {
    d_ = static_cast<int>(rows.size());
    if (d_ < 1) throw Error(ErrorKind::InvalidArgument, "covariance must be at least 1x1");
    for (const auto& r : rows) {
        if (r.size() != rows.size()) throw Error(ErrorKind::InvalidArgument, "covariance must be square");
        for (double x : r) {
            if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "covariance entries must be finite");
            entries_.push_back(x);
        }
    }
    const auto n = static_cast<std::size_t>(d_);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(entries_[i * n + j] - entries_[j * n + i]) > 1e-12) {
                throw Error(ErrorKind::InvalidArgument,
                            "covariance not symmetric at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
            }
        }
    }
    factor_ = pivoted_cholesky(entries_, d_, 1e-10);
}

CovarianceMatrix CovarianceMatrix::identity(int d) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(d),
                                          std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (int i = 0; i < d; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    return CovarianceMatrix(std::move(rows));
}

std::vector<std::vector<double>> CovarianceMatrix::rows() const {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < d_; ++i) {
        out.emplace_back(entries_.begin() + i * d_, entries_.begin() + (i + 1) * d_);
    }
    return out;
}

}  // namespace wigner
