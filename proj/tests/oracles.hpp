#pragma once

// Independent reference computations used only by tests. None of these call
// into the library's numeric kernels.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Exact value of a double as a rational.
inline cpp_rational exact(double x) {
    int e = 0;
    const double m = std::frexp(x, &e);
    cpp_rational r(static_cast<std::int64_t>(std::ldexp(m, 53)));
    const int shift = e - 53;
    if (shift >= 0) {
        r *= cpp_rational(cpp_int(1) << shift);
    } else {
        r /= cpp_rational(cpp_int(1) << -shift);
    }
    return r;
}

inline cpp_int choose(int n, int k) {
    cpp_int c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// Pr[Bin(n, p) >= k] with p given exactly.
inline cpp_rational binomial_tail(int n, const cpp_rational& p, int k) {
    cpp_rational tail = 0;
    for (int i = std::max(k, 0); i <= n; ++i) {
        cpp_rational term(choose(n, i));
        for (int j = 0; j < i; ++j) term *= p;
        for (int j = i; j < n; ++j) term *= (1 - p);
        tail += term;
    }
    return tail;
}

// Brute-force pac index: every tail Pr[Bin(n, 1 - alpha) >= i] is formed
// exactly and the first one at or below delta wins; 0 means infeasible.
inline int pac_index(int n, double alpha, double delta) {
    const cpp_rational p = 1 - exact(alpha);
    const cpp_rational q = 1 - p;
    const cpp_rational d = exact(delta);
    std::vector<cpp_rational> p_pow(n + 1, cpp_rational(1));
    std::vector<cpp_rational> q_pow(n + 1, cpp_rational(1));
    for (int i = 1; i <= n; ++i) {
        p_pow[i] = p_pow[i - 1] * p;
        q_pow[i] = q_pow[i - 1] * q;
    }
    std::vector<cpp_rational> tails(n + 2, cpp_rational(0));
    for (int i = n; i >= 1; --i) tails[i] = tails[i + 1] + cpp_rational(choose(n, i)) * p_pow[i] * q_pow[n - i];
    for (int i = 1; i <= n; ++i) {
        if (tails[i] <= d) return i;
    }
    return 0;
}

// Monotone least squares on points already sorted by distinct x: enumerate
// every split into consecutive blocks, keep the non-decreasing block-mean
// candidates and return the one with least squared error.
inline std::vector<double> monotone_least_squares(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    std::vector<double> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
        std::vector<double> fit(n);
        std::size_t start = 0;
        double prev = -std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (std::size_t i = 0; i < n; ++i) {
            const bool block_ends = i == n - 1 || (cuts >> i) & 1u;
            if (!block_ends) continue;
            double mean = 0.0;
            for (std::size_t j = start; j <= i; ++j) mean += ys[j];
            mean /= static_cast<double>(i - start + 1);
            if (mean < prev) monotone = false;
            prev = mean;
            for (std::size_t j = start; j <= i; ++j) fit[j] = mean;
            start = i + 1;
        }
        if (!monotone) continue;
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err += (fit[i] - ys[i]) * (fit[i] - ys[i]);
        if (err < best_err - 1e-15) {
            best_err = err;
            best = fit;
        }
    }
    return best;
}

// Penalized logistic objective written out independently of the library.
inline double logistic_loss(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double lambda,
                            const std::vector<double>& params) {
    const std::size_t d = params.size() - 1;
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double z = params[d];
        for (std::size_t j = 0; j < d; ++j) z += params[j] * x[i][j];
        loss += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y[i] * z;
    }
    for (std::size_t j = 0; j < d; ++j) loss += lambda * params[j] * params[j];
    return loss;
}

// Plain gradient descent with a fixed small step on the same objective: slow
// but generic, and shares no code with the Newton solver.
inline std::vector<double> logistic_gradient_descent(const std::vector<std::vector<double>>& x,
                                                     const std::vector<int>& y, double lambda, int iters,
                                                     double step) {
    const std::size_t d = x.front().size();
    std::vector<double> params(d + 1, 0.0);
    for (int it = 0; it < iters; ++it) {
        std::vector<double> grad(d + 1, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            double z = params[d];
            for (std::size_t j = 0; j < d; ++j) z += params[j] * x[i][j];
            const double r = 1.0 / (1.0 + std::exp(-z)) - y[i];
            for (std::size_t j = 0; j < d; ++j) grad[j] += r * x[i][j];
            grad[d] += r;
        }
        for (std::size_t j = 0; j < d; ++j) grad[j] += 2.0 * lambda * params[j];
        for (std::size_t j = 0; j <= d; ++j) params[j] -= step * grad[j];
    }
    return params;
}

// Gaussian density, for integrating likelihood ratios numerically.
inline double normal_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

}  // namespace oracle
