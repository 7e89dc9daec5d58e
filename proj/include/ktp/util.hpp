#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ktp {

// Thrown on malformed configuration input; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a run goes numerically bad (NaN, negative density, failed
// verification); the CLI maps it to exit code 1.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double pi_v = 3.14159265358979323846264338327950288;

// Gamma function, Lanczos approximation (g = 7, 9 terms).  Relative error is
// a few 1e-16 over the argument range used here (all arguments are positive
// and modest), which keeps the derived normalization constants bit-stable.
inline double gamma_fn(double x) {
    static const double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: argument must be positive");
    if (x < 0.5) {
        // reflection keeps the series in its accurate range
        return pi_v / (std::sin(pi_v * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * pi_v) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

inline double beta_fn(double a, double b) {
    return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
}

// Compensated accumulator for the oracle-side quadratures, where raw sums of
// ~1e5 terms would set the noise floor above what the tests certify.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct QuadRule {
    std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

// Gauss-Legendre nodes/weights by Newton iteration on the recurrence.
// Cached per order; orders used here are small enough that the O(n^2) setup
// is negligible.
inline const QuadRule& gauss_legendre(int npts) {
    static std::map<int, QuadRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(npts);
    if (it != cache.end()) return it->second;

    QuadRule rule;
    rule.x.resize(npts);
    rule.w.resize(npts);
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi_v * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[npts - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[npts - 1 - i] = rule.w[i];
    }
    return cache.emplace(npts, std::move(rule)).first->second;
}

// Worker count: bounded by the KTP_THREADS environment variable when set.
inline int worker_count() {
    static const int n = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("KTP_THREADS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) hw = std::min(hw, static_cast<int>(v));
        }
        return hw;
    }();
    return n;
}

// Chunked parallel loop over [0, n).  Work items write disjoint outputs, so
// the result is identical for any worker count; reductions stay serial.
template <typename Fn>
inline void parallel_for(int n, Fn&& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Round-trip float formatting used by every CSV writer (17 significant
// digits reproduce the exact double on re-parse).
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace ktp
