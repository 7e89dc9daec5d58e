#pragma once

#include <cmath>
#include <functional>

#include "ktp/util.hpp"

namespace ktp {

// Gauss-Legendre over [a, b].
template <typename Fn>
inline double integrate_segment(Fn&& fn, double a, double b, int npts) {
    const QuadRule& q = gauss_legendre(npts);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    KahanSum acc;
    for (int k = 0; k < npts; ++k) acc.add(q.w[k] * fn(mid + half * q.x[k]));
    return half * acc.value();
}

// Gauss-Legendre over [a, b] after the substitution x = mid + half*sin(theta).
// Integrands of the form (half^2 - (x-mid)^2)^alpha become cos^(2*alpha+1)
// factors, smooth in theta, so the rule converges spectrally even though the
// original integrand has algebraic edge singularities at both endpoints.
template <typename Fn>
inline double integrate_segment_sin(Fn&& fn, double a, double b, int npts) {
    const QuadRule& q = gauss_legendre(npts);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    KahanSum acc;
    for (int k = 0; k < npts; ++k) {
        const double th = 0.5 * pi_v * q.x[k];
        const double x = mid + half * std::sin(th);
        acc.add(q.w[k] * std::cos(th) * fn(x));
    }
    return 0.5 * pi_v * half * acc.value();
}

// integral over the unit ball in R^n of g(r^2) * A(omega) dv, split as
//   (surface moment of A) * (1/2) integral_0^1 s^(n/2-1) g(s) ds
// via v = r*omega, s = r^2.  The angular factor is passed in closed form by
// the oracle layer; this helper does the radial part with the s-substitution
// so weights (1-s)^alpha stay polynomial-friendly after another sin map.
template <typename Fn>
inline double radial_ball_factor(Fn&& g_of_s, int n_dim, int npts) {
    return 0.5 * integrate_segment_sin(
                     [&](double s) { return std::pow(s, 0.5 * n_dim - 1.0) * g_of_s(s); }, 0.0,
                     1.0, npts);
}

// Surface area of the unit sphere in R^n.
inline double sphere_area(int n_dim) {
    return 2.0 * std::pow(pi_v, 0.5 * n_dim) / gamma_fn(0.5 * n_dim);
}

// Averages of monomials over the unit sphere, |S^{n-1}|-normalized:
//   mean(omega_a^2) = 1/n,  mean(omega_a^4) = 3/(n(n+2)),
//   mean(omega_a^2 omega_b^2) = 1/(n(n+2)) for a != b.
inline double sphere_mean_w2(int n_dim) { return 1.0 / n_dim; }
inline double sphere_mean_w4(int n_dim) { return 3.0 / (n_dim * (n_dim + 2.0)); }
inline double sphere_mean_w2w2(int n_dim) { return 1.0 / (n_dim * (n_dim + 2.0)); }

// Full Cartesian quadrature over the unit ball in R^n (n <= 3) with the sin
// substitution applied per axis inside the section bounds; used as an
// independent cross-check of the factored radial form.
template <typename Fn>
inline double cartesian_ball_integral(Fn&& fn, int n_dim, int npts) {
    const QuadRule& q = gauss_legendre(npts);
    auto axis = [&](double bound, const std::function<double(double)>& inner) {
        KahanSum acc;
        for (int k = 0; k < npts; ++k) {
            const double th = 0.5 * pi_v * q.x[k];
            acc.add(q.w[k] * std::cos(th) * inner(bound * std::sin(th)));
        }
        return 0.5 * pi_v * bound * acc.value();
    };
    if (n_dim == 1) {
        return axis(1.0, [&](double x) { return fn(x, 0.0, 0.0); });
    }
    if (n_dim == 2) {
        return axis(1.0, [&](double x) {
            const double b = std::sqrt(std::max(0.0, 1.0 - x * x));
            if (b == 0.0) return 0.0;
            return axis(b, [&](double y) { return fn(x, y, 0.0); });
        });
    }
    if (n_dim == 3) {
        return axis(1.0, [&](double x) {
            const double bx = std::sqrt(std::max(0.0, 1.0 - x * x));
            if (bx == 0.0) return 0.0;
            return axis(bx, [&](double y) {
                const double by = std::sqrt(std::max(0.0, 1.0 - x * x - y * y));
                if (by == 0.0) return 0.0;
                return axis(by, [&](double z) { return fn(x, y, z); });
            });
        });
    }
    throw std::domain_error("cartesian_ball_integral: n_dim must be 1, 2 or 3");
}

}  // namespace ktp
