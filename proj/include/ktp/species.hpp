#pragma once

#include <cmath>
#include <string>

#include "ktp/util.hpp"

namespace ktp {

struct SpeciesParams {
    double m = 1.0;      // molecular mass
    double gamma = 2.0;  // adiabatic exponent, 1 < gamma <= (n+2)/n
    double nu = 1.0;     // collision rate scale
};

// Constants derived once per species.  The equilibrium is a compactly
// supported power of a paraboloid,
//   M[n,u](v) = c * ( m^sigma * (2g/(g-1)) * n^(g-1) - m*|v-u|^2 )_+^(d/2),
// with d = 2/(g-1) - n_dim and sigma = (n_dim/2)(g-1).  At the endpoint
// g = (n_dim+2)/n_dim the exponent d vanishes and M degenerates to the
// indicator of the closed support ball times c.
struct EquilibriumConsts {
    double m, gamma, nu;
    int n_dim;
    double d;             // support exponent, >= 0
    double half_d;        // d/2
    double sigma;         // (n_dim/2)(gamma-1)
    double c;             // normalization constant
    double c_pref;        // c * m^(d/2), hot-loop prefactor
    double radius2_coef;  // (2g/(g-1)) * m^(sigma-1); support radius^2 = coef * n^(g-1)
    bool flat_top;        // d == 0
    // entropy barrier: h(f) = (m/2)|v|^2 f + inv_two_c_pow * f^ent_exp / ent_exp
    double inv_two_c_pow;  // 1 / (2 c^(2/d)), meaningful only when d > 0
    double ent_exp;        // 1 + 2/d
};

inline EquilibriumConsts derive_constants(const SpeciesParams& sp, int n_dim) {
    if (n_dim < 1 || n_dim > 3)
        throw ConfigError("species: n_dim must be 1, 2 or 3, got " + std::to_string(n_dim));
    if (!(sp.m > 0.0))
        throw ConfigError("species: mass must be positive");
    if (!(sp.nu > 0.0))
        throw ConfigError("species: nu must be positive");
    const double gmax = (n_dim + 2.0) / n_dim;
    if (!(sp.gamma > 1.0) || sp.gamma > gmax + 1e-14)
        throw ConfigError("species: gamma must lie in (1, " + std::to_string(gmax) +
                          "] for n_dim=" + std::to_string(n_dim));

    EquilibriumConsts ec;
    ec.m = sp.m;
    ec.gamma = sp.gamma;
    ec.nu = sp.nu;
    ec.n_dim = n_dim;
    ec.d = 2.0 / (sp.gamma - 1.0) - n_dim;
    if (ec.d < 0.0) ec.d = 0.0;  // guard the <=1e-14 overshoot at the endpoint
    ec.half_d = 0.5 * ec.d;
    ec.sigma = 0.5 * n_dim * (sp.gamma - 1.0);
    ec.flat_top = ec.d == 0.0;

    const double tg = 2.0 * sp.gamma / (sp.gamma - 1.0);
    ec.c = std::pow(tg, -1.0 / (sp.gamma - 1.0)) * gamma_fn(sp.gamma / (sp.gamma - 1.0)) /
           (std::pow(pi_v, 0.5 * n_dim) * gamma_fn(ec.half_d + 1.0));
    ec.c_pref = ec.c * std::pow(sp.m, ec.half_d);
    ec.radius2_coef = tg * std::pow(sp.m, ec.sigma - 1.0);
    if (!ec.flat_top) {
        ec.inv_two_c_pow = 0.5 / std::pow(ec.c, 2.0 / ec.d);
        ec.ent_exp = 1.0 + 2.0 / ec.d;
    } else {
        ec.inv_two_c_pow = 0.0;
        ec.ent_exp = 0.0;
    }
    return ec;
}

// |v - u|^2 <= support_radius2 is the equilibrium support ball.
inline double support_radius2(const EquilibriumConsts& ec, double n) {
    return ec.radius2_coef * std::pow(n, ec.gamma - 1.0);
}

// t^(d/2) with the handful of exponents that occur in practice special-cased;
// the generic pow is the fallback.
inline double pow_half_d(const EquilibriumConsts& ec, double t) {
    if (ec.half_d == 0.5) return std::sqrt(t);
    if (ec.half_d == 1.0) return t;
    if (ec.half_d == 1.5) return t * std::sqrt(t);
    if (ec.half_d == 2.0) return t * t;
    return std::pow(t, ec.half_d);
}

// Point evaluation in one velocity dimension (n_dim = 1 solver path).
inline double maxwellian_value(const EquilibriumConsts& ec, double n, double u, double v) {
    if (!(n > 0.0)) return 0.0;
    const double w = v - u;
    const double t = support_radius2(ec, n) - w * w;
    if (ec.flat_top) return t >= 0.0 ? ec.c : 0.0;  // closed ball at the endpoint
    if (t <= 0.0) return 0.0;
    return ec.c_pref * pow_half_d(ec, t);
}

// Kinetic entropy density h(f, v).  For flat-top species the barrier is the
// constraint f <= c: values above c carry infinite entropy, reported through
// the flag so accumulations never hold an FP infinity.
struct EntropyValue {
    double value = 0.0;
    bool infinite = false;
};

inline EntropyValue kinetic_entropy_density(const EquilibriumConsts& ec, double f, double v) {
    EntropyValue h;
    h.value = 0.5 * ec.m * v * v * f;
    if (ec.flat_top) {
        if (f > ec.c) h.infinite = true;
        return h;
    }
    if (f > 0.0) {
        double fp;
        if (ec.ent_exp == 3.0) fp = f * f * f;
        else if (ec.ent_exp == 2.0) fp = f * f;
        else if (ec.ent_exp == 1.5) fp = f * std::sqrt(f);
        else fp = std::pow(f, ec.ent_exp);
        h.value += ec.inv_two_c_pow * fp / ec.ent_exp;
    }
    return h;
}

// Closed form of the entropy of the equilibrium itself:
//   integral h(M[n,u]) dv = (m/2) n |u|^2 + m^sigma n^gamma / (gamma - 1).
inline double equilibrium_entropy(const EquilibriumConsts& ec, double n, double u) {
    return 0.5 * ec.m * n * u * u +
           std::pow(ec.m, ec.sigma) * std::pow(n, ec.gamma) / (ec.gamma - 1.0);
}

// Macroscopic pressure law p(n) = m^sigma n^gamma and the internal-energy
// density s(n) = p(n)/(gamma-1) that enters the hydrodynamic entropy.
inline double pressure(const EquilibriumConsts& ec, double n) {
    return std::pow(ec.m, ec.sigma) * std::pow(n, ec.gamma);
}

inline double internal_energy(const EquilibriumConsts& ec, double n) {
    return pressure(ec, n) / (ec.gamma - 1.0);
}

inline double internal_energy_prime(const EquilibriumConsts& ec, double n) {
    return std::pow(ec.m, ec.sigma) * ec.gamma * std::pow(n, ec.gamma - 1.0) / (ec.gamma - 1.0);
}

// Bregman divergence s(a|b) = s(a) - s(b) - s'(b)(a-b) of the internal
// energy; the building block of the relative entropy.
inline double internal_energy_divergence(const EquilibriumConsts& ec, double a, double b) {
    return internal_energy(ec, a) - internal_energy(ec, b) -
           internal_energy_prime(ec, b) * (a - b);
}

}  // namespace ktp
