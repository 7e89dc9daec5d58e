#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ktp/grid.hpp"
#include "ktp/moments.hpp"
#include "ktp/species.hpp"
#include "ktp/tableau.hpp"
#include "ktp/util.hpp"
#include "ktp/weno.hpp"

namespace ktp {

// Isentropic two-density Euler system in conserved variables
// U = (n1, n2, w), w the mixture momentum:
//   dt n_i + dx(n_i u) = 0,   dt w + dx(w u + p1 + p2) = 0,
//   u = w / rho,  rho = m1 n1 + m2 n2,  p_i = m_i^sigma_i n_i^gamma_i.
struct EulerState {
    std::vector<double> n1, n2, w;

    int size() const { return static_cast<int>(n1.size()); }
    void resize(int nx) {
        n1.assign(nx, 0.0);
        n2.assign(nx, 0.0);
        w.assign(nx, 0.0);
    }
};

struct EulerParams {
    std::array<EquilibriumConsts, 2> sp;
};

inline double euler_velocity(const EulerParams& p, double n1, double n2, double w) {
    const double rho = p.sp[0].m * n1 + p.sp[1].m * n2;
    return rho > vacuum_floor ? w / rho : 0.0;
}

// Physical flux of one cell; in vacuum the advective terms vanish and only
// the pressure survives.
inline std::array<double, 3> euler_flux(const EulerParams& p, double n1, double n2, double w) {
    const double u = euler_velocity(p, n1, n2, w);
    const double pr = pressure(p.sp[0], std::max(n1, 0.0)) + pressure(p.sp[1], std::max(n2, 0.0));
    return {n1 * u, n2 * u, w * u + pr};
}

// Fastest signal speed over the domain, |u| + sqrt((g1 p1 + g2 p2)/rho).
inline double max_wave_speed(const EulerState& U, const EulerParams& p) {
    double lam = 0.0;
    for (int i = 0; i < U.size(); ++i) {
        const double rho = p.sp[0].m * U.n1[i] + p.sp[1].m * U.n2[i];
        if (!(rho > vacuum_floor)) continue;
        const double u = U.w[i] / rho;
        const double c2 = (p.sp[0].gamma * pressure(p.sp[0], std::max(U.n1[i], 0.0)) +
                           p.sp[1].gamma * pressure(p.sp[1], std::max(U.n2[i], 0.0))) /
                          rho;
        lam = std::max(lam, std::abs(u) + std::sqrt(std::max(c2, 0.0)));
    }
    return lam;
}

// Semi-discrete right side: global Lax-Friedrichs flux splitting
// g_pm = (F(U) +- lambda U)/2, each half reconstructed with the same
// face blend as the kinetic transport, biased by its wind direction.
inline EulerState euler_rhs(const EulerState& U, const PhaseGrid& g, const EulerParams& p) {
    const int nx = U.size();
    const double lam = max_wave_speed(U, p);
    EulerState rhs;
    rhs.resize(nx);

    std::array<std::vector<double>, 3> gp, gm;
    for (auto& v : gp) v.resize(nx);
    for (auto& v : gm) v.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const std::array<double, 3> F = euler_flux(p, U.n1[i], U.n2[i], U.w[i]);
        const double Uc[3] = {U.n1[i], U.n2[i], U.w[i]};
        for (int c = 0; c < 3; ++c) {
            gp[c][i] = 0.5 * (F[c] + lam * Uc[c]);
            gm[c][i] = 0.5 * (F[c] - lam * Uc[c]);
        }
    }

    std::vector<double> pad(nx + 4), face_p(nx + 1), face_m(nx + 1);
    std::array<std::vector<double>*, 3> out = {&rhs.n1, &rhs.n2, &rhs.w};
    for (int c = 0; c < 3; ++c) {
        pad_row(gp[c].data(), nx, g.bc, pad.data());
        weno_faces_from_left(pad.data(), nx, face_p.data());
        pad_row(gm[c].data(), nx, g.bc, pad.data());
        weno_faces_from_right(pad.data(), nx, face_m.data());
        for (int i = 0; i < nx; ++i) {
            const double fr = face_p[i + 1] + face_m[i + 1];
            const double fl = face_p[i] + face_m[i];
            (*out[c])[i] = -(fr - fl) / g.dx();
        }
    }
    return rhs;
}

// Explicit half of the IMEX tableau applied to the Euler system.
inline EulerState euler_step(const EulerState& U, double dt, const PhaseGrid& g,
                             const EulerParams& p, const ImexTableau& tab) {
    const int nx = U.size();
    std::array<EulerState, ImexTableau::stages> K;
    EulerState stage;
    for (int k = 0; k < ImexTableau::stages; ++k) {
        stage = U;
        for (int l = 0; l < k; ++l) {
            if (tab.a_ex[k][l] == 0.0) continue;
            const double c = dt * tab.a_ex[k][l];
            for (int i = 0; i < nx; ++i) {
                stage.n1[i] += c * K[l].n1[i];
                stage.n2[i] += c * K[l].n2[i];
                stage.w[i] += c * K[l].w[i];
            }
        }
        K[k] = euler_rhs(stage, g, p);
    }
    EulerState out = U;
    for (int l = 0; l < ImexTableau::stages; ++l) {
        if (tab.b_ex[l] == 0.0) continue;
        const double c = dt * tab.b_ex[l];
        for (int i = 0; i < nx; ++i) {
            out.n1[i] += c * K[l].n1[i];
            out.n2[i] += c * K[l].n2[i];
            out.w[i] += c * K[l].w[i];
        }
    }
    for (int i = 0; i < nx; ++i) {
        if (out.n1[i] < 0.0 || out.n2[i] < 0.0)
            throw NumericError("euler_step: negative density at cell " + std::to_string(i));
    }
    return out;
}

// Hydrodynamic entropy eta(U) = |w|^2/(2 rho) + s1(n1) + s2(n2), integrated
// over the domain.  Monitored, not enforced.
inline double euler_entropy(const EulerState& U, const EulerParams& p, double dx) {
    KahanSum acc;
    for (int i = 0; i < U.size(); ++i) {
        const double rho = p.sp[0].m * U.n1[i] + p.sp[1].m * U.n2[i];
        double e = internal_energy(p.sp[0], std::max(U.n1[i], 0.0)) +
                   internal_energy(p.sp[1], std::max(U.n2[i], 0.0));
        if (rho > vacuum_floor) e += 0.5 * U.w[i] * U.w[i] / rho;
        acc.add(e);
    }
    return dx * acc.value();
}

}  // namespace ktp
