#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ktp/euler.hpp"
#include "ktp/grid.hpp"
#include "ktp/kinetic.hpp"
#include "ktp/moments.hpp"
#include "ktp/species.hpp"
#include "ktp/util.hpp"

namespace ktp {

// Relative entropy of the kinetic macro observables against a reference
// state: integral of rho_eps/2 |u_eps - u|^2 + sum_i s_i(n_i,eps | n_i).
// Vacuum reference cells make the divergence uninformative, so they are
// rejected by name.
inline double relative_entropy(const MacroState& kin, const EulerState& ref,
                               const EulerParams& p, double dx) {
    KahanSum acc;
    for (int i = 0; i < ref.size(); ++i) {
        if (!(ref.n1[i] > vacuum_floor) || !(ref.n2[i] > vacuum_floor))
            throw NumericError("relative_entropy: reference density below floor at cell " +
                               std::to_string(i));
        const double rho_k = mixture_density(kin, p.sp[0], p.sp[1], i);
        const double w_k = mixture_momentum(kin, p.sp[0], p.sp[1], i);
        const double u_k = rho_k > vacuum_floor ? w_k / rho_k : 0.0;
        const double u_r = euler_velocity(p, ref.n1[i], ref.n2[i], ref.w[i]);
        double e = 0.5 * rho_k * (u_k - u_r) * (u_k - u_r);
        e += internal_energy_divergence(p.sp[0], std::max(kin.n[0][i], 0.0), ref.n1[i]);
        e += internal_energy_divergence(p.sp[1], std::max(kin.n[1][i], 0.0), ref.n2[i]);
        acc.add(e);
    }
    return dx * acc.value();
}

// L1 distances between kinetic macro observables and a reference state.
// Momentum and momentum flux are compared (not velocity), so vacuum cells
// never force a division.
struct CompareResult {
    double l1_n1 = 0.0, l1_n2 = 0.0, l1_mom = 0.0, l1_momflux = 0.0;
    double rel_entropy = 0.0;
};

inline CompareResult compare_macro(const MacroState& kin, const EulerState& ref,
                                   const EulerParams& p, double dx) {
    CompareResult r;
    KahanSum d1, d2, dm, df;
    for (int i = 0; i < ref.size(); ++i) {
        const double rho_k = mixture_density(kin, p.sp[0], p.sp[1], i);
        const double w_k = mixture_momentum(kin, p.sp[0], p.sp[1], i);
        const double flux_k = rho_k > vacuum_floor ? w_k * w_k / rho_k : 0.0;
        const double rho_r = p.sp[0].m * ref.n1[i] + p.sp[1].m * ref.n2[i];
        const double flux_r = rho_r > vacuum_floor ? ref.w[i] * ref.w[i] / rho_r : 0.0;
        d1.add(std::abs(kin.n[0][i] - ref.n1[i]));
        d2.add(std::abs(kin.n[1][i] - ref.n2[i]));
        dm.add(std::abs(w_k - ref.w[i]));
        df.add(std::abs(flux_k - flux_r));
    }
    r.l1_n1 = dx * d1.value();
    r.l1_n2 = dx * d2.value();
    r.l1_mom = dx * dm.value();
    r.l1_momflux = dx * df.value();
    r.rel_entropy = relative_entropy(kin, ref, p, dx);
    return r;
}

// Per-step run record feeding diagnostics.csv.
struct DiagRow {
    double t = 0.0, dt = 0.0;
    double mass1 = 0.0, mass2 = 0.0, momentum = 0.0;
    double entropy = 0.0;
    bool entropy_infinite = false;
    StepStats stats;
};

}  // namespace ktp
