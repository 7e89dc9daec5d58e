#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ktp/grid.hpp"
#include "ktp/species.hpp"
#include "ktp/util.hpp"

namespace ktp {

// Densities below this floor are treated as vacuum: the species velocity is
// reported as zero and the cell is excluded from velocity couplings.
inline constexpr double vacuum_floor = 1e-13;

// Zeroth and first velocity moments of both species, node sum times dv.
// Accumulation runs j-outer with contiguous x rows, serial in j, so results
// do not depend on the worker count.
inline MacroState discrete_moments(const DistributionField& f, const PhaseGrid& g,
                                   bool clamp_negative = false) {
    MacroState mac;
    mac.resize(g.nx);
    const double dv = g.dv();
    for (int s = 0; s < 2; ++s) {
        std::vector<double> mom(g.nx, 0.0);
        for (int j = 0; j < g.nvn(); ++j) {
            const double v = g.v_node(j);
            const double* row = f.row(s, j);
            double* nd = mac.n[s].data();
            double* md = mom.data();
            if (clamp_negative) {
                for (int i = 0; i < g.nx; ++i) {
                    const double val = row[i] > 0.0 ? row[i] : 0.0;
                    nd[i] += val;
                    md[i] += v * val;
                }
            } else {
                for (int i = 0; i < g.nx; ++i) {
                    nd[i] += row[i];
                    md[i] += v * row[i];
                }
            }
        }
        for (int i = 0; i < g.nx; ++i) {
            mac.n[s][i] *= dv;
            mom[i] *= dv;
            mac.u[s][i] = mac.n[s][i] > vacuum_floor ? mom[i] / mac.n[s][i] : 0.0;
        }
    }
    return mac;
}

// nu- and mass-weighted common velocity sum(nu_i m_i n_i u_i)/sum(nu_i m_i n_i).
// Vacuum species drop out of both sums; if everything is vacuum the velocity
// is zero.
inline double common_velocity(double n1, double u1, double n2, double u2,
                              const EquilibriumConsts& s1, const EquilibriumConsts& s2) {
    double num = 0.0, den = 0.0;
    if (n1 > vacuum_floor) {
        num += s1.nu * s1.m * n1 * u1;
        den += s1.nu * s1.m * n1;
    }
    if (n2 > vacuum_floor) {
        num += s2.nu * s2.m * n2 * u2;
        den += s2.nu * s2.m * n2;
    }
    return den > 0.0 ? num / den : 0.0;
}

// Mixture observables of a macro state at one cell.
inline double mixture_density(const MacroState& mac, const EquilibriumConsts& s1,
                              const EquilibriumConsts& s2, int i) {
    return s1.m * mac.n[0][i] + s2.m * mac.n[1][i];
}

inline double mixture_momentum(const MacroState& mac, const EquilibriumConsts& s1,
                               const EquilibriumConsts& s2, int i) {
    return s1.m * mac.n[0][i] * mac.u[0][i] + s2.m * mac.n[1][i] * mac.u[1][i];
}

// nu-weighted total kinetic entropy of one cell:
//   sum_i nu_i * dv * sum_j h_i(f_i(v_j), v_j).
// Flat-top species can carry infinite entropy (f above the cap); that state
// is reported through the flag while the finite transport part keeps
// accumulating.
inline EntropyValue cell_entropy(const DistributionField& f, const PhaseGrid& g,
                                 const EquilibriumConsts& s1, const EquilibriumConsts& s2,
                                 int i) {
    const std::array<const EquilibriumConsts*, 2> sp = {&s1, &s2};
    EntropyValue total;
    const double dv = g.dv();
    for (int s = 0; s < 2; ++s) {
        double acc = 0.0;
        for (int j = 0; j < g.nvn(); ++j) {
            const EntropyValue h = kinetic_entropy_density(*sp[s], f.at(s, j, i), g.v_node(j));
            acc += h.value;
            total.infinite = total.infinite || h.infinite;
        }
        total.value += sp[s]->nu * dv * acc;
    }
    return total;
}

inline EntropyValue total_entropy(const DistributionField& f, const PhaseGrid& g,
                                  const EquilibriumConsts& s1, const EquilibriumConsts& s2) {
    EntropyValue total;
    const double dx = g.dx();
    for (int i = 0; i < g.nx; ++i) {
        const EntropyValue c = cell_entropy(f, g, s1, s2, i);
        total.value += c.value;
        total.infinite = total.infinite || c.infinite;
    }
    total.value *= dx;
    return total;
}

// Conserved totals over the domain: per-species mass-density integrals and
// the mixture momentum.
struct ConservedTotals {
    std::array<double, 2> mass = {0.0, 0.0};  // integral of m_i n_i dx
    double momentum = 0.0;                    // integral of sum m_i n_i u_i dx
};

inline ConservedTotals conserved_totals(const MacroState& mac, const PhaseGrid& g,
                                        const EquilibriumConsts& s1,
                                        const EquilibriumConsts& s2) {
    const std::array<const EquilibriumConsts*, 2> sp = {&s1, &s2};
    ConservedTotals tot;
    const double dx = g.dx();
    for (int s = 0; s < 2; ++s) {
        KahanSum mass, mom;
        for (int i = 0; i < g.nx; ++i) {
            mass.add(mac.n[s][i]);
            mom.add(mac.n[s][i] * mac.u[s][i]);
        }
        tot.mass[s] = sp[s]->m * dx * mass.value();
        tot.momentum += sp[s]->m * dx * mom.value();
    }
    return tot;
}

}  // namespace ktp
