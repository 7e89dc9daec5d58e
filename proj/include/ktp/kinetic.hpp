#pragma once

#include <algorithm>
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

struct KineticParams {
    std::array<EquilibriumConsts, 2> sp;
    double eps = 1e-6;
    bool renormalize = true;  // moment-matched discrete equilibria
};

// Counters accumulated across a step (or a whole run).
struct StepStats {
    double undershoot_mass = 0.0;  // negative mass observed in stage-level views
    long vacuum_cells = 0;         // species-cell stage visits below the density floor
    long truncated_supports = 0;   // equilibrium support reaching outside the v-domain
    long renorm_fallbacks = 0;     // moment matching rejected, mass-only scaling used
    long empty_equilibria = 0;     // support too small to hold any node

    void accumulate(const StepStats& o) {
        undershoot_mass += o.undershoot_mass;
        vacuum_cells += o.vacuum_cells;
        truncated_supports += o.truncated_supports;
        renorm_fallbacks += o.renorm_fallbacks;
        empty_equilibria += o.empty_equilibria;
    }
};

// T = -v df/dx, conservative face differences, upwinded per velocity row.
inline DistributionField transport_rhs(const DistributionField& f, const PhaseGrid& g) {
    DistributionField out(g.nx, g.nvn());
    for (int s = 0; s < 2; ++s) {
        parallel_for(g.nvn(), [&, s](int j) {
            static thread_local std::vector<double> scratch;
            scratch.resize(2 * g.nx + 5);
            transport_row(f.row(s, j), g.nx, g.v_node(j), g.dx(), g.bc, out.row(s, j),
                          scratch.data());
        });
    }
    return out;
}

// Implicit stage velocities.  With beta = dt * a_kk / eps the per-cell system
//   (1 + k1) u1 - k1 u2 = A1/n1,   -k2 u1 + (1 + k2) u2 = A2/n2,
//   k1 = beta nu1 nu2 rho2 / S,  k2 = beta nu2 nu1 rho1 / S,  S = sum nu rho,
// couples the species through the common velocity; it stays well conditioned
// uniformly in beta because det = 1 + k1 + k2.
struct StageVelocity {
    double u1 = 0.0, u2 = 0.0, u_common = 0.0;
    bool vac1 = false, vac2 = false;
};

inline StageVelocity stage_velocity_solve(double n1, double A1, double n2, double A2, double beta,
                                          const EquilibriumConsts& s1,
                                          const EquilibriumConsts& s2) {
    StageVelocity r;
    r.vac1 = !(n1 > vacuum_floor);
    r.vac2 = !(n2 > vacuum_floor);
    if (r.vac1 && r.vac2) return r;
    if (r.vac1) {
        r.u2 = A2 / n2;
        r.u_common = r.u2;
        return r;
    }
    if (r.vac2) {
        r.u1 = A1 / n1;
        r.u_common = r.u1;
        return r;
    }
    const double rho1 = s1.m * n1, rho2 = s2.m * n2;
    const double S = s1.nu * rho1 + s2.nu * rho2;
    const double k1 = beta * s1.nu * (s2.nu * rho2) / S;
    const double k2 = beta * s2.nu * (s1.nu * rho1) / S;
    const double b1 = A1 / n1, b2 = A2 / n2;
    const double det = 1.0 + k1 + k2;
    r.u1 = ((1.0 + k2) * b1 + k1 * b2) / det;
    r.u2 = (k2 * b1 + (1.0 + k1) * b2) / det;
    r.u_common = (s1.nu * rho1 * r.u1 + s2.nu * rho2 * r.u2) / S;
    return r;
}

// Discrete equilibrium rows for one species over all cells.  When
// renormalize is unset the rows are the raw node samples.  When set, each
// cell's sampled profile is corrected to match discrete mass and first
// moment exactly: interior exponents use the linear multiplier a + b(v - u),
// capped profiles keep the cap on the plateau and solve for two fractional
// boundary values instead, so the cap is never exceeded.  Either correction
// falls back to mass-only scaling when its solution leaves the admissible
// range or the support holds too few nodes.
inline void build_equilibrium_rows(const EquilibriumConsts& ec, const std::vector<double>& n,
                                   const std::vector<double>& u, const PhaseGrid& g,
                                   bool renormalize, std::vector<double>& rows,
                                   StepStats& stats) {
    const int nx = g.nx, nvn = g.nvn();
    const double dv = g.dv();
    rows.assign(static_cast<size_t>(nx) * nvn, 0.0);

    std::vector<double> r2(nx);
    std::vector<char> valid(nx);
    for (int i = 0; i < nx; ++i) {
        valid[i] = n[i] > vacuum_floor;
        if (!valid[i]) {
            if (n[i] > 0.0) ++stats.vacuum_cells;
            continue;
        }
        r2[i] = support_radius2(ec, n[i]);
        const double r = std::sqrt(r2[i]);
        if (u[i] - r < g.v_lo || u[i] + r > g.v_hi) ++stats.truncated_supports;
    }

    parallel_for(nvn, [&](int j) {
        const double v = g.v_node(j);
        double* row = rows.data() + static_cast<size_t>(j) * nx;
        if (ec.flat_top) {
            for (int i = 0; i < nx; ++i) {
                if (!valid[i]) continue;
                const double w = v - u[i];
                row[i] = r2[i] - w * w >= 0.0 ? ec.c : 0.0;
            }
        } else {
            for (int i = 0; i < nx; ++i) {
                if (!valid[i]) continue;
                const double w = v - u[i];
                const double t = r2[i] - w * w;
                if (t > 0.0) row[i] = ec.c_pref * pow_half_d(ec, t);
            }
        }
    });

    // moment sums and support extent per cell, serial in j for determinism
    std::vector<double> S0(nx, 0.0), S1(nx, 0.0), S2(nx, 0.0);
    std::vector<int> jlo(nx, -1), jhi(nx, -1);
    for (int j = 0; j < nvn; ++j) {
        const double v = g.v_node(j);
        const double* row = rows.data() + static_cast<size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const double m0 = row[i];
            if (m0 == 0.0) continue;
            const double w = v - u[i];
            S0[i] += m0;
            S1[i] += w * m0;
            S2[i] += w * w * m0;
            if (jlo[i] < 0) jlo[i] = j;
            jhi[i] = j;
        }
    }

    // capped profiles: plateau stays at the cap, two boundary nodes take the
    // fractional values that close mass and first moment exactly
    const auto flat_match = [&](int i) -> bool {
        const int lo = jlo[i], hi = jhi[i];
        const int K = hi - lo + 1;
        const double cap = ec.c;
        const double tol = 1e-12 * cap;
        const auto place = [&](int ja, int jb, double sm, double sp) -> bool {
            const double wa = g.v_node(ja) - u[i], wb = g.v_node(jb) - u[i];
            const double det = wb - wa;
            if (det <= 0.0) return false;
            const double fa = (sm * wb - sp) / det;
            const double fb = sm - fa;
            if (fa < -tol || fa > cap + tol || fb < -tol || fb > cap + tol) return false;
            rows[static_cast<size_t>(ja) * nx + i] = std::clamp(fa, 0.0, cap);
            rows[static_cast<size_t>(jb) * nx + i] = std::clamp(fb, 0.0, cap);
            return true;
        };
        const double wlo = g.v_node(lo) - u[i], whi = g.v_node(hi) - u[i];
        const double tgt = n[i] / dv;
        if (place(lo, hi, tgt - cap * (K - 2), -(S1[i] - cap * (wlo + whi)))) return true;
        if (hi + 1 < nvn && place(lo, hi + 1, tgt - cap * (K - 1), -(S1[i] - cap * wlo)))
            return true;
        if (lo - 1 >= 0 && place(lo - 1, hi, tgt - cap * (K - 1), -(S1[i] - cap * whi)))
            return true;
        if (lo - 1 >= 0 && hi + 1 < nvn && place(lo - 1, hi + 1, tgt - cap * K, -S1[i]))
            return true;
        return false;
    };

    std::vector<double> mul_a(nx, 1.0), mul_b(nx, 0.0);
    for (int i = 0; i < nx; ++i) {
        if (!valid[i]) continue;
        if (jlo[i] < 0 || S0[i] <= 0.0) {
            ++stats.empty_equilibria;
            continue;
        }
        if (!renormalize) continue;
        bool matched = false;
        if (ec.flat_top) {
            matched = flat_match(i);
        } else if (jhi[i] - jlo[i] + 1 >= 3) {
            const double det = S0[i] * S2[i] - S1[i] * S1[i];
            if (det > 0.0) {
                const double a = (n[i] / dv) * S2[i] / det;
                const double b = -(n[i] / dv) * S1[i] / det;
                const double mlo = a + b * (g.v_node(jlo[i]) - u[i]);
                const double mhi = a + b * (g.v_node(jhi[i]) - u[i]);
                if (mlo >= 0.0 && mhi >= 0.0) {
                    mul_a[i] = a;
                    mul_b[i] = b;
                    matched = true;
                }
            }
        }
        if (!matched) {
            ++stats.renorm_fallbacks;
            mul_a[i] = n[i] / (dv * S0[i]);
            mul_b[i] = 0.0;
        }
    }

    parallel_for(nvn, [&](int j) {
        const double v = g.v_node(j);
        double* row = rows.data() + static_cast<size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            if (row[i] != 0.0) row[i] *= mul_a[i] + mul_b[i] * (v - u[i]);
        }
    });
}

// Equilibrium initial data f_i = M_i[n_i, u] for given per-cell profiles.
inline DistributionField equilibrium_field(const KineticParams& kp, const PhaseGrid& g,
                                           const std::array<std::vector<double>, 2>& n,
                                           const std::vector<double>& u) {
    DistributionField f(g.nx, g.nvn());
    StepStats ignore;
    for (int s = 0; s < 2; ++s)
        build_equilibrium_rows(kp.sp[s], n[s], u, g, kp.renormalize, f.data[s], ignore);
    return f;
}

// One IMEX step.  Transport is treated by the explicit half of the tableau,
// relaxation by the diagonally implicit half; the implicit solve reduces to
// the per-cell velocity system plus a pointwise blend because the stage
// equilibria depend only on transport-level densities and the common
// velocity.  Relaxation terms are stored in the algebraically equivalent
// form nu (Mhat - f_*) / (eps + dt a_kk nu), which stays finite and
// cancellation-free as eps -> 0.
inline DistributionField imex_step(const DistributionField& fm, double dt, const PhaseGrid& g,
                                   const KineticParams& kp, const ImexTableau& tab,
                                   StepStats* stats_out = nullptr) {
    const int nx = g.nx, nvn = g.nvn();
    const int s_count = ImexTableau::stages;
    const double dv = g.dv();
    StepStats stats;

    // which stage slopes are ever consumed
    std::array<bool, 3> need_T{}, need_R{};
    for (int l = 0; l < s_count; ++l) {
        for (int k = l + 1; k < s_count; ++k) {
            need_T[l] = need_T[l] || tab.a_ex[k][l] != 0.0;
            need_R[l] = need_R[l] || tab.a_im[k][l] != 0.0;
        }
        if (!tab.stiffly_accurate) {
            need_T[l] = need_T[l] || tab.b_ex[l] != 0.0;
            need_R[l] = need_R[l] || tab.b_im[l] != 0.0;
        }
    }

    std::array<DistributionField, 3> T, R;
    DistributionField fstar(nx, nvn);
    std::array<std::vector<double>, 2> mhat;
    std::array<std::vector<double>, 2> n_st, A_st;
    std::vector<double> u_common(nx);

    for (int k = 0; k < s_count; ++k) {
        const double akk = tab.a_im[k][k];

        // stage field and its transport-level moments in one fused sweep;
        // the moment sums stay signed so the matched equilibrium carries
        // exactly the transported mass and the relaxation sums to zero
        for (int s = 0; s < 2; ++s) {
            n_st[s].assign(nx, 0.0);
            A_st[s].assign(nx, 0.0);
            double neg = 0.0;
            for (int j = 0; j < nvn; ++j) {
                const double v = g.v_node(j);
                const double* fmr = fm.row(s, j);
                double* fsr = fstar.row(s, j);
                double* nd = n_st[s].data();
                double* Ad = A_st[s].data();
                for (int i = 0; i < nx; ++i) fsr[i] = fmr[i];
                for (int l = 0; l < k; ++l) {
                    if (tab.a_ex[k][l] != 0.0) {
                        const double c = dt * tab.a_ex[k][l];
                        const double* tr = T[l].row(s, j);
                        for (int i = 0; i < nx; ++i) fsr[i] += c * tr[i];
                    }
                }
                // transport-only view feeds the stage densities
                for (int i = 0; i < nx; ++i) {
                    const double tv = fsr[i];
                    nd[i] += tv;
                    if (tv < 0.0) neg -= tv;
                }
                for (int l = 0; l < k; ++l) {
                    if (tab.a_im[k][l] != 0.0) {
                        const double c = dt * tab.a_im[k][l];
                        const double* rr = R[l].row(s, j);
                        for (int i = 0; i < nx; ++i) fsr[i] += c * rr[i];
                    }
                }
                for (int i = 0; i < nx; ++i) Ad[i] += v * fsr[i];
            }
            stats.undershoot_mass += neg * dv * g.dx();
            for (int i = 0; i < nx; ++i) {
                n_st[s][i] *= dv;
                A_st[s][i] *= dv;
                const double nsi = n_st[s][i];
                if (!std::isfinite(nsi) || nsi < -1e-10)
                    throw NumericError("imex_step: bad stage density at stage " +
                                       std::to_string(k + 1) + ", species " +
                                       std::to_string(s + 1) + ", cell " + std::to_string(i) +
                                       " (n = " + std::to_string(nsi) + ")");
                if (nsi < 0.0) n_st[s][i] = 0.0;
            }
        }

        // common velocity from the coupled per-cell solve
        const double beta = kp.eps > 0.0 ? dt * akk / kp.eps : 0.0;
        for (int i = 0; i < nx; ++i) {
            const StageVelocity sv = stage_velocity_solve(n_st[0][i], A_st[0][i], n_st[1][i],
                                                          A_st[1][i], beta, kp.sp[0], kp.sp[1]);
            u_common[i] = sv.u_common;
            if (sv.vac1) ++stats.vacuum_cells;
            if (sv.vac2) ++stats.vacuum_cells;
        }

        const bool want_mhat = akk != 0.0 || need_R[k];
        if (want_mhat) {
            for (int s = 0; s < 2; ++s)
                build_equilibrium_rows(kp.sp[s], n_st[s], u_common, g, kp.renormalize, mhat[s],
                                       stats);
        }

        if (need_R[k]) {
            R[k] = DistributionField(nx, nvn);
            for (int s = 0; s < 2; ++s) {
                const double nu = kp.sp[s].nu;
                const double den = kp.eps + dt * akk * nu;
                parallel_for(nvn, [&, s, nu, den](int j) {
                    const double* mh = mhat[s].data() + static_cast<size_t>(j) * nx;
                    const double* fs = fstar.row(s, j);
                    double* rr = R[k].row(s, j);
                    for (int i = 0; i < nx; ++i) rr[i] = nu * (mh[i] - fs[i]) / den;
                });
            }
        }

        if (akk != 0.0) {
            // in-place blend: f^(k) = (eps f_* + dt a_kk nu Mhat) / (eps + dt a_kk nu)
            for (int s = 0; s < 2; ++s) {
                const double nu = kp.sp[s].nu;
                const double wgt = dt * akk * nu;
                const double den = kp.eps + wgt;
                parallel_for(nvn, [&, s, wgt, den](int j) {
                    const double* mh = mhat[s].data() + static_cast<size_t>(j) * nx;
                    double* fs = fstar.row(s, j);
                    for (int i = 0; i < nx; ++i)
                        fs[i] = (kp.eps * fs[i] + wgt * mh[i]) / den;
                });
            }
        }

        if (need_T[k]) T[k] = transport_rhs(fstar, g);
    }

    DistributionField out;
    if (tab.stiffly_accurate) {
        out = std::move(fstar);
    } else {
        out = fm;
        for (int s = 0; s < 2; ++s) {
            for (int l = 0; l < s_count; ++l) {
                if (tab.b_ex[l] != 0.0) {
                    const double c = dt * tab.b_ex[l];
                    for (int j = 0; j < nvn; ++j) {
                        const double* tr = T[l].row(s, j);
                        double* o = out.row(s, j);
                        for (int i = 0; i < nx; ++i) o[i] += c * tr[i];
                    }
                }
                if (tab.b_im[l] != 0.0) {
                    const double c = dt * tab.b_im[l];
                    for (int j = 0; j < nvn; ++j) {
                        const double* rr = R[l].row(s, j);
                        double* o = out.row(s, j);
                        for (int i = 0; i < nx; ++i) o[i] += c * rr[i];
                    }
                }
            }
        }
    }
    if (stats_out) stats_out->accumulate(stats);
    return out;
}

}  // namespace ktp
