#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ktp/config.hpp"
#include "ktp/csv.hpp"
#include "ktp/diagnostics.hpp"
#include "ktp/euler.hpp"
#include "ktp/kinetic.hpp"
#include "ktp/moments.hpp"
#include "ktp/runner_plot.hpp"

namespace ktp {

inline KineticParams kinetic_params(const SimConfig& cfg) {
    KineticParams kp;
    kp.sp[0] = derive_constants(cfg.species[0], 1);
    kp.sp[1] = derive_constants(cfg.species[1], 1);
    kp.eps = cfg.eps;
    kp.renormalize = cfg.renormalize_maxwellian;
    return kp;
}

inline EulerParams euler_params(const SimConfig& cfg) {
    return EulerParams{{derive_constants(cfg.species[0], 1), derive_constants(cfg.species[1], 1)}};
}

// Piecewise-constant initial macro profiles; the jump sits at the domain
// midpoint, between cells.
inline void riemann_profiles(const SimConfig& cfg, std::array<std::vector<double>, 2>& n,
                             std::vector<double>& u) {
    const double mid = 0.5 * (cfg.grid.x_lo + cfg.grid.x_hi);
    for (int s = 0; s < 2; ++s) n[s].resize(cfg.grid.nx);
    u.assign(cfg.grid.nx, cfg.init.u0);
    for (int i = 0; i < cfg.grid.nx; ++i) {
        const bool left = cfg.grid.x_center(i) < mid;
        n[0][i] = left ? cfg.init.left[0] : cfg.init.right[0];
        n[1][i] = left ? cfg.init.left[1] : cfg.init.right[1];
    }
}

inline EulerState riemann_euler_state(const SimConfig& cfg) {
    std::array<std::vector<double>, 2> n;
    std::vector<double> u;
    riemann_profiles(cfg, n, u);
    EulerState U;
    U.resize(cfg.grid.nx);
    const EulerParams p = euler_params(cfg);
    for (int i = 0; i < cfg.grid.nx; ++i) {
        U.n1[i] = n[0][i];
        U.n2[i] = n[1][i];
        U.w[i] = (p.sp[0].m * n[0][i] + p.sp[1].m * n[1][i]) * u[i];
    }
    return U;
}

struct KineticRun {
    std::vector<double> snapshot_times;
    std::vector<MacroState> snaps;
    std::vector<std::vector<int>> snap_entropy_flags;
    std::vector<DiagRow> diag;      // row 0 describes the initial state
    std::vector<double> dt_seq;
    std::vector<char> snap_after_step;  // snapshot recorded after step m
    DistributionField f_final;
    StepStats totals;
};

inline std::vector<double> snapshot_times(const SimConfig& cfg) {
    std::vector<double> ts;
    for (int k = 0; k <= cfg.frames; ++k) ts.push_back(cfg.t_end * k / cfg.frames);
    return ts;
}

inline DiagRow kinetic_diag_row(const DistributionField& f, const PhaseGrid& g,
                                const KineticParams& kp, double t, double dt,
                                const StepStats& st) {
    DiagRow row;
    row.t = t;
    row.dt = dt;
    const MacroState mac = discrete_moments(f, g);
    const ConservedTotals tot = conserved_totals(mac, g, kp.sp[0], kp.sp[1]);
    row.mass1 = tot.mass[0];
    row.mass2 = tot.mass[1];
    row.momentum = tot.momentum;
    const EntropyValue ent = total_entropy(f, g, kp.sp[0], kp.sp[1]);
    row.entropy = ent.value;
    row.entropy_infinite = ent.infinite;
    row.stats = st;
    return row;
}

inline void record_snapshot(KineticRun& run, const DistributionField& f, const PhaseGrid& g,
                            const KineticParams& kp) {
    run.snaps.push_back(discrete_moments(f, g));
    std::vector<int> flags(g.nx, 0);
    for (int i = 0; i < g.nx; ++i)
        flags[i] = cell_entropy(f, g, kp.sp[0], kp.sp[1], i).infinite ? 1 : 0;
    run.snap_entropy_flags.push_back(std::move(flags));
}

inline KineticRun run_kinetic(const SimConfig& cfg) {
    cfg.validate();
    const PhaseGrid& g = cfg.grid;
    const KineticParams kp = kinetic_params(cfg);
    const ImexTableau tab = ars232();

    std::array<std::vector<double>, 2> n0;
    std::vector<double> u0;
    riemann_profiles(cfg, n0, u0);
    DistributionField f = equilibrium_field(kp, g, n0, u0);

    KineticRun run;
    run.snapshot_times = snapshot_times(cfg);
    record_snapshot(run, f, g, kp);
    run.diag.push_back(kinetic_diag_row(f, g, kp, 0.0, 0.0, StepStats{}));

    const double dt_base = cfg.cfl * g.dx() / g.vmax();
    const double t_tol = 1e-12 * cfg.t_end;
    double t = 0.0;
    size_t next_snap = 1;
    while (t < cfg.t_end - t_tol) {
        double target = cfg.t_end;
        if (next_snap < run.snapshot_times.size()) target = run.snapshot_times[next_snap];
        double dt = std::min(dt_base, target - t);
        StepStats st;
        f = imex_step(f, dt, g, kp, tab, &st);
        run.totals.accumulate(st);
        t += dt;
        bool snapped = false;
        if (std::abs(t - target) <= t_tol) {
            t = target;
            record_snapshot(run, f, g, kp);
            ++next_snap;
            snapped = true;
        }
        run.dt_seq.push_back(dt);
        run.snap_after_step.push_back(snapped ? 1 : 0);
        run.diag.push_back(kinetic_diag_row(f, g, kp, t, dt, st));
    }
    run.f_final = std::move(f);
    return run;
}

struct EulerRun {
    std::vector<EulerState> snaps;
    std::vector<double> entropy;  // per recorded state
};

// Advance the reference solver through an externally supplied step sequence
// so comparisons see both solvers at identical times.
inline EulerRun run_euler_replay(const SimConfig& cfg, const std::vector<double>& dt_seq,
                                 const std::vector<char>& snap_after_step) {
    const EulerParams p = euler_params(cfg);
    const ImexTableau tab = ars232();
    EulerState U = riemann_euler_state(cfg);
    EulerRun run;
    run.snaps.push_back(U);
    run.entropy.push_back(euler_entropy(U, p, cfg.grid.dx()));
    for (size_t m = 0; m < dt_seq.size(); ++m) {
        U = euler_step(U, dt_seq[m], cfg.grid, p, tab);
        if (snap_after_step[m]) {
            run.snaps.push_back(U);
            run.entropy.push_back(euler_entropy(U, p, cfg.grid.dx()));
        }
    }
    return run;
}

// ---------------------------------------------------------------------------
// File emission.
// ---------------------------------------------------------------------------

class OutputSet {
  public:
    explicit OutputSet(const std::string& dir) : dir_(dir) {
        std::filesystem::create_directories(dir_);
    }
    std::string path(const std::string& name) {
        const std::string p = dir_ + "/" + name;
        created_.push_back(p);
        return p;
    }
    void discard_all() {
        for (const auto& p : created_) std::remove(p.c_str());
    }

  private:
    std::string dir_;
    std::vector<std::string> created_;
};

inline void write_config_echo(const std::string& path, const SimConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericError("cannot open output file: " + path);
    out << config_to_json(cfg).dump(2) << "\n";
}

inline void write_macro_kinetic_csv(const std::string& path, const KineticRun& run,
                                    const SimConfig& cfg) {
    const KineticParams kp = kinetic_params(cfg);
    CsvFile csv(path);
    csv.header("t,x,n1,n2,u,rho,entropy_flag");
    for (size_t si = 0; si < run.snaps.size(); ++si) {
        const MacroState& mac = run.snaps[si];
        for (int i = 0; i < cfg.grid.nx; ++i) {
            const double rho = mixture_density(mac, kp.sp[0], kp.sp[1], i);
            const double w = mixture_momentum(mac, kp.sp[0], kp.sp[1], i);
            csv.field(run.snapshot_times[si])
                .field(cfg.grid.x_center(i))
                .field(mac.n[0][i])
                .field(mac.n[1][i])
                .field(rho > vacuum_floor ? w / rho : 0.0)
                .field(rho)
                .field(run.snap_entropy_flags[si][i]);
            csv.endrow();
        }
    }
}

inline void write_macro_euler_csv(const std::string& path, const EulerRun& run,
                                  const std::vector<double>& times, const SimConfig& cfg) {
    const EulerParams p = euler_params(cfg);
    CsvFile csv(path);
    csv.header("t,x,n1,n2,u,rho,entropy_flag");
    for (size_t si = 0; si < run.snaps.size(); ++si) {
        const EulerState& U = run.snaps[si];
        for (int i = 0; i < cfg.grid.nx; ++i) {
            const double rho = p.sp[0].m * U.n1[i] + p.sp[1].m * U.n2[i];
            csv.field(times[si])
                .field(cfg.grid.x_center(i))
                .field(U.n1[i])
                .field(U.n2[i])
                .field(euler_velocity(p, U.n1[i], U.n2[i], U.w[i]))
                .field(rho)
                .field(0);
            csv.endrow();
        }
    }
}

inline void write_diagnostics_csv(const std::string& path, const KineticRun& run) {
    CsvFile csv(path);
    csv.header(
        "t,dt,mass1,mass2,momentum,entropy,entropy_flag,undershoot_mass,vacuum_cells,"
        "truncated_supports,renorm_fallbacks");
    for (const DiagRow& r : run.diag) {
        csv.field(r.t)
            .field(r.dt)
            .field(r.mass1)
            .field(r.mass2)
            .field(r.momentum)
            .field(r.entropy)
            .field(r.entropy_infinite ? 1 : 0)
            .field(r.stats.undershoot_mass)
            .field(r.stats.vacuum_cells)
            .field(r.stats.truncated_supports)
            .field(r.stats.renorm_fallbacks);
        csv.endrow();
    }
}

struct CompareRow {
    double eps = 0.0, t = 0.0;
    CompareResult cmp;
};

inline void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows) {
    CsvFile csv(path);
    csv.header("eps,t,l1_n1,l1_n2,l1_mom,l1_momflux,rel_entropy");
    for (const CompareRow& r : rows) {
        csv.field(r.eps)
            .field(r.t)
            .field(r.cmp.l1_n1)
            .field(r.cmp.l1_n2)
            .field(r.cmp.l1_mom)
            .field(r.cmp.l1_momflux)
            .field(r.cmp.rel_entropy);
        csv.endrow();
    }
}

inline std::vector<CompareRow> compare_runs(const KineticRun& kin, const EulerRun& ref,
                                            const SimConfig& cfg) {
    const EulerParams p = euler_params(cfg);
    std::vector<CompareRow> rows;
    for (size_t si = 0; si < kin.snaps.size(); ++si) {
        CompareRow row;
        row.eps = cfg.eps;
        row.t = kin.snapshot_times[si];
        row.cmp = compare_macro(kin.snaps[si], ref.snaps[si], p, cfg.grid.dx());
        rows.push_back(row);
    }
    return rows;
}

struct ExperimentResult {
    KineticRun kinetic;
    std::vector<CompareRow> compare;
};

// One full experiment: kinetic run, optional reference comparison, CSV and
// plot-script emission.  Partially written outputs are removed on failure.
inline ExperimentResult run_experiment(SimConfig cfg, const std::string& outdir, bool with_euler,
                                       double eps_override = 0.0) {
    if (eps_override > 0.0) cfg.eps = eps_override;
    cfg.validate();
    OutputSet files(outdir);
    try {
        write_config_echo(files.path("config.json"), cfg);
        ExperimentResult res;
        res.kinetic = run_kinetic(cfg);
        write_macro_kinetic_csv(files.path("macro_kinetic.csv"), res.kinetic, cfg);
        write_diagnostics_csv(files.path("diagnostics.csv"), res.kinetic);
        if (with_euler) {
            const EulerRun ref =
                run_euler_replay(cfg, res.kinetic.dt_seq, res.kinetic.snap_after_step);
            write_macro_euler_csv(files.path("macro_euler.csv"), ref,
                                  res.kinetic.snapshot_times, cfg);
            res.compare = compare_runs(res.kinetic, ref, cfg);
            write_compare_csv(files.path("compare.csv"), res.compare);
        }
        write_plot_script(files.path("plot.py"));
        return res;
    } catch (...) {
        files.discard_all();
        throw;
    }
}

// Relaxation sweep: one kinetic run per eps against a single shared
// reference solution (the step sequence is eps-independent).
inline std::vector<CompareRow> ap_sweep(SimConfig cfg, const std::vector<double>& eps_list,
                                        const std::string& outdir) {
    cfg.validate();
    if (eps_list.empty()) throw ConfigError("eps list must not be empty");
    OutputSet files(outdir);
    try {
        write_config_echo(files.path("config.json"), cfg);
        std::vector<CompareRow> rows;
        EulerRun ref;
        bool have_ref = false;
        for (double eps : eps_list) {
            SimConfig c = cfg;
            c.eps = eps;
            const KineticRun kin = run_kinetic(c);
            if (!have_ref) {
                ref = run_euler_replay(c, kin.dt_seq, kin.snap_after_step);
                have_ref = true;
            }
            for (CompareRow& r : compare_runs(kin, ref, c)) rows.push_back(r);
        }
        write_compare_csv(files.path("compare.csv"), rows);
        write_plot_script(files.path("plot.py"));
        return rows;
    } catch (...) {
        files.discard_all();
        throw;
    }
}

}  // namespace ktp
