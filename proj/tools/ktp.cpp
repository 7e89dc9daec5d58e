// Command-line driver: oracle verification, single experiments, and
// relaxation sweeps.  Exit codes: 0 success, 1 numeric failure, 2 bad
// configuration.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ktp/config.hpp"
#include "ktp/oracles.hpp"
#include "ktp/runner.hpp"

namespace {

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string tok = text.substr(pos, comma - pos);
        if (!tok.empty()) {
            try {
                size_t used = 0;
                const double v = std::stod(tok, &used);
                if (used != tok.size() || !(v > 0.0)) throw std::invalid_argument(tok);
                out.push_back(v);
            } catch (const std::exception&) {
                throw ktp::ConfigError("bad eps value \"" + tok + "\" in --eps-list");
            }
        }
        pos = comma + 1;
    }
    if (out.empty()) throw ktp::ConfigError("--eps-list: no values given");
    return out;
}

int do_verify() {
    const ktp::VerifyReport rep = ktp::run_verification(&std::cout);
    int failed = 0;
    for (const auto& c : rep.checks)
        if (!c.pass) ++failed;
    std::cout << (failed == 0 ? "verification passed (" : "verification FAILED (")
              << rep.checks.size() - failed << "/" << rep.checks.size() << " checks)\n";
    if (failed) throw ktp::NumericError("verification suite reported failures");
    return 0;
}

std::string default_outdir(const std::string& tag) { return "out-" + tag; }

void report_run(const ktp::ExperimentResult& res, const std::string& outdir) {
    const ktp::StepStats& st = res.kinetic.totals;
    std::cout << "steps: " << res.kinetic.dt_seq.size()
              << ", undershoot mass: " << st.undershoot_mass
              << ", truncated supports: " << st.truncated_supports
              << ", renorm fallbacks: " << st.renorm_fallbacks << "\n";
    if (st.truncated_supports > 0)
        std::cout << "warning: equilibrium support reached the velocity boundary; "
                     "enlarge the v-domain\n";
    if (!res.compare.empty()) {
        const ktp::CompareRow& last = res.compare.back();
        std::cout << "distances at t=" << last.t << ": l1_n1=" << last.cmp.l1_n1
                  << " l1_n2=" << last.cmp.l1_n2 << " l1_mom=" << last.cmp.l1_mom
                  << " l1_momflux=" << last.cmp.l1_momflux
                  << " rel_entropy=" << last.cmp.rel_entropy << "\n";
    }
    std::cout << "outputs in " << outdir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-species kinetic relaxation solver suite"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run the analytic-oracle verification suite");

    auto* run = app.add_subcommand("run", "run one experiment");
    std::string preset_id, config_path, outdir, eps_str;
    bool with_euler_flag = false;
    run->add_option("--preset", preset_id, "experiment preset id");
    run->add_option("--config", config_path, "JSON config file");
    run->add_option("--out", outdir, "output directory");
    run->add_option("--eps", eps_str, "override the relaxation parameter");
    run->add_flag("--with-euler", with_euler_flag, "also run the reference solver and compare");

    auto* sweep = app.add_subcommand("sweep", "run a relaxation sweep against one reference");
    std::string sweep_preset, sweep_eps, sweep_out;
    sweep->add_option("--preset", sweep_preset, "experiment preset id")->required();
    sweep->add_option("--eps-list", sweep_eps, "comma-separated eps values");
    sweep->add_option("--out", sweep_out, "output directory");

    try {
        app.parse(argc, argv);

        if (verify->parsed()) return do_verify();

        if (run->parsed()) {
            if (preset_id.empty() == config_path.empty())
                throw ktp::ConfigError("run: give exactly one of --preset or --config");
            double eps_override = 0.0;
            if (!eps_str.empty()) {
                const std::vector<double> v = parse_eps_list(eps_str);
                if (v.size() != 1) throw ktp::ConfigError("--eps: expected one value");
                eps_override = v[0];
            }
            if (!preset_id.empty()) {
                const ktp::PresetInfo p = ktp::preset_config(preset_id);
                if (p.kind == ktp::PresetKind::verify) return do_verify();
                if (outdir.empty()) outdir = default_outdir(p.id);
                if (p.kind == ktp::PresetKind::sweep) {
                    ktp::ap_sweep(p.cfg, p.eps_list, outdir);
                    std::cout << "outputs in " << outdir << "\n";
                    return 0;
                }
                const bool with_euler = with_euler_flag || p.with_euler;
                const auto res = ktp::run_experiment(p.cfg, outdir, with_euler, eps_override);
                report_run(res, outdir);
                return 0;
            }
            const ktp::SimConfig cfg = ktp::config_from_file(config_path);
            if (outdir.empty())
                outdir = default_outdir(std::filesystem::path(config_path).stem().string());
            const auto res = ktp::run_experiment(cfg, outdir, with_euler_flag, eps_override);
            report_run(res, outdir);
            return 0;
        }

        if (sweep->parsed()) {
            const ktp::PresetInfo p = ktp::preset_config(sweep_preset);
            if (p.kind == ktp::PresetKind::verify)
                throw ktp::ConfigError("sweep: preset \"verify\" is not a runnable experiment");
            std::vector<double> eps_list =
                sweep_eps.empty() ? p.eps_list : parse_eps_list(sweep_eps);
            if (eps_list.empty()) eps_list = {1e-2, 1e-4, 1e-6};
            if (sweep_out.empty()) sweep_out = default_outdir(p.id + "-sweep");
            ktp::ap_sweep(p.cfg, eps_list, sweep_out);
            std::cout << "outputs in " << sweep_out << "\n";
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ktp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
