#pragma once

#include <array>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ktp/grid.hpp"
#include "ktp/species.hpp"
#include "ktp/util.hpp"

namespace ktp {

struct InitSpec {
    std::string type = "riemann";
    std::array<double, 2> left = {1.0, 0.8};
    std::array<double, 2> right = {0.5, 0.25};
    double u0 = 0.0;
};

struct SimConfig {
    std::array<SpeciesParams, 2> species;
    PhaseGrid grid;
    double eps = 1e-6;
    double cfl = 0.4;
    double t_end = 0.25;
    InitSpec init;
    bool renormalize_maxwellian = true;
    int frames = 1;  // snapshots at k*t_end/frames, k = 0..frames

    void validate() const {
        grid.validate();
        if (!(eps > 0.0)) throw ConfigError("eps: must be positive");
        if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("cfl: must lie in (0, 1]");
        if (!(t_end > 0.0)) throw ConfigError("t_end: must be positive");
        if (frames < 1) throw ConfigError("outputs.frames: must be at least 1");
        if (init.type != "riemann")
            throw ConfigError("init.type: only \"riemann\" is supported, got \"" + init.type +
                              "\"");
        for (double v : {init.left[0], init.left[1], init.right[0], init.right[1]})
            if (!(v >= 0.0)) throw ConfigError("init densities must be nonnegative");
        for (int s = 0; s < 2; ++s) derive_constants(species[s], 1);
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + where + it.key() + "\"");
    }
}

inline double need_number(const nlohmann::json& j, const std::string& key,
                          const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing required key \"" + where + key + "\"");
    if (!j[key].is_number()) throw ConfigError("key \"" + where + key + "\" must be a number");
    return j[key].get<double>();
}

inline int need_int(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing required key \"" + where + key + "\"");
    if (!j[key].is_number_integer())
        throw ConfigError("key \"" + where + key + "\" must be an integer");
    return j[key].get<int>();
}

}  // namespace detail

inline SimConfig config_from_json(const nlohmann::json& j) {
    using detail::need_int;
    using detail::need_number;
    if (!j.is_object())
        throw ConfigError(
            "config: expected a JSON object with keys species, grid, eps, cfl, t_end, init");
    detail::reject_unknown_keys(j,
                                {"species", "grid", "eps", "cfl", "t_end", "init",
                                 "renormalize_maxwellian", "outputs"},
                                "");
    for (const char* key : {"species", "grid", "eps", "cfl", "t_end", "init"})
        if (!j.contains(key))
            throw ConfigError(std::string("missing required key \"") + key +
                              "\" (required: species, grid, eps, cfl, t_end, init)");

    SimConfig cfg;
    const auto& jsp = j["species"];
    if (!jsp.is_array() || jsp.size() != 2)
        throw ConfigError("species: expected an array of exactly 2 entries");
    for (int s = 0; s < 2; ++s) {
        const std::string where = "species[" + std::to_string(s) + "].";
        detail::reject_unknown_keys(jsp[s], {"m", "gamma", "nu"}, where);
        cfg.species[s].m = need_number(jsp[s], "m", where);
        cfg.species[s].gamma = need_number(jsp[s], "gamma", where);
        cfg.species[s].nu = need_number(jsp[s], "nu", where);
    }

    const auto& jg = j["grid"];
    detail::reject_unknown_keys(jg, {"x_lo", "x_hi", "nx", "v_lo", "v_hi", "nv", "bc"}, "grid.");
    cfg.grid.x_lo = need_number(jg, "x_lo", "grid.");
    cfg.grid.x_hi = need_number(jg, "x_hi", "grid.");
    cfg.grid.nx = need_int(jg, "nx", "grid.");
    cfg.grid.v_lo = need_number(jg, "v_lo", "grid.");
    cfg.grid.v_hi = need_number(jg, "v_hi", "grid.");
    cfg.grid.nv = need_int(jg, "nv", "grid.");
    if (!jg.contains("bc")) throw ConfigError("missing required key \"grid.bc\"");
    cfg.grid.bc = bc_from_name(jg["bc"].get<std::string>());

    cfg.eps = need_number(j, "eps", "");
    cfg.cfl = need_number(j, "cfl", "");
    cfg.t_end = need_number(j, "t_end", "");

    const auto& ji = j["init"];
    detail::reject_unknown_keys(ji, {"type", "left", "right", "u"}, "init.");
    if (!ji.contains("type")) throw ConfigError("missing required key \"init.type\"");
    cfg.init.type = ji["type"].get<std::string>();
    for (const char* side : {"left", "right"}) {
        if (!ji.contains(side))
            throw ConfigError(std::string("missing required key \"init.") + side + "\"");
        const auto& ja = ji[side];
        if (!ja.is_array() || ja.size() != 2)
            throw ConfigError(std::string("init.") + side + ": expected [n1, n2]");
        auto& dst = side[0] == 'l' ? cfg.init.left : cfg.init.right;
        dst[0] = ja[0].get<double>();
        dst[1] = ja[1].get<double>();
    }
    cfg.init.u0 = ji.contains("u") ? ji["u"].get<double>() : 0.0;

    if (j.contains("renormalize_maxwellian")) {
        if (!j["renormalize_maxwellian"].is_boolean())
            throw ConfigError("renormalize_maxwellian: must be a boolean");
        cfg.renormalize_maxwellian = j["renormalize_maxwellian"].get<bool>();
    }
    if (j.contains("outputs")) {
        detail::reject_unknown_keys(j["outputs"], {"frames"}, "outputs.");
        if (j["outputs"].contains("frames")) cfg.frames = j["outputs"]["frames"].get<int>();
    }

    cfg.validate();
    return cfg;
}

inline nlohmann::json config_to_json(const SimConfig& cfg) {
    nlohmann::json j;
    for (int s = 0; s < 2; ++s)
        j["species"].push_back({{"m", cfg.species[s].m},
                                {"gamma", cfg.species[s].gamma},
                                {"nu", cfg.species[s].nu}});
    j["grid"] = {{"x_lo", cfg.grid.x_lo}, {"x_hi", cfg.grid.x_hi}, {"nx", cfg.grid.nx},
                 {"v_lo", cfg.grid.v_lo}, {"v_hi", cfg.grid.v_hi}, {"nv", cfg.grid.nv},
                 {"bc", bc_name(cfg.grid.bc)}};
    j["eps"] = cfg.eps;
    j["cfl"] = cfg.cfl;
    j["t_end"] = cfg.t_end;
    j["init"] = {{"type", cfg.init.type},
                 {"left", {cfg.init.left[0], cfg.init.left[1]}},
                 {"right", {cfg.init.right[0], cfg.init.right[1]}},
                 {"u", cfg.init.u0}};
    j["renormalize_maxwellian"] = cfg.renormalize_maxwellian;
    j["outputs"] = {{"frames", cfg.frames}};
    return j;
}

inline SimConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw ConfigError(
            "config file is empty; required keys: species, grid, eps, cfl, t_end, init");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Experiment presets.
// ---------------------------------------------------------------------------

enum class PresetKind { run, verify, sweep };

struct PresetInfo {
    std::string id;
    PresetKind kind = PresetKind::run;
    SimConfig cfg;
    bool with_euler = false;           // emit the reference solution by default
    std::vector<double> eps_list;      // sweep presets only
    std::string note;
};

inline SimConfig riemann_base(double g1, double g2, double nL1, double nL2, double nR1,
                              double nR2, double v_half, int nv) {
    SimConfig c;
    c.species[0] = {1.0, g1, 1.0};
    c.species[1] = {1.0, g2, 1.0};
    c.grid.x_lo = -1.0;
    c.grid.x_hi = 1.0;
    c.grid.nx = 200;
    c.grid.v_lo = -v_half;
    c.grid.v_hi = v_half;
    c.grid.nv = nv;
    c.grid.bc = Bc::free_flow;
    c.eps = 1e-6;
    c.cfl = 0.4;
    c.t_end = 0.25;
    c.init = {"riemann", {nL1, nL2}, {nR1, nR2}, 0.0};
    return c;
}

inline std::vector<PresetInfo> all_presets() {
    std::vector<PresetInfo> v;

    PresetInfo p;
    p.id = "riemann1-case1";
    p.cfg = riemann_base(2.0, 1.4, 1.0, 0.8, 0.5, 0.25, 3.0, 1000);
    p.with_euler = true;
    p.note = "two-species Riemann problem, gamma = (2, 7/5)";
    v.push_back(p);

    p = PresetInfo{};
    p.id = "riemann1-case2";
    p.cfg = riemann_base(3.0, 5.0 / 3.0, 1.0, 0.8, 0.5, 0.25, 3.0, 1000);
    p.with_euler = true;
    p.note = "two-species Riemann problem, gamma = (3, 5/3)";
    v.push_back(p);

    p = PresetInfo{};
    p.id = "riemann1-case2-text";
    p.cfg = riemann_base(3.0, 1.4, 1.0, 0.8, 0.5, 0.25, 3.0, 1000);
    p.with_euler = true;
    p.note = "variant of riemann1-case2 with gamma_2 = 7/5";
    v.push_back(p);

    const double rhoL[3] = {1.0, 2.0, 3.0};
    const double vdom[3] = {3.0, 5.0, 8.0};
    const int nv2[3] = {3000, 5000, 8000};
    const int nv3[3] = {24000, 40000, 64000};
    for (int c = 0; c < 3; ++c) {
        p = PresetInfo{};
        p.id = "riemann2-case" + std::to_string(c + 1) + "-gamma2";
        p.cfg = riemann_base(2.0, 1.4, rhoL[c], 1.0, 0.5, 0.25, vdom[c], nv2[c]);
        p.with_euler = true;
        p.note = "long-running: large velocity grid";
        v.push_back(p);

        p = PresetInfo{};
        p.id = "riemann2-case" + std::to_string(c + 1) + "-gamma3";
        p.cfg = riemann_base(3.0, 1.4, rhoL[c], 1.0, 0.5, 0.25, vdom[c], nv3[c]);
        p.with_euler = true;
        p.note = "long-running: very large velocity grid";
        v.push_back(p);
    }

    p = PresetInfo{};
    p.id = "verify";
    p.kind = PresetKind::verify;
    p.note = "analytic-oracle verification suite";
    v.push_back(p);

    p = PresetInfo{};
    p.id = "ap-sweep";
    p.kind = PresetKind::sweep;
    p.cfg = riemann_base(2.0, 1.4, 1.0, 0.8, 0.5, 0.25, 3.0, 1000);
    p.eps_list = {1e-2, 1e-4, 1e-6};
    p.note = "relaxation-limit sweep on riemann1-case1";
    v.push_back(p);

    return v;
}

inline PresetInfo preset_config(const std::string& id) {
    for (const auto& p : all_presets())
        if (p.id == id) return p;
    std::string names;
    for (const auto& p : all_presets()) names += (names.empty() ? "" : ", ") + p.id;
    throw ConfigError("unknown preset \"" + id + "\" (available: " + names + ")");
}

}  // namespace ktp
