#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "ktp/config.hpp"

using namespace ktp;

TEST_CASE("preset table pins the published experiment parameters") {
    const PresetInfo p1 = preset_config("riemann1-case1");
    CHECK(p1.cfg.species[0].gamma == Catch::Approx(2.0));
    CHECK(p1.cfg.species[1].gamma == Catch::Approx(1.4));
    CHECK(p1.cfg.species[0].m == 1.0);
    CHECK(p1.cfg.species[0].nu == 1.0);
    CHECK(p1.cfg.grid.nx == 200);
    CHECK(p1.cfg.grid.nv == 1000);
    CHECK(p1.cfg.grid.v_hi == 3.0);
    CHECK(p1.cfg.grid.bc == Bc::free_flow);
    CHECK(p1.cfg.eps == 1e-6);
    CHECK(p1.cfg.cfl == 0.4);
    CHECK(p1.cfg.t_end == 0.25);
    CHECK(p1.cfg.init.left[0] == 1.0);
    CHECK(p1.cfg.init.left[1] == 0.8);
    CHECK(p1.cfg.init.right[0] == 0.5);
    CHECK(p1.cfg.init.right[1] == 0.25);
    CHECK(p1.with_euler);

    const PresetInfo p2 = preset_config("riemann1-case2");
    CHECK(p2.cfg.species[0].gamma == Catch::Approx(3.0));
    CHECK(p2.cfg.species[1].gamma == Catch::Approx(5.0 / 3.0));

    const PresetInfo pt = preset_config("riemann1-case2-text");
    CHECK(pt.cfg.species[0].gamma == Catch::Approx(3.0));
    CHECK(pt.cfg.species[1].gamma == Catch::Approx(1.4));

    const PresetInfo r23 = preset_config("riemann2-case3-gamma3");
    CHECK(r23.cfg.grid.nv == 64000);
    CHECK(r23.cfg.grid.v_hi == 8.0);
    CHECK(r23.cfg.init.left[0] == 3.0);
    CHECK(r23.cfg.init.left[1] == 1.0);
    CHECK(r23.cfg.init.right[0] == 0.5);
    CHECK(r23.cfg.init.right[1] == 0.25);

    const PresetInfo r12 = preset_config("riemann2-case1-gamma2");
    CHECK(r12.cfg.grid.nv == 3000);
    CHECK(r12.cfg.grid.v_hi == 3.0);
    CHECK(r12.cfg.init.left[0] == 1.0);

    const PresetInfo sweep = preset_config("ap-sweep");
    CHECK(sweep.kind == PresetKind::sweep);
    REQUIRE(sweep.eps_list.size() == 3);
    CHECK(sweep.eps_list[0] == 1e-2);
    CHECK(sweep.eps_list[2] == 1e-6);

    CHECK(preset_config("verify").kind == PresetKind::verify);
    CHECK_THROWS_AS(preset_config("nope"), ConfigError);
    CHECK_THROWS_WITH(preset_config("nope"), Catch::Matchers::ContainsSubstring("available:"));
}

TEST_CASE("JSON round trip preserves the configuration") {
    const SimConfig cfg = preset_config("riemann1-case2").cfg;
    const SimConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.species[0].gamma == cfg.species[0].gamma);
    CHECK(back.species[1].gamma == cfg.species[1].gamma);
    CHECK(back.grid.nx == cfg.grid.nx);
    CHECK(back.grid.nv == cfg.grid.nv);
    CHECK(back.grid.bc == cfg.grid.bc);
    CHECK(back.eps == cfg.eps);
    CHECK(back.cfl == cfg.cfl);
    CHECK(back.t_end == cfg.t_end);
    CHECK(back.init.left == cfg.init.left);
    CHECK(back.init.right == cfg.init.right);
    CHECK(back.init.u0 == cfg.init.u0);
    CHECK(back.renormalize_maxwellian == cfg.renormalize_maxwellian);
    CHECK(back.frames == cfg.frames);
}

TEST_CASE("unknown keys are rejected at every level") {
    nlohmann::json j = config_to_json(preset_config("riemann1-case1").cfg);
    j["bogus"] = 1;
    CHECK_THROWS_WITH(config_from_json(j), Catch::Matchers::ContainsSubstring("bogus"));
    j.erase("bogus");
    j["grid"]["extra"] = 2;
    CHECK_THROWS_WITH(config_from_json(j), Catch::Matchers::ContainsSubstring("grid.extra"));
    j["grid"].erase("extra");
    j["species"][1]["mass"] = 1.0;
    CHECK_THROWS_WITH(config_from_json(j),
                      Catch::Matchers::ContainsSubstring("species[1].mass"));
}

TEST_CASE("missing keys are reported by name") {
    nlohmann::json j = config_to_json(preset_config("riemann1-case1").cfg);
    j.erase("eps");
    CHECK_THROWS_WITH(config_from_json(j), Catch::Matchers::ContainsSubstring("eps"));
    j["eps"] = 1e-6;
    j["grid"].erase("bc");
    CHECK_THROWS_WITH(config_from_json(j), Catch::Matchers::ContainsSubstring("grid.bc"));
}

TEST_CASE("validation bounds") {
    SimConfig cfg = preset_config("riemann1-case1").cfg;
    cfg.eps = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = preset_config("riemann1-case1").cfg;
    cfg.cfl = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = preset_config("riemann1-case1").cfg;
    cfg.init.type = "wave";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = preset_config("riemann1-case1").cfg;
    cfg.init.left[0] = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = preset_config("riemann1-case1").cfg;
    cfg.species[0].gamma = 5.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(bc_from_name("reflecting"), ConfigError);
}

TEST_CASE("config files: empty and malformed inputs fail with context") {
    const std::string empty_path = "test_cfg_empty.json";
    {
        std::ofstream out(empty_path);
        out << "  \n";
    }
    CHECK_THROWS_WITH(config_from_file(empty_path),
                      Catch::Matchers::ContainsSubstring("required keys"));
    std::remove(empty_path.c_str());

    const std::string bad_path = "test_cfg_bad.json";
    {
        std::ofstream out(bad_path);
        out << "{ not json";
    }
    CHECK_THROWS_WITH(config_from_file(bad_path),
                      Catch::Matchers::ContainsSubstring("parse error"));
    std::remove(bad_path.c_str());

    CHECK_THROWS_AS(config_from_file("does_not_exist.json"), ConfigError);

    const std::string good_path = "test_cfg_good.json";
    {
        std::ofstream out(good_path);
        out << config_to_json(preset_config("riemann1-case1").cfg).dump(2);
    }
    CHECK_NOTHROW(config_from_file(good_path));
    std::remove(good_path.c_str());
}
