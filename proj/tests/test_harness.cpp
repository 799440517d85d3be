#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "noonsim/noonsim.hpp"

using namespace noonsim;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("noonsim_test_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config JSON round trip") {
    RunConfig c;
    c.M = 5;
    c.kappa = 0.1;
    c.alpha = Complex(0.6, 0.0);
    c.beta = Complex(0.0, 0.8);
    c.pulse = fig2_gaussian();
    c.window = {0.0, 25.0};
    c.decay_convention = DecayConvention::population;
    c.dark_variant = DarkVariantChoice::eq2_eq3;
    c.label = "roundtrip";
    json j = config_to_json(c);
    RunConfig back = config_from_json(j);
    CHECK(back.M == c.M);
    CHECK(back.kappa == c.kappa);
    CHECK(back.alpha == c.alpha);
    CHECK(back.beta == c.beta);
    CHECK(back.window.t1 == c.window.t1);
    CHECK(back.decay_convention == c.decay_convention);
    CHECK(back.dark_variant == c.dark_variant);
    CHECK(config_to_json(back) == j);
}

TEST_CASE("config validation errors") {
    json j = config_to_json(RunConfig{});
    SECTION("schema version is enforced") {
        j["schema_version"] = 99;
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    }
    SECTION("branch weights must be normalized") {
        j["alpha"] = {1.0, 0.0};
        j["beta"] = {0.5, 0.0};
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    }
    SECTION("negative rates rejected") {
        j["kappa"] = -1.0;
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    }
    SECTION("window beyond the steep pole rejected") {
        j["window"] = {0.0, 2.5};
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    }
    SECTION("unknown pulse type rejected") {
        j["pulse"] = {{"type", "sawtooth"}};
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    }
}

TEST_CASE("run_simulation produces deterministic artifacts") {
    RunConfig cfg;
    cfg.M = 2;
    cfg.pulse = fig3_steep();
    cfg.window = {0.0, 1.0};
    cfg.label = "repro";
    auto dir1 = temp_dir("repro1");
    auto dir2 = temp_dir("repro2");

    cfg.output_dir = dir1.string();
    RunResult r1 = run_simulation(cfg);
    cfg.output_dir = dir2.string();
    RunResult r2 = run_simulation(cfg);
    REQUIRE(r1.manifest.status == "ok");
    REQUIRE(r2.manifest.status == "ok");

    std::string csv1 = read_text_file(dir1 / "repro" / "trajectory.csv");
    std::string csv2 = read_text_file(dir2 / "repro" / "trajectory.csv");
    CHECK(csv1 == csv2);
    CHECK(r1.manifest.file_digests.at("trajectory.csv") ==
          r2.manifest.file_digests.at("trajectory.csv"));
    // manifest digests match the emitted files
    CHECK(r1.manifest.file_digests.at("trajectory.csv") == fnv1a64_hex(csv1));

    // CSV header carries the fixed column order
    CHECK(csv1.rfind("t,norm,n_ph_raw,n_ph_cond,P_dark,P_exc,P_n0,P_n1,loss_running", 0) == 0);

    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("final state serialization round trip") {
    RunConfig cfg;
    cfg.M = 3;
    cfg.window = {0.0, 1.0};
    RunResult r = run_simulation(cfg);
    REQUIRE(r.manifest.status == "ok");
    json j = state_to_json(r.trajectory.final_state);
    StateVector back = state_from_json(j);
    REQUIRE(back.branches.size() == r.trajectory.final_state.branches.size());
    for (std::size_t b = 0; b < back.branches.size(); ++b)
        CHECK((back.branches[b].amps - r.trajectory.final_state.branches[b].amps).norm() < 1e-15);
}

TEST_CASE("failed runs are reported in the manifest") {
    RunConfig cfg;
    cfg.M = 2;
    cfg.window = {0.0, 2.0};
    cfg.integrator.max_steps = 10;  // forces a propagation failure
    RunResult r = run_simulation(cfg);
    CHECK(r.manifest.status == "failed");
    CHECK(!r.manifest.error.empty());
}

TEST_CASE("preset configurations") {
    RunConfig f2 = preset_config("fig2", 5);
    CHECK(f2.M == 5);
    CHECK(f2.pulse.kind() == "gaussian");
    CHECK(f2.window.hi() == Catch::Approx(30.0));
    RunConfig f3 = preset_config("fig3", 8);
    CHECK(f3.pulse.kind() == "steep");
    CHECK(f3.window.hi() == Catch::Approx(2.0));
    CHECK_THROWS_AS(preset_config("fig9", 3), ConfigError);
}

TEST_CASE("empty sweep yields an empty aggregate") {
    SweepSpec spec;
    spec.base.M = 2;
    SweepResult res = run_sweep(spec);
    CHECK(res.rows.empty());
    CHECK(res.failed.empty());
    CHECK(res.points_total == 0);
    CHECK(res.aggregate_csv({}).find("status,") != std::string::npos);
}

TEST_CASE("sweep runs the cartesian product and aggregates rows") {
    SweepSpec spec;
    spec.base.M = 2;
    spec.base.pulse = fig3_steep();
    spec.base.window = {0.0, 1.0};
    spec.axes.push_back({"M", {2, 3}});
    spec.axes.push_back({"kappa", {0.0, 0.1}});
    spec.jobs = 2;
    SweepResult res = run_sweep(spec);
    CHECK(res.points_total == 4);
    CHECK(res.rows.size() == 4);
    CHECK(res.failed.empty());
    std::string csv = res.aggregate_csv({"M", "kappa"});
    // header + one line per non-failed point
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("sweep records failures and continues") {
    SweepSpec spec;
    spec.base.M = 2;
    spec.base.window = {0.0, 1.5};
    spec.base.integrator.max_steps = 40;  // tight enough to fail the long window
    spec.axes.push_back({"M", {2}});
    spec.axes.push_back({"pulse_speed_scale", {1.0, 0.001}});
    SweepResult res = run_sweep(spec);
    CHECK(res.points_total == 2);
    CHECK(res.rows.size() + res.failed.size() == 2);
    CHECK(!res.failed.empty());
}

TEST_CASE("sweep point cap") {
    SweepSpec spec;
    spec.base.M = 2;
    spec.axes.push_back({"kappa", std::vector<double>(100, 0.0)});
    spec.max_points = 10;
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}

TEST_CASE("cooperativity axis sets kappa") {
    RunConfig cfg;
    cfg.g = 2.0;
    cfg.gamma = 1.0;
    apply_sweep_param(cfg, "cooperativity", 10.0);
    CHECK(cfg.kappa == Catch::Approx(0.4));
}

TEST_CASE("validate: default M=2 passes every oracle") {
    RunConfig cfg;
    cfg.M = 2;
    ValidationReport rep = validate(cfg);
    for (const auto& e : rep.entries) {
        INFO(e.name << ": " << e.status << " " << e.detail);
        CHECK((e.status == "pass" || e.status == "skipped"));
    }
    CHECK(rep.all_ok());
}

TEST_CASE("validate: M=5 skips the first-quantized oracle explicitly") {
    RunConfig cfg;
    cfg.M = 5;
    ValidationReport rep = validate(cfg);
    bool found = false;
    for (const auto& e : rep.entries) {
        if (e.name == "first_quantized") {
            found = true;
            CHECK(e.status == "skipped");
        }
    }
    CHECK(found);
}

TEST_CASE("validate: golden regression flags a decay-convention flip") {
    auto goldens = std::filesystem::path(TEST_SOURCE_DIR) / ".." / "presets" / "goldens.json";
    if (!std::filesystem::exists(goldens)) {
        SUCCEED("goldens not generated yet");
        return;
    }
    RunConfig good;
    good.M = 2;
    ValidationReport rep_good = validate(good, goldens);
    RunConfig bad = good;
    bad.decay_convention = DecayConvention::population;
    ValidationReport rep_bad = validate(bad, goldens);
    auto find = [](const ValidationReport& r, const std::string& n) -> const ValidationEntry* {
        for (const auto& e : r.entries)
            if (e.name == n) return &e;
        return nullptr;
    };
    const auto* g1 = find(rep_good, "golden_regression");
    const auto* g2 = find(rep_bad, "golden_regression");
    REQUIRE(g1 != nullptr);
    REQUIRE(g2 != nullptr);
    CHECK(g1->status == "pass");
    CHECK(g2->status == "flagged");
}
