// Command-line front end: simulate / sweep / darkstate / measure / pulse.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "noonsim/noonsim.hpp"

using namespace noonsim;

namespace {

int cmd_simulate(const std::string& config_path, const std::string& preset,
                 const std::string& output_dir, bool dump_operators) {
    std::vector<RunConfig> configs;
    if (!preset.empty()) {
        for (int M : {3, 5, 8}) configs.push_back(preset_config(preset, M));
    } else if (!config_path.empty()) {
        configs.push_back(config_from_json(json::parse(read_text_file(config_path))));
    } else {
        std::cerr << "simulate: need --config or --preset\n";
        return 2;
    }
    if (!output_dir.empty())
        for (auto& c : configs) c.output_dir = output_dir;

    bool any_failed = false;
    for (const auto& cfg : configs) {
        RunResult r = run_simulation(cfg);
        if (dump_operators && r.manifest.status == "ok" && !r.output_dir.empty()) {
            auto basis = enumerate_sector(cfg.M, SectorLabel::of(Branch::atomic_alpha));
            auto h = build_hamiltonian_set(basis, cfg.g, cfg.gamma);
            write_text_file(r.output_dir / "h_pump.coo", operator_coordinate_dump(h.pump));
            write_text_file(r.output_dir / "h_cav.coo", operator_coordinate_dump(h.cav));
        }
        std::cout << (cfg.label.empty() ? std::string("run") : cfg.label) << ": "
                  << r.manifest.status;
        if (r.manifest.status == "ok") {
            const auto& fin = r.trajectory.back();
            std::cout << "  norm=" << fin.norm << "  P_dark=" << fin.p_dark
                      << "  Gamma*int n_ph dt=" << r.loss.gamma_weighted;
            if (!r.output_dir.empty()) std::cout << "  -> " << r.output_dir.string();
        } else {
            std::cout << "  error: " << r.manifest.error;
            any_failed = true;
        }
        std::cout << "\n";
    }
    return any_failed ? 1 : 0;
}

int cmd_sweep(const std::string& spec_path, int jobs) {
    SweepSpec spec = sweep_spec_from_json(json::parse(read_text_file(spec_path)));
    if (jobs > 0) spec.jobs = jobs;
    SweepResult res = run_sweep(spec);
    std::vector<std::string> names;
    for (const auto& a : spec.axes) names.push_back(a.param);
    std::string csv = res.aggregate_csv(names);
    if (!spec.output_dir.empty()) {
        write_text_file(std::filesystem::path(spec.output_dir) / "sweep_aggregate.csv", csv);
        std::cout << "aggregate -> " << (std::filesystem::path(spec.output_dir) / "sweep_aggregate.csv").string()
                  << "\n";
    } else {
        std::cout << csv;
    }
    std::cout << "points: " << res.points_total << "  ok: " << res.rows.size()
              << "  failed: " << res.failed.size() << "\n";
    for (const auto& f : res.failed)
        std::cerr << "failed point " << f.label << ": " << f.error << "\n";
    return res.failed.empty() ? 0 : 1;
}

int cmd_darkstate(int M, double omega_over_g, bool do_validate, bool dump_basis,
                  const std::string& variant_name) {
    DarkVariantChoice choice = DarkVariantChoice::auto_select;
    if (variant_name == "eq2_eq3") choice = DarkVariantChoice::eq2_eq3;
    else if (variant_name == "fig1b_literal") choice = DarkVariantChoice::fig1b_literal;
    else if (variant_name != "auto") {
        std::cerr << "darkstate: unknown variant " << variant_name << "\n";
        return 2;
    }

    if (dump_basis) {
        auto basis = enumerate_sector(M, SectorLabel::of(Branch::atomic_alpha));
        std::cout << basis_to_json(*basis).dump(2) << "\n";
        return 0;
    }

    DarkVariant variant;
    if (choice == DarkVariantChoice::auto_select) {
        auto sel = select_dark_variant();
        variant = sel.selected;
    } else {
        variant = (choice == DarkVariantChoice::eq2_eq3) ? DarkVariant::eq2_eq3
                                                         : DarkVariant::fig1b_literal;
    }

    if (do_validate) {
        auto basis = enumerate_sector(M, SectorLabel::of(Branch::atomic_alpha));
        auto h = build_hamiltonian_set(basis, 1.0, 1.0);
        auto lad = ladder_indices(*basis);
        std::printf("# variant=%s\n", dark_variant_name(variant));
        std::printf("omega_over_g,one_minus_overlap,analytic_residual,numeric_residual\n");
        bool ok = true;
        for (double x : {0.1, 1.0, 10.0, 100.0, omega_over_g}) {
            auto nr = numerical_null_state(h, x);
            Eigen::VectorXd c = dark_coefficients(M, x, variant);
            Complex ov(0.0, 0.0);
            Eigen::VectorXcd ana = Eigen::VectorXcd::Zero(Eigen::Index(basis->size()));
            for (std::size_t n = 0; n < lad.size(); ++n) {
                ov += c[Eigen::Index(n)] * std::conj(nr.amps[Eigen::Index(lad[n])]);
                ana[Eigen::Index(lad[n])] = c[Eigen::Index(n)];
            }
            Eigen::VectorXcd hv = Eigen::VectorXcd::Zero(ana.size());
            h.pump.accumulate(ana, hv, Complex(x, 0.0));
            h.cav.accumulate(ana, hv, Complex(1.0, 0.0));
            double resid = hv.norm() / nr.spectral_norm;
            std::printf("%g,%.3e,%.3e,%.3e\n", x, 1.0 - std::abs(ov), resid, nr.residual);
            if (1.0 - std::abs(ov) > 1e-8 || resid > 1e-8) ok = false;
        }
        std::printf("# %s\n", ok ? "ok" : "MISMATCH");
        return ok ? 0 : 1;
    }

    Eigen::VectorXd c = dark_coefficients(M, omega_over_g, variant);
    std::printf("# M=%d omega_over_g=%g variant=%s\n", M, omega_over_g, dark_variant_name(variant));
    std::printf("n,c_n,abs_c_n_squared\n");
    for (int n = 0; n < M; ++n)
        std::printf("%d,%s,%s\n", n, format_double(c[n]).c_str(),
                    format_double(c[n] * c[n]).c_str());
    return 0;
}

int cmd_measure(const std::string& state_path, double p, double theta, double phi) {
    json j = json::parse(read_text_file(state_path));
    StateVector psi = state_from_json(j);
    if (psi.branches.empty()) {
        std::cerr << "measure: state has no branches\n";
        return 2;
    }
    int M = psi.branches.front().basis->atom_count();
    // the branch weights define the NOON target
    Complex alpha(0.0, 0.0), beta(0.0, 0.0);
    for (const auto& b : psi.branches) {
        Branch br = b.basis->sector().branch;
        if (br == Branch::atomic_alpha || br == Branch::photonic_alpha) alpha = b.weight;
        if (br == Branch::atomic_beta || br == Branch::photonic_beta) beta = b.weight;
    }
    RotationSpec spec;
    spec.mixing_angle = theta;
    spec.relative_phase = phi;
    MergedState rotated = rotate_35(psi, spec);
    auto outcomes = measure_all(rotated, alpha, beta, M - 1, M);
    json out = json::array();
    double total = 0.0;
    for (const auto& o : outcomes) {
        json jo;
        jo["K"] = o.K;
        jo["probability"] = o.probability;
        total += o.probability;
        if (!o.undefined_conditional) {
            jo["fidelity"] = o.fidelity;
            jo["fidelity_plus"] = o.fidelity_plus;
            jo["fidelity_minus"] = o.fidelity_minus;
            jo["sign"] = o.best_sign;
            jo["purity"] = o.photons.purity;
        }
        if (p >= 0.0) {
            jo["detection_weight_literal"] = detection_probability(M, o.K, p);
            jo["detection_weight_model"] = detection_probability_model(M, o.K, p);
        }
        out.push_back(std::move(jo));
    }
    json top;
    top["outcomes"] = std::move(out);
    top["probability_total"] = total;
    if (p >= 0.0) top["detection_efficiency"] = p;
    std::cout << top.dump(2) << "\n";
    return 0;
}

int cmd_pulse(const std::string& kind, double dt, const std::string& config_path) {
    PulseShape pulse = (kind == "gaussian") ? fig2_gaussian() : fig3_steep();
    if (!config_path.empty()) {
        RunConfig cfg = config_from_json(json::parse(read_text_file(config_path)));
        pulse = cfg.pulse;
    }
    std::printf("t,omega,omega_dot\n");
    const auto& w = pulse.window();
    for (double t = w.lo(); t <= w.hi() + 1e-12; t += dt)
        std::printf("%s,%s,%s\n", format_double(t).c_str(), format_double(pulse.value(t)).c_str(),
                    format_double(pulse.derivative(t)).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adiabatic NOON-state generation in a two-mode cavity: simulator and analysis"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "run the propagation pipeline for a config or preset");
    std::string config_path, preset, output_dir;
    bool dump_ops = false;
    sim->add_option("--config", config_path, "run configuration JSON");
    sim->add_option("--preset", preset, "fig2 or fig3 (runs M = 3, 5, 8)")
        ->check(CLI::IsMember({"fig2", "fig3"}));
    sim->add_option("--output", output_dir, "output directory (overrides config)");
    sim->add_flag("--dump-operators", dump_ops, "also write coordinate-list operator dumps");

    auto* sw = app.add_subcommand("sweep", "run a parameter sweep spec");
    std::string spec_path;
    int jobs = 0;
    sw->add_option("--spec", spec_path, "sweep spec JSON")->required();
    sw->add_option("--jobs", jobs, "worker threads");

    auto* ds = app.add_subcommand("darkstate", "dark-state coefficients and validation");
    int M = 3;
    double omega_over_g = 1.0;
    bool do_validate = false, dump_basis = false;
    std::string variant = "auto";
    ds->add_option("--M", M, "atom count")->required();
    ds->add_option("--omega-over-g", omega_over_g, "pump-to-cavity coupling ratio");
    ds->add_flag("--validate", do_validate, "compare against the numerical null state");
    ds->add_flag("--dump-basis", dump_basis, "print the sector basis as JSON");
    ds->add_option("--variant", variant, "auto | eq2_eq3 | fig1b_literal");

    auto* me = app.add_subcommand("measure", "rotate, project and report NOON outcomes");
    std::string state_path;
    double p = -1.0, theta = M_PI / 4.0, phi = 0.0;
    me->add_option("--state", state_path, "serialized final state JSON")->required();
    me->add_option("--p", p, "detector efficiency for the detection-weight columns");
    me->add_option("--theta", theta, "mixing angle (default pi/4)");
    me->add_option("--phi", phi, "relative phase (default 0)");

    auto* pu = app.add_subcommand("pulse", "tabulate a pulse shape as CSV");
    std::string pulse_kind = "gaussian";
    double dt = 0.1;
    std::string pulse_config;
    bool table = false;
    pu->add_flag("--table", table, "emit the CSV table (default action)");
    pu->add_option("--kind", pulse_kind, "gaussian | steep")
        ->check(CLI::IsMember({"gaussian", "steep"}));
    pu->add_option("--dt", dt, "sample spacing");
    pu->add_option("--config", pulse_config, "take the pulse from a run config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, preset, output_dir, dump_ops);
        if (sw->parsed()) return cmd_sweep(spec_path, jobs);
        if (ds->parsed()) return cmd_darkstate(M, omega_over_g, do_validate, dump_basis, variant);
        if (me->parsed()) return cmd_measure(state_path, p, theta, phi);
        if (pu->parsed()) return cmd_pulse(pulse_kind, dt, pulse_config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
