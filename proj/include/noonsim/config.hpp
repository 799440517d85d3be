#ifndef NOONSIM_CONFIG_HPP
#define NOONSIM_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "noonsim/darkstate.hpp"
#include "noonsim/hamiltonian.hpp"
#include "noonsim/integrator.hpp"
#include "noonsim/io.hpp"
#include "noonsim/pulse.hpp"
#include "noonsim/state.hpp"

namespace noonsim {

inline constexpr int config_schema_version = 1;

// How the dark-state coefficient law is chosen for a run: one of the two
// published presentations, or the one the null-space oracle selects.
enum class DarkVariantChoice { auto_select, eq2_eq3, fig1b_literal };

inline std::string dark_variant_choice_name(DarkVariantChoice c) {
    switch (c) {
        case DarkVariantChoice::auto_select: return "auto";
        case DarkVariantChoice::eq2_eq3: return "eq2_eq3";
        case DarkVariantChoice::fig1b_literal: return "fig1b_literal";
    }
    return "?";
}

// Everything a run needs, in the internal unit system Gamma = 1 (times in
// 1/Gamma, rates in Gamma).  kappa enters diagnostics only.
struct RunConfig {
    int M = 3;
    double g = 1.0;
    double gamma = 1.0;
    double kappa = 0.0;
    Complex alpha{M_SQRT1_2, 0.0};
    Complex beta{M_SQRT1_2, 0.0};
    InitialStateKind initial_state = InitialStateKind::atomic;
    PulseShape pulse = fig3_steep();
    TimeWindow window = fig3_steep().window();
    IntegratorConfig integrator;
    DecayConvention decay_convention = DecayConvention::amplitude;
    DarkVariantChoice dark_variant = DarkVariantChoice::auto_select;
    std::string output_dir;  // empty: in-memory only
    std::uint64_t seed = 0;
    std::string label;

    void check() const {
        if (M < 1) throw ConfigError("M must be >= 1");
        if (g < 0.0 || gamma < 0.0 || kappa < 0.0) throw ConfigError("rates must be >= 0");
        double n = std::norm(alpha) + std::norm(beta);
        if (std::abs(n - 1.0) > 1e-12)
            throw ConfigError("|alpha|^2 + |beta|^2 must be 1, got " + std::to_string(n));
        if (window.lo() < pulse.window().lo() - 1e-12 ||
            window.hi() > pulse.window().hi() + 1e-12)
            throw ConfigError("run window exceeds the pulse validity window");
        integrator.check();
    }

    DarkVariant resolve_dark_variant() const {
        switch (dark_variant) {
            case DarkVariantChoice::eq2_eq3: return DarkVariant::eq2_eq3;
            case DarkVariantChoice::fig1b_literal: return DarkVariant::fig1b_literal;
            case DarkVariantChoice::auto_select: {
                static const DarkVariant selected = select_dark_variant().selected;
                return selected;
            }
        }
        return DarkVariant::eq2_eq3;
    }
};

inline json pulse_to_json(const PulseShape& p) {
    json j;
    if (const auto* g = std::get_if<GaussianPulse>(&p.shape())) {
        j["type"] = "gaussian";
        j["amplitude"] = g->amplitude;
        j["width"] = g->width;
        j["center"] = g->center;
    } else if (const auto* s = std::get_if<SteepPulse>(&p.shape())) {
        j["type"] = "steep";
        j["scale"] = s->scale;
        j["steepness"] = s->steepness;
        j["shift"] = s->shift;
        j["pole"] = s->pole;
    } else if (const auto* t = std::get_if<TabulatedPulse>(&p.shape())) {
        j["type"] = "tabulated";
        j["times"] = t->times;
        j["values"] = t->values;
    }
    j["window"] = {p.window().t0, p.window().t1};
    return j;
}

inline PulseShape pulse_from_json(const json& j) {
    std::string type = j.at("type").get<std::string>();
    PulseShape::Variant v;
    if (type == "gaussian") {
        GaussianPulse g;
        g.amplitude = j.value("amplitude", g.amplitude);
        g.width = j.value("width", g.width);
        g.center = j.value("center", g.center);
        v = g;
    } else if (type == "steep") {
        SteepPulse s;
        s.scale = j.value("scale", s.scale);
        s.steepness = j.value("steepness", s.steepness);
        s.shift = j.value("shift", s.shift);
        s.pole = j.value("pole", s.pole);
        v = s;
    } else if (type == "tabulated") {
        TabulatedPulse t;
        t.times = j.at("times").get<std::vector<double>>();
        t.values = j.at("values").get<std::vector<double>>();
        if (t.times.size() != t.values.size() || t.times.size() < 2)
            throw ConfigError("tabulated pulse needs matching times/values, at least two points");
        v = t;
    } else {
        throw ConfigError("unknown pulse type '" + type + "'");
    }
    if (j.contains("window")) {
        auto w = j.at("window").get<std::vector<double>>();
        if (w.size() != 2) throw ConfigError("pulse window must be [t0, t1]");
        return PulseShape(std::move(v), TimeWindow{w[0], w[1]});
    }
    return PulseShape(std::move(v));
}

inline json config_to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = config_schema_version;
    j["M"] = c.M;
    j["g"] = c.g;
    j["gamma"] = c.gamma;
    j["kappa"] = c.kappa;
    j["alpha"] = complex_to_json(c.alpha);
    j["beta"] = complex_to_json(c.beta);
    j["initial_state"] = c.initial_state == InitialStateKind::atomic ? "atomic" : "photonic";
    j["pulse"] = pulse_to_json(c.pulse);
    j["window"] = {c.window.t0, c.window.t1};
    j["integrator"] = {{"rtol", c.integrator.rtol},
                       {"atol", c.integrator.atol},
                       {"max_step", c.integrator.max_step},
                       {"sample_interval", c.integrator.sample_interval},
                       {"fixed_step", c.integrator.fixed_step}};
    j["decay_convention"] = decay_convention_name(c.decay_convention);
    j["dark_variant"] = dark_variant_choice_name(c.dark_variant);
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["label"] = c.label;
    return j;
}

inline RunConfig config_from_json(const json& j) {
    int ver = j.value("schema_version", 0);
    if (ver != config_schema_version)
        throw ConfigError("unsupported config schema_version " + std::to_string(ver));
    RunConfig c;
    c.M = j.at("M").get<int>();
    c.g = j.value("g", 1.0);
    c.gamma = j.value("gamma", 1.0);
    c.kappa = j.value("kappa", 0.0);
    if (j.contains("alpha")) c.alpha = complex_from_json(j.at("alpha"));
    if (j.contains("beta")) c.beta = complex_from_json(j.at("beta"));
    std::string init = j.value("initial_state", "atomic");
    if (init == "atomic")
        c.initial_state = InitialStateKind::atomic;
    else if (init == "photonic")
        c.initial_state = InitialStateKind::photonic;
    else
        throw ConfigError("initial_state must be atomic or photonic");
    if (j.contains("pulse")) c.pulse = pulse_from_json(j.at("pulse"));
    if (j.contains("window")) {
        auto w = j.at("window").get<std::vector<double>>();
        if (w.size() != 2) throw ConfigError("window must be [t0, t1]");
        c.window = {w[0], w[1]};
    } else {
        c.window = c.pulse.window();
    }
    if (j.contains("integrator")) {
        const auto& ji = j.at("integrator");
        c.integrator.rtol = ji.value("rtol", c.integrator.rtol);
        c.integrator.atol = ji.value("atol", c.integrator.atol);
        c.integrator.max_step = ji.value("max_step", c.integrator.max_step);
        c.integrator.sample_interval = ji.value("sample_interval", c.integrator.sample_interval);
        c.integrator.fixed_step = ji.value("fixed_step", false);
    }
    std::string conv = j.value("decay_convention", "amplitude");
    if (conv == "amplitude")
        c.decay_convention = DecayConvention::amplitude;
    else if (conv == "population")
        c.decay_convention = DecayConvention::population;
    else
        throw ConfigError("decay_convention must be amplitude or population");
    std::string dv = j.value("dark_variant", "auto");
    if (dv == "auto")
        c.dark_variant = DarkVariantChoice::auto_select;
    else if (dv == "eq2_eq3")
        c.dark_variant = DarkVariantChoice::eq2_eq3;
    else if (dv == "fig1b_literal")
        c.dark_variant = DarkVariantChoice::fig1b_literal;
    else
        throw ConfigError("dark_variant must be auto, eq2_eq3 or fig1b_literal");
    c.output_dir = j.value("output_dir", "");
    c.seed = j.value("seed", std::uint64_t(0));
    c.label = j.value("label", "");
    c.check();
    return c;
}

// Time-dilates a pulse by the factor s (>1: slower), scaling its window
// accordingly.  Used by pulse-speed sweeps.
inline PulseShape dilate_pulse(const PulseShape& p, double s) {
    if (!(s > 0.0)) throw ConfigError("pulse speed scale must be > 0");
    TimeWindow w{p.window().t0 * s, p.window().t1 * s};
    if (const auto* g = std::get_if<GaussianPulse>(&p.shape())) {
        GaussianPulse d = *g;
        d.width = g->width / (s * s);
        d.center = g->center * s;
        return PulseShape(d, w);
    }
    if (const auto* st = std::get_if<SteepPulse>(&p.shape())) {
        SteepPulse d = *st;
        d.steepness = st->steepness / s;
        d.shift = st->shift * s;
        d.pole = st->pole * s;
        return PulseShape(d, w);
    }
    const auto& t = std::get<TabulatedPulse>(p.shape());
    TabulatedPulse d = t;
    for (auto& x : d.times) x *= s;
    return PulseShape(d, w);
}

// Named configurations reproducing the published runs: the Gaussian ramp
// (fig2) and the steep pulse (fig3), g = Gamma, balanced branch weights.
inline RunConfig preset_config(const std::string& name, int M) {
    RunConfig c;
    c.M = M;
    if (name == "fig2") {
        c.pulse = fig2_gaussian();
        c.label = "fig2_M" + std::to_string(M);
    } else if (name == "fig3") {
        c.pulse = fig3_steep();
        c.label = "fig3_M" + std::to_string(M);
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig2 or fig3)");
    }
    c.window = c.pulse.window();
    return c;
}

}

#endif
