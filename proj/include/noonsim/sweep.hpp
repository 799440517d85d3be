#ifndef NOONSIM_SWEEP_HPP
#define NOONSIM_SWEEP_HPP

#include <atomic>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "noonsim/config.hpp"
#include "noonsim/run.hpp"

namespace noonsim {

// One sweep axis: a parameter path and the values it takes.  Supported
// paths: M, g, gamma, kappa, cooperativity (sets kappa = g^2/(C*gamma)),
// pulse_speed_scale (time-dilates the template pulse and window).
struct SweepAxis {
    std::string param;
    std::vector<double> values;
};

struct SweepSpec {
    RunConfig base;
    std::vector<SweepAxis> axes;
    int jobs = 1;
    std::size_t max_points = 4096;
    std::string output_dir;

    std::size_t point_count() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.values.size();
        return n;
    }
};

inline json sweep_spec_to_json(const SweepSpec& s) {
    json j;
    j["schema_version"] = config_schema_version;
    j["base"] = config_to_json(s.base);
    json axes = json::array();
    for (const auto& a : s.axes) axes.push_back({{"param", a.param}, {"values", a.values}});
    j["axes"] = std::move(axes);
    j["jobs"] = s.jobs;
    j["max_points"] = s.max_points;
    j["output_dir"] = s.output_dir;
    return j;
}

inline SweepSpec sweep_spec_from_json(const json& j) {
    SweepSpec s;
    if (j.value("schema_version", 0) != config_schema_version)
        throw ConfigError("unsupported sweep schema_version");
    s.base = config_from_json(j.at("base"));
    for (const auto& ja : j.value("axes", json::array())) {
        SweepAxis ax;
        ax.param = ja.at("param").get<std::string>();
        ax.values = ja.at("values").get<std::vector<double>>();
        s.axes.push_back(std::move(ax));
    }
    s.jobs = j.value("jobs", 1);
    s.max_points = j.value("max_points", std::size_t(4096));
    s.output_dir = j.value("output_dir", "");
    return s;
}

inline void apply_sweep_param(RunConfig& cfg, const std::string& param, double value) {
    if (param == "M")
        cfg.M = int(value);
    else if (param == "g")
        cfg.g = value;
    else if (param == "gamma")
        cfg.gamma = value;
    else if (param == "kappa")
        cfg.kappa = value;
    else if (param == "cooperativity") {
        if (!(value > 0.0)) throw ConfigError("cooperativity must be > 0");
        cfg.kappa = cfg.g * cfg.g / (value * (cfg.gamma > 0 ? cfg.gamma : 1.0));
    } else if (param == "pulse_speed_scale") {
        cfg.pulse = dilate_pulse(cfg.pulse, value);
        cfg.window = TimeWindow{cfg.window.t0 * value, cfg.window.t1 * value};
    } else {
        throw ConfigError("unknown sweep parameter '" + param + "'");
    }
}

struct SweepRow {
    std::map<std::string, double> params;
    std::string status;  // ok | failed
    std::string error;
    double final_p_dark = 0.0;
    double final_norm = 0.0;
    double loss_gamma_raw = 0.0;
    double loss_kappa_raw = 0.0;
    double min_margin_empty = 0.0;
    double min_margin_photon = 0.0;
    std::string label;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // one per non-failed point, in point order
    std::vector<SweepRow> failed;
    std::size_t points_total = 0;

    std::string aggregate_csv(const std::vector<std::string>& param_names) const {
        std::ostringstream out;
        for (const auto& p : param_names) out << p << ',';
        out << "status,final_p_dark,final_norm,loss_gamma_raw,loss_kappa_raw,"
               "min_margin_empty,min_margin_photon,label\n";
        for (const auto& r : rows) {
            for (const auto& p : param_names)
                out << format_double(r.params.count(p) ? r.params.at(p) : 0.0) << ',';
            out << r.status << ',' << format_double(r.final_p_dark) << ','
                << format_double(r.final_norm) << ',' << format_double(r.loss_gamma_raw) << ','
                << format_double(r.loss_kappa_raw) << ',' << format_double(r.min_margin_empty)
                << ',' << format_double(r.min_margin_photon) << ',' << r.label << '\n';
        }
        return out.str();
    }
};

// Runs the cartesian product of the axes.  Points execute concurrently in a
// small worker pool sharing one immutable operator cache; individual
// failures are recorded and the sweep continues.
inline SweepResult run_sweep(const SweepSpec& spec) {
    std::size_t total = spec.point_count();
    if (total > spec.max_points)
        throw ConfigError("sweep would run " + std::to_string(total) + " points, cap is " +
                          std::to_string(spec.max_points));
    SweepResult result;
    result.points_total = total;
    if (total == 0 || spec.axes.empty()) {
        if (spec.axes.empty()) result.points_total = 0;
        return result;
    }

    struct Point {
        RunConfig cfg;
        std::map<std::string, double> params;
        std::string label;
    };
    std::vector<Point> points;
    points.reserve(total);
    std::vector<std::size_t> idx(spec.axes.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        Point pt;
        pt.cfg = spec.base;
        std::string label = "point";
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            double v = spec.axes[a].values[idx[a]];
            apply_sweep_param(pt.cfg, spec.axes[a].param, v);
            pt.params[spec.axes[a].param] = v;
            label += "_" + spec.axes[a].param + std::to_string(v);
        }
        pt.label = label;
        pt.cfg.label = label;
        pt.cfg.output_dir = spec.output_dir;
        points.push_back(std::move(pt));
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            if (++idx[a] < spec.axes[a].values.size()) break;
            idx[a] = 0;
        }
    }

    OperatorCache cache;
    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    int jobs = std::max(1, spec.jobs);
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            SweepRow row;
            row.params = points[i].params;
            row.label = points[i].label;
            RunResult rr = run_simulation(points[i].cfg, &cache);
            if (rr.manifest.status != "ok") {
                row.status = "failed";
                row.error = rr.manifest.error;
            } else {
                row.status = "ok";
                row.final_p_dark = rr.trajectory.back().p_dark;
                row.final_norm = rr.trajectory.back().norm;
                row.loss_gamma_raw = rr.loss.gamma_weighted;
                row.loss_kappa_raw = rr.loss.kappa_weighted;
                row.min_margin_empty = rr.adiabaticity.min_margin_empty;
                row.min_margin_photon = rr.adiabaticity.min_margin_photon;
            }
            rows[i] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (auto& r : rows) {
        if (r.status == "ok")
            result.rows.push_back(std::move(r));
        else
            result.failed.push_back(std::move(r));
    }
    return result;
}

}

#endif
