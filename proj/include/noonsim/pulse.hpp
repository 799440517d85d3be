#ifndef NOONSIM_PULSE_HPP
#define NOONSIM_PULSE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

// All times are in units of 1/Gamma, all rates in units of Gamma.

struct TimeWindow {
    double t0 = 0.0;
    double t1 = 0.0;
    double lo() const { return std::min(t0, t1); }
    double hi() const { return std::max(t0, t1); }
    double span() const { return hi() - lo(); }
};

// Omega(t) = A exp(-w (t - t0)^2).  The published waveform uses
// A = 1e3, w = 0.01, t0 = 30.
struct GaussianPulse {
    double amplitude = 1e3;
    double width = 0.01;  // exponent coefficient
    double center = 30.0;

    double value(double t) const { return amplitude * std::exp(-width * (t - center) * (t - center)); }
    double derivative(double t) const { return value(t) * (-2.0 * width * (t - center)); }
    TimeWindow default_window() const { return {0.0, center}; }
};

// Omega(t) = -scale [ tanh(steepness (t - shift)) + 1/(t - pole) ].
// Diverges at the pole; any usable window must end strictly before it.
struct SteepPulse {
    double scale = 3.0;
    double steepness = 4.0;
    double shift = 0.5;
    double pole = 2.01;

    double value(double t) const {
        return -scale * (std::tanh(steepness * (t - shift)) + 1.0 / (t - pole));
    }
    double derivative(double t) const {
        double sech = 1.0 / std::cosh(steepness * (t - shift));
        return -scale * (steepness * sech * sech - 1.0 / ((t - pole) * (t - pole)));
    }
    TimeWindow default_window() const { return {0.0, 2.0}; }
};

// Piecewise-linear table; derivative by centered finite differences.
struct TabulatedPulse {
    std::vector<double> times;
    std::vector<double> values;

    double value(double t) const {
        auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return values.front();
        if (it == times.end()) return values.back();
        std::size_t i = std::size_t(it - times.begin());
        double f = (t - times[i - 1]) / (times[i] - times[i - 1]);
        return values[i - 1] + f * (values[i] - values[i - 1]);
    }
    double derivative(double t) const {
        double h = 1e-6 * std::max(1.0, times.back() - times.front());
        double a = std::max(times.front(), t - h);
        double b = std::min(times.back(), t + h);
        return (value(b) - value(a)) / (b - a);
    }
    TimeWindow default_window() const { return {times.front(), times.back()}; }
};

class PulseShape {
public:
    using Variant = std::variant<GaussianPulse, SteepPulse, TabulatedPulse>;

    PulseShape() : m_shape(GaussianPulse{}) { m_window = default_window_of(m_shape); }
    PulseShape(Variant shape) : m_shape(std::move(shape)) { m_window = default_window_of(m_shape); }
    PulseShape(Variant shape, TimeWindow window) : m_shape(std::move(shape)), m_window(window) {
        check_window();
    }

    const TimeWindow& window() const { return m_window; }
    void set_window(TimeWindow w) {
        m_window = w;
        check_window();
    }

    const Variant& shape() const { return m_shape; }

    bool is_steep() const { return std::holds_alternative<SteepPulse>(m_shape); }

    // Omega(t), units of Gamma.  Out-of-window times are rejected so a run
    // can never silently sample a pulse where it was not specified (or past
    // the steep pole).
    double value(double t) const {
        check_time(t);
        return std::visit([t](const auto& p) { return p.value(t); }, m_shape);
    }

    // dOmega/dt, units of Gamma^2.
    double derivative(double t) const {
        check_time(t);
        return std::visit([t](const auto& p) { return p.derivative(t); }, m_shape);
    }

    std::string kind() const {
        if (std::holds_alternative<GaussianPulse>(m_shape)) return "gaussian";
        if (std::holds_alternative<SteepPulse>(m_shape)) return "steep";
        return "tabulated";
    }

private:
    static TimeWindow default_window_of(const Variant& v) {
        return std::visit([](const auto& p) { return p.default_window(); }, v);
    }
    void check_window() const {
        if (const auto* s = std::get_if<SteepPulse>(&m_shape)) {
            if (m_window.hi() >= s->pole)
                throw PulseWindowError("steep pulse window must end before the pole at t=" +
                                       std::to_string(s->pole));
        }
        if (!(m_window.span() >= 0.0)) throw PulseWindowError("invalid pulse window");
    }
    void check_time(double t) const {
        constexpr double slack = 1e-9;
        if (t < m_window.lo() - slack || t > m_window.hi() + slack)
            throw PulseWindowError("time " + std::to_string(t) + " outside pulse window [" +
                                   std::to_string(m_window.lo()) + ", " +
                                   std::to_string(m_window.hi()) + "]");
        if (const auto* s = std::get_if<SteepPulse>(&m_shape)) {
            if (t >= s->pole)
                throw PulseWindowError("steep pulse evaluated at or past its pole");
        }
    }

    Variant m_shape;
    TimeWindow m_window;
};

inline PulseShape fig2_gaussian() { return PulseShape(GaussianPulse{}); }
inline PulseShape fig3_steep() { return PulseShape(SteepPulse{}); }

}

#endif
