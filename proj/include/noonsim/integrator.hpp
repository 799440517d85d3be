#ifndef NOONSIM_INTEGRATOR_HPP
#define NOONSIM_INTEGRATOR_HPP

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "noonsim/errors.hpp"

namespace noonsim {

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 1e-2;
    double sample_interval = 1e-2;
    double initial_step = 1e-6;
    bool fixed_step = false;   // debugging fallback: use max_step unconditionally
    std::size_t max_steps = 200'000'000;

    void check() const {
        if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("integrator tolerances must be > 0");
        if (!(max_step > 0.0)) throw ConfigError("integrator max_step must be > 0");
        if (!(sample_interval > 0.0)) throw ConfigError("integrator sample_interval must be > 0");
    }
};

// Adaptive embedded Runge-Kutta of order 5(4), Dormand-Prince coefficients.
// Integrates dy/dt = f(t, y) for complex vectors from t0 to t1; t1 < t0
// integrates backwards.  Calls sample(t, y) at t0, then every
// sample_interval, then at t1.
class DormandPrince54 {
public:
    using Rhs = std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>;
    using Sampler = std::function<void(double, const Eigen::VectorXcd&)>;

    explicit DormandPrince54(IntegratorConfig cfg) : m_cfg(cfg) { cfg.check(); }

    std::size_t steps_taken() const { return m_steps; }
    std::size_t steps_rejected() const { return m_rejected; }

    void integrate(const Rhs& f, double t0, double t1, Eigen::VectorXcd& y,
                   const Sampler& sample = nullptr) {
        const double dir = (t1 >= t0) ? 1.0 : -1.0;
        const double span = std::abs(t1 - t0);
        if (span == 0.0) {
            if (sample) sample(t0, y);
            return;
        }
        const Eigen::Index n = y.size();
        Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n), y4(n);

        double t = t0;
        double h = dir * std::min({m_cfg.initial_step, m_cfg.max_step, span});
        if (m_cfg.fixed_step) h = dir * std::min(m_cfg.max_step, span);
        std::size_t sample_count = 0;
        double last_sampled = t0;
        double next_sample = t0;
        if (sample) {
            sample(t0, y);
            next_sample = t0 + dir * m_cfg.sample_interval * double(++sample_count);
        }
        f(t, y, k1);
        m_steps = 0;
        m_rejected = 0;

        while (dir * (t1 - t) > 0.0) {
            if (++m_steps > m_cfg.max_steps)
                throw PropagationError("integrator exceeded max step count", t);
            // land exactly on the next sample time and on t1
            double limit = t1;
            if (sample && dir * (next_sample - t) > 0.0 && dir * (limit - next_sample) > 0.0)
                limit = next_sample;
            if (std::abs(h) > std::abs(limit - t)) h = limit - t;

            // stages
            ytmp = y + h * (a21 * k1);
            f(t + c2 * h, ytmp, k2);
            ytmp = y + h * (a31 * k1 + a32 * k2);
            f(t + c3 * h, ytmp, k3);
            ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            f(t + c4 * h, ytmp, k4);
            ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            f(t + c5 * h, ytmp, k5);
            ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            f(t + h, ytmp, k6);
            y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            f(t + h, y5, k7);
            y4 = y + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            // scaled error estimate
            double err = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                double sc = m_cfg.atol + m_cfg.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                double e = std::abs(y5[i] - y4[i]) / sc;
                err += e * e;
            }
            err = std::sqrt(err / double(n));
            if (!std::isfinite(err) || !y5.allFinite())
                throw PropagationError("non-finite state during propagation", t);

            bool accept = m_cfg.fixed_step || err <= 1.0;
            if (accept) {
                t += h;
                y.swap(y5);
                k1.swap(k7);  // FSAL
                if (sample && dir * (t - next_sample) >= -1e-12 * span) {
                    sample(t, y);
                    last_sampled = t;
                    next_sample = t0 + dir * m_cfg.sample_interval * double(++sample_count);
                }
            } else {
                ++m_rejected;
            }

            if (!m_cfg.fixed_step) {
                double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
                fac = std::clamp(fac, 0.2, 5.0);
                h *= fac;
                if (std::abs(h) > m_cfg.max_step) h = dir * m_cfg.max_step;
                double hmin = 1e-14 * std::max(1.0, std::abs(t));
                if (std::abs(h) < hmin)
                    throw PropagationError("step size underflow (stiffness?)", t);
            }
        }
        if (sample && dir * (t1 - last_sampled) > 1e-12 * span) sample(t1, y);
    }

private:
    IntegratorConfig m_cfg;
    std::size_t m_steps = 0;
    std::size_t m_rejected = 0;

    // Dormand-Prince 5(4) tableau
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double d1 = 5179.0 / 57600, d3 = 7571.0 / 16695, d4 = 393.0 / 640,
                            d5 = -92097.0 / 339200, d6 = 187.0 / 2100, d7 = 1.0 / 40;
};

}

#endif
