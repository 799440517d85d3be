#ifndef NOONSIM_PROPAGATOR_HPP
#define NOONSIM_PROPAGATOR_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "noonsim/darkstate.hpp"
#include "noonsim/hamiltonian.hpp"
#include "noonsim/integrator.hpp"
#include "noonsim/pulse.hpp"
#include "noonsim/state.hpp"

namespace noonsim {

struct TrajectorySample {
    double t = 0.0;
    double norm = 0.0;        // full-state norm (weights included)
    double n_ph_raw = 0.0;    // <n_a + n_b> with the decaying amplitudes
    double n_ph_cond = 0.0;   // raw / norm^2: expectation conditioned on no decay
    double p_dark = 0.0;      // |<D(Omega(t))|psi>|^2, raw amplitudes
    double p_excited = 0.0;   // population on states with excited atoms, raw
    std::vector<double> p_ladder;  // populations of the |n:> states, n = 0..M-1
    double loss_running = 0.0;     // Gamma * int_0^t n_ph_raw dt' (trapezoid)
    double omega = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    StateVector final_state;
    double g = 1.0;
    double gamma = 1.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;

    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }
};

struct PropagationOptions {
    bool decay_on = true;
    DecayConvention convention = DecayConvention::amplitude;
    DarkVariant dark_variant = DarkVariant::eq2_eq3;
    bool record_ladder = true;
};

// Integrates dpsi/dt = -i (Omega(t) pump + g cav) psi - Gamma D psi over the
// window, sampling observables on the way.  The branch components are
// stacked into one vector so both share a single adaptive step sequence;
// they are dynamically independent, so this is equivalent to separate
// propagation.
inline Trajectory propagate(const StateVector& psi0, std::span<const HamiltonianSet> hams,
                            const PulseShape& pulse, TimeWindow window, IntegratorConfig cfg,
                            PropagationOptions opt = {}) {
    cfg.check();
    if (psi0.branches.size() != hams.size())
        throw DimensionMismatchError("propagate: one HamiltonianSet per branch required");
    for (std::size_t b = 0; b < hams.size(); ++b) {
        if (hams[b].basis != psi0.branches[b].basis &&
            hams[b].basis->size() != psi0.branches[b].basis->size())
            throw DimensionMismatchError("propagate: operator/state basis mismatch");
    }
    if (window.lo() < pulse.window().lo() - 1e-12 || window.hi() > pulse.window().hi() + 1e-12)
        throw PulseWindowError("propagate: window not contained in the pulse validity window");
    double n0 = psi0.norm();
    if (std::abs(n0 - 1.0) > 1e-6)
        throw NormalizationError("propagate: initial state norm " + std::to_string(n0));

    const std::size_t nb = psi0.branches.size();
    std::vector<Eigen::Index> offset(nb + 1, 0);
    for (std::size_t b = 0; b < nb; ++b)
        offset[b + 1] = offset[b] + Eigen::Index(psi0.branches[b].basis->size());
    Eigen::VectorXcd y(offset[nb]);
    for (std::size_t b = 0; b < nb; ++b)
        y.segment(offset[b], Eigen::Index(psi0.branches[b].basis->size())) = psi0.branches[b].amps;

    // per-branch observable tables
    struct BranchTables {
        Eigen::VectorXd photons;
        Eigen::VectorXd excited_mask;
        std::vector<std::size_t> ladder;  // empty for photonic branches
        double w2 = 1.0;
        bool atomic = false;
    };
    std::vector<BranchTables> tab(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const SectorBasis& basis = *psi0.branches[b].basis;
        BranchTables& tb = tab[b];
        tb.photons.resize(Eigen::Index(basis.size()));
        tb.excited_mask.resize(Eigen::Index(basis.size()));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            tb.photons[Eigen::Index(i)] = double(basis.state(i).photons());
            tb.excited_mask[Eigen::Index(i)] = basis.state(i).excited_atoms() > 0 ? 1.0 : 0.0;
        }
        tb.w2 = std::norm(psi0.branches[b].weight);
        Branch br = basis.sector().branch;
        tb.atomic = (br == Branch::atomic_alpha || br == Branch::atomic_beta);
        if (tb.atomic && opt.record_ladder) tb.ladder = ladder_indices(basis);
    }
    const int M = psi0.branches.front().basis->atom_count();
    const double g = hams.front().g;
    const double gamma = hams.front().gamma;
    const bool decay = opt.decay_on && gamma != 0.0;

    auto rhs = [&](double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
        double om = pulse.value(t);
        dx.setZero();
        for (std::size_t b = 0; b < nb; ++b) {
            auto xs = x.segment(offset[b], offset[b + 1] - offset[b]);
            auto ds = dx.segment(offset[b], offset[b + 1] - offset[b]);
            if (om != 0.0) hams[b].pump.accumulate(xs, ds, Complex(0.0, -om));
            hams[b].cav.accumulate(xs, ds, Complex(0.0, -hams[b].g));
            if (decay) {
                double f = hams[b].gamma * decay_rate_factor(opt.convention);
                ds.array() -= f * hams[b].decay.array() * xs.array();
            }
        }
    };

    Trajectory traj;
    traj.g = g;
    traj.gamma = gamma;
    double prev_t = window.t0;
    double prev_nph = 0.0;
    double loss_acc = 0.0;
    bool first = true;

    auto sampler = [&](double t, const Eigen::VectorXcd& x) {
        TrajectorySample s;
        s.t = t;
        s.omega = pulse.value(t);
        double norm2 = 0.0, nph = 0.0, exc = 0.0;
        if (opt.record_ladder) s.p_ladder.assign(std::size_t(M), 0.0);
        for (std::size_t b = 0; b < nb; ++b) {
            auto xs = x.segment(offset[b], offset[b + 1] - offset[b]);
            double w2 = tab[b].w2;
            norm2 += w2 * xs.squaredNorm();
            nph += w2 * (tab[b].photons.array() * xs.array().abs2()).sum();
            exc += w2 * (tab[b].excited_mask.array() * xs.array().abs2()).sum();
            for (std::size_t n = 0; n < tab[b].ladder.size(); ++n)
                s.p_ladder[n] += w2 * std::norm(xs[Eigen::Index(tab[b].ladder[n])]);
        }
        s.norm = std::sqrt(norm2);
        s.n_ph_raw = nph;
        s.n_ph_cond = norm2 > 0.0 ? nph / norm2 : 0.0;
        s.p_excited = exc;
        // dark overlap: sum over atomic branches of |w|^2 c.amps on ladder legs
        Complex dov(0.0, 0.0);
        bool any_atomic = false;
        Eigen::VectorXd c;
        for (std::size_t b = 0; b < nb; ++b) {
            if (!tab[b].atomic || tab[b].ladder.empty()) continue;
            if (!any_atomic) c = dark_coefficients(M, s.omega / g, opt.dark_variant);
            any_atomic = true;
            auto xs = x.segment(offset[b], offset[b + 1] - offset[b]);
            Complex acc(0.0, 0.0);
            for (std::size_t n = 0; n < tab[b].ladder.size(); ++n)
                acc += c[Eigen::Index(n)] * xs[Eigen::Index(tab[b].ladder[n])];
            dov += tab[b].w2 * acc;
        }
        s.p_dark = any_atomic ? std::norm(dov) : std::nan("");
        if (first) {
            first = false;
        } else {
            loss_acc += 0.5 * (prev_nph + nph) * (t - prev_t) * gamma;
        }
        prev_t = t;
        prev_nph = nph;
        s.loss_running = loss_acc;
        traj.samples.push_back(std::move(s));
    };

    DormandPrince54 rk(cfg);
    rk.integrate(rhs, window.t0, window.t1, y, sampler);
    traj.steps = rk.steps_taken();
    traj.rejected = rk.steps_rejected();

    traj.final_state = psi0;
    for (std::size_t b = 0; b < nb; ++b)
        traj.final_state.branches[b].amps = y.segment(offset[b], offset[b + 1] - offset[b]);
    return traj;
}

struct LossIntegral {
    double kappa_weighted = 0.0;       // kappa * int n_ph_raw dt
    double gamma_weighted = 0.0;       // Gamma * int n_ph_raw dt
    double kappa_weighted_cond = 0.0;  // same with the norm-conditioned photon number
    double gamma_weighted_cond = 0.0;
};

// Trapezoidal cavity-loss figure of merit over the sampled trajectory.
inline LossIntegral loss_integral(const Trajectory& traj, double kappa) {
    if (traj.samples.empty()) throw Error("loss_integral: empty trajectory");
    double raw = 0.0, cond = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const auto& a = traj.samples[i - 1];
        const auto& b = traj.samples[i];
        double dt = b.t - a.t;
        raw += 0.5 * (a.n_ph_raw + b.n_ph_raw) * dt;
        cond += 0.5 * (a.n_ph_cond + b.n_ph_cond) * dt;
    }
    LossIntegral li;
    li.kappa_weighted = kappa * raw;
    li.gamma_weighted = traj.gamma * raw;
    li.kappa_weighted_cond = kappa * cond;
    li.gamma_weighted_cond = traj.gamma * cond;
    return li;
}

struct PeakPhotonPoint {
    double t;
    double n_ph;
    double estimate;  // min(Omega/g, M-1)
};

struct PeakPhotonReport {
    std::vector<PeakPhotonPoint> series;
    double max_rel_deviation = 0.0;  // over the region Omega > g
    bool region_nonempty = false;
};

// Compares the conditioned photon number against the saturating estimate
// min(Omega/g, M-1).  The estimate is the strong-pump accumulation value, so
// the deviation is only meaningful (and only reported) where Omega > g.
inline PeakPhotonReport peak_photon_check(const Trajectory& traj, const PulseShape& pulse, double g,
                                          int M) {
    PeakPhotonReport rep;
    for (const auto& s : traj.samples) {
        double om = pulse.value(s.t);
        PeakPhotonPoint p;
        p.t = s.t;
        p.n_ph = s.n_ph_cond;
        p.estimate = std::min(om / g, double(M - 1));
        rep.series.push_back(p);
        if (om > g) {
            rep.region_nonempty = true;
            double rel = std::abs(p.n_ph - p.estimate) / std::max(p.estimate, 1e-12);
            rep.max_rel_deviation = std::max(rep.max_rel_deviation, rel);
        }
    }
    return rep;
}

}

#endif
