#ifndef NOONSIM_ADIABATICITY_HPP
#define NOONSIM_ADIABATICITY_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "noonsim/propagator.hpp"
#include "noonsim/pulse.hpp"

namespace noonsim {

// Margins of the two adiabaticity conditions along a trajectory:
//   margin_empty  = (g^2/Gamma) / |dOmega/dt / Omega|          (empty cavity)
//   margin_photon = (g^2 max(n_ph,1)/Gamma) / |dOmega/dt / Omega|
// A margin > 1 means the condition holds at that instant.  Instants where
// Omega vanishes have no defined margin; they are skipped and counted.
struct AdiabaticityPoint {
    double t = 0.0;
    double omega_dot_over_omega = 0.0;
    double margin_empty = 0.0;
    double margin_photon = 0.0;
};

struct AdiabaticityReport {
    std::vector<AdiabaticityPoint> series;
    double min_margin_empty = std::numeric_limits<double>::infinity();
    double min_margin_photon = std::numeric_limits<double>::infinity();
    double argmin_empty = 0.0;
    double argmin_photon = 0.0;
    // same minima restricted to the transfer region Omega > g
    double min_margin_empty_transfer = std::numeric_limits<double>::infinity();
    double min_margin_photon_transfer = std::numeric_limits<double>::infinity();
    std::size_t skipped_zero_omega = 0;
};

inline AdiabaticityReport adiabaticity_report(const PulseShape& pulse, const Trajectory& traj,
                                              double g, double gamma) {
    AdiabaticityReport rep;
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples) {
        double om = s.omega;
        if (om == 0.0) {
            ++rep.skipped_zero_omega;
            continue;
        }
        double rate = std::abs(pulse.derivative(s.t) / om);
        AdiabaticityPoint p;
        p.t = s.t;
        p.omega_dot_over_omega = rate;
        double base = g * g / gamma;
        p.margin_empty = rate > 0.0 ? base / rate : inf;
        p.margin_photon = rate > 0.0 ? base * std::max(s.n_ph_cond, 1.0) / rate : inf;
        rep.series.push_back(p);
        if (p.margin_empty < rep.min_margin_empty) {
            rep.min_margin_empty = p.margin_empty;
            rep.argmin_empty = p.t;
        }
        if (p.margin_photon < rep.min_margin_photon) {
            rep.min_margin_photon = p.margin_photon;
            rep.argmin_photon = p.t;
        }
        if (om > g) {
            rep.min_margin_empty_transfer = std::min(rep.min_margin_empty_transfer, p.margin_empty);
            rep.min_margin_photon_transfer =
                std::min(rep.min_margin_photon_transfer, p.margin_photon);
        }
    }
    return rep;
}

}

#endif
