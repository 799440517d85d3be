#ifndef NOONSIM_STATE_HPP
#define NOONSIM_STATE_HPP

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "noonsim/basis.hpp"
#include "noonsim/errors.hpp"

namespace noonsim {

// One dynamically decoupled component of the full state: a fixed complex
// weight (alpha or beta, constant in time) times a unit-seeded amplitude
// vector over the branch's sector basis.
struct BranchComponent {
    BasisPtr basis;
    Complex weight;
    Eigen::VectorXcd amps;
};

// Weighted pair (or singleton) of branch components.  The physical state is
// sum_b weight_b * sum_i amps_i |basis_i>; the branches live in disjoint
// sectors so cross terms never appear.
struct StateVector {
    std::vector<BranchComponent> branches;

    double norm2() const {
        double n = 0.0;
        for (const auto& b : branches) n += std::norm(b.weight) * b.amps.squaredNorm();
        return n;
    }
    double norm() const { return std::sqrt(norm2()); }
};

enum class InitialStateKind { atomic, photonic };

// (alpha sigma_31 + beta sigma_51)|vac> for the atomic kind, or a single
// cavity photon in superposition of the two modes for the photonic kind.
// Branches with zero weight are dropped.
inline StateVector make_initial_state(Complex alpha, Complex beta, int M, InitialStateKind kind) {
    double n = std::norm(alpha) + std::norm(beta);
    if (std::abs(n - 1.0) > 1e-12)
        throw NormalizationError("make_initial_state: |alpha|^2 + |beta|^2 = " + std::to_string(n) +
                                 ", expected 1");
    StateVector psi;
    auto add = [&](Branch br, Complex w) {
        if (w == Complex(0.0, 0.0)) return;
        BranchComponent c;
        c.basis = enumerate_sector(M, SectorLabel::of(br));
        c.weight = w;
        c.amps = Eigen::VectorXcd::Zero(Eigen::Index(c.basis->size()));
        c.amps[Eigen::Index(c.basis->index_of(seed_state(M, br)))] = Complex(1.0, 0.0);
        psi.branches.push_back(std::move(c));
    };
    if (kind == InitialStateKind::atomic) {
        add(Branch::atomic_alpha, alpha);
        add(Branch::atomic_beta, beta);
    } else {
        add(Branch::photonic_alpha, alpha);
        add(Branch::photonic_beta, beta);
    }
    return psi;
}

}

#endif
