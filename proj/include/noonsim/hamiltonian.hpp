#ifndef NOONSIM_HAMILTONIAN_HPP
#define NOONSIM_HAMILTONIAN_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "noonsim/basis.hpp"
#include "noonsim/occupation.hpp"
#include "noonsim/sparse.hpp"

namespace noonsim {

// On the symmetric subspace the collective flip sigma_vu acts like a pair of
// bosonic mode operators: moving one atom u -> v carries sqrt(n_u (n_v + 1)).
// Returns the target occupation and that amplitude; amplitude 0 when the
// source level is empty.
inline std::pair<OccupationState, double> collective_flip_element(const OccupationState& s,
                                                                  int from_level, int to_level) {
    if (s.level(from_level) == 0) return {s, 0.0};
    OccupationState t = s;
    double amp = std::sqrt(double(t.level(from_level)) * double(t.level(to_level) + 1));
    t.level(from_level) -= 1;
    t.level(to_level) += 1;
    return {t, amp};
}

enum class PhotonMode { none, a, b };

// One directed term of the interaction Hamiltonian: an atomic flip
// from_level -> to_level accompanied by a photon action.  The Hermitian
// conjugate direction is generated during assembly.
struct HamiltonianTerm {
    int from_level;
    int to_level;
    PhotonMode photon;
    bool annihilate;  // true: photon destroyed along with the flip
};

// Pump term Omega sigma_21 (coefficient applied at propagation time).
inline const std::vector<HamiltonianTerm>& pump_terms() {
    static const std::vector<HamiltonianTerm> t = {{1, 2, PhotonMode::none, false}};
    return t;
}

// Cavity terms a(sigma_23 + sigma_65) + b(sigma_25 + sigma_43); the photon
// is annihilated while the atom is promoted into the excited manifold.
inline const std::vector<HamiltonianTerm>& cavity_terms() {
    static const std::vector<HamiltonianTerm> t = {
        {3, 2, PhotonMode::a, true},
        {5, 6, PhotonMode::a, true},
        {5, 2, PhotonMode::b, true},
        {3, 4, PhotonMode::b, true},
    };
    return t;
}

// Applies one directed term to an occupation state.  Empty result when the
// term annihilates an empty level or an empty photon mode.
inline std::optional<std::pair<OccupationState, double>> apply_term(const OccupationState& s,
                                                                    const HamiltonianTerm& term,
                                                                    bool conjugate = false) {
    int u = conjugate ? term.to_level : term.from_level;
    int v = conjugate ? term.from_level : term.to_level;
    auto [t, amp] = collective_flip_element(s, u, v);
    if (amp == 0.0) return std::nullopt;
    if (term.photon != PhotonMode::none) {
        int& nph = (term.photon == PhotonMode::a) ? t.na : t.nb;
        bool destroy = conjugate ? !term.annihilate : term.annihilate;
        if (destroy) {
            if (nph == 0) return std::nullopt;
            amp *= std::sqrt(double(nph));
            nph -= 1;
        } else {
            amp *= std::sqrt(double(nph + 1));
            nph += 1;
        }
    }
    return std::make_pair(t, amp);
}

// Whether amplitude decay runs at the literal rate (n2+n4+n6)*Gamma or at
// the conventional half linewidth per excited atom.
enum class DecayConvention { amplitude, population };

inline const char* decay_convention_name(DecayConvention c) {
    return c == DecayConvention::amplitude ? "amplitude" : "population";
}

inline double decay_rate_factor(DecayConvention c) {
    return c == DecayConvention::amplitude ? 1.0 : 0.5;
}

// The assembled operators of one sector.  pump and cav hold the coupling
// patterns without their scalar coefficients; decay is the per-state count
// of excited atoms.  Immutable after construction.
struct HamiltonianSet {
    BasisPtr basis;
    SparseOperator pump;   // sigma_21 + sigma_12
    SparseOperator cav;    // cavity pattern, coefficient g applied later
    Eigen::VectorXd decay; // n2 + n4 + n6 per basis state
    double g = 1.0;
    double gamma = 1.0;

    std::size_t dimension() const { return basis->size(); }
};

namespace detail {

inline SparseOperator assemble_hermitian(const SectorBasis& basis,
                                         const std::vector<HamiltonianTerm>& terms) {
    std::vector<SparseOperator::Triplet> trip;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (const auto& term : terms) {
            for (bool conj : {false, true}) {
                auto res = apply_term(basis.state(i), term, conj);
                if (!res) continue;
                std::ptrdiff_t j = basis.find(res->first);
                if (j < 0)
                    throw Error("assemble: term image " + res->first.to_string() +
                                " left the sector; enumeration is incomplete");
                trip.push_back({std::size_t(j), i, Complex(res->second, 0.0)});
            }
        }
    }
    return SparseOperator(basis.size(), std::move(trip), /*hermitian=*/true);
}

}

inline HamiltonianSet build_hamiltonian_set(BasisPtr basis, double g, double gamma) {
    HamiltonianSet h;
    h.basis = basis;
    h.pump = detail::assemble_hermitian(*basis, pump_terms());
    h.cav = detail::assemble_hermitian(*basis, cavity_terms());
    h.decay.resize(Eigen::Index(basis->size()));
    for (std::size_t i = 0; i < basis->size(); ++i)
        h.decay[Eigen::Index(i)] = double(basis->state(i).excited_atoms());
    h.g = g;
    h.gamma = gamma;
    return h;
}

// Effective Hamiltonian action on one branch amplitude vector:
//   (Omega * pump + g * cav) psi  -  i * Gamma * decay .* psi  (if decay_on).
// The Schroedinger right-hand side is -i times this.
inline Eigen::VectorXcd apply(const HamiltonianSet& h, double omega, const Eigen::VectorXcd& psi,
                              bool decay_on,
                              DecayConvention convention = DecayConvention::amplitude) {
    if (std::size_t(psi.size()) != h.dimension())
        throw DimensionMismatchError("apply: state dimension does not match operators");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
    if (omega != 0.0) h.pump.accumulate(psi, out, Complex(omega, 0.0));
    h.cav.accumulate(psi, out, Complex(h.g, 0.0));
    if (decay_on && h.gamma != 0.0) {
        double f = h.gamma * decay_rate_factor(convention);
        out.array() -= Complex(0.0, f) * h.decay.array() * psi.array();
    }
    return out;
}

}

#endif
