#ifndef NOONSIM_ORACLES_HPP
#define NOONSIM_ORACLES_HPP

#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "noonsim/basis.hpp"
#include "noonsim/hamiltonian.hpp"

namespace noonsim {

// First-quantized cross-check: the Hamiltonian acting on the distinct-atom
// space (explicit level assignment per atom, photon Fock cutoffs) sandwiched
// between normalized symmetric states.  Every collective square-root factor
// of the symmetric-subspace assembly must reproduce these matrix elements
// entrywise.  Exponential in M; intended for M <= 4.
class FirstQuantizedOracle {
public:
    explicit FirstQuantizedOracle(int M) : m_M(M), m_na_max(M + 1), m_nb_max(M + 1) {}

    Eigen::MatrixXd project_pump(const SectorBasis& basis) const {
        return project(basis, pump_terms());
    }
    Eigen::MatrixXd project_cav(const SectorBasis& basis) const {
        return project(basis, cavity_terms());
    }

private:
    // Distinct-atom configuration: per-atom level plus photon numbers.
    struct Assignment {
        std::vector<int> levels;
        int na, nb;
    };

    std::size_t index(const std::vector<int>& levels, int na, int nb) const {
        std::size_t li = 0;
        for (int i = 0; i < m_M; ++i) li = li * 6 + std::size_t(levels[std::size_t(i)] - 1);
        return (li * std::size_t(m_na_max + 1) + std::size_t(na)) * std::size_t(m_nb_max + 1) +
               std::size_t(nb);
    }

    // All level assignments realizing an occupation, each with amplitude
    // 1/sqrt(multiplicity): the normalized permutation-symmetric state.
    std::vector<Assignment> symmetric_assignments(const OccupationState& s) const {
        std::vector<Assignment> out;
        std::vector<int> levels(static_cast<std::size_t>(m_M));
        std::array<int, 6> remaining = s.atoms;
        struct Rec {
            static void go(int pos, int M, std::vector<int>& levels, std::array<int, 6>& rem,
                           const OccupationState& s, std::vector<Assignment>& out) {
                if (pos == M) {
                    out.push_back({levels, s.na, s.nb});
                    return;
                }
                for (int l = 0; l < 6; ++l) {
                    if (rem[std::size_t(l)] == 0) continue;
                    rem[std::size_t(l)] -= 1;
                    levels[std::size_t(pos)] = l + 1;
                    go(pos + 1, M, levels, rem, s, out);
                    rem[std::size_t(l)] += 1;
                }
            }
        };
        Rec::go(0, m_M, levels, remaining, s, out);
        return out;
    }

    // O |sym_c> as a map big-space index -> amplitude, applying each term to
    // each individual atom of each assignment.
    std::unordered_map<std::size_t, double> apply_symmetric(
        const OccupationState& sc, const std::vector<HamiltonianTerm>& terms) const {
        auto assigns = symmetric_assignments(sc);
        double amp0 = 1.0 / std::sqrt(double(assigns.size()));
        std::unordered_map<std::size_t, double> out;
        for (auto& a : assigns) {
            for (const auto& t : terms) {
                for (bool conj : {false, true}) {
                    int u = conj ? t.to_level : t.from_level;
                    int v = conj ? t.from_level : t.to_level;
                    bool destroy = conj ? !t.annihilate : t.annihilate;
                    double ph_amp = 1.0;
                    int na2 = a.na, nb2 = a.nb;
                    if (t.photon != PhotonMode::none) {
                        int& nph = (t.photon == PhotonMode::a) ? na2 : nb2;
                        int cap = (t.photon == PhotonMode::a) ? m_na_max : m_nb_max;
                        if (destroy) {
                            if (nph == 0) continue;
                            ph_amp = std::sqrt(double(nph));
                            nph -= 1;
                        } else {
                            if (nph + 1 > cap) continue;  // cutoff, orthogonal to any sandwich
                            ph_amp = std::sqrt(double(nph + 1));
                            nph += 1;
                        }
                    }
                    for (int i = 0; i < m_M; ++i) {
                        if (a.levels[std::size_t(i)] != u) continue;
                        a.levels[std::size_t(i)] = v;
                        out[index(a.levels, na2, nb2)] += amp0 * ph_amp;
                        a.levels[std::size_t(i)] = u;
                    }
                }
            }
        }
        return out;
    }

    Eigen::MatrixXd project(const SectorBasis& basis, const std::vector<HamiltonianTerm>& terms) const {
        const std::size_t n = basis.size();
        Eigen::MatrixXd res = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
        for (std::size_t c = 0; c < n; ++c) {
            auto img = apply_symmetric(basis.state(c), terms);
            for (std::size_t r = 0; r < n; ++r) {
                auto sup = symmetric_assignments(basis.state(r));
                double amp = 1.0 / std::sqrt(double(sup.size()));
                double acc = 0.0;
                for (const auto& a : sup) {
                    auto it = img.find(index(a.levels, a.na, a.nb));
                    if (it != img.end()) acc += amp * it->second;
                }
                res(Eigen::Index(r), Eigen::Index(c)) = acc;
            }
        }
        return res;
    }

    int m_M, m_na_max, m_nb_max;
};

// Reachability closure of the branch seed under all Hamiltonian term
// directions: the dynamics-side route to the sector content, independent of
// the constraint-based enumeration.
inline std::vector<OccupationState> reachable_closure(int M, Branch branch) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<OccupationState> all;
    std::vector<OccupationState> frontier{seed_state(M, branch)};
    seen.insert(occupation_key(frontier.front()));
    all.push_back(frontier.front());
    std::vector<HamiltonianTerm> terms = pump_terms();
    for (const auto& t : cavity_terms()) terms.push_back(t);
    while (!frontier.empty()) {
        std::vector<OccupationState> next;
        for (const auto& s : frontier) {
            for (const auto& t : terms) {
                for (bool conj : {false, true}) {
                    auto res = apply_term(s, t, conj);
                    if (!res) continue;
                    if (seen.insert(occupation_key(res->first)).second) {
                        next.push_back(res->first);
                        all.push_back(res->first);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return all;
}

// States the enumeration admits but the dynamics never reaches from the
// seed.  Flagged by validation; expected to be empty.
inline std::vector<OccupationState> unreachable_states(const SectorBasis& basis) {
    auto reach = reachable_closure(basis.atom_count(), basis.sector().branch);
    std::unordered_set<std::uint64_t> keys;
    for (const auto& s : reach) keys.insert(occupation_key(s));
    std::vector<OccupationState> out;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!keys.count(occupation_key(basis.state(i)))) out.push_back(basis.state(i));
    return out;
}

}

#endif
