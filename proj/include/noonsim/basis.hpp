#ifndef NOONSIM_BASIS_HPP
#define NOONSIM_BASIS_HPP

#include <algorithm>
#include <cstddef>
#include <memory>
#include <unordered_map>
#include <vector>

#include "noonsim/errors.hpp"
#include "noonsim/occupation.hpp"

namespace noonsim {

// Ordered enumeration of every occupation state of one conserved sector.
// Immutable after construction; safe to share between threads.
class SectorBasis {
public:
    SectorBasis(int M, SectorLabel sector, std::vector<OccupationState> states)
        : m_M(M), m_sector(sector), m_states(std::move(states)) {
        m_index.reserve(m_states.size());
        for (std::size_t i = 0; i < m_states.size(); ++i)
            m_index.emplace(occupation_key(m_states[i]), i);
    }

    int atom_count() const { return m_M; }
    const SectorLabel& sector() const { return m_sector; }
    std::size_t size() const { return m_states.size(); }
    const OccupationState& state(std::size_t i) const { return m_states[i]; }
    const std::vector<OccupationState>& states() const { return m_states; }

    bool contains(const OccupationState& s) const {
        return m_index.find(occupation_key(s)) != m_index.end();
    }
    // Index of a state; throws if the state is not part of the sector.
    std::size_t index_of(const OccupationState& s) const {
        auto it = m_index.find(occupation_key(s));
        if (it == m_index.end())
            throw Error("SectorBasis: state " + s.to_string() + " not in sector");
        return it->second;
    }
    // Index lookup that reports absence instead of throwing.
    std::ptrdiff_t find(const OccupationState& s) const {
        auto it = m_index.find(occupation_key(s));
        return it == m_index.end() ? -1 : std::ptrdiff_t(it->second);
    }

private:
    int m_M;
    SectorLabel m_sector;
    std::vector<OccupationState> m_states;
    std::unordered_map<std::uint64_t, std::size_t> m_index;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

// All occupation states with sum(n_i) = M whose photon numbers, derived from
// the sector charges, are non-negative.  The enumeration runs over atomic
// occupation vectors rather than the (m,k,l,q,r) label ranges: the label
// ranges with q,r <= min(k,l) miss reachable states (e.g. M=2, one atom each
// in |4> and |5>), while occupation vectors are closed under every
// Hamiltonian term by construction.
inline BasisPtr enumerate_sector(int M, SectorLabel sector) {
    if (M < 1) throw Error("enumerate_sector: M must be >= 1");
    std::vector<OccupationState> states;
    for (int n2 = 0; n2 <= M; ++n2)
        for (int n3 = 0; n3 + n2 <= M; ++n3)
            for (int n4 = 0; n4 + n3 + n2 <= M; ++n4)
                for (int n5 = 0; n5 + n4 + n3 + n2 <= M; ++n5)
                    for (int n6 = 0; n6 + n5 + n4 + n3 + n2 <= M; ++n6) {
                        OccupationState s;
                        s.atoms = {M - n2 - n3 - n4 - n5 - n6, n2, n3, n4, n5, n6};
                        if (!derive_photons(s, sector)) continue;
                        states.push_back(s);
                    }
    if (states.empty())
        throw EmptySectorError("enumerate_sector: sector (Y=" + std::to_string(sector.Y) +
                               ", Z=" + std::to_string(sector.Z) + ") is empty for M=" +
                               std::to_string(M));
    std::sort(states.begin(), states.end(), OccupationState::sector_less);
    return std::make_shared<SectorBasis>(M, sector, std::move(states));
}

// Hard combinatorial bound on a sector dimension: the number of atomic
// occupation vectors, C(M+5,5).
inline std::size_t sector_dimension_bound(int M) {
    std::size_t r = 1;
    for (int i = 1; i <= 5; ++i) r = r * std::size_t(M + i) / std::size_t(i);
    return r;
}

// Occupation of the branch seed state: the one the propagation starts from.
inline OccupationState seed_state(int M, Branch branch) {
    OccupationState s;
    switch (branch) {
        case Branch::atomic_alpha:
            s.atoms = {M - 1, 0, 1, 0, 0, 0};
            break;
        case Branch::atomic_beta:
            s.atoms = {M - 1, 0, 0, 0, 1, 0};
            break;
        case Branch::photonic_alpha:
            s.atoms = {M, 0, 0, 0, 0, 0};
            s.na = 1;
            break;
        case Branch::photonic_beta:
            s.atoms = {M, 0, 0, 0, 0, 0};
            s.nb = 1;
            break;
    }
    return s;
}

}

#endif
