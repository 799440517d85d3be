#ifndef NOONSIM_OCCUPATION_HPP
#define NOONSIM_OCCUPATION_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "noonsim/errors.hpp"

namespace noonsim {

// One collective (permutation-symmetric) basis vector: atom counts in the
// six internal levels plus the photon numbers of the two cavity modes.
// Within a sector the photon numbers are redundant (see SectorLabel), but
// they are kept explicit so a state is self-describing after operations
// that leave the sector (e.g. the 3<->5 rotation).
struct OccupationState {
    std::array<int, 6> atoms{};  // atoms[k] = population of level |k+1>
    int na = 0;                  // photons in cavity mode a
    int nb = 0;                  // photons in cavity mode b

    int level(int k) const { return atoms[k - 1]; }          // k in 1..6
    int& level(int k) { return atoms[k - 1]; }

    int total_atoms() const {
        int m = 0;
        for (int v : atoms) m += v;
        return m;
    }
    // Number of atoms in the short-lived levels |2>, |4>, |6>; this is the
    // (m+q+r) factor of the amplitude decay rate.
    int excited_atoms() const { return atoms[1] + atoms[3] + atoms[5]; }
    int photons() const { return na + nb; }

    bool valid() const {
        for (int v : atoms)
            if (v < 0) return false;
        return na >= 0 && nb >= 0;
    }

    friend bool operator==(const OccupationState&, const OccupationState&) = default;

    // Sector-internal ordering: lexicographic in (n2,n3,n4,n5,n6).  n1 and
    // the photon numbers are determined by these within a sector.
    static bool sector_less(const OccupationState& a, const OccupationState& b) {
        for (int k = 1; k < 6; ++k) {
            if (a.atoms[k] != b.atoms[k]) return a.atoms[k] < b.atoms[k];
        }
        return false;
    }

    std::string to_string() const {
        std::string s = "(";
        for (int k = 0; k < 6; ++k) s += std::to_string(atoms[k]) + (k < 5 ? "," : ";");
        s += std::to_string(na) + "," + std::to_string(nb) + ")";
        return s;
    }
};

// Branch of the initial superposition.  The atomic branches carry the
// sigma_31 / sigma_51 seed; the photonic ones a single photon seed.
enum class Branch { atomic_alpha, atomic_beta, photonic_alpha, photonic_beta };

inline const char* branch_name(Branch b) {
    switch (b) {
        case Branch::atomic_alpha: return "atomic_alpha";
        case Branch::atomic_beta: return "atomic_beta";
        case Branch::photonic_alpha: return "photonic_alpha";
        case Branch::photonic_beta: return "photonic_beta";
    }
    return "?";
}

// Conserved sector charges.  Every term of the interaction Hamiltonian
// leaves Y = na - n3 - n4 + n6 and Z = nb - n5 - n6 + n4 unchanged, which
// is what makes the per-branch amplitude split exact.
struct SectorLabel {
    int Y = 0;
    int Z = 0;
    Branch branch = Branch::atomic_alpha;

    static SectorLabel of(Branch b) {
        switch (b) {
            case Branch::atomic_alpha: return {-1, 0, b};
            case Branch::atomic_beta: return {0, -1, b};
            case Branch::photonic_alpha: return {+1, 0, b};
            case Branch::photonic_beta: return {0, +1, b};
        }
        return {};
    }

    friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

inline int sector_Y(const OccupationState& s) { return s.na - s.level(3) - s.level(4) + s.level(6); }
inline int sector_Z(const OccupationState& s) { return s.nb - s.level(5) - s.level(6) + s.level(4); }

// Fills in the photon numbers demanded by the sector charges.  Returns false
// if either would be negative (the occupation does not belong to the sector).
inline bool derive_photons(OccupationState& s, const SectorLabel& sec) {
    s.na = s.level(3) + s.level(4) - s.level(6) + sec.Y;
    s.nb = s.level(5) + s.level(6) - s.level(4) + sec.Z;
    return s.na >= 0 && s.nb >= 0;
}

// Occupation content of the |m,k,l,q,r> labels used in the amplitude
// expansion, including the extra seed excitation of the given branch.
// alpha branch: (n2,n3,n4,n5,n6,na,nb) = (m, k-q+1, q, l-r, r, k-r, l-q),
// beta branch:  n3 = k-q, n5 = l-r+1, rest identical.
inline OccupationState labels_to_occupation(int m, int k, int l, int q, int r, Branch branch,
                                            int M) {
    if (branch != Branch::atomic_alpha && branch != Branch::atomic_beta)
        throw InvalidLabelError("labels_to_occupation: labels are defined for the atomic branches");
    OccupationState s;
    s.level(2) = m;
    s.level(3) = k - q + (branch == Branch::atomic_alpha ? 1 : 0);
    s.level(4) = q;
    s.level(5) = l - r + (branch == Branch::atomic_beta ? 1 : 0);
    s.level(6) = r;
    s.na = k - r;
    s.nb = l - q;
    int used = s.level(2) + s.level(3) + s.level(4) + s.level(5) + s.level(6);
    s.level(1) = M - used;
    if (!s.valid() || s.level(1) < 0)
        throw InvalidLabelError("labels_to_occupation: labels (" + std::to_string(m) + "," +
                                std::to_string(k) + "," + std::to_string(l) + "," +
                                std::to_string(q) + "," + std::to_string(r) +
                                ") give a negative occupation for M=" + std::to_string(M));
    return s;
}

// Compact key for hash maps; occupations are bounded by the atom number so
// 8 bits per field is plenty.
inline std::uint64_t occupation_key(const OccupationState& s) {
    std::uint64_t k = 0;
    for (int i = 1; i < 6; ++i) k = (k << 8) | std::uint64_t(s.atoms[i] & 0xff);
    k = (k << 8) | std::uint64_t(s.na & 0xff);
    k = (k << 8) | std::uint64_t(s.nb & 0xff);
    return k;
}

}

#endif
