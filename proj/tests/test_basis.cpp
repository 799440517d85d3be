#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <unordered_set>

#include "noonsim/basis.hpp"
#include "noonsim/hamiltonian.hpp"
#include "noonsim/oracles.hpp"
#include "noonsim/state.hpp"

using namespace noonsim;

namespace {

OccupationState occ(std::array<int, 6> atoms, int na, int nb) {
    OccupationState s;
    s.atoms = atoms;
    s.na = na;
    s.nb = nb;
    return s;
}

// Exhaustive constraint-side oracle, written independently of
// enumerate_sector's recursion: iterate every composition of M over six
// levels and keep those whose derived photon numbers are non-negative.
std::vector<OccupationState> brute_force_sector(int M, SectorLabel sec) {
    std::vector<OccupationState> out;
    for (int n1 = 0; n1 <= M; ++n1)
        for (int n2 = 0; n2 + n1 <= M; ++n2)
            for (int n3 = 0; n3 + n2 + n1 <= M; ++n3)
                for (int n4 = 0; n4 + n3 + n2 + n1 <= M; ++n4)
                    for (int n5 = 0; n5 + n4 + n3 + n2 + n1 <= M; ++n5) {
                        int n6 = M - n1 - n2 - n3 - n4 - n5;
                        OccupationState s = occ({n1, n2, n3, n4, n5, n6}, 0, 0);
                        if (derive_photons(s, sec)) out.push_back(s);
                    }
    return out;
}

}  // namespace

TEST_CASE("single atom alpha sector has exactly the seed state") {
    auto basis = enumerate_sector(1, SectorLabel::of(Branch::atomic_alpha));
    REQUIRE(basis->size() == 1);
    CHECK(basis->state(0) == occ({0, 0, 1, 0, 0, 0}, 0, 0));
}

TEST_CASE("M=2 alpha sector content") {
    auto basis = enumerate_sector(2, SectorLabel::of(Branch::atomic_alpha));
    REQUIRE(basis->size() == 5);
    // includes the state outside the q,r <= min(k,l) label ranges
    CHECK(basis->contains(occ({0, 0, 0, 1, 1, 0}, 0, 0)));
    CHECK(basis->contains(occ({1, 0, 1, 0, 0, 0}, 0, 0)));
    CHECK(basis->contains(occ({0, 1, 1, 0, 0, 0}, 0, 0)));
    CHECK(basis->contains(occ({0, 0, 2, 0, 0, 0}, 1, 0)));
    CHECK(basis->contains(occ({0, 0, 1, 0, 1, 0}, 0, 1)));
}

TEST_CASE("sector enumeration matches the exhaustive oracle and the bound") {
    for (int M : {2, 3, 5, 8}) {
        for (Branch br : {Branch::atomic_alpha, Branch::atomic_beta}) {
            auto basis = enumerate_sector(M, SectorLabel::of(br));
            auto brute = brute_force_sector(M, SectorLabel::of(br));
            REQUIRE(basis->size() == brute.size());
            for (const auto& s : brute) CHECK(basis->contains(s));
            CHECK(basis->size() <= sector_dimension_bound(M));
        }
    }
    CHECK(sector_dimension_bound(8) == 1287);
}

TEST_CASE("enumeration equals the reachability closure of the seed") {
    for (int M = 1; M <= 6; ++M) {
        for (Branch br : {Branch::atomic_alpha, Branch::atomic_beta}) {
            auto basis = enumerate_sector(M, SectorLabel::of(br));
            auto reach = reachable_closure(M, br);
            CHECK(reach.size() == basis->size());
            for (const auto& s : reach) CHECK(basis->contains(s));
            CHECK(unreachable_states(*basis).empty());
        }
    }
}

TEST_CASE("deterministic ordering and index round trip") {
    auto a = enumerate_sector(5, SectorLabel::of(Branch::atomic_alpha));
    auto b = enumerate_sector(5, SectorLabel::of(Branch::atomic_alpha));
    REQUIRE(a->size() == b->size());
    for (std::size_t i = 0; i < a->size(); ++i) {
        CHECK(a->state(i) == b->state(i));
        CHECK(a->index_of(a->state(i)) == i);
    }
    for (std::size_t i = 1; i < a->size(); ++i)
        CHECK(OccupationState::sector_less(a->state(i - 1), a->state(i)));
}

TEST_CASE("sector charges are conserved by every term, M <= 8") {
    std::vector<HamiltonianTerm> terms = pump_terms();
    for (const auto& t : cavity_terms()) terms.push_back(t);
    for (int M = 1; M <= 8; ++M) {
        for (Branch br : {Branch::atomic_alpha, Branch::atomic_beta}) {
            auto basis = enumerate_sector(M, SectorLabel::of(br));
            auto sec = basis->sector();
            for (std::size_t i = 0; i < basis->size(); ++i) {
                for (const auto& t : terms) {
                    for (bool conj : {false, true}) {
                        auto r = apply_term(basis->state(i), t, conj);
                        if (!r) continue;
                        REQUIRE(sector_Y(r->first) == sec.Y);
                        REQUIRE(sector_Z(r->first) == sec.Z);
                        REQUIRE(basis->contains(r->first));
                    }
                }
            }
        }
    }
}

TEST_CASE("alpha and beta branches share no basis states") {
    for (int M : {2, 4, 8}) {
        auto a = enumerate_sector(M, SectorLabel::of(Branch::atomic_alpha));
        auto b = enumerate_sector(M, SectorLabel::of(Branch::atomic_beta));
        std::unordered_set<std::uint64_t> keys;
        for (const auto& s : a->states()) keys.insert(occupation_key(s));
        for (const auto& s : b->states()) CHECK(!keys.count(occupation_key(s)));
    }
}

TEST_CASE("labels_to_occupation reproduces the published label map") {
    // (0,0,0,0,0) alpha, M=3: the initial-state alpha leg
    auto s = labels_to_occupation(0, 0, 0, 0, 0, Branch::atomic_alpha, 3);
    CHECK(s == occ({2, 0, 1, 0, 0, 0}, 0, 0));
    // (0,1,0,0,0) alpha, M=3: the |1:> alpha leg
    s = labels_to_occupation(0, 1, 0, 0, 0, Branch::atomic_alpha, 3);
    CHECK(s == occ({1, 0, 2, 0, 0, 0}, 1, 0));
    // (0,0,1,1,0) alpha, M=2: q exceeds min(k,l) yet is a valid occupation
    s = labels_to_occupation(0, 0, 1, 1, 0, Branch::atomic_alpha, 2);
    CHECK(s == occ({0, 0, 0, 1, 1, 0}, 0, 0));
    // beta branch: seed on level 5
    s = labels_to_occupation(0, 0, 0, 0, 0, Branch::atomic_beta, 3);
    CHECK(s == occ({2, 0, 0, 0, 1, 0}, 0, 0));

    CHECK_THROWS_AS(labels_to_occupation(0, 0, 0, 1, 0, Branch::atomic_alpha, 3),
                    InvalidLabelError);
    CHECK_THROWS_AS(labels_to_occupation(4, 0, 0, 0, 0, Branch::atomic_alpha, 3),
                    InvalidLabelError);
}

TEST_CASE("label ranges yield a subset of the enumerated sector") {
    for (int M = 1; M <= 6; ++M) {
        for (Branch br : {Branch::atomic_alpha, Branch::atomic_beta}) {
            auto basis = enumerate_sector(M, SectorLabel::of(br));
            for (int m = 0; m <= M; ++m)
                for (int l = 0; l <= M - m; ++l)
                    for (int k = 0; k <= M - m - l; ++k)
                        for (int q = 0; q <= std::min(k, l); ++q)
                            for (int r = 0; r <= std::min(k, l); ++r) {
                                OccupationState s;
                                try {
                                    s = labels_to_occupation(m, k, l, q, r, br, M);
                                } catch (const InvalidLabelError&) {
                                    continue;  // label combination over-commits atoms
                                }
                                CHECK(basis->contains(s));
                            }
        }
    }
}

TEST_CASE("initial states") {
    SECTION("pure alpha branch") {
        auto psi = make_initial_state(1.0, 0.0, 3, InitialStateKind::atomic);
        REQUIRE(psi.branches.size() == 1);
        CHECK(psi.branches[0].basis->sector().branch == Branch::atomic_alpha);
        CHECK(psi.norm() == Catch::Approx(1.0).margin(1e-14));
        auto seed = occ({2, 0, 1, 0, 0, 0}, 0, 0);
        CHECK(std::abs(psi.branches[0].amps[Eigen::Index(psi.branches[0].basis->index_of(seed))] -
                       Complex(1.0, 0.0)) < 1e-14);
    }
    SECTION("balanced superposition") {
        auto psi = make_initial_state(M_SQRT1_2, M_SQRT1_2, 5, InitialStateKind::atomic);
        REQUIRE(psi.branches.size() == 2);
        CHECK(psi.norm() == Catch::Approx(1.0).margin(1e-14));
    }
    SECTION("photonic seed") {
        auto psi = make_initial_state(M_SQRT1_2, Complex(0.0, M_SQRT1_2), 3,
                                      InitialStateKind::photonic);
        REQUIRE(psi.branches.size() == 2);
        CHECK(psi.branches[0].basis->sector().Y == 1);
        CHECK(psi.branches[1].basis->sector().Z == 1);
        // branch weights carry alpha/beta; the per-branch amplitude vector is
        // unit-seeded
        CHECK(std::abs(psi.branches[0].weight - Complex(M_SQRT1_2, 0.0)) < 1e-14);
        CHECK(std::abs(psi.branches[1].weight - Complex(0.0, M_SQRT1_2)) < 1e-14);
        auto seed_a = occ({3, 0, 0, 0, 0, 0}, 1, 0);
        CHECK(std::abs(psi.branches[0].amps[Eigen::Index(
                           psi.branches[0].basis->index_of(seed_a))] -
                       Complex(1.0, 0.0)) < 1e-14);
        CHECK(psi.norm() == Catch::Approx(1.0).margin(1e-14));
    }
    SECTION("normalization is enforced") {
        CHECK_THROWS_AS(make_initial_state(1.0, 0.5, 3, InitialStateKind::atomic),
                        NormalizationError);
    }
}

TEST_CASE("empty sector is an error") {
    SectorLabel bad{-5, 0, Branch::atomic_alpha};
    CHECK_THROWS_AS(enumerate_sector(2, bad), EmptySectorError);
}
