#include <catch2/catch_amalgamated.hpp>

#include "noonsim/darkstate.hpp"
#include "noonsim/state.hpp"

using namespace noonsim;

TEST_CASE("dark state at Omega = 0 is the initial state") {
    for (int M = 1; M <= 8; ++M) {
        Eigen::VectorXd c = dark_coefficients(M, 0.0);
        CHECK(c[0] == 1.0);
        for (int n = 1; n < M; ++n) CHECK(c[n] == 0.0);
        StateVector d = analytic_dark_state(0.0, 1.0, M, M_SQRT1_2, M_SQRT1_2);
        StateVector psi0 = make_initial_state(M_SQRT1_2, M_SQRT1_2, M, InitialStateKind::atomic);
        Complex ov(0.0, 0.0);
        for (std::size_t b = 0; b < d.branches.size(); ++b)
            ov += std::conj(d.branches[b].weight) * psi0.branches[b].weight *
                  d.branches[b].amps.dot(psi0.branches[b].amps);
        CHECK(std::abs(ov - Complex(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("M=2 coefficients match the hand-derived null vector") {
    // alpha-sector null condition gives c1/c0 = -x/sqrt(2)
    double x = 1.0;
    Eigen::VectorXd c = dark_coefficients(2, x);
    CHECK(c[1] / c[0] == Catch::Approx(-x / std::sqrt(2.0)).epsilon(1e-12));
    auto basis = enumerate_sector(2, SectorLabel::of(Branch::atomic_alpha));
    auto h = build_hamiltonian_set(basis, 1.0, 1.0);
    auto nr = numerical_null_state(h, x);
    auto lad = ladder_indices(*basis);
    CHECK(std::abs(nr.amps[Eigen::Index(lad[0])] - Complex(c[0], 0.0)) < 1e-10);
    CHECK(std::abs(nr.amps[Eigen::Index(lad[1])] - Complex(c[1], 0.0)) < 1e-10);
}

TEST_CASE("coefficient signs alternate and the ladder climb is monotone") {
    for (int M : {3, 5, 8}) {
        double prev_mean = -1.0;
        for (double x : {0.0, 0.3, 1.0, 3.0, 10.0, 100.0}) {
            auto spec = DarkStateSpec::make(M, x);
            for (int n = 0; n + 1 < M; ++n) {
                if (spec.coefficients[n] != 0.0 && x > 0.0)
                    CHECK(spec.coefficients[n] * spec.coefficients[n + 1] <= 0.0);
            }
            double mean = spec.mean_excitation();
            CHECK(mean >= prev_mean - 1e-12);
            prev_mean = mean;
        }
    }
}

TEST_CASE("analytic dark state is a numerical null vector on the whole grid") {
    for (int M = 2; M <= 8; ++M) {
        auto basis = enumerate_sector(M, SectorLabel::of(Branch::atomic_alpha));
        auto h = build_hamiltonian_set(basis, 1.0, 1.0);
        auto lad = ladder_indices(*basis);
        for (double x : {0.1, 1.0, 10.0, 100.0}) {
            auto nr = numerical_null_state(h, x);
            CHECK(nr.residual < 1e-10);
            CHECK(nr.excited_population < 1e-10);
            Eigen::VectorXd c = dark_coefficients(M, x);
            Complex ov(0.0, 0.0);
            for (std::size_t n = 0; n < lad.size(); ++n)
                ov += c[Eigen::Index(n)] * std::conj(nr.amps[Eigen::Index(lad[n])]);
            CHECK(1.0 - std::abs(ov) < 1e-8);
            // analytic residual directly
            Eigen::VectorXcd ana = Eigen::VectorXcd::Zero(Eigen::Index(basis->size()));
            for (std::size_t n = 0; n < lad.size(); ++n)
                ana[Eigen::Index(lad[n])] = c[Eigen::Index(n)];
            Eigen::VectorXcd hv = Eigen::VectorXcd::Zero(ana.size());
            h.pump.accumulate(ana, hv, Complex(x, 0.0));
            h.cav.accumulate(ana, hv, Complex(1.0, 0.0));
            CHECK(hv.norm() / nr.spectral_norm < 1e-12);
        }
    }
}

TEST_CASE("the fig1b-literal coefficient law is not a null vector") {
    auto basis = enumerate_sector(3, SectorLabel::of(Branch::atomic_alpha));
    auto h = build_hamiltonian_set(basis, 1.0, 1.0);
    auto lad = ladder_indices(*basis);
    Eigen::VectorXd c = dark_coefficients(3, 1.0, DarkVariant::fig1b_literal);
    Eigen::VectorXcd ana = Eigen::VectorXcd::Zero(Eigen::Index(basis->size()));
    for (std::size_t n = 0; n < lad.size(); ++n) ana[Eigen::Index(lad[n])] = c[Eigen::Index(n)];
    Eigen::VectorXcd hv = Eigen::VectorXcd::Zero(ana.size());
    h.pump.accumulate(ana, hv, Complex(1.0, 0.0));
    h.cav.accumulate(ana, hv, Complex(1.0, 0.0));
    CHECK(hv.norm() > 1e-3);
}

TEST_CASE("variant selection picks the law that matches the null space") {
    auto sel = select_dark_variant(4);
    CHECK(sel.selected == DarkVariant::eq2_eq3);
    CHECK(1.0 - sel.worst_overlap_eq2 < 1e-8);
    CHECK(sel.worst_overlap_fig1b < sel.worst_overlap_eq2);
}

TEST_CASE("large pump limit concentrates on the top ladder state") {
    for (int M = 2; M <= 8; ++M) {
        double x = 1e3 * M;
        Eigen::VectorXd c = dark_coefficients(M, x);
        CHECK(c[M - 1] * c[M - 1] > 0.99);
    }
}

TEST_CASE("excited support of the analytic dark state is exactly zero") {
    for (int M : {2, 4, 6}) {
        StateVector d = analytic_dark_state(5.0, 1.0, M, 1.0, 0.0);
        for (const auto& b : d.branches) {
            for (std::size_t i = 0; i < b.basis->size(); ++i) {
                if (b.basis->state(i).excited_atoms() > 0)
                    CHECK(b.amps[Eigen::Index(i)] == Complex(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("dark overlap observable") {
    int M = 4;
    double x = 2.0;
    StateVector d = analytic_dark_state(x, 1.0, M, M_SQRT1_2, M_SQRT1_2);
    CHECK(dark_overlap(d, x, 1.0) == Catch::Approx(1.0).margin(1e-12));
    StateVector psi0 = make_initial_state(M_SQRT1_2, M_SQRT1_2, M, InitialStateKind::atomic);
    CHECK(dark_overlap(psi0, 0.0, 1.0) == Catch::Approx(1.0).margin(1e-12));
    // orthogonal ladder state at Omega = 0
    StateVector lad1 = analytic_dark_state(0.0, 1.0, M, 1.0, 0.0);
    auto basis = lad1.branches[0].basis;
    auto idx = ladder_indices(*basis);
    lad1.branches[0].amps.setZero();
    lad1.branches[0].amps[Eigen::Index(idx[1])] = 1.0;
    CHECK(dark_overlap(lad1, 0.0, 1.0) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("ladder state bookkeeping") {
    auto l = LadderState::make(1, 3);
    CHECK(l.alpha_leg.level(3) == 2);
    CHECK(l.alpha_leg.na == 1);
    CHECK(l.beta_leg.level(5) == 2);
    CHECK(l.beta_leg.nb == 1);
    // sqrt(M!/(M-n-1)!) = sqrt(3*2) for n=1, M=3
    CHECK(l.collective_norm == Catch::Approx(std::sqrt(6.0)));
}

TEST_CASE("chain couplings: published caption values and exact elements") {
    int M = 5;
    double om = 2.0, g = 1.5;
    // caption formulas
    auto [o1, g1] = chain_couplings(1, M, om, g);
    CHECK(o1 == Catch::Approx(om * std::sqrt(double(M))));
    CHECK(g1 == Catch::Approx(g * std::sqrt(2.0)));
    auto [oM, gM] = chain_couplings(M - 1, M, om, g);
    CHECK(oM == Catch::Approx(om * std::sqrt(2.0)));
    CHECK(gM == Catch::Approx(g * std::sqrt(double((M - 1) * M))));
    CHECK_THROWS_AS(chain_couplings(0, M, om, g), Error);
    CHECK_THROWS_AS(chain_couplings(M, M, om, g), Error);
}

TEST_CASE("exact chain couplings equal the assembled matrix elements, M <= 4") {
    // between |(n-1):> and its pump-excited intermediate, and between that
    // intermediate and |n:>; the caption's pump factor is shifted by one
    for (int M = 2; M <= 4; ++M) {
        auto basis = enumerate_sector(M, SectorLabel::of(Branch::atomic_alpha));
        auto h = build_hamiltonian_set(basis, 1.0, 1.0);
        Eigen::MatrixXcd pump = h.pump.dense();
        Eigen::MatrixXcd cav = h.cav.dense();
        auto lad = ladder_indices(*basis);
        for (int n = 1; n <= M - 1; ++n) {
            // intermediate: sigma_21 applied to |(n-1):>
            OccupationState mid = ladder_occupation(n - 1, M, Branch::atomic_alpha);
            auto [e, amp] = collective_flip_element(mid, 1, 2);
            REQUIRE(amp > 0.0);
            auto ei = basis->index_of(e);
            auto [om_exact, g_exact] = chain_couplings(n, M, 1.0, 1.0, ChainConvention::exact);
            CHECK(std::abs(pump(Eigen::Index(ei), Eigen::Index(lad[std::size_t(n - 1)]))) ==
                  Catch::Approx(om_exact).epsilon(1e-12));
            CHECK(std::abs(cav(Eigen::Index(ei), Eigen::Index(lad[std::size_t(n)]))) ==
                  Catch::Approx(g_exact).epsilon(1e-12));
            // caption value at n equals the exact value at n-1 on the pump side
            auto [om_caption, g_caption] = chain_couplings(n, M, 1.0, 1.0, ChainConvention::fig1b);
            CHECK(g_caption == Catch::Approx(g_exact));
            CHECK(om_caption == Catch::Approx(std::sqrt(double(M - n + 1))));
            CHECK(om_exact == Catch::Approx(std::sqrt(double(M - n))));
        }
    }
}

TEST_CASE("photonic-seed sectors carry a dark state too") {
    for (int M : {1, 2, 3}) {
        auto basis = enumerate_sector(M, SectorLabel::of(Branch::photonic_alpha));
        auto h = build_hamiltonian_set(basis, 1.0, 1.0);
        auto nr = numerical_null_state(h, 0.5);
        CHECK(nr.residual < 1e-10);
        CHECK(nr.excited_population < 1e-10);
    }
}
