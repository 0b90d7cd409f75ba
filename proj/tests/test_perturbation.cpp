#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qhsb/perturbation.hpp"

using namespace qhsb;

static StaticPoint frozen_point() {
    StaticPoint sp;
    sp.A_b = 1.0;
    sp.A_f = 0.0;
    sp.g_mod = 1.09540110550427028e+00;
    sp.kappa = 8.29066945692341073e-02;
    sp.kappa_dot = 1.15326652597292523e-01;
    return sp;
}

TEST_CASE("closed-form elements equal the brute-force sandwich, all 8 channels") {
    const int cut = 32;
    OperatorSet ops(cut);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        StaticPoint sp;
        sp.A_b = 0.5 + 1.5 * u(rng);
        sp.A_f = -0.5 + u(rng);
        sp.g_mod = 0.05 + 1.45 * u(rng);
        sp.kappa = -0.3 + 0.6 * u(rng);
        sp.kappa_dot = -0.5 + u(rng);
        const int n = 2 + int(6 * u(rng));
        for (int dn : {+2, -2})
            for (Branch o : {Branch::plus, Branch::minus})
                for (Branch i : {Branch::plus, Branch::minus})
                    worst = std::max(worst, std::abs(transition_element(sp, n, dn, o, i) -
                                                     transition_element_numeric(ops, sp, n, dn, o, i)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("frozen element literals") {
    StaticPoint sp = frozen_point();
    const Complex m1 = transition_element(sp, 2, +2, Branch::plus, Branch::plus);
    CHECK(m1.real() == doctest::Approx(-4.29351127606070804e-01).epsilon(1e-14));
    CHECK(m1.imag() == doctest::Approx(+2.35336455561084401e-01).epsilon(1e-14));
    const Complex m2 = transition_element(sp, 2, -2, Branch::minus, Branch::plus);
    CHECK(m2.real() == doctest::Approx(-6.91666045072129726e-02).epsilon(1e-13));
    CHECK(m2.imag() == doctest::Approx(-1.86237179784815993e-02).epsilon(1e-13));
}

TEST_CASE("diagonal element of the displacement coupling vanishes") {
    const int cut = 32;
    OperatorSet ops(cut);
    StaticPoint sp = frozen_point();
    for (int n : {0, 1, 3, 7})
        for (Branch br : {Branch::plus, Branch::minus})
            CHECK(std::abs(first_order(ops, sp, n, br)) < 1e-14);
}

TEST_CASE("vacuum element matches its sandwich") {
    const int cut = 24;
    OperatorSet ops(cut);
    StaticPoint sp = frozen_point();
    const Matrix V = squeeze_coupling(ops, sp);
    for (Branch br : {Branch::plus, Branch::minus}) {
        Vector vo = vacuum_vector(cut);
        Vector vi = dressed_vector(cut, 1, br, mixing_angle(sp, 1));
        CHECK(std::abs(vacuum_element(sp, br) - vo.dot(V * vi)) < 1e-14);
    }
}

TEST_CASE("frozen second-order literals (vacuum channel on for n = 1)") {
    StaticPoint sp = frozen_point();
    CHECK(second_order(sp, 0, Branch::plus).second_order ==
          doctest::Approx(-2.41250196168648380e-02).epsilon(1e-13));
    CHECK(second_order(sp, 0, Branch::minus).second_order ==
          doctest::Approx(-1.57410529219687047e-02).epsilon(1e-13));
    auto c1 = second_order(sp, 1, Branch::plus);
    CHECK(c1.vacuum_channel_included);
    CHECK(c1.second_order == doctest::Approx(-4.47113788802549345e-02).epsilon(1e-13));
    CHECK(second_order(sp, 2, Branch::plus).second_order ==
          doctest::Approx(-6.52523725316984382e-02).epsilon(1e-13));
    CHECK(second_order(sp, 3, Branch::minus).second_order ==
          doctest::Approx(-7.97212181649536167e-02).epsilon(1e-13));

    StaticPoint gp{1.1, 0.2, 0.45, 0.12, 0.3};
    CHECK(second_order(gp, 0, Branch::plus).second_order ==
          doctest::Approx(-1.16666333042429238e-01).epsilon(1e-13));
}

TEST_CASE("correction scales exactly quadratically in the displacement") {
    StaticPoint sp = frozen_point();
    StaticPoint sp2 = sp;
    sp2.kappa *= 2;
    sp2.kappa_dot *= 2;
    for (int n : {0, 3}) {
        const double a = second_order(sp2, n, Branch::plus).second_order;
        const double b = 4.0 * second_order(sp, n, Branch::plus).second_order;
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
}

TEST_CASE("exact linearized levels confirm the correction at third-and-above order") {
    // residual |E_exact(s k) - E_n - dE2(s k)| must shrink by >= 8 per s-halving
    // (observed ~16: the third-order term vanishes because the coupling only
    // connects sectors two apart)
    const int cut = 64;
    OperatorSet ops(cut);
    StaticPoint base = frozen_point();
    for (auto [n, br] : {std::pair{0, Branch::plus}, {1, Branch::plus}, {2, Branch::plus}}) {
        double prev = 0.0;
        int k = 0;
        for (double s : {1.0, 0.5, 0.25}) {
            StaticPoint sp = base;
            sp.kappa *= s;
            sp.kappa_dot *= s;
            const double resid = std::abs(linearized_level(ops, sp, n, br) -
                                          sector_energy(sp, n, br) -
                                          second_order(sp, n, br).second_order);
            if (k > 0) {
                CAPTURE(n);
                CAPTURE(s);
                CHECK(prev / resid > 8.0);
            }
            prev = resid;
            ++k;
        }
    }
}

TEST_CASE("frozen linearized oracle levels, cutoff 64") {
    const int cut = 64;
    OperatorSet ops(cut);
    StaticPoint sp = frozen_point();
    CHECK(linearized_level(ops, sp, 0, Branch::plus) ==
          doctest::Approx(1.67968178095193577e+00).epsilon(1e-10));
    CHECK(linearized_level(ops, sp, 0, Branch::minus) ==
          doctest::Approx(-7.20211727542462876e-01).epsilon(1e-10));
    CHECK(linearized_level(ops, sp, 1, Branch::plus) ==
          doctest::Approx(3.08277982409456719e+00).epsilon(1e-10));
    CHECK(linearized_level(ops, sp, 2, Branch::plus) ==
          doctest::Approx(4.39628378583952895e+00).epsilon(1e-10));
    CHECK(linearized_level(ops, sp, 3, Branch::minus) ==
          doctest::Approx(1.17210384956988278e+00).epsilon(1e-10));
}

TEST_CASE("dropping the vacuum channel leaves a quadratic defect (ratio ~4)") {
    const int cut = 64;
    OperatorSet ops(cut);
    StaticPoint base = frozen_point();
    double prev = 0.0;
    int k = 0;
    for (double s : {1.0, 0.5, 0.25}) {
        StaticPoint sp = base;
        sp.kappa *= s;
        sp.kappa_dot *= s;
        const double resid = std::abs(linearized_level(ops, sp, 1, Branch::plus) -
                                      sector_energy(sp, 1, Branch::plus) -
                                      second_order(sp, 1, Branch::plus, false).second_order);
        if (k > 0) {
            const double ratio = prev / resid;
            CHECK(ratio > 3.0);
            CHECK(ratio < 5.0);
        }
        prev = resid;
        ++k;
    }
}

TEST_CASE("degenerate sectors are refused, not silently summed") {
    // Omega_0 + Omega_2 = 4 A_b pinches the 0->2 (+,-) gap; g near the crossing
    StaticPoint sp;
    sp.A_b = 1.0;
    sp.A_f = 0.0;
    sp.kappa = 0.1;
    sp.kappa_dot = 0.0;
    // bisect the crossing of f(g) = E_0^+ - E_2^-
    double lo = 0.3, hi = 1.2;
    auto f = [&](double g) {
        StaticPoint q = sp;
        q.g_mod = g;
        return sector_energy(q, 0, Branch::plus) - sector_energy(q, 2, Branch::minus);
    };
    REQUIRE(f(lo) * f(hi) < 0.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
    }
    sp.g_mod = 0.5 * (lo + hi);
    CHECK_THROWS_AS(second_order(sp, 0, Branch::plus), DegenerateSectorError);
    // slightly away from the crossing the sum is finite again
    sp.g_mod += 1e-3;
    CHECK(std::isfinite(second_order(sp, 0, Branch::plus).second_order));
}
