#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qhsb/parameters.hpp"
#include "qhsb/time_function.hpp"

using namespace qhsb;

static double fd(const TimeFunction& f, double t, double h = 1e-6) {
    return (f.value(t + h) - f.value(t - h)) / (2 * h);
}

TEST_CASE("grammar covers numbers, t, trig, precedence and signs") {
    auto f = TimeFunction::parse("0.2 + 0.1*cos(4*t)");
    CHECK(f.value(0.7) == doctest::Approx(0.2 + 0.1 * std::cos(2.8)).epsilon(1e-15));
    CHECK(f.derivative(0.7) == doctest::Approx(-0.4 * std::sin(2.8)).epsilon(1e-13));

    auto g = TimeFunction::parse("sin(2*t)*cos(t) - 3*t + (1 - t)*(1 - t)");
    for (double t : {0.0, 0.3, 1.9, -1.2}) {
        CHECK(g.value(t) == doctest::Approx(std::sin(2 * t) * std::cos(t) - 3 * t +
                                            (1 - t) * (1 - t)).epsilon(1e-14));
        CHECK(g.derivative(t) == doctest::Approx(fd(g, t)).epsilon(1e-7));
    }

    CHECK(TimeFunction::parse("-t").value(2.0) == doctest::Approx(-2.0));
    CHECK(TimeFunction::parse("2*-t").value(3.0) == doctest::Approx(-6.0));
}

TEST_CASE("parse errors carry a useful position") {
    CHECK_THROWS_WITH_AS(TimeFunction::parse("0.2 + frob(t)"), doctest::Contains("unknown name"),
                         ParseError);
    CHECK_THROWS_WITH_AS(TimeFunction::parse("sin 2*t"), doctest::Contains("expected '('"),
                         ParseError);
    CHECK_THROWS_WITH_AS(TimeFunction::parse("(1 + t"), doctest::Contains("missing ')'"),
                         ParseError);
    CHECK_THROWS_WITH_AS(TimeFunction::parse("1 + t) "), doctest::Contains("trailing"),
                         ParseError);
    try {
        TimeFunction::parse("1 + @");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("smooth ramp is a C1 unit step with the quintic profile") {
    auto r = TimeFunction::ramp(1.0, 0.5);
    CHECK(r.value(0.9) == 0.0);
    CHECK(r.value(1.5) == 1.0);
    CHECK(r.value(1.25) == doctest::Approx(0.5));
    CHECK(r.derivative(1.0) == doctest::Approx(0.0));
    CHECK(r.derivative(1.5) == doctest::Approx(0.0));
    // quintic smoothstep peak slope = 15/8 / tau
    CHECK(r.derivative(1.25) == doctest::Approx(1.875 / 0.5).epsilon(1e-13));
    for (double t : {1.05, 1.17, 1.33, 1.49})
        CHECK(r.derivative(t) == doctest::Approx(fd(r, t)).epsilon(1e-6));
}

TEST_CASE("derived() lifts the derivative to an expression with its own derivative") {
    auto delta = TimeFunction::parse("0.2 + 0.1*cos(4*t)");
    auto ddelta = delta.derived();
    CHECK(ddelta.str().substr(0, 5) == "d/dt(");
    for (double t : {0.0, 0.37, 1.9, 4.2}) {
        CHECK(ddelta.value(t) == doctest::Approx(-0.4 * std::sin(4.0 * t)).epsilon(1e-14));
        // second derivative, analytically and against a finite difference of delta'
        CHECK(ddelta.derivative(t) == doctest::Approx(-1.6 * std::cos(4.0 * t)).epsilon(1e-13));
        CHECK(ddelta.derivative(t) == doctest::Approx(fd(ddelta, t)).epsilon(1e-6));
    }
    auto r = TimeFunction::ramp(1.0, 0.5);
    auto prod = (r * delta).derived();
    for (double t : {1.1, 1.3, 1.45})
        CHECK(prod.derivative(t) == doctest::Approx(fd(prod, t)).epsilon(1e-5));
    CHECK_THROWS_AS(ddelta.derived().derivative(0.5), std::logic_error);
}

TEST_CASE("reference trajectory closes the Hermiticity conditions") {
    auto p = ModelParameters::reference_trajectory();
    for (double t : {0.0, 0.7, 2.3, 5.11, 9.7}) {
        CHECK(std::abs(p.A_f(t)) < 1e-14);
        CHECK(p.A_b(t).real() == doctest::Approx(1.0));
        CHECK(std::abs(p.A_b(t).imag()) < 1e-16);
        CHECK(p.closure_defect(t) < 1e-14);
        // β = α e^{2δ} with δ = 0.2 + 0.1 cos 4t
        const double delta = 0.2 + 0.1 * std::cos(4 * t);
        CHECK(p.beta_value(t).real() ==
              doctest::Approx(std::sin(2 * t) * std::exp(2 * delta)).epsilon(1e-14));
    }
    CHECK(p.g(0.7).real() == doctest::Approx(1.09540110550427028e+00).epsilon(1e-15));
}

TEST_CASE("explicit beta override breaks closure detectably") {
    auto p = ModelParameters::reference_trajectory();
    p.set_beta(ComplexFunction::real(TimeFunction::parse("sin(2*t)")));
    CHECK(p.closure_defect(0.7) > 1e-2);
}
