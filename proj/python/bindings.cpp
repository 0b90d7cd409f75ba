// bindings.cpp — python module exposing the main operations as plain functions
// over scalars: closed-form spectra, perturbative corrections, transition
// amplitudes, and the map-residual verifier on the record trajectory.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhsb/dyson.hpp"
#include "qhsb/evolution.hpp"
#include "qhsb/perturbation.hpp"
#include "qhsb/spectra.hpp"
#include "qhsb/transitions.hpp"

namespace py = pybind11;
using namespace qhsb;

namespace {

StaticPoint sp_of(double A_b, double A_f, double g, double kappa = 0.0, double kappa_dot = 0.0) {
    StaticPoint sp;
    sp.A_b = A_b;
    sp.A_f = A_f;
    sp.g_mod = g;
    sp.kappa = kappa;
    sp.kappa_dot = kappa_dot;
    return sp;
}

Branch br_of(int s) {
    if (s > 0) return Branch::plus;
    if (s < 0) return Branch::minus;
    throw std::invalid_argument("branch must be +1 or -1");
}

Background bg_of(double alpha) {
    Background bg;
    bg.alpha = alpha;
    return bg;
}

} // namespace

PYBIND11_MODULE(_qhsb, m) {
    m.doc() = "time-dependent quasi-Hermitian spin-boson toolkit";

    m.def(
        "sector_energy",
        [](double A_b, double A_f, double g, int n, int branch) {
            return sector_energy(sp_of(A_b, A_f, g), n, br_of(branch));
        },
        py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("n"), py::arg("branch"));

    m.def(
        "sector_gap",
        [](double A_b, double A_f, double g, int n) { return sector_gap(sp_of(A_b, A_f, g), n); },
        py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("n"));

    m.def(
        "mixing_angle",
        [](double A_b, double A_f, double g, int n) {
            return mixing_angle(sp_of(A_b, A_f, g), n);
        },
        py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("n"));

    m.def(
        "closed_spectrum",
        [](double A_b, double A_f, double g, int n_max) {
            return closed_spectrum(sp_of(A_b, A_f, g), n_max);
        },
        py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("n_max"));

    m.def(
        "second_order",
        [](double A_b, double A_f, double g, double kappa, double kappa_dot, int n, int branch,
           bool include_vacuum_channel) {
            return second_order(sp_of(A_b, A_f, g, kappa, kappa_dot), n, br_of(branch),
                                include_vacuum_channel)
                .second_order;
        },
        py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("kappa"), py::arg("kappa_dot"),
        py::arg("n"), py::arg("branch"), py::arg("include_vacuum_channel") = true);

    m.def(
        "transition_element",
        [](double A_b, double A_f, double g, double kappa, double kappa_dot, int n, int dn,
           int out, int in) {
            return transition_element(sp_of(A_b, A_f, g, kappa, kappa_dot), n, dn, br_of(out),
                                      br_of(in));
        },
        py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("kappa"), py::arg("kappa_dot"),
        py::arg("n"), py::arg("dn"), py::arg("out"), py::arg("in"));

    m.def(
        "linearized_level",
        [](int cutoff, double A_b, double A_f, double g, double kappa, double kappa_dot, int n,
           int branch) {
            const OperatorSet ops(cutoff);
            return linearized_level(ops, sp_of(A_b, A_f, g, kappa, kappa_dot), n, br_of(branch));
        },
        py::arg("cutoff"), py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("kappa"),
        py::arg("kappa_dot"), py::arg("n"), py::arg("branch"));

    m.def(
        "bd_coefficients",
        [](double A_b, double A_f, double g, int n) {
            const BDCoefficients bd = bd_coefficients(sp_of(A_b, A_f, g), n);
            return py::make_tuple(bd.B, bd.D, bd.gap);
        },
        py::arg("A_b"), py::arg("A_f"), py::arg("g"), py::arg("n"),
        "returns (B, D, gap) for the n -> n+2 upper-branch channel");

    m.def(
        "delta_pulse_amplitude",
        [](double alpha, int n, double kappa0, double delta_a, double delta_b, double t1,
           double t2) {
            return delta_pulse_amplitude(bg_of(alpha), n, kappa0, delta_a, delta_b, t1, t2);
        },
        py::arg("alpha"), py::arg("n"), py::arg("kappa0"), py::arg("delta_a"),
        py::arg("delta_b"), py::arg("t1"), py::arg("t2"));

    m.def(
        "suppression_times",
        [](double alpha, int n, double delta_b, double t1, int k_max) {
            return suppression_times(bg_of(alpha), n, delta_b, t1, k_max);
        },
        py::arg("alpha"), py::arg("n"), py::arg("delta_b"), py::arg("t1"), py::arg("k_max"));

    m.def(
        "sideband_amplitude",
        [](double alpha, int n, double kappa0, double Omega, double delta0, double eps,
           double nu, double T) {
            return sideband_amplitude(bg_of(alpha), n, kappa0, Omega, delta0, eps, nu, T);
        },
        py::arg("alpha"), py::arg("n"), py::arg("kappa0"), py::arg("Omega"), py::arg("delta0"),
        py::arg("eps"), py::arg("nu"), py::arg("T"));

    m.def(
        "quench_amplitude",
        [](double alpha, int n, double kappa0, double T, double tau, double delta0) {
            return amplitude_integral(bg_of(alpha), Protocol::quench(kappa0, T, tau, delta0), n)
                .value;
        },
        py::arg("alpha"), py::arg("n"), py::arg("kappa0"), py::arg("T"), py::arg("tau"),
        py::arg("delta0") = 0.0,
        "quadrature amplitude of the closed displacement quench (a null protocol)");

    m.def(
        "dyson_residual",
        [](double t, int cutoff, int guard_band) {
            const HilbertSpec spec{cutoff, guard_band};
            const ResidualReport rep =
                dyson_residual(ModelParameters::reference_trajectory(), t, spec);
            py::dict d;
            d["map_residual"] = rep.map_residual;
            d["hermiticity"] = rep.hermiticity;
            d["transformed_hermiticity"] = rep.transformed_hermiticity;
            d["working_cutoff"] = rep.working_cutoff;
            return d;
        },
        py::arg("t"), py::arg("cutoff") = 64, py::arg("guard_band") = 16,
        "map residual of the record trajectory at time t");

    m.def(
        "reality_defect",
        [](double t, int cutoff, int guard_band) {
            const HilbertSpec spec{cutoff, guard_band};
            const RealityReport rep =
                reality_defect(ModelParameters::reference_trajectory(), t, spec);
            return py::make_tuple(rep.max_imag, rep.levels_kept);
        },
        py::arg("t"), py::arg("cutoff") = 64, py::arg("guard_band") = 16);

    m.def(
        "closed_form_match",
        [](double t, int cutoff, int guard_band) {
            const HilbertSpec spec{cutoff, guard_band};
            const MatchReport rep =
                closed_form_match(ModelParameters::reference_trajectory(), t, spec);
            return py::make_tuple(rep.max_rel_dev, rep.levels_checked);
        },
        py::arg("t"), py::arg("cutoff") = 64, py::arg("guard_band") = 16);
}
