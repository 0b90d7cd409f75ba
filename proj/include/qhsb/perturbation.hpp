// perturbation.hpp — squeeze-coupling matrix elements and energy corrections
// for small boundary displacement

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qhsb/spectra.hpp"

namespace qhsb {

struct DegenerateSectorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First order in κ, κ̇:  V = α₊ b†² + α₋ b² − κg(S₋b† + S₊b),
// α_± = −κA_b ± iκ̇/2.  Connects sector n to n±2 only.
inline Matrix squeeze_coupling(const OperatorSet& ops, const StaticPoint& sp) {
    const Complex ap{-sp.kappa * sp.A_b, +sp.kappa_dot / 2.0};
    const Complex am{-sp.kappa * sp.A_b, -sp.kappa_dot / 2.0};
    const Matrix bd2 = ops.bd * ops.bd;
    const Matrix b2 = ops.b * ops.b;
    return ap * bd2 + am * b2 -
           sp.kappa * sp.g_mod * (ops.spin_minus * ops.bd + ops.spin_plus * ops.b);
}

// The eight closed-form elements M^{σ'σ}_{n±2,n} = ⟨ψ_{n±2}^{σ'}|V|ψ_n^σ⟩.
inline Complex transition_element(const StaticPoint& sp, int n, int dn, Branch out, Branch in) {
    if (dn != 2 && dn != -2) throw std::invalid_argument("dn must be ±2");
    if (dn == -2 && n < 2) throw std::invalid_argument("no sector below n=2 for the down channel");
    const Complex ap{-sp.kappa * sp.A_b, +sp.kappa_dot / 2.0};
    const Complex am{-sp.kappa * sp.A_b, -sp.kappa_dot / 2.0};
    const double kg = sp.kappa * sp.g_mod;
    auto c = [&](int m) { return std::cos(mixing_angle(sp, m)); };
    auto s = [&](int m) { return std::sin(mixing_angle(sp, m)); };
    const bool out_plus = out == Branch::plus;
    const bool in_plus = in == Branch::plus;

    if (dn == 2) {
        const double r1 = std::sqrt((n + 1.0) * (n + 2.0));
        const double r2 = std::sqrt(n + 2.0);
        const double r3 = std::sqrt((n + 2.0) * (n + 3.0));
        if (in_plus) {
            const Complex core = ap * c(n) * r1 - kg * s(n) * r2;
            return out_plus ? c(n + 2) * core + s(n + 2) * s(n) * ap * r3
                            : -s(n + 2) * core + c(n + 2) * s(n) * ap * r3;
        }
        const Complex core = ap * s(n) * r1 + kg * c(n) * r2;
        return out_plus ? -c(n + 2) * core + s(n + 2) * c(n) * ap * r3
                        : s(n + 2) * core + c(n + 2) * c(n) * ap * r3;
    }

    const double r1 = std::sqrt(n * (n - 1.0));
    const double r2 = std::sqrt(double(n));
    const double r3 = std::sqrt(n * (n + 1.0));
    if (in_plus) {
        const Complex wing = am * s(n) * r3 - kg * c(n) * r2;
        return out_plus ? c(n - 2) * c(n) * am * r1 + s(n - 2) * wing
                        : -s(n - 2) * c(n) * am * r1 + c(n - 2) * wing;
    }
    const Complex wing = am * c(n) * r3 + kg * s(n) * r2;
    return out_plus ? -c(n - 2) * s(n) * am * r1 + s(n - 2) * wing
                    : s(n - 2) * s(n) * am * r1 + c(n - 2) * wing;
}

// Brute-force sandwich against the assembled coupling matrix.
inline Complex transition_element_numeric(const OperatorSet& ops, const StaticPoint& sp, int n,
                                          int dn, Branch out, Branch in) {
    const Matrix V = squeeze_coupling(ops, sp);
    const Vector vo = dressed_vector(ops.cutoff, n + dn, out, mixing_angle(sp, n + dn));
    const Vector vi = dressed_vector(ops.cutoff, n, in, mixing_angle(sp, n));
    return vo.dot(V * vi); // Eigen dot conjugates the left argument
}

// ⟨ψ_n^σ|V|ψ_n^σ⟩: vanishes identically (V changes the boson number by two).
inline Complex first_order(const OperatorSet& ops, const StaticPoint& sp, int n, Branch br) {
    const Matrix V = squeeze_coupling(ops, sp);
    const Vector v = dressed_vector(ops.cutoff, n, br, mixing_angle(sp, n));
    return v.dot(V * v);
}

// Vacuum intermediate element ⟨↑,0|V|ψ₁^σ⟩; the n=1 down channel the
// Θ(n−2)-gated sector sum misses.
inline Complex vacuum_element(const StaticPoint& sp, Branch in) {
    const double th = mixing_angle(sp, 1);
    const double a = in == Branch::plus ? std::cos(th) : -std::sin(th);
    const double bb = in == Branch::plus ? std::sin(th) : std::cos(th);
    const Complex am{-sp.kappa * sp.A_b, -sp.kappa_dot / 2.0};
    return am * bb * std::sqrt(2.0) - sp.kappa * sp.g_mod * a;
}

struct EnergyCorrection {
    double second_order{0.0};
    double smallest_gap{0.0};
    bool vacuum_channel_included{false};
};

// ΔE⁽²⁾ = Σ_f |M_fi|²/(E_i − E_f) over the n±2 sector channels, optionally
// including the vacuum intermediate for n = 1 (on by default: that is the
// numerically complete sum; off reproduces the Θ(n−2)-gated display form).
inline EnergyCorrection second_order(const StaticPoint& sp, int n, Branch br,
                                     bool include_vacuum_channel = true) {
    const double En = sector_energy(sp, n, br);
    const double gap_floor = 1e-8 * sector_gap(sp, n);
    EnergyCorrection out;
    out.smallest_gap = std::numeric_limits<double>::infinity();

    auto add_channel = [&](double Ef, Complex M) {
        const double de = En - Ef;
        out.smallest_gap = std::min(out.smallest_gap, std::abs(de));
        if (std::abs(de) <= gap_floor)
            throw DegenerateSectorError("sector gap below degeneracy threshold");
        out.second_order += std::norm(M) / de;
    };

    for (Branch o : {Branch::plus, Branch::minus})
        add_channel(sector_energy(sp, n + 2, o), transition_element(sp, n, +2, o, br));
    if (n >= 2)
        for (Branch o : {Branch::plus, Branch::minus})
            add_channel(sector_energy(sp, n - 2, o), transition_element(sp, n, -2, o, br));
    if (n == 1 && include_vacuum_channel) {
        add_channel(vacuum_energy(sp), vacuum_element(sp, br));
        out.vacuum_channel_included = true;
    }
    return out;
}

// Exact reference for the correction: diagonalize h₀ + V (the linearized
// displaced Hamiltonian) and identify the level by eigenvector overlap.
// Nearest-eigenvalue identification silently grabs the wrong level near
// crossings, so the overlap route is the oracle of record.
inline double linearized_level(const OperatorSet& ops, const StaticPoint& sp, int n, Branch br) {
    Matrix h0 = sp.A_f * ops.spin_z + sp.A_b * ops.number +
                sp.g_mod * (ops.spin_plus * ops.bd) + sp.g_mod * (ops.spin_minus * ops.b);
    const Matrix m = h0 + squeeze_coupling(ops, sp);
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (m + m.adjoint())));
    const Vector target = dressed_vector(ops.cutoff, n, br, mixing_angle(sp, n));
    int best = 0;
    double best_ov = -1.0;
    for (int i = 0; i < m.rows(); ++i) {
        const double ov = std::abs(target.dot(es.eigenvectors().col(i)));
        if (ov > best_ov) {
            best_ov = ov;
            best = i;
        }
    }
    return es.eigenvalues()(best);
}

} // namespace qhsb
