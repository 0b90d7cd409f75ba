// spectra.hpp — sector closed forms and the numerical spectrum checks

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qhsb/dyson.hpp"

namespace qhsb {

// Static background at one instant: everything the sector algebra needs.
struct StaticPoint {
    double A_b{1.0};
    double A_f{0.0};
    double g_mod{0.5};
    double kappa{0.0};
    double kappa_dot{0.0};
};

inline StaticPoint freeze(const ModelParameters& p, double t) {
    StaticPoint sp;
    sp.A_b = p.A_b(t).real();
    sp.A_f = p.A_f(t).real();
    sp.g_mod = std::abs(p.g(t));
    sp.kappa = p.kappa.value(t);
    sp.kappa_dot = p.kappa.derivative(t);
    return sp;
}

// Sector n couples {|↓,n⟩, |↑,n+1⟩} with Rabi-type splitting Ω_n.
inline double sector_gap(const StaticPoint& sp, int n) {
    const double s = sp.A_b + sp.A_f;
    return std::sqrt(s * s + 4.0 * sp.g_mod * sp.g_mod * (n + 1.0));
}

enum class Branch { plus, minus };

inline double sector_energy(const StaticPoint& sp, int n, Branch br) {
    const double center = sp.A_b * (n + 0.5);
    const double half = 0.5 * sector_gap(sp, n);
    return br == Branch::plus ? center + half : center - half;
}

inline double vacuum_energy(const StaticPoint& sp) { return sp.A_f / 2.0; }

// Mixing angle: ψ⁺ = cos θ |↓,n⟩ + sin θ |↑,n+1⟩, ψ⁻ orthogonal.
inline double mixing_angle(const StaticPoint& sp, int n) {
    return 0.5 * std::atan2(2.0 * sp.g_mod * std::sqrt(n + 1.0), -(sp.A_b + sp.A_f));
}

// Dressed sector eigenvector embedded in the full space (spin-up block first).
inline Vector dressed_vector(int cutoff, int n, Branch br, double theta) {
    Vector v = Vector::Zero(2 * cutoff);
    const double c = std::cos(theta), s = std::sin(theta);
    if (br == Branch::plus) {
        v(cutoff + n) = c;   // |↓,n⟩
        v(n + 1) = s;        // |↑,n+1⟩
    } else {
        v(cutoff + n) = -s;
        v(n + 1) = c;
    }
    return v;
}

inline Vector vacuum_vector(int cutoff) {
    Vector v = Vector::Zero(2 * cutoff);
    v(0) = 1.0; // |↑,0⟩
    return v;
}

// {E_vac} ∪ {E_n^±} for n = 0..n_max, ascending.
inline std::vector<double> closed_spectrum(const StaticPoint& sp, int n_max) {
    std::vector<double> out;
    out.push_back(vacuum_energy(sp));
    for (int n = 0; n <= n_max; ++n) {
        out.push_back(sector_energy(sp, n, Branch::plus));
        out.push_back(sector_energy(sp, n, Branch::minus));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

// Eigenpairs of a general complex matrix whose right eigenvectors stay inside
// the validated block.  Levels leaning on the guard band are truncation junk
// and never enter validated comparisons.
inline std::vector<Complex> guard_filtered_eigenvalues(const Matrix& m, const HilbertSpec& spec,
                                                       double weight_max) {
    Eigen::ComplexEigenSolver<Matrix> es(m);
    std::vector<Complex> kept;
    for (int i = 0; i < m.rows(); ++i) {
        Vector v = es.eigenvectors().col(i);
        v.normalize();
        if (guard_band_weight(v, spec) < weight_max) kept.push_back(es.eigenvalues()(i));
    }
    std::sort(kept.begin(), kept.end(),
              [](Complex a, Complex b) { return a.real() < b.real(); });
    return kept;
}

inline std::vector<double> guard_filtered_hermitian(const Matrix& m, const HilbertSpec& spec,
                                                    double weight_max) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    std::vector<double> kept;
    for (int i = 0; i < m.rows(); ++i) {
        Vector v = es.eigenvectors().col(i);
        if (guard_band_weight(v, spec) < weight_max) kept.push_back(es.eigenvalues()(i));
    }
    return kept; // already ascending
}

} // namespace detail

struct RealityReport {
    double max_imag{0.0};
    int levels_kept{0};
};

// Imaginary parts of the guarded energy-operator spectrum (boundary term included).
inline RealityReport reality_defect(const ModelParameters& p, double t, const HilbertSpec& spec,
                                    double weight_max = 1e-6) {
    const OperatorSet ops(spec.fock_cutoff);
    const Matrix ht = energy_operator(p, t, ops, true);
    const auto kept = detail::guard_filtered_eigenvalues(ht, spec, weight_max);
    RealityReport r;
    r.levels_kept = int(kept.size());
    for (Complex z : kept) r.max_imag = std::max(r.max_imag, std::abs(z.imag()));
    return r;
}

struct MatchReport {
    double max_rel_dev{0.0};
    int levels_checked{0};
};

// Closed-form match runs on the boundary-term-free energy operator, which is
// exactly diagonal-similar to h₀ at the storage cutoff, so every guarded level
// must land on a closed-form value to rounding.  Relative deviation uses a
// unit floor so E_vac = 0 is comparable.
inline MatchReport closed_form_match(const ModelParameters& p, double t, const HilbertSpec& spec) {
    const OperatorSet ops(spec.fock_cutoff);
    const Matrix ht = energy_operator(p, t, ops, false);
    const auto num = detail::guard_filtered_eigenvalues(ht, spec, 1e-8);
    const StaticPoint sp = freeze(p, t);

    MatchReport r;
    const int n_max = spec.validated() - 2;
    std::vector<double> targets;
    targets.push_back(vacuum_energy(sp));
    for (int n = 0; n <= n_max; ++n) {
        targets.push_back(sector_energy(sp, n, Branch::plus));
        targets.push_back(sector_energy(sp, n, Branch::minus));
    }
    for (double e : targets) {
        double best = std::numeric_limits<double>::infinity();
        for (Complex z : num) best = std::min(best, std::abs(z - Complex(e)));
        r.max_rel_dev = std::max(r.max_rel_dev, best / std::max(1.0, std::abs(e)));
        ++r.levels_checked;
    }
    return r;
}

struct IsoReport {
    double max_abs_dev{0.0};
    int levels_checked{0};
};

// Energy operator vs closed-form Hermitian generator: same guarded spectrum.
// The strictly-filtered Hermitian levels must each appear among the (loosely
// filtered) energy-operator levels.  The reverse direction is not checked:
// near the kept-set edge the two filters disagree about which levels survive,
// which strands genuine levels without a partner — a filter artefact, not a
// spectral discrepancy.
inline IsoReport isospectrality(const ModelParameters& p, double t, const HilbertSpec& spec,
                                int levels = 30) {
    const OperatorSet ops(spec.fock_cutoff);
    const Matrix ht = energy_operator(p, t, ops, true);
    const Matrix h = hermitian_closed_form(p, t, ops);
    const auto loose = detail::guard_filtered_eigenvalues(ht, spec, 1e-6);
    const auto strict =
        detail::guard_filtered_hermitian(Matrix(0.5 * (h + h.adjoint())), spec, 1e-8);

    IsoReport r;
    const int n_check = std::min<int>(levels, int(strict.size()));
    for (int i = 0; i < n_check; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Complex z : loose) best = std::min(best, std::abs(z - Complex(strict[i])));
        r.max_abs_dev = std::max(r.max_abs_dev, best);
        ++r.levels_checked;
    }
    return r;
}

} // namespace qhsb
