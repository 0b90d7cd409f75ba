// operators.hpp — truncated Fock ⊗ spin-1/2 space and the dense operator set

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace qhsb {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr Complex I{0.0, 1.0};

// Basis layout: index = spin*cutoff + n, spin-up = 0.
// The guard band is the top slice of each Fock ladder, excluded from
// validated results so truncation error never reaches reported numbers.
struct HilbertSpec {
    int fock_cutoff{64};
    int guard_band{16};

    int dim() const { return 2 * fock_cutoff; }
    int validated() const { return fock_cutoff - guard_band; }

    void check() const {
        if (fock_cutoff < 8) throw std::invalid_argument("fock_cutoff < 8");
        if (guard_band < 4 || guard_band >= fock_cutoff)
            throw std::invalid_argument("guard_band out of range");
    }

    std::vector<int> validated_indices() const {
        std::vector<int> idx;
        idx.reserve(2 * validated());
        for (int s = 0; s < 2; ++s)
            for (int n = 0; n < validated(); ++n) idx.push_back(s * fock_cutoff + n);
        return idx;
    }

    bool in_validated(int index) const {
        const int n = index % fock_cutoff;
        return n < validated();
    }
};

// Fock-ladder annihilator at the given cutoff; top level simply has no b† image.
inline Matrix fock_annihilator(int cutoff) {
    Matrix b = Matrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) b(n - 1, n) = std::sqrt(double(n));
    return b;
}

inline Matrix fock_creator(int cutoff) { return fock_annihilator(cutoff).adjoint(); }

inline Matrix fock_number(int cutoff) {
    Matrix n = Matrix::Zero(cutoff, cutoff);
    for (int k = 0; k < cutoff; ++k) n(k, k) = double(k);
    return n;
}

// (b†² − b²)/2 on the Fock ladder: real antisymmetric, so its exponential is
// exactly orthogonal at every cutoff — the squeeze factor never spoils unitarity.
inline Matrix fock_squeeze_generator(int cutoff) {
    const Matrix bd = fock_creator(cutoff);
    const Matrix b = fock_annihilator(cutoff);
    return 0.5 * (bd * bd - b * b);
}

namespace detail {
inline Matrix spin_kron(const Eigen::Matrix2cd& s, const Matrix& f) {
    const int m = int(f.rows());
    Matrix out = Matrix::Zero(2 * m, 2 * m);
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            if (s(a, c) != Complex(0.0)) out.block(a * m, c * m, m, m) = s(a, c) * f;
    return out;
}
} // namespace detail

// Full-space operators (spin ⊗ Fock).  Bundled so callers assemble
// Hamiltonians by scalar combinations instead of re-deriving kron layouts.
struct OperatorSet {
    int cutoff;
    Matrix b, bd, number, spin_z, spin_plus, spin_minus, squeeze_gen;
    Matrix bd2_plus_b2; // b†² + b², the squeeze diagonal partner

    explicit OperatorSet(int fock_cutoff) : cutoff(fock_cutoff) {
        const Matrix fb = fock_annihilator(cutoff);
        const Matrix fI = Matrix::Identity(cutoff, cutoff);
        Eigen::Matrix2cd s0, sp, sm, id2;
        id2.setIdentity();
        s0 << 0.5, 0, 0, -0.5;  // spin-up block first
        sp << 0, 1, 0, 0;
        sm << 0, 0, 1, 0;
        b = detail::spin_kron(id2, fb);
        bd = b.adjoint();
        number = detail::spin_kron(id2, fock_number(cutoff));
        spin_z = detail::spin_kron(s0, fI);
        spin_plus = detail::spin_kron(sp, fI);
        spin_minus = detail::spin_kron(sm, fI);
        squeeze_gen = detail::spin_kron(id2, fock_squeeze_generator(cutoff));
        bd2_plus_b2 = bd * bd + b * b;
    }

    int dim() const { return 2 * cutoff; }
};

// Max-abs over the validated block (both spins).  The artifact's norm of record
// for residuals: entrywise, so a single polluted element cannot hide in an average.
inline double guarded_abs_max(const Matrix& m, const HilbertSpec& spec) {
    const auto idx = spec.validated_indices();
    double best = 0.0;
    for (int r : idx)
        for (int c : idx) best = std::max(best, std::abs(m(r, c)));
    return best;
}

inline double guarded_abs_max(const Vector& v, const HilbertSpec& spec) {
    double best = 0.0;
    for (int r : spec.validated_indices()) best = std::max(best, std::abs(v(r)));
    return best;
}

// ||M − M†||_max over the full matrix.
inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Weight of a state vector outside the validated block; the truncation leak monitor.
inline double guard_band_weight(const Vector& v, const HilbertSpec& spec) {
    double w = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int n = spec.validated(); n < spec.fock_cutoff; ++n)
            w += std::norm(v(s * spec.fock_cutoff + n));
    return w;
}

// Sector charge Q = N − S₀ (conserved by the undisplaced model); parity of the
// Fock occupation is conserved by the squeeze terms as well.
inline Matrix sector_charge(const OperatorSet& ops) { return ops.number - ops.spin_z; }

inline Matrix fock_parity(int cutoff) {
    Matrix p = Matrix::Zero(2 * cutoff, 2 * cutoff);
    for (int s = 0; s < 2; ++s)
        for (int n = 0; n < cutoff; ++n)
            p(s * cutoff + n, s * cutoff + n) = (n % 2 == 0) ? 1.0 : -1.0;
    return p;
}

} // namespace qhsb
