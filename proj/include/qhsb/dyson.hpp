// dyson.hpp — Hamiltonian assembly, the time-dependent similarity map, and the
// residual of the map equation evaluated in a padded working space

#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "qhsb/operators.hpp"
#include "qhsb/parameters.hpp"

namespace qhsb {

// e^{κK} on the Fock ladder via the Hermitian eigenproblem of iK.  K is real
// antisymmetric, so the result is orthogonal at any cutoff; no Padé scaling
// heuristics involved.
inline Matrix squeeze_exponential(int cutoff, double kappa) {
    const Matrix K = fock_squeeze_generator(cutoff);
    Eigen::SelfAdjointEigenSolver<Matrix> es(I * K);
    Vector phase = (-I * kappa * es.eigenvalues().cast<Complex>().array()).exp();
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

// Non-Hermitian generator H = ω_f S₀ + ω_b N + α S₊b† + β S₋b.
inline Matrix hamiltonian(const ModelParameters& p, double t, const OperatorSet& ops) {
    return p.omega_f.value(t) * ops.spin_z + p.omega_b.value(t) * ops.number +
           p.alpha.value(t) * (ops.spin_plus * ops.bd) +
           p.beta_value(t) * (ops.spin_minus * ops.b);
}

// Undisplaced sector Hamiltonian h₀ = A_f S₀ + A_b N + g S₊b† + g* S₋b.
inline Matrix sector_hamiltonian(const ModelParameters& p, double t, const OperatorSet& ops) {
    const Complex g = p.g(t);
    return p.A_f(t) * ops.spin_z + p.A_b(t) * ops.number + g * (ops.spin_plus * ops.bd) +
           std::conj(g) * (ops.spin_minus * ops.b);
}

// Closed-form Hermitian generator, including the moving-boundary term iκ̇K.
inline Matrix hermitian_closed_form(const ModelParameters& p, double t, const OperatorSet& ops) {
    const Complex Af = p.A_f(t), Ab = p.A_b(t), g = p.g(t);
    const double k = p.kappa.value(t), kd = p.kappa.derivative(t);
    const double ch = std::cosh(k), sh = std::sinh(k);
    const int d = ops.dim();
    Matrix h = Af * ops.spin_z +
               Ab * (std::cosh(2 * k) * ops.number - 0.5 * std::sinh(2 * k) * ops.bd2_plus_b2 +
                     sh * sh * Matrix::Identity(d, d)) +
               g * (ops.spin_plus * (ch * ops.bd - sh * ops.b)) +
               std::conj(g) * (ops.spin_minus * (ch * ops.b - sh * ops.bd)) +
               I * kd * ops.squeeze_gen;
    return h;
}

struct MapFactors {
    Matrix eta, eta_inv;
};

// η = e^{κK} e^{γN} e^{δS₀} assembled blockwise (spin-up block first).
inline MapFactors dyson_map(const ModelParameters& p, double t, int cutoff) {
    const double k = p.kappa.value(t), gm = p.gamma.value(t), dl = p.delta.value(t);
    const Matrix Sk = squeeze_exponential(cutoff, k);
    const Matrix Ski = squeeze_exponential(cutoff, -k);
    Eigen::VectorXd gn(cutoff), gni(cutoff);
    for (int n = 0; n < cutoff; ++n) {
        gn(n) = std::exp(gm * n);
        gni(n) = std::exp(-gm * n);
    }
    const Matrix fock = Sk * gn.asDiagonal();
    const Matrix fock_inv = gni.asDiagonal() * Ski;
    MapFactors f;
    f.eta = Matrix::Zero(2 * cutoff, 2 * cutoff);
    f.eta_inv = Matrix::Zero(2 * cutoff, 2 * cutoff);
    const double w[2] = {std::exp(dl / 2), std::exp(-dl / 2)};
    for (int s = 0; s < 2; ++s) {
        f.eta.block(s * cutoff, s * cutoff, cutoff, cutoff) = w[s] * fock;
        f.eta_inv.block(s * cutoff, s * cutoff, cutoff, cutoff) = (1.0 / w[s]) * fock_inv;
    }
    return f;
}

// η̇η⁻¹ in closed form (no finite differencing of matrix exponentials).
inline Matrix map_velocity(const ModelParameters& p, double t, const OperatorSet& ops) {
    const double k = p.kappa.value(t), kd = p.kappa.derivative(t);
    const double gd = p.gamma.derivative(t), dd = p.delta.derivative(t);
    const int d = ops.dim();
    const double sh = std::sinh(k);
    return kd * ops.squeeze_gen +
           gd * (std::cosh(2 * k) * ops.number - 0.5 * std::sinh(2 * k) * ops.bd2_plus_b2 +
                 sh * sh * Matrix::Identity(d, d)) +
           dd * ops.spin_z;
}

// Energy operator H̃ = H + i η⁻¹η̇; the moving-boundary term is the only place
// the map's time dependence survives the conjugation back.
inline Matrix energy_operator(const ModelParameters& p, double t, const OperatorSet& ops,
                              bool include_boundary_term = true) {
    const double gm = p.gamma.value(t);
    const double kd = include_boundary_term ? p.kappa.derivative(t) : 0.0;
    const Matrix bd2 = ops.bd * ops.bd;
    const Matrix b2 = ops.b * ops.b;
    return p.A_f(t) * ops.spin_z + p.A_b(t) * ops.number +
           p.alpha.value(t) * (ops.spin_plus * ops.bd) + p.beta_value(t) * (ops.spin_minus * ops.b) +
           (I * kd / 2.0) * (std::exp(-2 * gm) * bd2 - std::exp(2 * gm) * b2);
}

struct ResidualReport {
    double map_residual;       // ‖ηHη⁻¹ + iη̇η⁻¹ − h‖_max on the validated block
    double hermiticity;        // ‖h − h†‖_max on the validated block, storage cutoff
    double transformed_hermiticity; // ‖T − T†‖_max, T = ηHη⁻¹ + iη̇η⁻¹ restricted
    int working_cutoff;        // padded internal cutoff used for the conjugation
};

// The squeeze factor spreads Fock support by ~e^{2|κ|}, so conjugation at the
// storage cutoff poisons the top of the validated block no matter the guard.
// The residual is therefore evaluated in a padded working space sized to hold
// the spread image, restricted back to validated columns.
inline int padded_cutoff(int validated, double kappa) {
    const int w = int(std::ceil(validated * std::exp(2.0 * std::abs(kappa)) + 80.0));
    return ((w + 31) / 32) * 32;
}

inline ResidualReport dyson_residual(const ModelParameters& p, double t, const HilbertSpec& spec) {
    spec.check();
    const int V = spec.validated();
    const int W = padded_cutoff(V, p.kappa.value(t));

    const OperatorSet ops(W);
    const Matrix H = hamiltonian(p, t, ops);
    const Matrix h = hermitian_closed_form(p, t, ops);
    const Matrix dd = map_velocity(p, t, ops);
    const MapFactors f = dyson_map(p, t, W);

    std::vector<int> cols;
    cols.reserve(2 * V);
    for (int s = 0; s < 2; ++s)
        for (int n = 0; n < V; ++n) cols.push_back(s * W + n);

    Matrix X(2 * W, 2 * V);
    for (int j = 0; j < 2 * V; ++j) X.col(j) = f.eta_inv.col(cols[j]);
    const Matrix Y = H * X;
    Matrix Z(2 * V, 2 * V);
    for (int i = 0; i < 2 * V; ++i) Z.row(i) = f.eta.row(cols[i]) * Y;

    Matrix T(2 * V, 2 * V);
    for (int i = 0; i < 2 * V; ++i)
        for (int j = 0; j < 2 * V; ++j) T(i, j) = Z(i, j) + I * dd(cols[i], cols[j]);
    Matrix R(2 * V, 2 * V);
    for (int i = 0; i < 2 * V; ++i)
        for (int j = 0; j < 2 * V; ++j) R(i, j) = T(i, j) - h(cols[i], cols[j]);

    ResidualReport rep;
    rep.map_residual = R.cwiseAbs().maxCoeff();
    rep.transformed_hermiticity = (T - T.adjoint()).cwiseAbs().maxCoeff();
    rep.working_cutoff = W;

    const OperatorSet ops_store(spec.fock_cutoff);
    const Matrix h_store = hermitian_closed_form(p, t, ops_store);
    rep.hermiticity = guarded_abs_max(Matrix(h_store - h_store.adjoint()), spec);
    return rep;
}

} // namespace qhsb
