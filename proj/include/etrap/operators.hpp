// Operator builders on the spin (x) spin (x) Fock composite space.
// All builders return dense matrices of exactly HilbertSpec dimension.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "etrap/hilbert.hpp"

namespace etrap {

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Lowering operator on the bare Fock factor: entry (n-1, n) = sqrt(n).
inline ComplexMatrix fock_lowering(int n_fock) {
    ComplexMatrix a = ComplexMatrix::Zero(n_fock, n_fock);
    for (int n = 1; n < n_fock; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

inline ComplexMatrix fock_number(int n_fock) {
    ComplexMatrix n = ComplexMatrix::Zero(n_fock, n_fock);
    for (int k = 0; k < n_fock; ++k) n(k, k) = double(k);
    return n;
}

// Embeds a Fock-factor operator as identity (x) identity (x) M.
inline ComplexMatrix embed_motional(const ComplexMatrix& m, const HilbertSpec& spec) {
    require_dim(m, spec.fock_cutoff, "embed_motional");
    return kron(ComplexMatrix::Identity(spec.spin_dim(), spec.spin_dim()), m);
}

inline ComplexMatrix lowering_operator(const HilbertSpec& spec) {
    return embed_motional(fock_lowering(spec.fock_cutoff), spec);
}

inline ComplexMatrix number_operator(const HilbertSpec& spec) {
    return embed_motional(fock_number(spec.fock_cutoff), spec);
}

// sigma_z on the addressed spin, identity elsewhere.
inline ComplexMatrix pauli_z(const HilbertSpec& spec, int which_spin) {
    if (which_spin < 0 || which_spin >= spec.spin_count)
        throw std::out_of_range("pauli_z: spin index out of range");
    ComplexMatrix sz(2, 2), id2 = ComplexMatrix::Identity(2, 2);
    sz << 1, 0, 0, -1;
    ComplexMatrix spin = (which_spin == 0) ? kron(sz, id2) : kron(id2, sz);
    return kron(spin, ComplexMatrix::Identity(spec.fock_cutoff, spec.fock_cutoff));
}

// sigma_z (x) I + I (x) sigma_z on the spin pair, identity on the mode.
inline ComplexMatrix collective_sz(const HilbertSpec& spec) {
    return pauli_z(spec, 0) + pauli_z(spec, 1);
}

// Poisson tail weight of |alpha|^2 beyond the cutoff; truncation guard for
// coherent displacements.
inline double coherent_tail_weight(double abs_alpha_sq, int n_fock) {
    if (abs_alpha_sq <= 0.0) return 0.0;
    double term = std::exp(-abs_alpha_sq);
    double cum = term;
    for (int n = 1; n < n_fock; ++n) {
        term *= abs_alpha_sq / n;
        cum += term;
    }
    return std::max(0.0, 1.0 - cum);
}

inline ComplexMatrix fock_displacement(int n_fock, Complex alpha) {
    constexpr double kTailThreshold = 1e-5;
    double tail = coherent_tail_weight(std::norm(alpha), n_fock);
    if (tail > kTailThreshold)
        throw std::invalid_argument("fock_displacement: Fock cutoff too small for |alpha|");
    ComplexMatrix a = fock_lowering(n_fock);
    ComplexMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return gen.exp();  // Pade scaling-and-squaring
}

inline ComplexMatrix displacement_operator(const HilbertSpec& spec, Complex alpha) {
    return embed_motional(fock_displacement(spec.fock_cutoff, alpha), spec);
}

}  // namespace etrap
