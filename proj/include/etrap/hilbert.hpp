// Composite Hilbert space of two spin-1/2 qubits and one truncated
// harmonic mode. Basis ordering is spin0 (x) spin1 (x) Fock with spin
// basis (up, down), i.e. index = (2*s0 + s1)*N + n.
#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace etrap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct HilbertSpec {
    int fock_cutoff = 60;  // retained Fock levels N
    int spin_count = 2;

    HilbertSpec() = default;
    explicit HilbertSpec(int n_fock, int n_spin = 2)
        : fock_cutoff(n_fock), spin_count(n_spin) {
        if (fock_cutoff < 2)
            throw std::invalid_argument("HilbertSpec: fock_cutoff must be >= 2");
        if (spin_count != 2)
            throw std::invalid_argument("HilbertSpec: gate simulations require spin_count == 2");
    }

    int spin_dim() const { return 1 << spin_count; }
    int dim() const { return spin_dim() * fock_cutoff; }

    // composite index for spin pair (s0, s1) in {0:up, 1:down} and Fock level n
    int index(int s0, int s1, int n) const { return (2 * s0 + s1) * fock_cutoff + n; }
};

inline void require_dim(const ComplexMatrix& m, int d, const char* what) {
    if (m.rows() != d || m.cols() != d)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace etrap
