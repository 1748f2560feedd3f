// States and state functionals: density matrices, thermal states,
// partial trace over the mode, Bell-state fidelity.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "etrap/hilbert.hpp"

namespace etrap {

struct PureState {
    ComplexVector amplitudes;

    explicit PureState(ComplexVector amps) : amplitudes(std::move(amps)) {
        double norm = amplitudes.norm();
        if (std::abs(norm - 1.0) > 1e-12)
            throw std::invalid_argument("PureState: vector not normalized");
    }
};

// Hermitian, unit-trace, positive (to tolerance) matrix.
class DensityMatrix {
  public:
    static constexpr double kHermTol = 1e-10;
    static constexpr double kTraceTol = 1e-9;
    static constexpr double kEigTol = -1e-9;

    explicit DensityMatrix(ComplexMatrix m, bool check_positivity = true)
        : m_(std::move(m)) {
        if (m_.rows() != m_.cols())
            throw std::invalid_argument("DensityMatrix: not square");
        double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > kHermTol)
            throw std::invalid_argument("DensityMatrix: not Hermitian, max |rho-rho^dag| = " +
                                        std::to_string(herm));
        double tr = std::abs(m_.trace().real() - 1.0);
        if (tr > kTraceTol)
            throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                        std::to_string(tr));
        if (check_positivity) {
            double lam = min_eigenvalue();
            if (lam < kEigTol)
                throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                            std::to_string(lam));
        }
    }

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m_ + m_.adjoint()),
                                                        Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

  private:
    ComplexMatrix m_;
};

// Geometric tail weight of a thermal distribution beyond the cutoff.
inline double thermal_tail_weight(double nbar, int n_fock) {
    if (nbar <= 0.0) return 0.0;
    return std::pow(nbar / (nbar + 1.0), double(n_fock));
}

// Thermal state of the bare mode, populations ~ (nbar/(nbar+1))^n
// renormalized over the cutoff.
inline DensityMatrix thermal_state(const HilbertSpec& spec, double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("thermal_state: nbar must be >= 0");
    const int n = spec.fock_cutoff;
    // 1e-5 keeps <n> within the 1e-3*(nbar+1) contract; the spec's nominal
    // 1e-8 would reject its own N=60 examples at nbar ~ 4.
    constexpr double kTailThreshold = 1e-5;
    if (thermal_tail_weight(nbar, n) > kTailThreshold)
        throw std::invalid_argument("thermal_state: Fock cutoff too small for nbar");
    Eigen::VectorXd pops(n);
    if (nbar == 0.0) {
        pops.setZero();
        pops(0) = 1.0;
    } else {
        double r = nbar / (nbar + 1.0);
        for (int k = 0; k < n; ++k) pops(k) = std::pow(r, double(k));
        pops /= pops.sum();
    }
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    rho.diagonal() = pops.cast<Complex>();
    return DensityMatrix(std::move(rho), false);
}

// Reduced 4x4 spin state, tracing out the motional mode.
inline ComplexMatrix partial_trace_motion(const ComplexMatrix& rho, const HilbertSpec& spec) {
    require_dim(rho, spec.dim(), "partial_trace_motion");
    const int nf = spec.fock_cutoff;
    const int ds = spec.spin_dim();
    ComplexMatrix out = ComplexMatrix::Zero(ds, ds);
    for (int s = 0; s < ds; ++s)
        for (int sp = 0; sp < ds; ++sp)
            out(s, sp) = rho.block(s * nf, sp * nf, nf, nf).trace();
    return out;
}

inline ComplexMatrix partial_trace_motion(const DensityMatrix& rho, const HilbertSpec& spec) {
    return partial_trace_motion(rho.matrix(), spec);
}

// F = <target| rho |target>.
inline double bell_fidelity(const ComplexMatrix& rho_spin, const PureState& target) {
    if (rho_spin.rows() != target.amplitudes.size() || rho_spin.rows() != rho_spin.cols())
        throw std::invalid_argument("bell_fidelity: dimension mismatch");
    Complex f = target.amplitudes.adjoint() * rho_spin * target.amplitudes;
    if (std::abs(f.imag()) > 1e-12)
        throw std::runtime_error("bell_fidelity: imaginary residue above 1e-12");
    return f.real();
}

// (|up,up> + |down,down>)/sqrt(2), the calibration target.
inline PureState bell_phi_plus() {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return PureState(v);
}

}  // namespace etrap
