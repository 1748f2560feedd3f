// Lindblad master-equation integration with piecewise-smooth
// time-dependent Hamiltonians and static Lindblad operators:
//   drho/dt = -i[H(t), rho] + sum_n ( L_n rho L_n^dag - 1/2 {L_n^dag L_n, rho} )
// Hamiltonians are in angular-frequency units (hbar = 1). All rates are
// folded into the Lindblad operators.
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/MatrixFunctions>

#include "etrap/hilbert.hpp"
#include "etrap/states.hpp"

namespace etrap {

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

struct LindbladTerm {
    ComplexMatrix op;  // rate already folded in: L = sqrt(rate) * operator
};

struct HamiltonianTerm {
    std::function<Complex(double)> coeff;  // rad/s amplitude
    ComplexMatrix op;                      // constant, dimensionless
};

struct TimeDependentHamiltonian {
    std::vector<HamiltonianTerm> terms;

    Eigen::Index dim() const { return terms.empty() ? 0 : terms.front().op.rows(); }

    ComplexMatrix assemble(double t) const {
        ComplexMatrix h = ComplexMatrix::Zero(dim(), dim());
        for (const auto& term : terms) h += term.coeff(t) * term.op;
        return h;
    }

    double hermiticity_defect(double t) const {
        ComplexMatrix h = assemble(t);
        return (h - h.adjoint()).cwiseAbs().maxCoeff();
    }
};

enum class SolverMethod { FixedRk4, AdaptiveRk45 };

struct SolverSettings {
    SolverMethod method = SolverMethod::FixedRk4;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;            // seconds; 0 = unbounded (adaptive only)
    int steps_per_drive_period = 700; // fixed-step mode
    double drive_period = 0.0;        // seconds; 0 = treat the span as one period
};

struct EvolveStats {
    double trace_drift = 0.0;  // max |tr(rho) - tr(rho0)| seen over the run
    long steps = 0;
};

namespace detail {

class LindbladRhs {
  public:
    LindbladRhs(const TimeDependentHamiltonian& h, const std::vector<LindbladTerm>& ls)
        : ham_(h) {
        const Eigen::Index d = h.dim();
        for (const auto& term : h.terms) {
            require_dim(term.op, d, "evolve: Hamiltonian term");
            hops_.push_back(term.op.sparseView(1.0, 0.0));
        }
        for (const auto& l : ls) {
            require_dim(l.op, d, "evolve: Lindblad term");
            lops_.push_back(l.op.sparseView(1.0, 0.0));
            ldag_.push_back(SparseCMatrix(l.op.adjoint().sparseView(1.0, 0.0)));
            ComplexMatrix p = 0.5 * (l.op.adjoint() * l.op);
            half_ldl_.push_back(p.sparseView(1.0, 0.0));
        }
        tmp_.resize(d, d);
        tmp2_.resize(d, d);
    }

    void operator()(const ComplexMatrix& rho, double t, ComplexMatrix& drho) {
        const Complex mi(0.0, -1.0);
        drho.setZero();
        for (size_t j = 0; j < hops_.size(); ++j) {
            Complex c = ham_.terms[j].coeff(t);
            tmp_.noalias() = hops_[j] * rho;
            drho.noalias() += (mi * c) * tmp_;
            tmp_.noalias() = rho * hops_[j];
            drho.noalias() += (-mi * c) * tmp_;
        }
        for (size_t k = 0; k < lops_.size(); ++k) {
            tmp_.noalias() = lops_[k] * rho;
            tmp2_.noalias() = tmp_ * ldag_[k];
            drho += tmp2_;
            tmp_.noalias() = half_ldl_[k] * rho;
            drho -= tmp_;
            tmp_.noalias() = rho * half_ldl_[k];
            drho -= tmp_;
        }
    }

  private:
    const TimeDependentHamiltonian& ham_;
    std::vector<SparseCMatrix> hops_, lops_, ldag_, half_ldl_;
    ComplexMatrix tmp_, tmp2_;
};

inline void hermitize(ComplexMatrix& rho) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
}

}  // namespace detail

// Integrates rho from t0 to t1. The caller is responsible for splitting the
// span at coefficient discontinuities (Walsh sign flips); within one call the
// coefficients must be smooth.
inline DensityMatrix evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& h,
                            const std::vector<LindbladTerm>& lindblads,
                            double t0, double t1, const SolverSettings& settings,
                            EvolveStats* stats = nullptr) {
    if (!(t1 > t0)) throw std::invalid_argument("evolve: t1 must exceed t0");
    const Eigen::Index d = rho0.dim();
    require_dim(h.terms.empty() ? rho0.matrix() : h.terms.front().op, d, "evolve: H");

    // sampled Hermiticity check at the ends and midpoint
    for (double ts : {t0, 0.5 * (t0 + t1), t1}) {
        if (!h.terms.empty() && h.hermiticity_defect(ts) > 1e-10)
            throw std::runtime_error("evolve: non-Hermitian Hamiltonian at sampled time");
    }

    detail::LindbladRhs rhs(h, lindblads);
    ComplexMatrix rho = rho0.matrix();
    const double tr0 = rho.trace().real();
    double drift = 0.0;
    long steps = 0;

    ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), work(d, d);

    if (settings.method == SolverMethod::FixedRk4) {
        double period = settings.drive_period > 0.0 ? settings.drive_period : (t1 - t0);
        int spp = std::max(1, settings.steps_per_drive_period);
        long n = std::max<long>(1, long(std::ceil((t1 - t0) / period * spp - 1e-9)));
        const double hstep = (t1 - t0) / double(n);
        double t = t0;
        for (long i = 0; i < n; ++i) {
            rhs(rho, t, k1);
            work = rho + (0.5 * hstep) * k1;
            rhs(work, t + 0.5 * hstep, k2);
            work = rho + (0.5 * hstep) * k2;
            rhs(work, t + 0.5 * hstep, k3);
            work = rho + hstep * k3;
            rhs(work, t + hstep, k4);
            rho += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            detail::hermitize(rho);
            t = t0 + (t1 - t0) * double(i + 1) / double(n);
            drift = std::max(drift, std::abs(rho.trace().real() - tr0));
            ++steps;
        }
    } else {
        // Dormand-Prince 5(4) with standard PI-free step control.
        static const double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
        static const double a21 = 1. / 5;
        static const double a31 = 3. / 40, a32 = 9. / 40;
        static const double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
        static const double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                            a54 = -212. / 729;
        static const double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                            a64 = 49. / 176, a65 = -5103. / 18656;
        static const double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192,
                            b5 = -2187. / 6784, b6 = 11. / 84;
        static const double e1 = 35. / 384 - 5179. / 57600, e3 = 500. / 1113 - 7571. / 16695,
                            e4 = 125. / 192 - 393. / 640, e5 = -2187. / 6784 + 92097. / 339200,
                            e6 = 11. / 84 - 187. / 2100, e7 = -1. / 40;

        ComplexMatrix k5(d, d), k6(d, d), k7(d, d), ynew(d, d), err(d, d);
        double t = t0;
        double hstep = (t1 - t0) / 100.0;
        if (settings.max_step > 0.0) hstep = std::min(hstep, settings.max_step);
        const double hmin = (t1 - t0) * 1e-14;
        while (t < t1) {
            if (hstep < hmin) throw std::runtime_error("evolve: adaptive step size underflow");
            if (t + hstep > t1) hstep = t1 - t;
            rhs(rho, t, k1);
            work = rho + hstep * (a21 * k1);
            rhs(work, t + c2 * hstep, k2);
            work = rho + hstep * (a31 * k1 + a32 * k2);
            rhs(work, t + c3 * hstep, k3);
            work = rho + hstep * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs(work, t + c4 * hstep, k4);
            work = rho + hstep * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs(work, t + c5 * hstep, k5);
            work = rho + hstep * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs(work, t + hstep, k6);
            ynew = rho + hstep * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(ynew, t + hstep, k7);
            err = hstep * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double scale = settings.abs_tol +
                           settings.rel_tol * std::max(rho.cwiseAbs().maxCoeff(),
                                                       ynew.cwiseAbs().maxCoeff());
            double enorm = err.cwiseAbs().maxCoeff() / scale;
            if (enorm <= 1.0) {
                t += hstep;
                rho = ynew;
                detail::hermitize(rho);
                drift = std::max(drift, std::abs(rho.trace().real() - tr0));
                ++steps;
            }
            double fac = 0.9 * std::pow(std::max(enorm, 1e-10), -0.2);
            hstep *= std::min(5.0, std::max(0.2, fac));
            if (settings.max_step > 0.0) hstep = std::min(hstep, settings.max_step);
        }
    }

    if (drift > 1e-8)
        throw std::runtime_error("evolve: trace drift exceeded 1e-8");
    if (stats) {
        stats->trace_drift = std::max(stats->trace_drift, drift);
        stats->steps += steps;
    }
    detail::hermitize(rho);
    return DensityMatrix(std::move(rho), false);
}

// Vectorized generator of the master equation (column stacking,
// vec(A rho B) = (B^T kron A) vec(rho)). Test oracle, O(d^6).
inline ComplexMatrix liouvillian_matrix(const ComplexMatrix& h,
                                        const std::vector<LindbladTerm>& lindblads) {
    const Eigen::Index d = h.rows();
    const Eigen::Index d2 = d * d;
    ComplexMatrix id = ComplexMatrix::Identity(d, d);
    auto kr = [](const ComplexMatrix& a, const ComplexMatrix& b) {
        ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    const Complex mi(0.0, -1.0);
    ComplexMatrix gen = mi * (kr(id, h) - kr(h.transpose(), id));
    for (const auto& l : lindblads) {
        ComplexMatrix ldl = l.op.adjoint() * l.op;
        gen += kr(l.op.conjugate(), l.op);
        gen -= 0.5 * kr(id, ldl);
        gen -= 0.5 * kr(ldl.transpose(), id);
    }
    if (gen.rows() != d2) throw std::logic_error("liouvillian_matrix: bad dimension");
    return gen;
}

// Brute-force propagator: composes matrix exponentials of the vectorized
// generator over piecewise-constant slices. Returns the d^2 x d^2
// superoperator. Used only in tests.
inline ComplexMatrix propagator_oracle(const TimeDependentHamiltonian& h,
                                       const std::vector<LindbladTerm>& lindblads,
                                       double t0, double t1, int n_slices) {
    const Eigen::Index d = h.dim();
    if (d > 40) throw std::invalid_argument("propagator_oracle: dimension too large");
    if (n_slices < 1) throw std::invalid_argument("propagator_oracle: need n_slices >= 1");
    const double dt = (t1 - t0) / n_slices;
    ComplexMatrix u = ComplexMatrix::Identity(d * d, d * d);
    for (int s = 0; s < n_slices; ++s) {
        double tm = t0 + (s + 0.5) * dt;
        ComplexMatrix gen = liouvillian_matrix(h.assemble(tm), lindblads);
        u = (gen * dt).exp() * u;
    }
    return u;
}

inline ComplexMatrix apply_superoperator(const ComplexMatrix& superop, const ComplexMatrix& rho) {
    const Eigen::Index d = rho.rows();
    ComplexVector v(d * d);
    for (Eigen::Index j = 0; j < d; ++j) v.segment(j * d, d) = rho.col(j);
    ComplexVector w = superop * v;
    ComplexMatrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) out.col(j) = w.segment(j * d, d);
    return out;
}

// Trace distance (1/2) || a - b ||_1 for Hermitian a, b.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix diff = 0.5 * ((a - b) + (a - b).adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace etrap
