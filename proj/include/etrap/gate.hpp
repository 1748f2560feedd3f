// sigma_z (x) sigma_z geometric-phase gate: Walsh-modulated spin-dependent
// force on the axial COM mode, six error channels, Rabi calibration and
// Bell-state infidelity.
//
// Drive Hamiltonian (interaction picture, hbar = 1):
//   H_g(t) = Omega_R s(t) (I(x)sz + sz(x)I)(a e^{-i delta t} + a^dag e^{+i delta t})
// with s(t) the Walsh sign. Each Walsh segment lasts one detuning period
// 2pi/delta so the phase-space loop closes inside every segment; a Walsh-w
// gate therefore runs w+1 loops.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "etrap/constants.hpp"
#include "etrap/hilbert.hpp"
#include "etrap/operators.hpp"
#include "etrap/parallel.hpp"
#include "etrap/solver.hpp"
#include "etrap/states.hpp"

namespace etrap {

struct WalshSegment {
    double sign;      // +1 or -1
    double duration;  // seconds
};

inline const std::vector<double>& walsh_signs(int order) {
    static const std::vector<double> w0{+1.0};
    static const std::vector<double> w1{+1.0, -1.0};
    static const std::vector<double> w3{+1.0, -1.0, -1.0, +1.0};
    switch (order) {
        case 0: return w0;
        case 1: return w1;
        case 3: return w3;
        default: throw std::invalid_argument("walsh order must be 0, 1 or 3");
    }
}

struct GateSchedule {
    int walsh_order = 3;
    double delta = 0.0;  // rad/s
    double rabi = 0.0;   // rad/s
    std::vector<WalshSegment> segments;

    static GateSchedule make(int walsh_order, double delta, double rabi) {
        if (delta <= 0) throw std::invalid_argument("GateSchedule: delta must be positive");
        GateSchedule s;
        s.walsh_order = walsh_order;
        s.delta = delta;
        s.rabi = rabi;
        double seg = c::two_pi / delta;
        for (double sgn : walsh_signs(walsh_order)) s.segments.push_back({sgn, seg});
        return s;
    }

    int loop_count() const { return int(segments.size()); }

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.duration;
        return t;
    }

    // Walsh sign at time t from gate start; segment boundaries belong to
    // the following segment.
    double sign_at(double t) const {
        double acc = 0.0;
        for (const auto& s : segments) {
            acc += s.duration;
            if (t < acc) return s.sign;
        }
        return segments.back().sign;
    }
};

// --- error channels (Table I) -----------------------------------------

struct HeatingChannel {
    double rate = 0.0;  // quanta/s
};

struct TrapFreqOffsetChannel {
    double delta_offset = 0.0;  // rad/s
};

struct MotionalDephasingChannel {
    double rate = 0.0;  // 1/s
};

struct GradientInhomogeneityChannel {
    double b1 = 120.0;   // T/m
    double b3 = 1.5e11;  // T/m^3
    double z0 = 0.0;     // m, ground-state extent of the mode
};

struct AnharmonicityChannel {
    double c4_over_c2 = 0.0;  // m^-2
    double z0 = 0.0;          // m
    double omega_a = 0.0;     // rad/s
};

struct QubitDecoherenceChannel {
    double tau_spin = 0.0;  // s
};

using ErrorChannelConfig =
    std::variant<HeatingChannel, TrapFreqOffsetChannel, MotionalDephasingChannel,
                 GradientInhomogeneityChannel, AnharmonicityChannel, QubitDecoherenceChannel>;

inline void validate_channel(const ErrorChannelConfig& cfg) {
    std::visit(
        [](const auto& ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, HeatingChannel>) {
                if (ch.rate < 0) throw std::invalid_argument("heating rate must be >= 0");
            } else if constexpr (std::is_same_v<T, MotionalDephasingChannel>) {
                if (ch.rate < 0) throw std::invalid_argument("dephasing rate must be >= 0");
            } else if constexpr (std::is_same_v<T, QubitDecoherenceChannel>) {
                if (ch.tau_spin < 0) throw std::invalid_argument("tau_spin must be >= 0");
            } else if constexpr (std::is_same_v<T, GradientInhomogeneityChannel>) {
                if (ch.b1 <= 0 || ch.b3 < 0 || ch.z0 < 0)
                    throw std::invalid_argument("gradient channel magnitudes must be >= 0 (b1 > 0)");
            } else if constexpr (std::is_same_v<T, AnharmonicityChannel>) {
                if (ch.z0 < 0 || ch.omega_a < 0)
                    throw std::invalid_argument("anharmonicity channel magnitudes must be >= 0");
            } else {
                (void)ch;
            }
        },
        cfg);
}

// Ground-state extent sqrt(hbar / (2 m omega)).
inline double ground_state_extent(double mass, double omega) {
    return std::sqrt(c::hbar / (2.0 * mass * omega));
}

// --- Hamiltonian and Lindblad construction ----------------------------

inline TimeDependentHamiltonian build_gate_hamiltonian(const GateSchedule& schedule,
                                                       const HilbertSpec& spec) {
    ComplexMatrix sz_a = collective_sz(spec) * lowering_operator(spec);
    ComplexMatrix sz_ad = sz_a.adjoint();
    const double omega_r = schedule.rabi;
    const double delta = schedule.delta;
    TimeDependentHamiltonian h;
    auto sched = schedule;  // captured by value; schedules are small
    h.terms.push_back({[sched, omega_r, delta](double t) {
                           return omega_r * sched.sign_at(t) *
                                  std::exp(Complex(0.0, -delta * t));
                       },
                       std::move(sz_a)});
    h.terms.push_back({[sched, omega_r, delta](double t) {
                           return omega_r * sched.sign_at(t) *
                                  std::exp(Complex(0.0, +delta * t));
                       },
                       std::move(sz_ad)});
    return h;
}

struct ErrorTerms {
    std::vector<HamiltonianTerm> hamiltonian;
    std::vector<LindbladTerm> lindblads;
};

// Error operators per Table I channel. The gradient-inhomogeneity term
// carries the same Walsh sign and detuning phase as the gate drive.
inline ErrorTerms build_error_terms(const ErrorChannelConfig& cfg, const GateSchedule& schedule,
                                    const HilbertSpec& spec) {
    validate_channel(cfg);
    ErrorTerms out;
    auto constant = [](double v) {
        return [v](double) { return Complex(v, 0.0); };
    };
    std::visit(
        [&](const auto& ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, HeatingChannel>) {
                if (ch.rate > 0) {
                    double s = std::sqrt(ch.rate);
                    ComplexMatrix a = lowering_operator(spec);
                    out.lindblads.push_back({s * a});
                    out.lindblads.push_back({s * a.adjoint()});
                }
            } else if constexpr (std::is_same_v<T, TrapFreqOffsetChannel>) {
                if (ch.delta_offset != 0)
                    out.hamiltonian.push_back(
                        {constant(ch.delta_offset), number_operator(spec)});
            } else if constexpr (std::is_same_v<T, MotionalDephasingChannel>) {
                if (ch.rate > 0)
                    out.lindblads.push_back({std::sqrt(ch.rate) * number_operator(spec)});
            } else if constexpr (std::is_same_v<T, GradientInhomogeneityChannel>) {
                double omega_in = schedule.rabi * 3.0 * ch.z0 * ch.z0 * ch.b3 / ch.b1;
                if (omega_in != 0) {
                    ComplexMatrix a = fock_lowering(spec.fock_cutoff);
                    ComplexMatrix aad_a = a * a.adjoint() * a;  // a a^dag a
                    ComplexMatrix op = collective_sz(spec) * embed_motional(aad_a, spec);
                    ComplexMatrix opd = op.adjoint();
                    double delta = schedule.delta;
                    auto sched = schedule;
                    out.hamiltonian.push_back({[sched, omega_in, delta](double t) {
                                                   return 3.0 * omega_in * sched.sign_at(t) *
                                                          std::exp(Complex(0.0, -delta * t));
                                               },
                                               std::move(op)});
                    out.hamiltonian.push_back({[sched, omega_in, delta](double t) {
                                                   return 3.0 * omega_in * sched.sign_at(t) *
                                                          std::exp(Complex(0.0, +delta * t));
                                               },
                                               std::move(opd)});
                }
            } else if constexpr (std::is_same_v<T, AnharmonicityChannel>) {
                // V(0) c4 z0^4 (a + a^dag)^4 with V(0) c2 = 1/2 M w_a^2 and
                // M = hbar/(2 z0^2 w_a), i.e. coefficient (c4/c2) z0^2 w_a / 4.
                double kappa = ch.c4_over_c2 * ch.z0 * ch.z0 * ch.omega_a / 4.0;
                if (kappa != 0) {
                    ComplexMatrix x = fock_lowering(spec.fock_cutoff);
                    x += x.adjoint().eval();
                    ComplexMatrix x4 = x * x * x * x;
                    out.hamiltonian.push_back({constant(kappa), embed_motional(x4, spec)});
                }
            } else if constexpr (std::is_same_v<T, QubitDecoherenceChannel>) {
                if (ch.tau_spin > 0) {
                    double s = std::sqrt(1.0 / (2.0 * ch.tau_spin));
                    out.lindblads.push_back({s * pauli_z(spec, 0)});
                    out.lindblads.push_back({s * pauli_z(spec, 1)});
                }
            }
        },
        cfg);
    return out;
}

// --- calibration and gate runs -----------------------------------------

// Fixed local correction mapping the calibrated gate output of |+>|+> to
// (|up,up> + |down,down>)/sqrt(2): (I (x) Hadamard)(Rz(pi/4) (x) Rz(pi/4)).
inline ComplexMatrix local_correction() {
    ComplexMatrix rz(2, 2), hd(2, 2), id2 = ComplexMatrix::Identity(2, 2);
    const Complex i(0.0, 1.0);
    rz << std::exp(-i * c::pi / 4.0), 0.0, 0.0, std::exp(i * c::pi / 4.0);
    hd << 1, 1, 1, -1;
    hd /= std::sqrt(2.0);
    ComplexMatrix rzrz(4, 4);
    rzrz.setZero();
    rzrz.block(0, 0, 2, 2) = rz(0, 0) * rz;
    rzrz.block(2, 2, 2, 2) = rz(1, 1) * rz;
    ComplexMatrix ih(4, 4);
    ih.setZero();
    ih.block(0, 0, 2, 2) = hd;
    ih.block(2, 2, 2, 2) = hd;
    return ih * rzrz;
}

// |+>|+> (x) motional state on the composite space.
inline DensityMatrix initial_gate_state(const HilbertSpec& spec, double nbar0) {
    ComplexMatrix spin = ComplexMatrix::Constant(4, 4, Complex(0.25, 0.0));
    ComplexMatrix rho = kron(spin, thermal_state(spec, nbar0).matrix());
    return DensityMatrix(std::move(rho), false);
}

struct GateDiagnostics {
    double trace_drift = 0.0;
    double min_eigenvalue = 0.0;
    double top_fock_population = 0.0;  // occupation of the top three retained levels
    long solver_steps = 0;
};

struct GateResult {
    double bell_fidelity = 0.0;
    double infidelity = 1.0;
    ComplexMatrix final_spin_state;  // 4x4, after local corrections
    GateSchedule schedule;
    GateDiagnostics diagnostics;
};

inline GateResult run_gate(const GateSchedule& schedule,
                           const std::vector<ErrorChannelConfig>& errors, double nbar0,
                           const HilbertSpec& spec, SolverSettings settings) {
    TimeDependentHamiltonian h = build_gate_hamiltonian(schedule, spec);
    std::vector<LindbladTerm> lindblads;
    for (const auto& cfg : errors) {
        ErrorTerms terms = build_error_terms(cfg, schedule, spec);
        for (auto& t : terms.hamiltonian) h.terms.push_back(std::move(t));
        for (auto& l : terms.lindblads) lindblads.push_back(std::move(l));
    }

    settings.drive_period = c::two_pi / schedule.delta;
    DensityMatrix rho = initial_gate_state(spec, nbar0);
    EvolveStats stats;
    double t = 0.0;
    for (const auto& seg : schedule.segments) {
        rho = evolve(rho, h, lindblads, t, t + seg.duration, settings, &stats);
        t += seg.duration;
    }

    GateResult res;
    res.schedule = schedule;
    res.diagnostics.trace_drift = stats.trace_drift;
    res.diagnostics.solver_steps = stats.steps;
    res.diagnostics.min_eigenvalue = rho.min_eigenvalue();
    const int nf = spec.fock_cutoff;
    double top = 0.0;
    for (int s = 0; s < 4; ++s)
        for (int k = nf - 3; k < nf; ++k)
            top += rho.matrix()(s * nf + k, s * nf + k).real();
    res.diagnostics.top_fock_population = top;

    ComplexMatrix spin = partial_trace_motion(rho.matrix(), spec);
    ComplexMatrix u = local_correction();
    res.final_spin_state = u * spin * u.adjoint();
    res.bell_fidelity = bell_fidelity(res.final_spin_state, bell_phi_plus());
    res.infidelity = 1.0 - res.bell_fidelity;
    return res;
}

// Geometric phase of the sz(x)sz component after k closed loops:
// theta(Omega) = 4 pi k Omega^2 / delta^2. The Magnus series terminates, so
// the condition theta = pi/4 is exact for the noiseless gate.
inline double accumulated_zz_phase(int loop_count, double rabi, double delta) {
    return 4.0 * c::pi * loop_count * rabi * rabi / (delta * delta);
}

// Rabi frequency for a maximally entangling gate: bisection on the
// accumulated-phase condition, then a parabolic polish on the simulated
// noiseless fidelity.
inline double calibrate_rabi(int walsh_order, double delta, const HilbertSpec& spec,
                             SolverSettings settings, double* achieved_infidelity = nullptr) {
    const int k = int(walsh_signs(walsh_order).size());
    double lo = 0.0, hi = delta;  // theta(hi) = 4 pi k > pi/4
    if (accumulated_zz_phase(k, hi, delta) < c::pi / 4.0)
        throw std::runtime_error("calibrate_rabi: no root in bracket");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (accumulated_zz_phase(k, mid, delta) < c::pi / 4.0 ? lo : hi) = mid;
        if (hi - lo < 1e-15 * delta) break;
    }
    double omega = 0.5 * (lo + hi);

    auto infid = [&](double om) {
        GateSchedule s = GateSchedule::make(walsh_order, delta, om);
        return run_gate(s, {}, 0.0, spec, settings).infidelity;
    };
    double f0 = infid(omega);
    if (f0 > 1e-9) {
        // parabolic vertex through three nearby points
        const double eps = 2e-4 * omega;
        double fm = infid(omega - eps), fp = infid(omega + eps);
        double denom = fm - 2.0 * f0 + fp;
        if (denom > 0) {
            double shift = 0.5 * eps * (fm - fp) / denom;
            double cand = omega + shift;
            double fc = infid(cand);
            if (fc < f0) {
                omega = cand;
                f0 = fc;
            }
        }
        if (f0 > 1e-9)
            throw std::runtime_error(
                "calibrate_rabi: noiseless infidelity above 1e-9 after polish");
    }
    if (achieved_infidelity) *achieved_infidelity = f0;
    return omega;
}

// --- sweeps and the error budget ---------------------------------------

struct SweepRow {
    double magnitude = 0.0;
    int walsh = 0;
    double infidelity = 0.0;
    GateDiagnostics diagnostics;
};

// Applies a magnitude to a channel template, preserving fixed fields.
inline ErrorChannelConfig channel_with_magnitude(const ErrorChannelConfig& proto,
                                                 double magnitude) {
    ErrorChannelConfig cfg = proto;
    std::visit(
        [&](auto& ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, HeatingChannel>) ch.rate = magnitude;
            else if constexpr (std::is_same_v<T, TrapFreqOffsetChannel>) ch.delta_offset = magnitude;
            else if constexpr (std::is_same_v<T, MotionalDephasingChannel>) ch.rate = magnitude;
            else if constexpr (std::is_same_v<T, GradientInhomogeneityChannel>) ch.b3 = magnitude;
            else if constexpr (std::is_same_v<T, AnharmonicityChannel>) ch.c4_over_c2 = magnitude;
            else ch.tau_spin = magnitude;
        },
        cfg);
    return cfg;
}

struct SweepPlan {
    ErrorChannelConfig channel_proto;
    std::vector<double> magnitudes;       // ascending
    std::vector<int> walsh_orders;
    double delta = 0.0;                   // rad/s; Rabi recalibrated per order
    double nbar0 = 0.0;
    HilbertSpec spec;
    SolverSettings settings;
    int threads = 1;
};

inline std::vector<SweepRow> sweep(const SweepPlan& plan) {
    for (size_t i = 1; i < plan.magnitudes.size(); ++i)
        if (plan.magnitudes[i] < plan.magnitudes[i - 1])
            throw std::invalid_argument("sweep: magnitudes must be ascending");

    // calibrate once per Walsh order at a small noiseless cutoff
    HilbertSpec calib_spec(16);
    std::vector<double> rabi(plan.walsh_orders.size());
    for (size_t w = 0; w < plan.walsh_orders.size(); ++w)
        rabi[w] = calibrate_rabi(plan.walsh_orders[w], plan.delta, calib_spec, plan.settings);

    const size_t n_mag = plan.magnitudes.size();
    std::vector<SweepRow> rows(n_mag * plan.walsh_orders.size());
    parallel_for_indexed(rows.size(), plan.threads, [&](std::size_t idx) {
        size_t im = idx / plan.walsh_orders.size();
        size_t iw = idx % plan.walsh_orders.size();
        GateSchedule sched =
            GateSchedule::make(plan.walsh_orders[iw], plan.delta, rabi[iw]);
        ErrorChannelConfig cfg = channel_with_magnitude(plan.channel_proto, plan.magnitudes[im]);
        GateResult res = run_gate(sched, {cfg}, plan.nbar0, plan.spec, plan.settings);
        rows[idx] = {plan.magnitudes[im], plan.walsh_orders[iw], res.infidelity,
                     res.diagnostics};
    });
    return rows;
}

struct BudgetRow {
    std::string channel;
    double magnitude = 0.0;
    std::string unit;
    double infidelity = 0.0;
    GateDiagnostics diagnostics;
};

struct BudgetConfig {
    double delta = 0.0;      // rad/s, per-loop detuning
    int walsh = 3;
    double nbar0 = 0.0;
    HilbertSpec spec;
    SolverSettings settings;
    std::vector<std::pair<std::string, ErrorChannelConfig>> channels;  // Table I order
    int threads = 1;
    bool include_combined = true;
};

// Channels evaluated one at a time (Table I methodology); the trailing
// all-channels-on row is an extension beyond the paper and labeled as such.
inline std::vector<BudgetRow> error_budget(const BudgetConfig& cfg) {
    HilbertSpec calib_spec(16);
    double rabi = calibrate_rabi(cfg.walsh, cfg.delta, calib_spec, cfg.settings);
    GateSchedule sched = GateSchedule::make(cfg.walsh, cfg.delta, rabi);

    auto magnitude_of = [](const ErrorChannelConfig& ch) -> std::pair<double, std::string> {
        return std::visit(
            [](const auto& c) -> std::pair<double, std::string> {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, HeatingChannel>)
                    return {c.rate, "quanta/s"};
                else if constexpr (std::is_same_v<T, TrapFreqOffsetChannel>)
                    return {c.delta_offset, "rad/s"};
                else if constexpr (std::is_same_v<T, MotionalDephasingChannel>)
                    return {c.rate, "1/s"};
                else if constexpr (std::is_same_v<T, GradientInhomogeneityChannel>)
                    return {c.b3, "T/m^3"};
                else if constexpr (std::is_same_v<T, AnharmonicityChannel>)
                    return {c.c4_over_c2, "m^-2"};
                else
                    return {c.tau_spin, "s"};
            },
            ch);
    };

    std::vector<BudgetRow> rows(cfg.channels.size() + (cfg.include_combined ? 1 : 0));
    parallel_for_indexed(cfg.channels.size(), cfg.threads, [&](std::size_t i) {
        const auto& [name, channel] = cfg.channels[i];
        GateResult res = run_gate(sched, {channel}, cfg.nbar0, cfg.spec, cfg.settings);
        auto [mag, unit] = magnitude_of(channel);
        rows[i] = {name, mag, unit, res.infidelity, res.diagnostics};
    });
    if (cfg.include_combined) {
        std::vector<ErrorChannelConfig> all;
        for (const auto& [name, channel] : cfg.channels) all.push_back(channel);
        GateResult res = run_gate(sched, all, cfg.nbar0, cfg.spec, cfg.settings);
        rows.back() = {"combined (all channels, beyond Table I)", 0.0, "", res.infidelity,
                       res.diagnostics};
    }
    return rows;
}

}  // namespace etrap
