// Closed-form trap-physics calculators: resistive cooling, equilibrium
// occupation, micromotion, parametric coupling, pseudopotential secular
// frequency, heating-rate extrapolation, anharmonic frequency shift and
// the spin-readout displacement model.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "etrap/constants.hpp"

namespace etrap {

namespace c = constants;

// Prototype trap parameters. Frequencies are angular (rad/s); geometry and
// field-expansion coefficients are taken as inputs, not computed from
// electrode shapes.
struct TrapConfig {
    double u0 = 14.0;                          // V, AC amplitude
    double omega_ac = c::two_pi * 10.6e9;      // rad/s
    double omega_t = c::two_pi * 2.0e9;        // rad/s, transverse secular
    double omega_a = c::two_pi * 300.0e6;      // rad/s, axial
    double q_param = 0.53;                     // Mathieu stability parameter
    double d_eff_y = 138e-6;                   // m
    double d_eff_z = 254e-6;                   // m
    double c2 = 1e12;                          // m^-2   (1 um^-2)
    double c4 = 1e17;                          // m^-4   (1e-7 um^-4)
    double c6 = -2e27;                         // m^-6   (-2e-9 um^-6)
    double b0 = 3.6e-3;                        // T
    double b1 = 120.0;                         // T/m
    double b3 = 1.5e11;                        // T/m^3  (1.5e-7 T/um^3)

    void validate() const {
        if (omega_ac <= 0 || omega_t <= 0 || omega_a <= 0)
            throw std::invalid_argument("TrapConfig: frequencies must be positive");
        if (std::abs(q_param) >= 0.908)
            throw std::invalid_argument("TrapConfig: |q| outside the lowest Mathieu stability region");
    }
};

// Resonant tank circuit; Re(Z) = Q sqrt(L/C) on resonance.
struct TankCircuit {
    double q_factor = 1000.0;
    double capacitance = 1e-12;  // F
    double inductance = 6.33e-9; // H
    double temperature = 0.4;    // K

    double resonance() const { return 1.0 / std::sqrt(inductance * capacitance); }
    double impedance() const { return q_factor * std::sqrt(inductance / capacitance); }

    // Circuit tuned to a mode: L chosen so the LC resonance sits at omega.
    static TankCircuit for_mode(double omega, double q_factor = 1000.0,
                                double capacitance = 1e-12, double temperature = 0.4) {
        TankCircuit t;
        t.q_factor = q_factor;
        t.capacitance = capacitance;
        t.temperature = temperature;
        t.inductance = 1.0 / (omega * omega * capacitance);
        return t;
    }
};

// tau = (m/e^2) d_eff^2 / Re(Z)
inline double cooling_time_constant(double d_eff, const TankCircuit& circuit,
                                    double mass = c::electron_mass) {
    double re_z = circuit.impedance();
    if (re_z <= 0) throw std::invalid_argument("cooling_time_constant: Re(Z) must be positive");
    return mass / (c::elementary_charge * c::elementary_charge) * d_eff * d_eff / re_z;
}

inline double cooling_time_constant(double d_eff, double re_z,
                                    double mass = c::electron_mass) {
    if (re_z <= 0) throw std::invalid_argument("cooling_time_constant: Re(Z) must be positive");
    return mass / (c::elementary_charge * c::elementary_charge) * d_eff * d_eff / re_z;
}

// nbar from hbar w (nbar + 1/2) = kB T, clamped at zero.
inline double equilibrium_nbar(double omega, double temperature) {
    if (temperature <= 0) throw std::invalid_argument("equilibrium_nbar: T must be positive");
    return std::max(0.0, c::k_boltzmann * temperature / (c::hbar * omega) - 0.5);
}

struct MicromotionAmplitudes {
    double x_t;   // m, thermal secular amplitude
    double x_mm;  // m, micromotion amplitude (q/2) x_t
};

inline MicromotionAmplitudes micromotion_amplitude(double q_param, double omega_t,
                                                   double temperature,
                                                   double mass = c::electron_mass) {
    double x_t = std::sqrt(2.0 * c::k_boltzmann * temperature / (mass * omega_t * omega_t));
    return {x_t, 0.5 * q_param * x_t};
}

// T_a = T_t * w_a / w_t
inline double parametric_cooling_temperature(double t_t, double omega_a, double omega_t) {
    if (omega_a <= 0 || omega_t <= 0)
        throw std::invalid_argument("parametric_cooling_temperature: frequencies must be positive");
    return t_t * omega_a / omega_t;
}

// Lowest-order pseudopotential relation w = q w_ac / (2 sqrt(2)). Above
// |q| ~ 0.4 the approximation degrades; the exact Floquet frequency at
// q = 0.53 is about 7% higher.
inline double secular_frequency(double q_param, double omega_ac, bool* approx_warning = nullptr) {
    if (approx_warning) *approx_warning = std::abs(q_param) > 0.4;
    return q_param * omega_ac / (2.0 * std::sqrt(2.0));
}

// ndot = e^2 S(w) / (4 m hbar w), S in V^2 m^-2 / Hz.
inline double heating_rate_from_noise(double s_e, double omega_a,
                                      double mass = c::electron_mass) {
    if (s_e < 0) throw std::invalid_argument("heating_rate_from_noise: S must be >= 0");
    return c::elementary_charge * c::elementary_charge * s_e /
           (4.0 * mass * c::hbar * omega_a);
}

// ndot_e = (m_ref/m) (w_ref/w)^(1+gamma) ndot_ref
inline double extrapolate_heating(double ndot_ref, double omega_ref, double omega,
                                  double mass_ref, double mass, double gamma,
                                  bool* exponent_warning = nullptr) {
    if (exponent_warning) *exponent_warning = (gamma < 1.0 || gamma > 1.5);
    return (mass_ref / mass) * std::pow(omega_ref / omega, 1.0 + gamma) * ndot_ref;
}

// dw/w = (3 A^2 c4 / 4 + 15 A^4 c6 / 16) / c2
inline double anharmonic_frequency_shift(double amplitude, double c2, double c4, double c6,
                                         bool* validity_warning = nullptr) {
    double a2 = amplitude * amplitude;
    if (validity_warning)
        *validity_warning = std::abs(c4 * a2 * a2) > 0.1 * std::abs(c2 * a2);
    return (3.0 * a2 * c4 / 4.0 + 15.0 * a2 * a2 * c6 / 16.0) / c2;
}

struct ReadoutResult {
    std::complex<double> alpha;       // coherent displacement after the drive
    double discrimination_fidelity;   // Gaussian two-hypothesis model
};

// Resonant spin-dependent displacement: F = (g_s mu_B / 2) b1, alpha(t) =
// (F z0 / hbar) t. Discrimination fidelity for two opposite displacements
// on a thermal state of occupation nbar0:
//   F_d = 1/2 (1 + erf(|alpha| / sqrt(2 (2 nbar0 + 1))))
inline ReadoutResult readout_displacement(double b1, double duration, double omega_a,
                                          double mass, double nbar0) {
    double z0 = std::sqrt(c::hbar / (2.0 * mass * omega_a));
    double force = 0.5 * c::g_electron * c::bohr_magneton * b1;
    double rate = force * z0 / c::hbar;
    double alpha = rate * duration;
    double width = std::sqrt(2.0 * (2.0 * nbar0 + 1.0));
    double fd = 0.5 * (1.0 + std::erf(std::abs(alpha) / width));
    return {std::complex<double>(alpha, 0.0), fd};
}

// Zeeman splitting g_s mu_B B0 / hbar; consistency check for the quoted
// 2pi x 100 MHz qubit frequency at B0 = 3.6 mT.
inline double qubit_frequency(double b0) {
    return c::g_electron * c::bohr_magneton * b0 / c::hbar;
}

}  // namespace etrap
