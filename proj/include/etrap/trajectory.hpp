// Classical 2D electron motion in the ideal quadrupole drive
// (Appendix-style storage-time stability map over drive phase and release
// energy). Velocity-Verlet integration; loss when the radial excursion
// exceeds the electrode half-gap.
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "etrap/constants.hpp"
#include "etrap/parallel.hpp"

namespace etrap {

// Quadrupole drive potential A/2 (x^2 - y^2) cos(w t + phi); the gradient
// amplitude is calibrated so the Mathieu q matches the trap configuration.
struct DriveField {
    double gradient_amp = 0.0;  // V/m^2
    double omega_ac = 0.0;      // rad/s
    double phi = 0.0;           // rad

    // |q| = 2 e A / (m w^2)
    static DriveField from_q(double q_param, double omega_ac,
                             double mass = constants::electron_mass) {
        DriveField d;
        d.omega_ac = omega_ac;
        d.gradient_amp = q_param * mass * omega_ac * omega_ac /
                         (2.0 * constants::elementary_charge);
        return d;
    }

    double mathieu_q(double mass = constants::electron_mass) const {
        return 2.0 * constants::elementary_charge * gradient_amp /
               (mass * omega_ac * omega_ac);
    }
};

struct TrajectoryOutcome {
    double initial_energy = 0.0;  // eV, potential energy at the release point
    double phi = 0.0;             // rad
    double storage_time = 0.0;    // s, capped at the simulation horizon
    bool lost = false;
};

inline constexpr double kDefaultLossRadius = 30e-6;  // half the 60 um layer gap

// Release position on the x=y diagonal whose pseudopotential energy
// (1/2) m w_t^2 r^2 equals the requested energy.
inline std::pair<double, double> release_for_energy(double energy_joule, double omega_t,
                                                    double mass = constants::electron_mass) {
    double r = std::sqrt(2.0 * energy_joule / (mass * omega_t * omega_t));
    double d = r / std::sqrt(2.0);
    return {d, d};
}

// Velocity-Verlet for m r'' = -e E(r, t) with zero initial velocity.
// The drive phase phi is evaluated at release (t = 0).
inline TrajectoryOutcome integrate_trajectory(double x0, double y0, double phi,
                                              const DriveField& drive, double horizon,
                                              double dt,
                                              double loss_radius = kDefaultLossRadius,
                                              double mass = constants::electron_mass) {
    if (dt <= 0 || horizon <= 0)
        throw std::invalid_argument("integrate_trajectory: dt and horizon must be positive");
    const double k = constants::elementary_charge * drive.gradient_amp / mass;
    const double w = drive.omega_ac;
    const double r2max = loss_radius * loss_radius;

    // incremental phasor for cos(w t + phi); avoids a cos() per step
    double cs = std::cos(phi), sn = std::sin(phi);
    const double cd = std::cos(w * dt), sd = std::sin(w * dt);

    double x = x0, y = y0, vx = 0.0, vy = 0.0;
    double ax = k * cs * x, ay = -k * cs * y;
    const long nsteps = long(std::ceil(horizon / dt));
    for (long i = 0; i < nsteps; ++i) {
        x += vx * dt + 0.5 * ax * dt * dt;
        y += vy * dt + 0.5 * ay * dt * dt;
        double c_next = cs * cd - sn * sd;
        double s_next = sn * cd + cs * sd;
        cs = c_next;
        sn = s_next;
        double ax_new = k * cs * x;
        double ay_new = -k * cs * y;
        vx += 0.5 * (ax + ax_new) * dt;
        vy += 0.5 * (ay + ay_new) * dt;
        ax = ax_new;
        ay = ay_new;
        if (x * x + y * y > r2max) {
            double t_loss = double(i + 1) * dt;
            return {0.0, phi, t_loss, true};
        }
    }
    return {0.0, phi, horizon, false};
}

// Self-test variant: static pseudopotential (1/2) m w^2 r^2 instead of the
// drive; returns the maximum relative total-energy error over the run.
inline double static_pseudopotential_energy_drift(double x0, double y0, double omega_sec,
                                                  double horizon, double dt,
                                                  double mass = constants::electron_mass) {
    const double k = omega_sec * omega_sec;
    double x = x0, y = y0, vx = 0.0, vy = 0.0;
    double ax = -k * x, ay = -k * y;
    const double e0 = 0.5 * mass * (k * (x0 * x0 + y0 * y0));
    double worst = 0.0;
    const long nsteps = long(std::ceil(horizon / dt));
    for (long i = 0; i < nsteps; ++i) {
        x += vx * dt + 0.5 * ax * dt * dt;
        y += vy * dt + 0.5 * ay * dt * dt;
        double ax_new = -k * x, ay_new = -k * y;
        vx += 0.5 * (ax + ax_new) * dt;
        vy += 0.5 * (ay + ay_new) * dt;
        ax = ax_new;
        ay = ay_new;
        double e = 0.5 * mass * (vx * vx + vy * vy) + 0.5 * mass * k * (x * x + y * y);
        worst = std::max(worst, std::abs(e - e0) / e0);
    }
    return worst;
}

struct StabilityMap {
    std::vector<double> energies_ev;
    std::vector<double> phis;
    std::vector<TrajectoryOutcome> cells;  // row-major: energy index major
    double max_all_phi_stable_ev = 0.0;    // largest grid energy stable for every phi

    const TrajectoryOutcome& at(std::size_t ie, std::size_t ip) const {
        return cells[ie * phis.size() + ip];
    }
};

inline StabilityMap stability_map(const std::vector<double>& energies_ev,
                                  const std::vector<double>& phis, const DriveField& drive,
                                  double omega_t, double horizon, double dt,
                                  double loss_radius = kDefaultLossRadius, int threads = 1,
                                  double mass = constants::electron_mass) {
    if (energies_ev.empty() || phis.empty())
        throw std::invalid_argument("stability_map: grids must be non-empty");
    StabilityMap map;
    map.energies_ev = energies_ev;
    map.phis = phis;
    map.cells.resize(energies_ev.size() * phis.size());
    parallel_for_indexed(map.cells.size(), threads, [&](std::size_t idx) {
        std::size_t ie = idx / phis.size();
        std::size_t ip = idx % phis.size();
        double e_j = energies_ev[ie] * constants::elementary_charge;
        auto [x0, y0] = release_for_energy(e_j, omega_t, mass);
        TrajectoryOutcome out =
            integrate_trajectory(x0, y0, phis[ip], drive, horizon, dt, loss_radius, mass);
        out.initial_energy = energies_ev[ie];
        map.cells[idx] = out;
    });
    for (std::size_t ie = 0; ie < energies_ev.size(); ++ie) {
        bool all_stable = true;
        for (std::size_t ip = 0; ip < phis.size(); ++ip)
            all_stable = all_stable && !map.at(ie, ip).lost;
        if (all_stable) map.max_all_phi_stable_ev = std::max(map.max_all_phi_stable_ev,
                                                             energies_ev[ie]);
    }
    return map;
}

}  // namespace etrap
