// Run configuration: strict sectioned key/value text with mandatory units.
// Unknown sections or keys are rejected with line diagnostics. Omitted
// fields fall back to the prototype-trap defaults.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "etrap/constants.hpp"
#include "etrap/gate.hpp"
#include "etrap/solver.hpp"
#include "etrap/trap.hpp"
#include "etrap/units.hpp"

namespace etrap {

enum class Command { GateSim, Sweep, Budget, TrapCalc, Trajectory };

inline std::string to_string(Command c) {
    switch (c) {
        case Command::GateSim: return "gate-sim";
        case Command::Sweep: return "sweep";
        case Command::Budget: return "budget";
        case Command::TrapCalc: return "trap-calc";
        case Command::Trajectory: return "trajectory";
    }
    return "";
}

inline Command command_from_string(const std::string& s) {
    if (s == "gate-sim") return Command::GateSim;
    if (s == "sweep") return Command::Sweep;
    if (s == "budget") return Command::Budget;
    if (s == "trap-calc") return Command::TrapCalc;
    if (s == "trajectory") return Command::Trajectory;
    throw std::invalid_argument("unknown command '" + s + "'");
}

enum class OutputFormat { Csv, Json };

struct ScheduleConfig {
    int walsh = 3;
    double t_loop = 2e-6;        // s, per-loop period 2pi/delta
    double nbar0 = 3.667;        // initial thermal occupation of the bus mode
    std::optional<double> rabi;  // rad/s; unset = calibrate
    int fock_cutoff = 80;

    double delta() const { return constants::two_pi / t_loop; }
};

struct ChannelsConfig {
    // Table I magnitudes; zero disables a channel.
    double heating_rate = 140.0;                  // quanta/s
    double trap_freq_offset = constants::two_pi * 3e3;  // rad/s
    double motional_dephasing = 1.8e-3;           // 1/s (Table I magnitude row)
    double gradient_b1 = 120.0;                   // T/m
    double gradient_b3 = 1.5e11;                  // T/m^3
    double anharmonicity_c4_c2 = 1e5;             // m^-2
    double tau_spin = 1.0;                        // s
    std::optional<double> z0;                     // m; unset = sqrt(hbar/(2 m_e w_a))
};

struct SweepConfig {
    std::string channel = "heating";  // heating | trap_freq_offset | motional_dephasing |
                                      // gradient | anharmonicity | qubit_decoherence
    double magnitude_min = 14.0;
    double magnitude_max = 1400.0;
    int points = 10;
    bool log_spacing = true;
    std::vector<int> walsh_orders{0, 1, 3};
};

struct TrajectoryConfig {
    double horizon = 10e-6;             // s
    int steps_per_rf_period = 64;
    double energy_min = constants::k_boltzmann * 60.0;    // J
    double energy_max = constants::k_boltzmann * 600.0;   // J
    int energy_points = 13;
    int phi_points = 16;
    double trap_depth = 80e-3 * constants::elementary_charge;  // J
    std::optional<double> loss_radius;  // m; unset = depth radius sqrt(2 U / (m w_t^2))
};

struct OutputConfig {
    std::string path = "results.csv";
    OutputFormat format = OutputFormat::Csv;
};

struct RunConfig {
    Command command = Command::Budget;
    TrapConfig trap;
    ScheduleConfig schedule;
    ChannelsConfig channels;
    SolverSettings solver;
    SweepConfig sweep;
    TrajectoryConfig trajectory;
    OutputConfig output;
    int threads = 1;
    long seed = 0;  // reserved; all current computations are deterministic
};

namespace detail {

struct ConfigLine {
    std::string section, key, value;
    int line_no;
};

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<ConfigLine> tokenize_config(const std::string& text) {
    std::vector<ConfigLine> lines;
    std::istringstream in(text);
    std::string raw, section;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        std::string line = trim(raw);
        auto hash = line.find('#');
        if (hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(no) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(no) +
                                        ": expected key = value");
        lines.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), no});
    }
    return lines;
}

[[noreturn]] inline void bad_key(const ConfigLine& l) {
    throw std::invalid_argument("config line " + std::to_string(l.line_no) + ": unknown key '" +
                                (l.section.empty() ? l.key : l.section + "." + l.key) + "'");
}

inline double positive(double v, const ConfigLine& l) {
    if (v <= 0)
        throw std::invalid_argument("config line " + std::to_string(l.line_no) + ": '" + l.key +
                                    "' must be positive");
    return v;
}

inline double non_negative(double v, const ConfigLine& l) {
    if (v < 0)
        throw std::invalid_argument("config line " + std::to_string(l.line_no) + ": '" + l.key +
                                    "' must be >= 0");
    return v;
}

}  // namespace detail

inline Dimension sweep_dimension(const std::string& channel) {
    if (channel == "heating") return Dimension::Rate;
    if (channel == "trap_freq_offset") return Dimension::AngularFrequency;
    if (channel == "motional_dephasing") return Dimension::Rate;
    if (channel == "gradient") return Dimension::FieldThirdGradient;
    if (channel == "anharmonicity") return Dimension::InverseArea;
    if (channel == "qubit_decoherence") return Dimension::Time;
    throw std::invalid_argument("unknown sweep channel '" + channel + "'");
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    for (const auto& l : detail::tokenize_config(text)) {
        auto q = [&](Dimension d) {
            try {
                return parse_quantity(l.value, d);
            } catch (const std::exception& e) {
                throw std::invalid_argument("config line " + std::to_string(l.line_no) + ": " +
                                            e.what());
            }
        };
        try {
            if (l.section.empty()) {
                if (l.key == "command") cfg.command = command_from_string(l.value);
                else if (l.key == "threads") cfg.threads = std::max(1, int(q(Dimension::Dimensionless)));
                else if (l.key == "seed") cfg.seed = long(q(Dimension::Dimensionless));
                else detail::bad_key(l);
            } else if (l.section == "trap") {
                auto& t = cfg.trap;
                if (l.key == "u0") t.u0 = q(Dimension::Voltage);
                else if (l.key == "omega_ac") t.omega_ac = detail::positive(q(Dimension::AngularFrequency), l);
                else if (l.key == "omega_t") t.omega_t = detail::positive(q(Dimension::AngularFrequency), l);
                else if (l.key == "omega_a") t.omega_a = detail::positive(q(Dimension::AngularFrequency), l);
                else if (l.key == "q") t.q_param = q(Dimension::Dimensionless);
                else if (l.key == "d_eff_y") t.d_eff_y = detail::positive(q(Dimension::Length), l);
                else if (l.key == "d_eff_z") t.d_eff_z = detail::positive(q(Dimension::Length), l);
                else if (l.key == "c2") t.c2 = q(Dimension::InverseArea);
                else if (l.key == "c4") t.c4 = q(Dimension::InverseQuartic);
                else if (l.key == "c6") t.c6 = q(Dimension::InverseSextic);
                else if (l.key == "b0") t.b0 = q(Dimension::MagneticField);
                else if (l.key == "b1") t.b1 = q(Dimension::FieldGradient);
                else if (l.key == "b3") t.b3 = q(Dimension::FieldThirdGradient);
                else detail::bad_key(l);
            } else if (l.section == "schedule") {
                auto& s = cfg.schedule;
                if (l.key == "walsh") {
                    s.walsh = int(q(Dimension::Dimensionless));
                    walsh_signs(s.walsh);  // validates
                } else if (l.key == "t_loop") s.t_loop = detail::positive(q(Dimension::Time), l);
                else if (l.key == "nbar0") s.nbar0 = detail::non_negative(q(Dimension::Dimensionless), l);
                else if (l.key == "rabi") {
                    if (l.value != "auto") s.rabi = detail::positive(q(Dimension::AngularFrequency), l);
                } else if (l.key == "fock_cutoff") {
                    s.fock_cutoff = int(q(Dimension::Dimensionless));
                    if (s.fock_cutoff < 2)
                        throw std::invalid_argument("fock_cutoff must be >= 2");
                } else detail::bad_key(l);
            } else if (l.section == "channels") {
                auto& ch = cfg.channels;
                if (l.key == "heating") ch.heating_rate = detail::non_negative(q(Dimension::Rate), l);
                else if (l.key == "trap_freq_offset") ch.trap_freq_offset = q(Dimension::AngularFrequency);
                else if (l.key == "motional_dephasing") ch.motional_dephasing = detail::non_negative(q(Dimension::Rate), l);
                else if (l.key == "gradient_b1") ch.gradient_b1 = detail::positive(q(Dimension::FieldGradient), l);
                else if (l.key == "gradient_b3") ch.gradient_b3 = detail::non_negative(q(Dimension::FieldThirdGradient), l);
                else if (l.key == "anharmonicity") ch.anharmonicity_c4_c2 = q(Dimension::InverseArea);
                else if (l.key == "tau_spin") ch.tau_spin = detail::non_negative(q(Dimension::Time), l);
                else if (l.key == "z0") ch.z0 = detail::positive(q(Dimension::Length), l);
                else detail::bad_key(l);
            } else if (l.section == "solver") {
                auto& s = cfg.solver;
                if (l.key == "method") {
                    if (l.value == "rk4") s.method = SolverMethod::FixedRk4;
                    else if (l.value == "rk45") s.method = SolverMethod::AdaptiveRk45;
                    else throw std::invalid_argument("method must be rk4 or rk45");
                } else if (l.key == "steps_per_period") {
                    s.steps_per_drive_period = int(detail::positive(q(Dimension::Dimensionless), l));
                } else if (l.key == "rel_tol") s.rel_tol = detail::positive(q(Dimension::Dimensionless), l);
                else if (l.key == "abs_tol") s.abs_tol = detail::positive(q(Dimension::Dimensionless), l);
                else if (l.key == "max_step") s.max_step = detail::non_negative(q(Dimension::Time), l);
                else detail::bad_key(l);
            } else if (l.section == "sweep") {
                auto& s = cfg.sweep;
                if (l.key == "channel") {
                    static const std::set<std::string> known{
                        "heating", "trap_freq_offset", "motional_dephasing",
                        "gradient", "anharmonicity", "qubit_decoherence"};
                    if (!known.count(l.value))
                        throw std::invalid_argument("unknown sweep channel '" + l.value + "'");
                    s.channel = l.value;
                } else if (l.key == "magnitude_min") s.magnitude_min = q(sweep_dimension(cfg.sweep.channel));
                else if (l.key == "magnitude_max") s.magnitude_max = q(sweep_dimension(cfg.sweep.channel));
                else if (l.key == "points") s.points = int(detail::positive(q(Dimension::Dimensionless), l));
                else if (l.key == "spacing") {
                    if (l.value == "log") s.log_spacing = true;
                    else if (l.value == "linear") s.log_spacing = false;
                    else throw std::invalid_argument("spacing must be log or linear");
                } else if (l.key == "walsh_orders") {
                    s.walsh_orders.clear();
                    std::istringstream ws(l.value);
                    std::string tok;
                    while (std::getline(ws, tok, ',')) {
                        int w = std::stoi(detail::trim(tok));
                        walsh_signs(w);
                        s.walsh_orders.push_back(w);
                    }
                    if (s.walsh_orders.empty())
                        throw std::invalid_argument("walsh_orders must not be empty");
                } else detail::bad_key(l);
            } else if (l.section == "trajectory") {
                auto& t = cfg.trajectory;
                if (l.key == "horizon") t.horizon = detail::positive(q(Dimension::Time), l);
                else if (l.key == "steps_per_rf_period") t.steps_per_rf_period = int(detail::positive(q(Dimension::Dimensionless), l));
                else if (l.key == "energy_min") t.energy_min = detail::positive(q(Dimension::Energy), l);
                else if (l.key == "energy_max") t.energy_max = detail::positive(q(Dimension::Energy), l);
                else if (l.key == "energy_points") t.energy_points = int(detail::positive(q(Dimension::Dimensionless), l));
                else if (l.key == "phi_points") t.phi_points = int(detail::positive(q(Dimension::Dimensionless), l));
                else if (l.key == "trap_depth") t.trap_depth = detail::positive(q(Dimension::Energy), l);
                else if (l.key == "loss_radius") t.loss_radius = detail::positive(q(Dimension::Length), l);
                else detail::bad_key(l);
            } else if (l.section == "output") {
                if (l.key == "path") cfg.output.path = l.value;
                else if (l.key == "format") {
                    if (l.value == "csv") cfg.output.format = OutputFormat::Csv;
                    else if (l.value == "json") cfg.output.format = OutputFormat::Json;
                    else throw std::invalid_argument("format must be csv or json");
                } else detail::bad_key(l);
            } else {
                throw std::invalid_argument("config line " + std::to_string(l.line_no) +
                                            ": unknown section '" + l.section + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(l.line_no) + ": " +
                                        e.what());
        }
    }
    cfg.trap.validate();
    return cfg;
}

// Canonical text form; parse(render(cfg)) reproduces cfg exactly.
inline std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    auto line = [&](const std::string& k, double v, Dimension d) {
        out << k << " = " << v;
        std::string u = canonical_unit(d);
        if (!u.empty()) out << " " << u;
        out << "\n";
    };
    out << "command = " << to_string(cfg.command) << "\n";
    out << "threads = " << cfg.threads << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "\n[trap]\n";
    line("u0", cfg.trap.u0, Dimension::Voltage);
    line("omega_ac", cfg.trap.omega_ac, Dimension::AngularFrequency);
    line("omega_t", cfg.trap.omega_t, Dimension::AngularFrequency);
    line("omega_a", cfg.trap.omega_a, Dimension::AngularFrequency);
    line("q", cfg.trap.q_param, Dimension::Dimensionless);
    line("d_eff_y", cfg.trap.d_eff_y, Dimension::Length);
    line("d_eff_z", cfg.trap.d_eff_z, Dimension::Length);
    line("c2", cfg.trap.c2, Dimension::InverseArea);
    line("c4", cfg.trap.c4, Dimension::InverseQuartic);
    line("c6", cfg.trap.c6, Dimension::InverseSextic);
    line("b0", cfg.trap.b0, Dimension::MagneticField);
    line("b1", cfg.trap.b1, Dimension::FieldGradient);
    line("b3", cfg.trap.b3, Dimension::FieldThirdGradient);
    out << "\n[schedule]\n";
    out << "walsh = " << cfg.schedule.walsh << "\n";
    line("t_loop", cfg.schedule.t_loop, Dimension::Time);
    line("nbar0", cfg.schedule.nbar0, Dimension::Dimensionless);
    if (cfg.schedule.rabi) line("rabi", *cfg.schedule.rabi, Dimension::AngularFrequency);
    else out << "rabi = auto\n";
    out << "fock_cutoff = " << cfg.schedule.fock_cutoff << "\n";
    out << "\n[channels]\n";
    line("heating", cfg.channels.heating_rate, Dimension::Rate);
    line("trap_freq_offset", cfg.channels.trap_freq_offset, Dimension::AngularFrequency);
    line("motional_dephasing", cfg.channels.motional_dephasing, Dimension::Rate);
    line("gradient_b1", cfg.channels.gradient_b1, Dimension::FieldGradient);
    line("gradient_b3", cfg.channels.gradient_b3, Dimension::FieldThirdGradient);
    line("anharmonicity", cfg.channels.anharmonicity_c4_c2, Dimension::InverseArea);
    line("tau_spin", cfg.channels.tau_spin, Dimension::Time);
    if (cfg.channels.z0) line("z0", *cfg.channels.z0, Dimension::Length);
    out << "\n[solver]\n";
    out << "method = " << (cfg.solver.method == SolverMethod::FixedRk4 ? "rk4" : "rk45") << "\n";
    out << "steps_per_period = " << cfg.solver.steps_per_drive_period << "\n";
    line("rel_tol", cfg.solver.rel_tol, Dimension::Dimensionless);
    line("abs_tol", cfg.solver.abs_tol, Dimension::Dimensionless);
    line("max_step", cfg.solver.max_step, Dimension::Time);
    out << "\n[sweep]\n";
    out << "channel = " << cfg.sweep.channel << "\n";
    line("magnitude_min", cfg.sweep.magnitude_min, sweep_dimension(cfg.sweep.channel));
    line("magnitude_max", cfg.sweep.magnitude_max, sweep_dimension(cfg.sweep.channel));
    out << "points = " << cfg.sweep.points << "\n";
    out << "spacing = " << (cfg.sweep.log_spacing ? "log" : "linear") << "\n";
    out << "walsh_orders = ";
    for (size_t i = 0; i < cfg.sweep.walsh_orders.size(); ++i)
        out << (i ? "," : "") << cfg.sweep.walsh_orders[i];
    out << "\n";
    out << "\n[trajectory]\n";
    line("horizon", cfg.trajectory.horizon, Dimension::Time);
    out << "steps_per_rf_period = " << cfg.trajectory.steps_per_rf_period << "\n";
    line("energy_min", cfg.trajectory.energy_min, Dimension::Energy);
    line("energy_max", cfg.trajectory.energy_max, Dimension::Energy);
    out << "energy_points = " << cfg.trajectory.energy_points << "\n";
    out << "phi_points = " << cfg.trajectory.phi_points << "\n";
    line("trap_depth", cfg.trajectory.trap_depth, Dimension::Energy);
    if (cfg.trajectory.loss_radius) line("loss_radius", *cfg.trajectory.loss_radius, Dimension::Length);
    out << "\n[output]\n";
    out << "path = " << cfg.output.path << "\n";
    out << "format = " << (cfg.output.format == OutputFormat::Csv ? "csv" : "json") << "\n";
    return out.str();
}

// FNV-1a 64-bit over the canonical rendering; stable across platforms.
inline std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string s = render_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace etrap
