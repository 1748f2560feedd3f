// Unit-annotated quantity parsing for config files. Every physical value in
// a config carries an explicit unit and is converted to SI at parse time.
// Frequency-type quantities given in Hz multiples convert to angular rad/s;
// plain rates (quanta/s, 1/s) carry no 2pi.
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "etrap/constants.hpp"

namespace etrap {

enum class Dimension {
    Dimensionless,
    AngularFrequency,  // rad/s; Hz-family inputs multiplied by 2pi
    Rate,              // 1/s
    Time,
    Temperature,
    Voltage,
    Length,
    FieldGradient,       // T/m
    FieldThirdGradient,  // T/m^3
    MagneticField,
    InverseArea,     // m^-2
    InverseQuartic,  // m^-4
    InverseSextic,   // m^-6
    Energy,          // J
    Impedance,
    Capacitance,
    Inductance,
    Mass,
    NoiseDensity,    // V^2 m^-2 / Hz
};

struct UnitEntry {
    double factor;
    bool angular = false;  // multiply by 2pi after scaling
};

inline const std::map<Dimension, std::map<std::string, UnitEntry>>& unit_table() {
    namespace c = constants;
    static const std::map<Dimension, std::map<std::string, UnitEntry>> table = {
        {Dimension::Dimensionless, {{"", {1.0}}}},
        {Dimension::AngularFrequency,
         {{"rad/s", {1.0}},
          {"mHz", {1e-3, true}},
          {"Hz", {1.0, true}},
          {"kHz", {1e3, true}},
          {"MHz", {1e6, true}},
          {"GHz", {1e9, true}}}},
        {Dimension::Rate,
         {{"quanta/s", {1.0}}, {"1/s", {1.0}}, {"/s", {1.0}}, {"s^-1", {1.0}}}},
        {Dimension::Time,
         {{"s", {1.0}}, {"ms", {1e-3}}, {"us", {1e-6}}, {"ns", {1e-9}}}},
        {Dimension::Temperature, {{"K", {1.0}}, {"mK", {1e-3}}}},
        {Dimension::Voltage, {{"V", {1.0}}, {"mV", {1e-3}}, {"kV", {1e3}}}},
        {Dimension::Length,
         {{"m", {1.0}}, {"mm", {1e-3}}, {"um", {1e-6}}, {"nm", {1e-9}}}},
        {Dimension::FieldGradient, {{"T/m", {1.0}}, {"T/um", {1e6}}}},
        {Dimension::FieldThirdGradient, {{"T/m^3", {1.0}}, {"T/um^3", {1e18}}}},
        {Dimension::MagneticField, {{"T", {1.0}}, {"mT", {1e-3}}, {"uT", {1e-6}}}},
        {Dimension::InverseArea, {{"m^-2", {1.0}}, {"um^-2", {1e12}}}},
        {Dimension::InverseQuartic, {{"m^-4", {1.0}}, {"um^-4", {1e24}}}},
        {Dimension::InverseSextic, {{"m^-6", {1.0}}, {"um^-6", {1e36}}}},
        {Dimension::Energy,
         {{"J", {1.0}},
          {"eV", {c::elementary_charge}},
          {"meV", {1e-3 * c::elementary_charge}},
          {"K", {c::k_boltzmann}}}},  // k_B x Kelvin, trajectory release energies
        {Dimension::Impedance, {{"Ohm", {1.0}}, {"kOhm", {1e3}}, {"MOhm", {1e6}}}},
        {Dimension::Capacitance, {{"F", {1.0}}, {"pF", {1e-12}}, {"nF", {1e-9}}}},
        {Dimension::Inductance, {{"H", {1.0}}, {"nH", {1e-9}}, {"uH", {1e-6}}}},
        {Dimension::Mass, {{"kg", {1.0}}, {"me", {c::electron_mass}}, {"u", {c::atomic_mass_unit}}}},
        {Dimension::NoiseDensity, {{"V^2/m^2/Hz", {1.0}}, {"V^2 m^-2 Hz^-1", {1.0}}}},
    };
    return table;
}

// Parses "<number> <unit>"; the unit token is mandatory except for
// dimensionless quantities.
inline double parse_quantity(const std::string& text, Dimension dim) {
    std::istringstream in(text);
    double value;
    if (!(in >> value))
        throw std::invalid_argument("expected a number in '" + text + "'");
    std::string unit;
    in >> unit;
    std::string rest;
    if (in >> rest) unit += " " + rest;  // two-token units
    const auto& dims = unit_table().at(dim);
    auto it = dims.find(unit);
    if (it == dims.end()) {
        std::string expect;
        for (const auto& [u, f] : dims) {
            if (!expect.empty()) expect += ", ";
            expect += u.empty() ? "(none)" : u;
        }
        throw std::invalid_argument("unit '" + unit + "' invalid in '" + text +
                                    "'; expected one of: " + expect);
    }
    double si = value * it->second.factor;
    if (it->second.angular) si *= constants::two_pi;
    return si;
}

// Canonical rendering used by render_config; inverse of parse_quantity for
// the canonical unit of each dimension.
inline std::string canonical_unit(Dimension dim) {
    switch (dim) {
        case Dimension::Dimensionless: return "";
        case Dimension::AngularFrequency: return "rad/s";
        case Dimension::Rate: return "1/s";
        case Dimension::Time: return "s";
        case Dimension::Temperature: return "K";
        case Dimension::Voltage: return "V";
        case Dimension::Length: return "m";
        case Dimension::FieldGradient: return "T/m";
        case Dimension::FieldThirdGradient: return "T/m^3";
        case Dimension::MagneticField: return "T";
        case Dimension::InverseArea: return "m^-2";
        case Dimension::InverseQuartic: return "m^-4";
        case Dimension::InverseSextic: return "m^-6";
        case Dimension::Energy: return "J";
        case Dimension::Impedance: return "Ohm";
        case Dimension::Capacitance: return "F";
        case Dimension::Inductance: return "H";
        case Dimension::Mass: return "kg";
        case Dimension::NoiseDensity: return "V^2/m^2/Hz";
    }
    return "";
}

}  // namespace etrap
