// io.hpp: pulse-sequence documents (JSON), ratio-curve CSV, feasibility report.

#pragma once

#include "sqcav/compiler.hpp"
#include "sqcav/dynamics.hpp"
#include "sqcav/errors.hpp"
#include "sqcav/physics.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace sqcav::io {

using json = nlohmann::ordered_json;

// Shortest round-trip decimal form.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc{}) throw Error("cannot format floating-point value");
    return std::string(buf, res.ptr);
}

inline json to_json(const PulseSequence& seq) {
    json steps = json::array();
    for (const auto& s : seq.steps) steps.push_back({{"kind", to_string(s.kind)}, {"duration_s", s.duration}});
    return {
        {"rates",
         {{"omega1", seq.rates.omega1},
          {"omega2_mag", seq.rates.omega2_mag},
          {"theta", seq.rates.theta},
          {"omega_cavity", seq.rates.omega_cavity}}},
        {"n_max", seq.n_max},
        {"steps", std::move(steps)},
    };
}

namespace detail {

inline double number_field(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

} // namespace detail

inline PulseSequence sequence_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("sequence document must be an object");
    if (!doc.contains("rates") || !doc.at("rates").is_object()) throw ParseError("missing object 'rates'");
    const auto& r = doc.at("rates");
    PulseSequence seq;
    seq.rates.omega1 = detail::number_field(r, "omega1");
    seq.rates.omega2_mag = detail::number_field(r, "omega2_mag");
    seq.rates.theta = detail::number_field(r, "theta");
    seq.rates.omega_cavity = detail::number_field(r, "omega_cavity");
    if (!doc.contains("n_max") || !doc.at("n_max").is_number_integer()) throw ParseError("'n_max' must be an integer");
    seq.n_max = doc.at("n_max").get<int>();
    if (!doc.contains("steps") || !doc.at("steps").is_array()) throw ParseError("missing array 'steps'");
    for (const auto& s : doc.at("steps")) {
        if (!s.is_object() || !s.contains("kind") || !s.at("kind").is_string()) {
            throw ParseError("each step needs a string 'kind'");
        }
        seq.steps.push_back({pulse_kind_from_string(s.at("kind").get<std::string>()),
                             detail::number_field(s, "duration_s")});
    }
    seq.rates.validate();
    dimension(seq.n_max);
    for (const auto& s : seq.steps) {
        if (!(std::isfinite(s.duration) && s.duration >= 0.0)) throw ParseError("step durations must be >= 0");
    }
    return seq;
}

inline std::string dump_sequence(const PulseSequence& seq) { return to_json(seq).dump(2) + "\n"; }

inline PulseSequence parse_sequence(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed sequence document: ") + e.what());
    }
    return sequence_from_json(doc);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write to '" + path + "' failed");
}

inline void write_ratio_csv(std::ostream& os, const std::vector<physics::RatioPoint>& curve) {
    os << "n,ratio\n";
    for (const auto& p : curve) os << p.n << ',' << format_double(p.ratio) << '\n';
}

inline json report_json(const physics::FeasibilityReport& rep, const physics::DeviceParams& dev,
                        const physics::CavityParams& cav) {
    const auto& d = rep.derived;
    json cavity = {{"lambda_m", cav.lambda}, {"Q", cav.Q}, {"T_K", cav.T}, {"V_m3", cav.volume()},
                   {"theta", cav.theta}};
    return {
        {"inputs",
         {{"device",
           {{"EJ_J", dev.EJ}, {"Cg_F", dev.Cg}, {"CJ_F", dev.CJ}, {"ng", dev.ng}, {"phi_c", dev.phi_c},
            {"S_m2", dev.S}, {"T1_s", dev.T1}, {"T2_s", dev.T2}, {"mu", dev.mu}}},
          {"cavity", std::move(cavity)},
          {"target_n", rep.target_n},
          {"margin", rep.margin}}},
        {"derived",
         {{"E_ch_J", d.E_ch}, {"omega_rad_s", d.omega}, {"E_z_J", d.E_z}, {"eta_mag_Wb", d.eta_mag},
          {"beta_mag_J", d.beta_mag}, {"xi_J", d.xi}, {"omega1_rad_s", d.rates.omega1},
          {"omega2_mag_rad_s", d.rates.omega2_mag}, {"resonance_mismatch", d.resonance_mismatch},
          {"resonance_warning", d.resonance_warning}}},
        {"tau_e_s", rep.tau_e},
        {"tau_c_s", rep.tau_c},
        {"tau_p_s", rep.tau_p},
        {"n_th", rep.n_th},
        {"log10_n_th", cav.T > 0.0 ? json(physics::log10_thermal_occupation(cav.lambda, cav.T)) : json(nullptr)},
        {"T1_s", rep.T1},
        {"T2_s", rep.T2},
        {"ratio_at_target", rep.ratio_at_target},
        {"single_photon_ok", rep.single_photon_ok},
        {"fock_ok", rep.fock_ok},
        {"superposition_ok", rep.superposition_ok},
        {"max_fock", rep.max_fock},
    };
}

} // namespace sqcav::io
