// config.hpp: flat `key = value` run configuration with dotted keys.
//
// Human units at the boundary, SI inside:
//   device.EJ_GHz (2E_J/h)  device.Cg_aF  device.CJ_aF  device.ng  device.phi_c
//   device.S_um2  device.T1_s  device.T2_s  device.mu
//   cavity.lambda_cm  cavity.Q  cavity.T_mK  cavity.V_cm3  cavity.theta
//   run.n_max  run.output  report.margin

#pragma once

#include "sqcav/errors.hpp"
#include "sqcav/physics.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace sqcav {

struct RunConfig {
    physics::DeviceParams device;
    physics::CavityParams cavity;
    std::optional<int> n_max; // derived from the target when unset
    double margin = 10.0;
    std::string output_path;

    void validate() const {
        device.validate();
        cavity.validate();
        if (n_max) dimension(*n_max);
        if (!(std::isfinite(margin) && margin > 0.0)) throw InvalidParameter("report.margin must be positive");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ParseError("value of '" + std::string(key) + "' is not a number: '" + std::string(text) + "'");
    }
    return v;
}

inline int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ParseError("value of '" + std::string(key) + "' is not an integer: '" + std::string(text) + "'");
    }
    return v;
}

} // namespace detail

// Defaults: the 10 um SQUID in a 0.1 cm full-wave cavity at Q = 3e8, 30 mK.
inline RunConfig default_config() {
    RunConfig c;
    c.device.EJ = physics::josephson_energy_from_ghz(13.0);
    c.device.Cg = 18.4e-18;
    c.device.CJ = 120e-18;
    c.device.ng = 0.5;
    c.device.phi_c = 0.0;
    c.device.S = 100e-12;
    c.device.T1 = 1.3e-6;
    c.device.T2 = 5e-9;
    c.device.mu = 1.0;
    c.cavity.lambda = 0.1e-2;
    c.cavity.Q = 3e8;
    c.cavity.T = 30e-3;
    c.cavity.theta = 0.0;
    return c;
}

// Applies one key; unknown keys are errors.
inline void set_config_value(RunConfig& c, std::string_view key, std::string_view value) {
    auto real = [&] { return detail::parse_real(key, value); };
    if (key == "device.EJ_GHz") c.device.EJ = physics::josephson_energy_from_ghz(real());
    else if (key == "device.Cg_aF") c.device.Cg = real() * 1e-18;
    else if (key == "device.CJ_aF") c.device.CJ = real() * 1e-18;
    else if (key == "device.ng") c.device.ng = real();
    else if (key == "device.phi_c") c.device.phi_c = real();
    else if (key == "device.S_um2") c.device.S = real() * 1e-12;
    else if (key == "device.T1_s") c.device.T1 = real();
    else if (key == "device.T2_s") c.device.T2 = real();
    else if (key == "device.mu") c.device.mu = real();
    else if (key == "cavity.lambda_cm") c.cavity.lambda = real() * 1e-2;
    else if (key == "cavity.Q") c.cavity.Q = real();
    else if (key == "cavity.T_mK") c.cavity.T = real() * 1e-3;
    else if (key == "cavity.V_cm3") c.cavity.V = real() * 1e-6;
    else if (key == "cavity.theta") c.cavity.theta = real();
    else if (key == "run.n_max") c.n_max = detail::parse_int(key, value);
    else if (key == "run.output") c.output_path = std::string(value);
    else if (key == "report.margin") c.margin = real();
    else throw ParseError("unknown config key '" + std::string(key) + "'");
}

inline RunConfig parse_config(std::string_view text, RunConfig base = default_config()) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty key or value");
        }
        set_config_value(base, key, value);
    }
    base.validate();
    return base;
}

} // namespace sqcav
