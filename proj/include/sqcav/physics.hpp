// physics.hpp: device/cavity parameters to couplings, timescales, thermal
// occupancy and feasibility verdicts.

#pragma once

#include "sqcav/constants.hpp"
#include "sqcav/dynamics.hpp"
#include "sqcav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sqcav::physics {

struct DeviceParams {
    double EJ = 0.0;     // single-junction Josephson energy, J
    double Cg = 0.0;     // gate capacitance, F
    double CJ = 0.0;     // junction capacitance, F
    double ng = 0.5;     // dimensionless gate charge
    double phi_c = 0.0;  // classical flux in units of Phi_0
    double S = 0.0;      // SQUID loop area, m^2
    double T1 = 0.0;     // s
    double T2 = 0.0;     // s
    double mu = 1.0;     // relative permeability inside the loop

    void validate() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!positive(EJ)) throw InvalidParameter("EJ must be positive");
        if (!positive(Cg) || !positive(CJ)) throw InvalidParameter("capacitances must be positive");
        if (!(std::isfinite(ng) && ng >= 0.0 && ng <= 1.5)) throw InvalidParameter("ng must lie in [0, 1.5]");
        if (!std::isfinite(phi_c)) throw InvalidParameter("phi_c must be finite");
        if (!(std::isfinite(S) && S >= 0.0)) throw InvalidParameter("loop area S must be >= 0");
        if (!positive(T1) || !positive(T2)) throw InvalidParameter("T1 and T2 must be positive");
        if (!(std::isfinite(mu) && mu >= 1.0)) throw InvalidParameter("mu must be >= 1");
    }
};

struct CavityParams {
    double lambda = 0.0;         // m
    double Q = 0.0;              // quality factor
    double T = 0.0;              // bath temperature, K
    std::optional<double> V;     // mode volume, m^3; lambda^3 when unset
    double theta = 0.0;          // coupling phase, rad

    double volume() const { return V ? *V : lambda * lambda * lambda; }

    void validate() const {
        if (!(std::isfinite(lambda) && lambda > 0.0)) throw InvalidParameter("lambda must be positive");
        if (!(std::isfinite(Q) && Q > 0.0)) throw InvalidParameter("Q must be positive");
        if (!(std::isfinite(T) && T >= 0.0)) throw InvalidParameter("temperature must be >= 0");
        if (!(std::isfinite(volume()) && volume() > 0.0)) throw InvalidParameter("mode volume must be positive");
        if (!(std::isfinite(theta) && theta > -constants::pi && theta <= constants::pi)) {
            throw InvalidParameter("theta must lie in (-pi, pi]");
        }
    }
};

struct DerivedParams {
    double E_ch = 0.0;     // J
    double omega = 0.0;    // rad/s
    double E_z = 0.0;      // J
    double eta_mag = 0.0;  // Wb
    double beta_mag = 0.0; // J, at the device's phi_c
    double xi = 0.0;       // J, at the device's phi_c
    RabiRates rates;
    double resonance_mismatch = 0.0; // |4 E_ch / hbar - omega| / omega
    bool resonance_warning = false;  // mismatch above 5%
};

// 2E_J/h quoted in GHz -> single-junction E_J in joules.
inline double josephson_energy_from_ghz(double two_ej_over_h_ghz) {
    return 0.5 * constants::planck * two_ej_over_h_ghz * 1e9;
}

inline double cavity_angular_frequency(double lambda) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    return 2.0 * constants::pi * constants::speed_of_light / lambda;
}

// |eta| = (S / c) sqrt(hbar omega / (eps0 V)): uniform mode field over the
// loop, loop at an antinode of the standing wave.
inline double eta_magnitude(double S, const CavityParams& cav) {
    cav.validate();
    if (!(std::isfinite(S) && S >= 0.0)) throw InvalidParameter("loop area S must be >= 0");
    const double omega = cavity_angular_frequency(cav.lambda);
    return (S / constants::speed_of_light) *
           std::sqrt(constants::hbar * omega / (constants::vacuum_permittivity * cav.volume()));
}

// pi |eta| / Phi_0, the small parameter of the flux expansion.
inline double flux_coupling_ratio(double S, const CavityParams& cav) {
    return constants::pi * eta_magnitude(S, cav) / constants::flux_quantum;
}

inline DerivedParams derive(const DeviceParams& dev, const CavityParams& cav) {
    dev.validate();
    cav.validate();
    const double pi = constants::pi;
    DerivedParams d;
    const double e = constants::elementary_charge;
    d.E_ch = e * e / (2.0 * (dev.Cg + 2.0 * dev.CJ));
    d.omega = cavity_angular_frequency(cav.lambda);
    d.E_z = -2.0 * d.E_ch * (1.0 - 2.0 * dev.ng);
    d.eta_mag = eta_magnitude(dev.S, cav);
    const double coupling = pi * d.eta_mag * dev.EJ * dev.mu / constants::flux_quantum;
    d.beta_mag = coupling * std::abs(std::sin(pi * dev.phi_c));
    d.xi = dev.EJ * std::cos(pi * dev.phi_c);
    d.rates.omega1 = dev.EJ / constants::hbar;
    d.rates.omega2_mag = coupling / constants::hbar;
    d.rates.theta = cav.theta;
    d.rates.omega_cavity = d.omega;
    d.resonance_mismatch = std::abs(4.0 * d.E_ch / constants::hbar - d.omega) / d.omega;
    d.resonance_warning = d.resonance_mismatch > 0.05;
    return d;
}

// Bose-Einstein occupancy at omega = 2 pi c / lambda.
inline double thermal_occupation(double lambda, double T) {
    if (!(std::isfinite(T) && T >= 0.0)) throw InvalidParameter("temperature must be >= 0");
    if (T == 0.0) return 0.0;
    const double x = constants::hbar * cavity_angular_frequency(lambda) / (constants::boltzmann * T);
    return 1.0 / std::expm1(x);
}

// log10 of the occupancy, finite even where the occupancy underflows.
inline double log10_thermal_occupation(double lambda, double T) {
    if (!(std::isfinite(T) && T > 0.0)) throw InvalidParameter("log occupancy needs T > 0");
    const double x = constants::hbar * cavity_angular_frequency(lambda) / (constants::boltzmann * T);
    // -log(e^x - 1) = -x - log1p(-e^{-x})
    return (-x - std::log1p(-std::exp(-x))) / std::log(10.0);
}

// tau_p = Q / f = Q lambda / c
inline double photon_lifetime(double Q, double lambda) {
    if (!(std::isfinite(Q) && Q > 0.0)) throw InvalidParameter("Q must be positive");
    if (!(std::isfinite(lambda) && lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    return Q * lambda / constants::speed_of_light;
}

// tau_e = pi/(2 Omega_1)
inline double excitation_time(const RabiRates& r) {
    return constants::pi / (2.0 * r.omega1);
}

// tau_c^(n) = pi / (2 |Omega_2| sqrt(n+1)): full transfer |e,n> -> |g,n+1>.
inline double transfer_time(const RabiRates& r, std::int64_t n) {
    if (n < 0) throw InvalidParameter("photon number must be >= 0");
    if (!(r.omega2_mag > 0.0)) return std::numeric_limits<double>::infinity();
    return constants::pi / (2.0 * r.omega2_mag * std::sqrt(static_cast<double>(n) + 1.0));
}

struct OperationTimes {
    double tau_e = 0.0;
    std::vector<double> tau_c; // n = 0..n_max
};

inline OperationTimes operation_times(const DerivedParams& d, int n_max) {
    if (n_max < 0) throw InvalidParameter("n_max must be >= 0");
    if (!(d.rates.omega1 > 0.0)) throw InvalidParameter("Omega_1 must be positive");
    OperationTimes t;
    t.tau_e = excitation_time(d.rates);
    t.tau_c.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) t.tau_c.push_back(transfer_time(d.rates, n));
    return t;
}

// (tau_p / n) / tau_c^(n) = 2 |Omega_2| tau_p sqrt(n+1) / (n pi)
inline double fock_ratio(const RabiRates& r, double tau_p, std::int64_t n) {
    if (n < 1) throw InvalidParameter("Fock lifetime ratio needs n >= 1");
    return (tau_p / static_cast<double>(n)) / transfer_time(r, n);
}

struct RatioPoint {
    int n = 0;
    double ratio = 0.0;
};

inline std::vector<RatioPoint> fock_ratio_curve(const DerivedParams& d, const CavityParams& cav, int n_min,
                                                int n_max) {
    if (n_min < 1 || n_max < n_min) {
        throw InvalidParameter("photon range must satisfy 1 <= n_min <= n_max");
    }
    const double tau_p = photon_lifetime(cav.Q, cav.lambda);
    std::vector<RatioPoint> out;
    out.reserve(static_cast<std::size_t>(n_max - n_min) + 1);
    for (int n = n_min; n <= n_max; ++n) out.push_back({n, fock_ratio(d.rates, tau_p, n)});
    return out;
}

struct KnobSetting {
    double ng = 0.0;
    double phi_c = 0.0; // Phi_0 units
};

inline KnobSetting knob_settings(PulseKind kind) {
    switch (kind) {
    case PulseKind::Carrier: return {0.5, 0.0};
    case PulseKind::RedSideband: return {1.0, 0.5};
    case PulseKind::BlueSideband: return {0.0, 0.5};
    case PulseKind::Idle:
        throw NotAPhysicalKnob("idle means coupling off: any flux with sin(pi phi_c) = 0 and no unique gate charge");
    }
    throw NotAPhysicalKnob("unknown pulse kind");
}

struct ReportOptions {
    double margin = 10.0; // operational meaning of "much greater than"
};

struct FeasibilityReport {
    int target_n = 0;
    double margin = 10.0;
    double tau_e = 0.0;
    std::vector<double> tau_c; // n = 0..target_n
    double tau_p = 0.0;
    double n_th = 0.0;
    double T1 = 0.0;
    double T2 = 0.0;
    double ratio_at_target = 0.0; // (tau_p / n) / tau_c^(n) at n = target_n, 0 for target_n = 0
    bool single_photon_ok = false; // tau_e, tau_c^(0) < T1: emission before relaxation
    bool fock_ok = false;
    bool superposition_ok = false;
    std::int64_t max_fock = 0;
    DerivedParams derived;
};

namespace detail {

inline bool timescales_ok(double slowest_allowed, double tau_e, double tau_c, double margin) {
    return slowest_allowed / std::max(tau_e, tau_c) >= margin;
}

// Largest n with ratio(n) >= 1; ratio is strictly decreasing in n.
inline std::int64_t largest_ratio_n(const RabiRates& r, double tau_p) {
    if (fock_ratio(r, tau_p, 1) < 1.0) return 0;
    std::int64_t lo = 1;
    std::int64_t hi = 2;
    constexpr std::int64_t cap = std::int64_t{1} << 60;
    while (hi < cap && fock_ratio(r, tau_p, hi) >= 1.0) {
        lo = hi;
        hi *= 2;
    }
    if (hi >= cap && fock_ratio(r, tau_p, cap) >= 1.0) return cap;
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (fock_ratio(r, tau_p, mid) >= 1.0) lo = mid;
        else hi = mid;
    }
    return lo;
}

} // namespace detail

// fock_ok: min(T1, tau_p) / max(tau_e, tau_c^(n)) >= margin and
// (tau_p/n)/tau_c^(n) >= 1 for every n <= target_n. superposition_ok also
// puts T2 in the numerator.
inline FeasibilityReport feasibility_report(const DeviceParams& dev, const CavityParams& cav, int target_n,
                                            const ReportOptions& opts = {}) {
    if (target_n < 0) throw InvalidParameter("target photon number must be >= 0");
    if (!(std::isfinite(opts.margin) && opts.margin > 0.0)) throw InvalidParameter("margin must be positive");
    FeasibilityReport rep;
    rep.derived = derive(dev, cav);
    const RabiRates& r = rep.derived.rates;
    const auto times = operation_times(rep.derived, target_n);
    rep.target_n = target_n;
    rep.margin = opts.margin;
    rep.tau_e = times.tau_e;
    rep.tau_c = times.tau_c;
    rep.tau_p = photon_lifetime(cav.Q, cav.lambda);
    rep.n_th = thermal_occupation(cav.lambda, cav.T);
    rep.T1 = dev.T1;
    rep.T2 = dev.T2;
    rep.ratio_at_target = target_n >= 1 ? fock_ratio(r, rep.tau_p, target_n) : 0.0;

    const double fock_limit = std::min(dev.T1, rep.tau_p);
    const double sup_limit = std::min(fock_limit, dev.T2);
    rep.single_photon_ok = rep.tau_c.front() < dev.T1 && rep.tau_e < dev.T1;

    bool fock = true;
    bool sup = true;
    for (int n = 0; n <= target_n; ++n) {
        const double tc = rep.tau_c[static_cast<std::size_t>(n)];
        const bool lifetime_ok = n == 0 || fock_ratio(r, rep.tau_p, n) >= 1.0;
        fock = fock && lifetime_ok && detail::timescales_ok(fock_limit, rep.tau_e, tc, opts.margin);
        sup = sup && lifetime_ok && detail::timescales_ok(sup_limit, rep.tau_e, tc, opts.margin);
    }
    rep.fock_ok = fock;
    rep.superposition_ok = sup;

    // tau_c^(n) shrinks with n, so the n = 0 transfer is the binding timescale check.
    const bool first_transfer_ok =
        r.omega2_mag > 0.0 && detail::timescales_ok(fock_limit, rep.tau_e, transfer_time(r, 0), opts.margin);
    rep.max_fock = first_transfer_ok ? detail::largest_ratio_n(r, rep.tau_p) : 0;
    return rep;
}

} // namespace sqcav::physics
