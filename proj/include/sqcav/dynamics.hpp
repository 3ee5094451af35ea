// dynamics.hpp: closed-form carrier / sideband / idle propagators and the
// RWA Hamiltonians they exponentiate.

#pragma once

#include "sqcav/constants.hpp"
#include "sqcav/errors.hpp"
#include "sqcav/hilbert.hpp"

#include <cmath>
#include <string>
#include <string_view>

namespace sqcav {

enum class PulseKind { Carrier, RedSideband, BlueSideband, Idle };

inline std::string_view to_string(PulseKind k) {
    switch (k) {
    case PulseKind::Carrier: return "Carrier";
    case PulseKind::RedSideband: return "RedSideband";
    case PulseKind::BlueSideband: return "BlueSideband";
    case PulseKind::Idle: return "Idle";
    }
    return "?";
}

inline PulseKind pulse_kind_from_string(std::string_view s) {
    if (s == "Carrier") return PulseKind::Carrier;
    if (s == "RedSideband") return PulseKind::RedSideband;
    if (s == "BlueSideband") return PulseKind::BlueSideband;
    if (s == "Idle") return PulseKind::Idle;
    throw ParseError("unknown pulse kind '" + std::string(s) + "'");
}

// All rates in rad/s. Omega_2 = |Omega_2| e^{i theta}.
struct RabiRates {
    double omega1 = 1.0;
    double omega2_mag = 1.0;
    double theta = 0.0;
    double omega_cavity = 1.0;

    void validate() const {
        if (!(std::isfinite(omega1) && omega1 > 0.0)) throw InvalidParameter("omega1 must be positive");
        if (!(std::isfinite(omega2_mag) && omega2_mag >= 0.0)) throw InvalidParameter("omega2_mag must be >= 0");
        if (!(std::isfinite(theta) && theta > -constants::pi && theta <= constants::pi)) {
            throw InvalidParameter("theta must lie in (-pi, pi]");
        }
        if (!(std::isfinite(omega_cavity) && omega_cavity >= 0.0)) {
            throw InvalidParameter("omega_cavity must be >= 0");
        }
    }

    Complex omega2() const { return std::polar(omega2_mag, theta); }
};

namespace detail {

inline void check_duration(double t) {
    if (!(std::isfinite(t) && t >= 0.0)) throw InvalidParameter("pulse duration must be finite and >= 0");
}

// Writes the 2x2 rung rotation
//   [ cos      -i e^{i theta} sin ]   acting on (upper, lower)
//   [ -i e^{-i theta} sin   cos   ]
// where `upper` carries the e^{i theta} element in its row.
inline void put_rung(Matrix& u, Eigen::Index upper, Eigen::Index lower, double angle, double theta) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Complex minus_i(0.0, -1.0);
    u(upper, upper) = c;
    u(lower, lower) = c;
    u(upper, lower) = minus_i * std::polar(1.0, theta) * s;
    u(lower, upper) = minus_i * std::polar(1.0, -theta) * s;
}

} // namespace detail

// U_C(t) = cos(Omega_1 t) I + i sin(Omega_1 t)(|g><e| + |e><g|) on every photon sector.
inline OperatorMatrix carrier_propagator(double t, const RabiRates& r, int n_max) {
    detail::check_duration(t);
    r.validate();
    const auto d = dimension(n_max);
    const double c = std::cos(r.omega1 * t);
    const Complex is(0.0, std::sin(r.omega1 * t));
    Matrix u = Matrix::Zero(d, d);
    for (int n = 0; n <= n_max; ++n) {
        const auto g = flat_index({Qubit::g, n, n_max});
        const auto e = flat_index({Qubit::e, n, n_max});
        u(g, g) = c;
        u(e, e) = c;
        u(g, e) = is;
        u(e, g) = is;
    }
    return OperatorMatrix(n_max, std::move(u));
}

// Rungs {|e,n>, |g,n+1>} rotate by |Omega_2| t sqrt(n+1). |g,0> and the
// unpaired edge state |e,N_max> are left untouched.
inline OperatorMatrix red_propagator(double t, const RabiRates& r, int n_max) {
    detail::check_duration(t);
    r.validate();
    const auto d = dimension(n_max);
    Matrix u = Matrix::Identity(d, d);
    for (int n = 0; n < n_max; ++n) {
        const double angle = r.omega2_mag * t * std::sqrt(static_cast<double>(n + 1));
        detail::put_rung(u, flat_index({Qubit::e, n, n_max}), flat_index({Qubit::g, n + 1, n_max}), angle, r.theta);
    }
    return OperatorMatrix(n_max, std::move(u));
}

// Rungs {|g,n>, |e,n+1>}; |e,0> and the edge state |g,N_max> are invariant.
inline OperatorMatrix blue_propagator(double t, const RabiRates& r, int n_max) {
    detail::check_duration(t);
    r.validate();
    const auto d = dimension(n_max);
    Matrix u = Matrix::Identity(d, d);
    for (int n = 0; n < n_max; ++n) {
        const double angle = r.omega2_mag * t * std::sqrt(static_cast<double>(n + 1));
        detail::put_rung(u, flat_index({Qubit::g, n, n_max}), flat_index({Qubit::e, n + 1, n_max}), angle, r.theta);
    }
    return OperatorMatrix(n_max, std::move(u));
}

// Free cavity evolution with the coupling switched off: |q,n> -> e^{-i n omega t}|q,n>.
inline OperatorMatrix idle_propagator(double t, const RabiRates& r, int n_max) {
    detail::check_duration(t);
    r.validate();
    const auto d = dimension(n_max);
    Matrix u = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        u(i, i) = std::polar(1.0, -static_cast<double>(i / 2) * r.omega_cavity * t);
    }
    return OperatorMatrix(n_max, std::move(u));
}

inline OperatorMatrix propagator(PulseKind kind, double t, const RabiRates& r, int n_max) {
    switch (kind) {
    case PulseKind::Carrier: return carrier_propagator(t, r, n_max);
    case PulseKind::RedSideband: return red_propagator(t, r, n_max);
    case PulseKind::BlueSideband: return blue_propagator(t, r, n_max);
    case PulseKind::Idle: return idle_propagator(t, r, n_max);
    }
    throw InvalidParameter("unknown pulse kind");
}

// Interaction-picture Hamiltonian (joules) whose exp(-iHt/hbar) equals the
// closed-form propagator of the same kind:
//   Carrier  H = -hbar Omega_1 (sigma_+ + sigma_-)
//   Red      H = hbar (Omega_2 a sigma_+ + Omega_2^* a^dagger sigma_-)
//   Blue     H = hbar (Omega_2 a sigma_- + Omega_2^* a^dagger sigma_+)
//   Idle     H = hbar omega a^dagger a
inline OperatorMatrix rwa_hamiltonian(PulseKind kind, const RabiRates& r, int n_max) {
    r.validate();
    const double hb = constants::hbar;
    switch (kind) {
    case PulseKind::Carrier:
        return Complex(-hb * r.omega1) * (sigma_plus(n_max) + sigma_minus(n_max));
    case PulseKind::RedSideband: {
        const auto ladder = ladder_operators(n_max);
        const OperatorMatrix up = sigma_plus(n_max) * ladder.a;
        return OperatorMatrix(n_max, hb * (r.omega2() * up.entries() + std::conj(r.omega2()) * up.entries().adjoint()));
    }
    case PulseKind::BlueSideband: {
        const auto ladder = ladder_operators(n_max);
        const OperatorMatrix down = sigma_minus(n_max) * ladder.a;
        return OperatorMatrix(n_max,
                              hb * (r.omega2() * down.entries() + std::conj(r.omega2()) * down.entries().adjoint()));
    }
    case PulseKind::Idle:
        return Complex(hb * r.omega_cavity) * number_operator(n_max);
    }
    throw InvalidParameter("unknown pulse kind");
}

} // namespace sqcav
