#include "sqcav/dynamics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sqcav;

namespace {

constexpr double pi = constants::pi;

RabiRates device_rates(double theta = 0.0) {
    RabiRates r;
    r.omega1 = 4.084e10;
    r.omega2_mag = 3.1e6;
    r.theta = theta;
    r.omega_cavity = 1.8837e12;
    return r;
}

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

constexpr PulseKind all_kinds[] = {PulseKind::Carrier, PulseKind::RedSideband, PulseKind::BlueSideband,
                                   PulseKind::Idle};

// Natural time scale of each kind, so sampled t covers a few rotations.
double period(PulseKind k, const RabiRates& r) {
    switch (k) {
    case PulseKind::Carrier: return 2 * pi / r.omega1;
    case PulseKind::RedSideband:
    case PulseKind::BlueSideband: return 2 * pi / r.omega2_mag;
    case PulseKind::Idle: return 2 * pi / r.omega_cavity;
    }
    return 1.0;
}

} // namespace

TEST(Carrier, QuarterAndHalfTurns) {
    const auto r = device_rates();
    const int n_max = 3;
    const Ket g0 = Ket::ground_vacuum(n_max);
    const Ket flipped = carrier_propagator(pi / (2 * r.omega1), r, n_max).apply(g0);
    EXPECT_LE(std::abs(flipped.amplitude(Qubit::e, 0) - Complex(0.0, 1.0)), 1e-15);
    EXPECT_LE(std::abs(flipped.amplitude(Qubit::g, 0)), 1e-15);

    const Ket half = carrier_propagator(pi / (4 * r.omega1), r, n_max).apply(g0);
    EXPECT_NEAR(half.amplitude(Qubit::g, 0).real(), std::cos(pi / 4), 1e-15);
    EXPECT_NEAR(half.amplitude(Qubit::e, 0).imag(), std::sin(pi / 4), 1e-15);
    EXPECT_NEAR(half.norm(), 1.0, 1e-15);

    EXPECT_LE(max_diff(carrier_propagator(0.0, r, n_max).entries(), OperatorMatrix::identity(n_max).entries()), 0.0);
}

TEST(Carrier, SameActionInEverySector) {
    const auto r = device_rates();
    const int n_max = 5;
    const auto U = carrier_propagator(0.37 / r.omega1, r, n_max);
    for (int n = 1; n <= n_max; ++n) {
        for (Qubit a : {Qubit::g, Qubit::e})
            for (Qubit b : {Qubit::g, Qubit::e})
                EXPECT_EQ(U.element({a, n, n_max}, {b, n, n_max}), U.element({a, 0, n_max}, {b, 0, n_max}));
    }
}

TEST(Red, SingleQuantumTransfer) {
    for (double theta : {0.0, 0.7, -2.1, pi}) {
        const auto r = device_rates(theta);
        const int n_max = 3;
        const Ket out = red_propagator(pi / (2 * r.omega2_mag), r, n_max).apply(Ket::basis(Qubit::e, 0, n_max));
        const Complex expected = Complex(0.0, -1.0) * std::polar(1.0, -theta);
        EXPECT_LE(std::abs(out.amplitude(Qubit::g, 1) - expected), 1e-15);
        EXPECT_NEAR(out.norm(), 1.0, 1e-15);
    }
}

TEST(Red, InvariantStates) {
    const auto r = device_rates(0.4);
    const int n_max = 4;
    const auto U = red_propagator(1.234 / r.omega2_mag, r, n_max);
    EXPECT_EQ(U.element({Qubit::g, 0, n_max}, {Qubit::g, 0, n_max}), Complex(1.0));
    EXPECT_EQ(U.element({Qubit::e, n_max, n_max}, {Qubit::e, n_max, n_max}), Complex(1.0));
    EXPECT_EQ(max_diff(red_propagator(0.0, r, n_max).entries(), OperatorMatrix::identity(n_max).entries()), 0.0);
}

TEST(Blue, SingleQuantumTransfer) {
    for (double theta : {0.0, 1.3}) {
        const auto r = device_rates(theta);
        const int n_max = 3;
        const Ket out = blue_propagator(pi / (2 * r.omega2_mag), r, n_max).apply(Ket::ground_vacuum(n_max));
        const Complex expected = Complex(0.0, -1.0) * std::polar(1.0, -theta);
        EXPECT_LE(std::abs(out.amplitude(Qubit::e, 1) - expected), 1e-15);
    }
    const auto r = device_rates();
    const auto U = blue_propagator(0.9 / r.omega2_mag, r, 3);
    EXPECT_EQ(U.element({Qubit::e, 0, 3}, {Qubit::e, 0, 3}), Complex(1.0));
    EXPECT_EQ(U.element({Qubit::g, 3, 3}, {Qubit::g, 3, 3}), Complex(1.0));
    EXPECT_EQ(max_diff(blue_propagator(0.0, r, 3).entries(), OperatorMatrix::identity(3).entries()), 0.0);
}

TEST(Idle, PhasesAndPeriod) {
    const auto r = device_rates();
    const int n_max = 4;
    EXPECT_EQ(max_diff(idle_propagator(0.0, r, n_max).entries(), OperatorMatrix::identity(n_max).entries()), 0.0);
    EXPECT_LE(max_diff(idle_propagator(2 * pi / r.omega_cavity, r, n_max).entries(),
                       OperatorMatrix::identity(n_max).entries()),
              1e-13);
    Vector v = Vector::Zero(dimension(n_max));
    v(flat_index({Qubit::g, 0, n_max})) = v(flat_index({Qubit::g, 1, n_max})) = 1.0 / std::sqrt(2.0);
    const Ket out = idle_propagator(pi / r.omega_cavity, r, n_max).apply(Ket(n_max, v));
    EXPECT_NEAR(out.amplitude(Qubit::g, 0).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(out.amplitude(Qubit::g, 1).real(), -1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(out.amplitude(Qubit::g, 1).imag(), 0.0, 1e-15);
}

TEST(Propagators, RejectBadInputs) {
    auto r = device_rates();
    EXPECT_THROW(carrier_propagator(-1.0, r, 2), InvalidParameter);
    EXPECT_THROW(red_propagator(std::numeric_limits<double>::quiet_NaN(), r, 2), InvalidParameter);
    r.theta = -pi;
    EXPECT_THROW(red_propagator(1.0, r, 2), InvalidParameter);
    r.theta = 0.0;
    r.omega1 = 0.0;
    EXPECT_THROW(carrier_propagator(1.0, r, 2), InvalidParameter);
}

TEST(Propagators, UnitaryAtAnyTruncation) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    const auto r = device_rates(0.9);
    for (int n_max : {1, 2, 7, 16, 64}) {
        for (PulseKind k : all_kinds) {
            const double t = u(rng) * period(k, r);
            EXPECT_LE(propagator(k, t, r, n_max).unitarity_defect(), 1e-12) << to_string(k) << " N_max=" << n_max;
        }
    }
}

TEST(Propagators, SameKindComposition) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    const auto r = device_rates(-0.6);
    const int n_max = 8;
    for (PulseKind k : all_kinds) {
        for (int trial = 0; trial < 10; ++trial) {
            const double t = u(rng) * period(k, r);
            const double s = u(rng) * period(k, r);
            const Matrix lhs = (propagator(k, t, r, n_max) * propagator(k, s, r, n_max)).entries();
            EXPECT_LE(max_diff(lhs, propagator(k, t + s, r, n_max).entries()), 1e-10) << to_string(k);
        }
    }
}

TEST(Propagators, MatchExponentialOfHamiltonian) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (double theta : {0.0, 0.8, -2.5}) {
        const auto r = device_rates(theta);
        const int n_max = 8;
        for (PulseKind k : all_kinds) {
            const auto H = rwa_hamiltonian(k, r, n_max);
            const double tol = k == PulseKind::Carrier ? 1e-12 : 1e-10;
            for (int trial = 0; trial < 20; ++trial) {
                const double t = u(rng) * period(k, r);
                EXPECT_LE(max_diff(expm_hermitian(H, t).entries(), propagator(k, t, r, n_max).entries()), tol)
                    << to_string(k) << " theta=" << theta;
            }
        }
    }
}

TEST(Hamiltonians, ExactlyHermitian) {
    const auto r = device_rates(1.1);
    for (PulseKind k : all_kinds) {
        const Matrix h = rwa_hamiltonian(k, r, 6).entries();
        EXPECT_EQ((h - h.adjoint()).cwiseAbs().maxCoeff(), 0.0) << to_string(k);
    }
}

TEST(Hamiltonians, RedMatrixElementPattern) {
    const auto r = device_rates(0.3);
    const int n_max = 5;
    const auto H = rwa_hamiltonian(PulseKind::RedSideband, r, n_max);
    for (int n = 0; n < n_max; ++n) {
        const Complex want = constants::hbar * r.omega2() * std::sqrt(double(n + 1));
        EXPECT_LE(std::abs(H.element({Qubit::e, n, n_max}, {Qubit::g, n + 1, n_max}) - want), 1e-12 * std::abs(want));
    }
}

TEST(Sidebands, ConserveExcitationNumber) {
    const auto r = device_rates(0.5);
    const int n_max = 7;
    const OperatorMatrix N = number_operator(n_max);
    const OperatorMatrix Pe = excited_projector(n_max);
    const OperatorMatrix red_q = N + Pe;
    const OperatorMatrix blue_q = N - Pe;
    const auto Ur = red_propagator(2.2 / r.omega2_mag, r, n_max);
    const auto Ub = blue_propagator(2.2 / r.omega2_mag, r, n_max);
    EXPECT_LE((Ur * red_q - red_q * Ur).max_abs(), 1e-12);
    EXPECT_LE((Ub * blue_q - blue_q * Ub).max_abs(), 1e-12);
}

TEST(Red, EmissionProbabilityLaw) {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    const auto r = device_rates(1.9);
    const int n_max = 7;
    for (int n = 0; n <= 4; ++n) {
        for (int trial = 0; trial < 16; ++trial) {
            const double t = u(rng) / r.omega2_mag;
            const auto U = red_propagator(t, r, n_max);
            const double p = std::norm(U.element({Qubit::g, n + 1, n_max}, {Qubit::e, n, n_max}));
            const double s = std::sin(r.omega2_mag * t * std::sqrt(double(n + 1)));
            EXPECT_NEAR(p, s * s, 1e-12);
        }
    }
}

TEST(PulseKindNames, RoundTrip) {
    for (PulseKind k : all_kinds) EXPECT_EQ(pulse_kind_from_string(to_string(k)), k);
    EXPECT_THROW(pulse_kind_from_string("Red"), ParseError);
}
