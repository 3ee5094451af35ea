// lindblad.hpp: fixed-step RK4 density-matrix integrator with zero-temperature
// amplitude damping of the cavity and qubit plus qubit pure dephasing.
//
//   drho/dt = -(i/hbar)[H, rho] + sum_k (L_k rho L_k^+ - 1/2 {L_k^+ L_k, rho})
//   L = sqrt(kappa) a,  sqrt(gamma1) sigma_-,  sqrt(gamma_phi / 2) sigma_z

#pragma once

#include "sqcav/compiler.hpp"
#include "sqcav/constants.hpp"
#include "sqcav/dynamics.hpp"
#include "sqcav/errors.hpp"
#include "sqcav/hilbert.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sqcav::lindblad {

class DensityMatrix {
public:
    DensityMatrix(int n_max, Matrix entries) : n_max_(n_max), rho_(std::move(entries)) {
        const auto d = dimension(n_max_);
        if (rho_.rows() != d || rho_.cols() != d) throw DimensionMismatch("density matrix has wrong dimension");
        if (!rho_.allFinite()) throw InvalidParameter("density matrix entries must be finite");
    }

    static DensityMatrix pure(const Ket& k) {
        return DensityMatrix(k.n_max(), k.amplitudes() * k.amplitudes().adjoint());
    }

    static DensityMatrix basis(Qubit q, int photons, int n_max) { return pure(Ket::basis(q, photons, n_max)); }

    int n_max() const noexcept { return n_max_; }
    const Matrix& entries() const noexcept { return rho_; }

    Complex trace() const { return rho_.trace(); }
    double population(Qubit q, int photons) const {
        const auto i = flat_index({q, photons, n_max_});
        return rho_(i, i).real();
    }
    // Photon-number distribution summed over the qubit.
    double photon_population(int photons) const {
        return population(Qubit::g, photons) + population(Qubit::e, photons);
    }
    double hermiticity_defect() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Hermitian within 1e-10, unit trace within 1e-8, eigenvalues >= -1e-8.
    bool is_valid() const {
        return hermiticity_defect() <= 1e-10 && std::abs(trace() - 1.0) <= 1e-8 && min_eigenvalue() >= -1e-8;
    }

private:
    int n_max_;
    Matrix rho_;
};

struct DecayChannels {
    double kappa = 0.0;     // cavity decay, 1/s
    double gamma1 = 0.0;    // qubit relaxation, 1/s
    double gamma_phi = 0.0; // qubit pure dephasing, 1/s

    void validate() const {
        for (double r : {kappa, gamma1, gamma_phi}) {
            if (!(std::isfinite(r) && r >= 0.0)) throw InvalidParameter("decay rates must be finite and >= 0");
        }
    }

    double max_rate() const { return std::max({kappa, gamma1, gamma_phi}); }

    // kappa = 1/tau_p, gamma1 = 1/T1, gamma_phi = max(1/T2 - 1/(2 T1), 0).
    static DecayChannels from_times(double tau_p, double T1, double T2) {
        if (!(tau_p > 0.0 && T1 > 0.0 && T2 > 0.0)) throw InvalidParameter("lifetimes must be positive");
        return {1.0 / tau_p, 1.0 / T1, std::max(1.0 / T2 - 0.5 / T1, 0.0)};
    }
};

// Precomputed generator for one (H, channels) pair.
class Liouvillian {
public:
    Liouvillian(const OperatorMatrix& H, const DecayChannels& ch) : n_max_(H.n_max()) {
        if (!H.is_hermitian()) throw HermiticityViolation("Lindblad Hamiltonian must be Hermitian");
        ch.validate();
        h_ = H.entries() / constants::hbar;
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h_ + h_.adjoint()), Eigen::EigenvaluesOnly);
        h_norm_ = es.eigenvalues().cwiseAbs().maxCoeff();
        max_rate_ = ch.max_rate();

        const auto d = dimension(n_max_);
        decay_ = Matrix::Zero(d, d);
        auto add = [&](double rate, const OperatorMatrix& op) {
            if (rate <= 0.0) return;
            const Matrix l = std::sqrt(rate) * op.entries();
            jumps_.push_back(l);
            decay_ += l.adjoint() * l;
        };
        add(ch.kappa, ladder_operators(n_max_).a);
        add(ch.gamma1, sigma_minus(n_max_));
        add(ch.gamma_phi / 2.0, sigma_z(n_max_));
        // Non-Hermitian effective generator: -iH - 1/2 sum L^+ L
        effective_ = Complex(0.0, -1.0) * h_ - 0.5 * decay_;
    }

    int n_max() const noexcept { return n_max_; }

    // Largest rate the step-size rule must resolve: max(decay rate, ||H||/hbar).
    double stiffness() const { return std::max(max_rate_, h_norm_); }

    Matrix operator()(const Matrix& rho) const {
        Matrix out = effective_ * rho + rho * effective_.adjoint();
        for (const auto& l : jumps_) out.noalias() += l * rho * l.adjoint();
        return out;
    }

private:
    int n_max_;
    Matrix h_;
    Matrix decay_;
    Matrix effective_;
    std::vector<Matrix> jumps_;
    double h_norm_ = 0.0;
    double max_rate_ = 0.0;
};

// Right-hand side of the master equation. The result is a traceless
// derivative, not a state, so it is returned as a bare matrix.
inline Matrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& H, const DecayChannels& ch) {
    if (rho.n_max() != H.n_max()) throw DimensionMismatch("density matrix and Hamiltonian truncations differ");
    return Liouvillian(H, ch)(rho.entries());
}

namespace detail {

inline Matrix rk4_step(const Liouvillian& L, const Matrix& rho, double h) {
    const Matrix k1 = L(rho);
    const Matrix k2 = L(rho + 0.5 * h * k1);
    const Matrix k3 = L(rho + 0.5 * h * k2);
    const Matrix k4 = L(rho + h * k3);
    Matrix next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return 0.5 * (next + next.adjoint());
}

inline double max_step(const Liouvillian& L) {
    const double s = L.stiffness();
    return s > 0.0 ? 0.01 / s : std::numeric_limits<double>::infinity();
}

} // namespace detail

// Observer receives (time, rho) after every step, and once at t = 0.
using Observer = std::function<void(double, const DensityMatrix&)>;

// Classical RK4 with ceil(t_final/dt) equal steps of size <= dt; requires
// dt <= 0.01 / max(rate, ||H||/hbar).
inline DensityMatrix evolve_density(const DensityMatrix& rho0, const OperatorMatrix& H, const DecayChannels& ch,
                                    double t_final, double dt, const Observer& observe = {}) {
    if (rho0.n_max() != H.n_max()) throw DimensionMismatch("density matrix and Hamiltonian truncations differ");
    if (!(std::isfinite(t_final) && t_final >= 0.0)) throw InvalidParameter("t_final must be finite and >= 0");
    if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidParameter("dt must be positive");
    const Liouvillian L(H, ch);
    const double limit = detail::max_step(L);
    if (dt > limit * (1.0 + 1e-12)) {
        throw StepTooLarge("dt = " + std::to_string(dt) + " exceeds the stability limit " + std::to_string(limit));
    }
    if (observe) observe(0.0, rho0);
    if (t_final == 0.0) return rho0;
    const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
    const double h = t_final / static_cast<double>(steps);
    Matrix rho = rho0.entries();
    for (long long i = 1; i <= steps; ++i) {
        rho = detail::rk4_step(L, rho, h);
        if (observe) observe(h * static_cast<double>(i), DensityMatrix(rho0.n_max(), rho));
    }
    return DensityMatrix(rho0.n_max(), std::move(rho));
}

// Runs |g,0><g,0| through the sequence with each step's Hamiltonian and the
// decay channels active throughout; returns <g,m|rho|g,m>.
inline DensityMatrix evolve_sequence(const PulseSequence& seq, const DecayChannels& ch) {
    seq.rates.validate();
    DensityMatrix rho = DensityMatrix::basis(Qubit::g, 0, seq.n_max);
    for (const auto& step : seq.steps) {
        if (step.duration == 0.0) continue;
        const OperatorMatrix H = rwa_hamiltonian(step.kind, seq.rates, seq.n_max);
        const double dt = detail::max_step(Liouvillian(H, ch));
        rho = evolve_density(rho, H, ch, step.duration, std::min(dt, step.duration));
    }
    return rho;
}

inline double dissipative_fock_fidelity(const PulseSequence& seq, const DecayChannels& ch, int m) {
    if (m < 0) throw InvalidTarget("Fock level must be >= 0");
    if (m + guard_band > seq.n_max) {
        throw TruncationTooSmall("N_max = " + std::to_string(seq.n_max) + " leaves no guard band above |" +
                                 std::to_string(m) + ">");
    }
    return evolve_sequence(seq, ch).population(Qubit::g, m);
}

} // namespace sqcav::lindblad
