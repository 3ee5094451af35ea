// compiler.hpp: pulse sequences that map |g,0> onto a requested cavity state
//
// Synthesis runs the target backwards to the vacuum, one photon level at a
// time. At level n the state is supported on |g,0..n> and |e,0..n-1>; an
// inverse red pulse empties |g,n> into |e,n-1>, then an inverse carrier
// merges |e,n-1> into |g,n-1>. The reversed list is the forward sequence.
//
// Carrier and red rotation axes are fixed, so each merge succeeds only when
// the two amplitudes involved have the right relative phase. With idle steps
// enabled a level that fails this test is solved numerically with two
// phase-shifted red pulses; a red pulse with phase offset phi is realised as
// Idle(-phi/omega) Red Idle(phi/omega).

#pragma once

#include "sqcav/constants.hpp"
#include "sqcav/dynamics.hpp"
#include "sqcav/errors.hpp"
#include "sqcav/hilbert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace sqcav {

struct PulseStep {
    PulseKind kind = PulseKind::Idle;
    double duration = 0.0; // seconds
};

struct PulseSequence {
    std::vector<PulseStep> steps;
    RabiRates rates;
    int n_max = 1;
};

class TargetState {
public:
    // Coefficients c_0..c_N of sum_n c_n |g,n>; must already be normalized.
    explicit TargetState(std::vector<Complex> coefficients, double tol = 1e-10) : c_(std::move(coefficients)) {
        if (c_.empty()) throw InvalidTarget("target needs at least one coefficient");
        double norm2 = 0.0;
        for (const auto& z : c_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidTarget("non-finite coefficient");
            norm2 += std::norm(z);
        }
        if (std::abs(norm2 - 1.0) > tol) {
            throw InvalidTarget("target coefficients have squared norm " + std::to_string(norm2) + ", expected 1");
        }
    }

    static TargetState normalized(std::vector<Complex> coefficients) {
        double norm2 = 0.0;
        for (const auto& z : coefficients) norm2 += std::norm(z);
        if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw InvalidTarget("target coefficients must not all vanish");
        const double s = 1.0 / std::sqrt(norm2);
        for (auto& z : coefficients) z *= s;
        return TargetState(std::move(coefficients));
    }

    static TargetState fock(int m) {
        if (m < 0) throw InvalidTarget("Fock level must be >= 0");
        std::vector<Complex> c(static_cast<std::size_t>(m) + 1, 0.0);
        c.back() = 1.0;
        return TargetState(std::move(c));
    }

    int max_photons() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Complex>& coefficients() const noexcept { return c_; }

    Ket as_ket(int n_max) const {
        if (max_photons() > n_max) throw TruncationTooSmall("target does not fit in the truncated space");
        Vector v = Vector::Zero(dimension(n_max));
        for (int n = 0; n <= max_photons(); ++n) v(flat_index({Qubit::g, n, n_max})) = c_[static_cast<std::size_t>(n)];
        return Ket(n_max, std::move(v));
    }

private:
    std::vector<Complex> c_;
};

inline constexpr int guard_band = 2;

namespace detail {

inline int checked_n_max(int needed_photons, std::optional<int> requested) {
    const int minimum = std::max(needed_photons + guard_band, 1);
    if (!requested) return minimum;
    if (*requested < minimum) {
        throw TruncationTooSmall("N_max = " + std::to_string(*requested) + " but photon level " +
                                 std::to_string(needed_photons) + " needs at least " + std::to_string(minimum));
    }
    return *requested;
}

inline void require_coupling(const RabiRates& r) {
    if (!(r.omega2_mag > 0.0)) throw InvalidParameter("sideband pulses need omega2_mag > 0");
}

inline double wrap(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    return y;
}

} // namespace detail

// Upper bound on the photon number any component reaches while the sequence
// acts on `initial`. Tracked separately for the g and e manifolds.
inline int photon_reach(const PulseSequence& seq, const Ket& initial, double tol = 1e-14) {
    int pg = -1;
    int pe = -1;
    for (Eigen::Index i = 0; i < initial.dim(); ++i) {
        if (std::abs(initial[i]) <= tol) continue;
        const int n = static_cast<int>(i / 2);
        if (i % 2 == 0) pg = std::max(pg, n);
        else pe = std::max(pe, n);
    }
    int reach = std::max(pg, pe);
    for (const auto& step : seq.steps) {
        if (step.duration == 0.0) continue;
        const int g0 = pg;
        const int e0 = pe;
        switch (step.kind) {
        case PulseKind::Carrier: pg = pe = std::max(g0, e0); break;
        case PulseKind::RedSideband:
            pg = std::max(g0, e0 >= 0 ? e0 + 1 : -1);
            pe = std::max(e0, g0 >= 1 ? g0 - 1 : -1);
            break;
        case PulseKind::BlueSideband:
            pe = std::max(e0, g0 >= 0 ? g0 + 1 : -1);
            pg = std::max(g0, e0 >= 1 ? e0 - 1 : -1);
            break;
        case PulseKind::Idle: break;
        }
        reach = std::max({reach, pg, pe});
    }
    return reach;
}

// Applies the steps in time order (first step acts first).
inline Ket simulate_sequence(const PulseSequence& seq, const Ket& initial) {
    if (initial.n_max() != seq.n_max) {
        throw DimensionMismatch("initial state truncation " + std::to_string(initial.n_max()) +
                                " differs from sequence N_max " + std::to_string(seq.n_max));
    }
    if (std::abs(initial.norm() - 1.0) > 1e-10) throw InvalidParameter("initial state must be normalized");
    seq.rates.validate();
    const int reach = photon_reach(seq, initial);
    if (reach + guard_band > seq.n_max) {
        throw TruncationTooSmall("sequence reaches photon level " + std::to_string(reach) + "; N_max = " +
                                 std::to_string(seq.n_max) + " leaves no guard band");
    }
    Vector psi = initial.amplitudes();
    for (const auto& step : seq.steps) {
        psi = propagator(step.kind, step.duration, seq.rates, seq.n_max).entries() * psi;
    }
    return Ket(seq.n_max, std::move(psi));
}

// Alternating Carrier pi/(2 Omega_1) and Red pi/(2 |Omega_2| sqrt(l)), l = 1..m.
inline PulseSequence fock_sequence(int m, const RabiRates& r, std::optional<int> n_max = std::nullopt) {
    if (m < 0) throw InvalidTarget("Fock level must be >= 0, got " + std::to_string(m));
    r.validate();
    PulseSequence seq{{}, r, detail::checked_n_max(m, n_max)};
    if (m > 0) detail::require_coupling(r);
    const double pi = constants::pi;
    for (int l = 1; l <= m; ++l) {
        seq.steps.push_back({PulseKind::Carrier, pi / (2.0 * r.omega1)});
        seq.steps.push_back({PulseKind::RedSideband, pi / (2.0 * r.omega2_mag * std::sqrt(static_cast<double>(l)))});
    }
    return seq;
}

namespace detail {

// Amplitudes on the two manifolds of a ladder state: g[0..N], e[0..N].
struct Ladder {
    std::vector<Complex> g;
    std::vector<Complex> e;

    int top() const { return static_cast<int>(g.size()) - 1; }
};

// Inverse red pulse with rung angle c sqrt(k) and axis phase `phase`.
inline void back_red(Ladder& s, double c, double phase) {
    const Complex i_pos = Complex(0.0, 1.0) * std::polar(1.0, phase);
    const Complex i_neg = Complex(0.0, 1.0) * std::polar(1.0, -phase);
    for (int k = 1; k <= s.top(); ++k) {
        const double angle = c * std::sqrt(static_cast<double>(k));
        const double co = std::cos(angle);
        const double si = std::sin(angle);
        const Complex x = s.e[static_cast<std::size_t>(k - 1)];
        const Complex y = s.g[static_cast<std::size_t>(k)];
        s.e[static_cast<std::size_t>(k - 1)] = co * x + i_pos * si * y;
        s.g[static_cast<std::size_t>(k)] = i_neg * si * x + co * y;
    }
}

inline void back_carrier(Ladder& s, double a) {
    const double co = std::cos(a);
    const Complex mi_si(0.0, -std::sin(a));
    for (std::size_t k = 0; k < s.g.size(); ++k) {
        const Complex u = s.g[k];
        const Complex v = s.e[k];
        s.g[k] = co * u + mi_si * v;
        s.e[k] = mi_si * u + co * v;
    }
}

inline constexpr double zero_amplitude = 1e-13;
inline constexpr double phase_tolerance = 1e-9;

// Rotation angle in [0, pi) that empties `drain` into `keep`, given that the
// inverse pulse maps drain -> drain*cos + coupling*keep*sin (up to sign).
// `w` must be real for an exact solution; returns nullopt if it is not.
inline std::optional<double> merge_angle(Complex keep, Complex drain, Complex w, bool enforce_phase) {
    const double ak = std::abs(keep);
    const double ad = std::abs(drain);
    if (ad <= zero_amplitude) return 0.0;
    if (ak <= zero_amplitude) return constants::pi / 2.0;
    if (enforce_phase && std::abs(w.imag()) > phase_tolerance * ak * ad) return std::nullopt;
    const double sign = (w.real() < 0.0) ? -1.0 : 1.0;
    double angle = std::atan2(sign * ad, ak);
    if (angle < 0.0) angle += constants::pi;
    return angle;
}

// Rung angle that empties g[n] into e[n-1] with axis phase `phase`.
inline std::optional<double> red_merge_angle(const Ladder& s, int n, double phase, bool enforce_phase) {
    const Complex x = s.e[static_cast<std::size_t>(n - 1)];
    const Complex y = s.g[static_cast<std::size_t>(n)];
    // g' = i e^{-i phase} sin x + cos y = 0  <=>  tan = i e^{i phase} y / x
    const Complex w = Complex(0.0, 1.0) * std::polar(1.0, phase) * y * std::conj(x);
    return merge_angle(x, y, w, enforce_phase);
}

// Carrier angle that empties e[n-1] into g[n-1].
inline std::optional<double> carrier_merge_angle(const Ladder& s, int n, bool enforce_phase) {
    const Complex u = s.g[static_cast<std::size_t>(n - 1)];
    const Complex v = s.e[static_cast<std::size_t>(n - 1)];
    // e' = -i sin u + cos v = 0  <=>  tan = -i v / u
    const Complex w = Complex(0.0, -1.0) * v * std::conj(u);
    return merge_angle(u, v, w, enforce_phase);
}

// One forward operation in dimensionless form: carrier angle Omega_1 t, or
// red angle |Omega_2| t with an axis offset `phase` relative to theta.
struct LevelOp {
    PulseKind kind = PulseKind::Carrier;
    double angle = 0.0;
    double phase = 0.0;
};

struct StageResult {
    std::vector<LevelOp> back_ops; // in inverse (application) order
    bool used_phase_shift = false;
};

inline bool greedy_stage(Ladder& s, int n, double theta, StageResult& out) {
    Ladder trial = s;
    const auto red = red_merge_angle(trial, n, theta, true);
    if (!red) return false;
    const double c = *red / std::sqrt(static_cast<double>(n));
    back_red(trial, c, theta);
    const auto car = carrier_merge_angle(trial, n, true);
    if (!car) return false;
    back_carrier(trial, *car);
    s = std::move(trial);
    out.back_ops = {{PulseKind::RedSideband, c, 0.0}, {PulseKind::Carrier, *car, 0.0}};
    return true;
}

// Residuals for the two-red stage: Re/Im of g[n] after both inverse reds,
// and Re(e[n-1] conj(g[n-1])), which must vanish for the carrier merge.
inline Eigen::Vector3d stage_residual(const Ladder& s, int n, double theta, const Eigen::Vector4d& p) {
    Ladder t = s;
    back_red(t, p(1), theta + p(0));
    back_red(t, p(3), theta + p(2));
    const Complex gn = t.g[static_cast<std::size_t>(n)];
    const Complex z = t.e[static_cast<std::size_t>(n - 1)] * std::conj(t.g[static_cast<std::size_t>(n - 1)]);
    return {gn.real(), gn.imag(), z.real()};
}

// Levenberg-Marquardt with minimum-norm steps on the underdetermined 3x4 system.
inline std::pair<Eigen::Vector4d, double> solve_stage_from(const Ladder& s, int n, double theta, Eigen::Vector4d p) {
    Eigen::Vector3d r = stage_residual(s, n, theta, p);
    double cost = r.norm();
    double lambda = 1e-3;
    constexpr double h = 1e-7;
    for (int iter = 0; iter < 300 && cost > 1e-15; ++iter) {
        Eigen::Matrix<double, 3, 4> jac;
        for (int j = 0; j < 4; ++j) {
            Eigen::Vector4d hi = p;
            Eigen::Vector4d lo = p;
            hi(j) += h;
            lo(j) -= h;
            jac.col(j) = (stage_residual(s, n, theta, hi) - stage_residual(s, n, theta, lo)) / (2.0 * h);
        }
        bool improved = false;
        for (int tries = 0; tries < 30; ++tries) {
            const Eigen::Matrix3d jjt = jac * jac.transpose() + lambda * Eigen::Matrix3d::Identity();
            const Eigen::Vector4d step = -jac.transpose() * jjt.ldlt().solve(r);
            const Eigen::Vector4d cand = p + step;
            const Eigen::Vector3d rc = stage_residual(s, n, theta, cand);
            if (rc.norm() < cost) {
                p = cand;
                r = rc;
                cost = rc.norm();
                lambda = std::max(lambda / 4.0, 1e-15);
                improved = true;
                break;
            }
            lambda *= 8.0;
        }
        if (!improved) break;
    }
    return {p, cost};
}

inline void solve_phase_shifted_stage(Ladder& s, int n, double theta, StageResult& out) {
    constexpr double accept = 1e-13;
    const double pi = constants::pi;
    const double top = std::sqrt(static_cast<double>(n));
    std::mt19937_64 rng(0x5a17c0deULL + static_cast<unsigned long long>(n));
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> angle_dist(0.0, pi / top);

    Eigen::Vector4d best_p = Eigen::Vector4d::Zero();
    double best_cost = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 200 && best_cost > accept; ++attempt) {
        Eigen::Vector4d seed;
        if (attempt == 0) {
            seed << 0.0, pi / (2.0 * top), 0.0, 0.0;
        } else {
            seed << phase_dist(rng), angle_dist(rng), phase_dist(rng), angle_dist(rng);
        }
        auto [p, cost] = solve_stage_from(s, n, theta, seed);
        if (cost < best_cost) {
            best_cost = cost;
            best_p = p;
        }
    }
    if (best_cost > accept) {
        throw Error("phase-shifted synthesis did not converge at photon level " + std::to_string(n));
    }

    out.back_ops.clear();
    for (int j = 0; j < 2; ++j) {
        double phase = best_p(2 * j);
        double c = best_p(2 * j + 1);
        back_red(s, c, theta + phase);
        if (c < 0.0) {
            c = -c;
            phase += pi;
        }
        out.back_ops.push_back({PulseKind::RedSideband, c, detail::wrap(phase, 2.0 * pi)});
    }
    const double a = *carrier_merge_angle(s, n, false);
    back_carrier(s, a);
    out.back_ops.push_back({PulseKind::Carrier, a, 0.0});
    out.used_phase_shift = true;
}

struct BackSolution {
    std::vector<LevelOp> forward; // time order
    std::optional<int> unreachable_level;
};

inline BackSolution back_solve(const TargetState& target, double theta, bool allow_idle, bool dry_run) {
    const int top = target.max_photons();
    Ladder s;
    s.g = target.coefficients();
    s.e.assign(s.g.size(), 0.0);

    std::vector<LevelOp> back;
    for (int n = top; n >= 1; --n) {
        StageResult stage;
        if (!greedy_stage(s, n, theta, stage)) {
            if (!allow_idle) {
                if (dry_run) return {{}, n};
                throw PhaseUnreachable(static_cast<std::size_t>(n),
                                       "photon level " + std::to_string(n) +
                                           " needs a relative phase outside the fixed carrier/red axes");
            }
            solve_phase_shifted_stage(s, n, theta, stage);
        }
        back.insert(back.end(), stage.back_ops.begin(), stage.back_ops.end());
    }
    if (std::abs(std::abs(s.g[0]) - 1.0) > 1e-9) {
        throw Error("back-evolution did not return to the vacuum (|c_0| = " + std::to_string(std::abs(s.g[0])) + ")");
    }
    std::reverse(back.begin(), back.end());
    return {std::move(back), std::nullopt};
}

// Appends a step, merging with an identical predecessor and reducing periodic
// kinds to their smallest nonnegative representative.
class StepEmitter {
public:
    explicit StepEmitter(const RabiRates& r) : r_(r) {}

    void carrier(double angle) { push(PulseKind::Carrier, angle); }
    void red(double angle) { push(PulseKind::RedSideband, angle); }
    void idle(double angle) { push(PulseKind::Idle, angle); }

    std::vector<PulseStep> finish() {
        std::vector<PulseStep> out;
        for (const auto& [kind, angle] : angles_) {
            const double reduced = reduce(kind, angle);
            if (reduced == 0.0) continue;
            out.push_back({kind, reduced / rate(kind)});
        }
        return out;
    }

private:
    static constexpr double prune = 1e-13;

    double period(PulseKind k) const {
        switch (k) {
        case PulseKind::Carrier: return constants::pi; // U_C(t + pi/Omega_1) = -U_C(t)
        case PulseKind::Idle: return 2.0 * constants::pi;
        default: return 0.0;
        }
    }

    double rate(PulseKind k) const {
        switch (k) {
        case PulseKind::Carrier: return r_.omega1;
        case PulseKind::Idle: return r_.omega_cavity;
        default: return r_.omega2_mag;
        }
    }

    double reduce(PulseKind k, double angle) const {
        const double p = period(k);
        double a = (p > 0.0) ? wrap(angle, p) : angle;
        if (a <= prune || (p > 0.0 && p - a <= prune)) return 0.0;
        return a;
    }

    void push(PulseKind k, double angle) {
        if (!angles_.empty() && angles_.back().first == k) {
            angles_.back().second += angle;
            if (reduce(k, angles_.back().second) == 0.0) angles_.pop_back();
            return;
        }
        if (reduce(k, angle) == 0.0) return;
        angles_.emplace_back(k, angle);
    }

    RabiRates r_;
    std::vector<std::pair<PulseKind, double>> angles_;
};

inline std::vector<PulseStep> realise(const std::vector<LevelOp>& forward, const RabiRates& r) {
    StepEmitter emit(r);
    double pending_idle = 0.0; // omega * t owed before the next red pulse
    bool seen_red = false;
    for (const auto& op : forward) {
        if (op.kind == PulseKind::Carrier) {
            emit.carrier(op.angle);
            continue;
        }
        // Red with axis offset phi: Idle(-phi/omega), Red, Idle(+phi/omega).
        // Idles commute with carriers; any idle before the first red acts on
        // the vacuum and is dropped.
        pending_idle -= op.phase;
        if (seen_red && wrap(pending_idle, 2.0 * constants::pi) != 0.0) {
            if (!(r.omega_cavity > 0.0)) throw InvalidParameter("idle steps need omega_cavity > 0");
            emit.idle(pending_idle);
        }
        emit.red(op.angle);
        pending_idle = op.phase;
        seen_red = true;
    }
    if (seen_red && wrap(pending_idle, 2.0 * constants::pi) != 0.0) {
        if (!(r.omega_cavity > 0.0)) throw InvalidParameter("idle steps need omega_cavity > 0");
        emit.idle(pending_idle);
    }
    return emit.finish();
}

} // namespace detail

// Two-step [Carrier t1, Red pi/(2|Omega_2|)] giving alpha1|0> + alpha2|1>,
// which requires alpha1 = cos(Omega_1 t1), alpha2 = e^{-i theta} sin(Omega_1 t1)
// up to a global phase.
inline PulseSequence binary_superposition(Complex alpha1, Complex alpha2, const RabiRates& r,
                                          std::optional<int> n_max = std::nullopt) {
    r.validate();
    detail::require_coupling(r);
    const double norm2 = std::norm(alpha1) + std::norm(alpha2);
    if (std::abs(norm2 - 1.0) > 1e-10) {
        throw InvalidTarget("binary superposition weights have squared norm " + std::to_string(norm2));
    }
    const Complex z = alpha2 * std::conj(alpha1) * std::polar(1.0, r.theta);
    const auto angle = detail::merge_angle(alpha1, alpha2, z, true);
    if (!angle) {
        throw PhaseUnreachable(1, "relative phase of the binary superposition is not -theta (mod pi); "
                                  "use synthesize with idle steps");
    }
    detail::StepEmitter emit(r);
    emit.carrier(*angle);
    emit.red(constants::pi / 2.0);
    return PulseSequence{emit.finish(), r, detail::checked_n_max(1, n_max)};
}

struct SynthesisOptions {
    bool allow_idle = false;
    std::optional<int> n_max;
};

inline PulseSequence synthesize(const TargetState& target, const RabiRates& r, const SynthesisOptions& opts = {}) {
    r.validate();
    const int top = target.max_photons();
    const int n_max = detail::checked_n_max(top, opts.n_max);
    if (top > 0) detail::require_coupling(r);
    const auto solution = detail::back_solve(target, r.theta, opts.allow_idle, false);
    PulseSequence seq{detail::realise(solution.forward, r), r, n_max};

    const Ket out = simulate_sequence(seq, Ket::ground_vacuum(n_max));
    const double f = fidelity(out, target.as_ket(n_max));
    if (f < 1.0 - 1e-9) throw Error("synthesized sequence reaches fidelity " + std::to_string(f) + " only");
    return seq;
}

struct Reachability {
    bool reachable = true;
    std::optional<int> level; // first level needing an idle phase
};

// Idle-free reachability: dry run of the back-solver with fixed axes.
inline Reachability reachable(const TargetState& target, double theta) {
    const auto solution = detail::back_solve(target, theta, false, true);
    if (solution.unreachable_level) return {false, solution.unreachable_level};
    return {true, std::nullopt};
}

} // namespace sqcav
