// hilbert.hpp: truncated qubit ⊗ Fock space, dense operators, expm oracle
//
// Basis ordering is photon-major, qubit-minor: |q,n> sits at flat index
// 2n + q with g = 0 and e = 1. A truncation N_max keeps photon numbers
// 0..N_max, so every state and operator has dimension 2(N_max + 1).

#pragma once

#include "sqcav/constants.hpp"
#include "sqcav/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

namespace sqcav {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Qubit : int { g = 0, e = 1 };

struct BasisIndex {
    Qubit qubit = Qubit::g;
    int photons = 0;
    int truncation = 1;
};

inline Eigen::Index dimension(int n_max) {
    if (n_max < 1) throw InvalidParameter("truncation N_max must be >= 1, got " + std::to_string(n_max));
    return 2 * (static_cast<Eigen::Index>(n_max) + 1);
}

inline Eigen::Index flat_index(const BasisIndex& b) {
    if (b.truncation < 1) throw InvalidParameter("truncation N_max must be >= 1");
    if (b.photons < 0 || b.photons > b.truncation) {
        throw IndexOutOfRange("photon number " + std::to_string(b.photons) +
                              " outside [0, " + std::to_string(b.truncation) + "]");
    }
    return 2 * static_cast<Eigen::Index>(b.photons) + static_cast<int>(b.qubit);
}

inline BasisIndex basis_index(Eigen::Index flat, int n_max) {
    if (flat < 0 || flat >= dimension(n_max)) {
        throw IndexOutOfRange("flat index " + std::to_string(flat) + " outside the truncated space");
    }
    return BasisIndex{(flat % 2 == 0) ? Qubit::g : Qubit::e, static_cast<int>(flat / 2), n_max};
}

inline std::string basis_label(Eigen::Index flat, int n_max) {
    const BasisIndex b = basis_index(flat, n_max);
    return std::string("|") + (b.qubit == Qubit::g ? "g" : "e") + "," + std::to_string(b.photons) + ">";
}

namespace detail {

inline bool all_finite(const Matrix& m) {
    return m.allFinite();
}

} // namespace detail

class Ket {
public:
    Ket(int n_max, Vector amplitudes) : n_max_(n_max), amps_(std::move(amplitudes)) {
        if (amps_.size() != dimension(n_max_)) {
            throw DimensionMismatch("ket has " + std::to_string(amps_.size()) + " amplitudes, expected " +
                                    std::to_string(dimension(n_max_)));
        }
        if (!amps_.allFinite()) throw InvalidParameter("ket amplitudes must be finite");
    }

    static Ket basis(Qubit q, int photons, int n_max) {
        Vector v = Vector::Zero(dimension(n_max));
        v(flat_index({q, photons, n_max})) = 1.0;
        return Ket(n_max, std::move(v));
    }

    static Ket ground_vacuum(int n_max) { return basis(Qubit::g, 0, n_max); }

    int n_max() const noexcept { return n_max_; }
    Eigen::Index dim() const noexcept { return amps_.size(); }
    const Vector& amplitudes() const noexcept { return amps_; }

    Complex operator[](Eigen::Index i) const { return amps_(i); }
    Complex amplitude(Qubit q, int photons) const { return amps_(flat_index({q, photons, n_max_})); }
    double population(Qubit q, int photons) const { return std::norm(amplitude(q, photons)); }

    double norm() const { return amps_.norm(); }

    Ket normalized() const {
        const double n = norm();
        if (n == 0.0) throw InvalidParameter("cannot normalize the zero vector");
        return Ket(n_max_, amps_ / n);
    }

    // Largest photon number carrying amplitude above `tol`; -1 for the zero vector.
    int max_photons(double tol = 0.0) const {
        for (Eigen::Index i = amps_.size() - 1; i >= 0; --i) {
            if (std::abs(amps_(i)) > tol) return static_cast<int>(i / 2);
        }
        return -1;
    }

private:
    int n_max_;
    Vector amps_;
};

class OperatorMatrix {
public:
    OperatorMatrix(int n_max, Matrix entries) : n_max_(n_max), m_(std::move(entries)) {
        const auto d = dimension(n_max_);
        if (m_.rows() != d || m_.cols() != d) {
            throw DimensionMismatch("operator is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                                    ", expected " + std::to_string(d) + "x" + std::to_string(d));
        }
        if (!detail::all_finite(m_)) throw InvalidParameter("operator entries must be finite");
    }

    static OperatorMatrix identity(int n_max) {
        const auto d = dimension(n_max);
        return OperatorMatrix(n_max, Matrix::Identity(d, d));
    }

    static OperatorMatrix zero(int n_max) {
        const auto d = dimension(n_max);
        return OperatorMatrix(n_max, Matrix::Zero(d, d));
    }

    int n_max() const noexcept { return n_max_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    const Matrix& entries() const noexcept { return m_; }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

    Complex element(const BasisIndex& row, const BasisIndex& col) const {
        return m_(flat_index(row), flat_index(col));
    }

    OperatorMatrix adjoint() const { return OperatorMatrix(n_max_, m_.adjoint()); }

    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

    // ||A - A^dagger||_max relative to ||A||_max.
    bool is_hermitian(double tol = 1e-12) const {
        const double scale = max_abs();
        if (scale == 0.0) return true;
        return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
    }

    bool is_unitary(double tol = 1e-12) const {
        return unitarity_defect() <= tol;
    }

    // ||A^dagger A - I||_max
    double unitarity_defect() const {
        return (m_.adjoint() * m_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    }

    Ket apply(const Ket& k) const {
        check_same(k.n_max());
        return Ket(n_max_, m_ * k.amplitudes());
    }

    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
        a.check_same(b.n_max_);
        return OperatorMatrix(a.n_max_, a.m_ * b.m_);
    }
    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
        a.check_same(b.n_max_);
        return OperatorMatrix(a.n_max_, a.m_ + b.m_);
    }
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
        a.check_same(b.n_max_);
        return OperatorMatrix(a.n_max_, a.m_ - b.m_);
    }
    friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a) {
        return OperatorMatrix(a.n_max_, s * a.m_);
    }

private:
    void check_same(int other) const {
        if (other != n_max_) {
            throw DimensionMismatch("truncation mismatch: " + std::to_string(n_max_) + " vs " + std::to_string(other));
        }
    }

    int n_max_;
    Matrix m_;
};

struct LadderOperators {
    OperatorMatrix a;
    OperatorMatrix a_dagger;
};

// a|q,n> = sqrt(n)|q,n-1>, identity on the qubit factor.
inline LadderOperators ladder_operators(int n_max) {
    const auto d = dimension(n_max);
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n <= n_max; ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        for (Qubit q : {Qubit::g, Qubit::e}) {
            a(flat_index({q, n - 1, n_max}), flat_index({q, n, n_max})) = amp;
        }
    }
    Matrix ad = a.adjoint();
    return {OperatorMatrix(n_max, std::move(a)), OperatorMatrix(n_max, std::move(ad))};
}

inline OperatorMatrix number_operator(int n_max) {
    const auto d = dimension(n_max);
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = static_cast<double>(i / 2);
    return OperatorMatrix(n_max, std::move(m));
}

// |to><from| on the qubit, identity on the photon factor.
inline OperatorMatrix qubit_operator(Qubit to, Qubit from, int n_max) {
    const auto d = dimension(n_max);
    Matrix m = Matrix::Zero(d, d);
    for (int n = 0; n <= n_max; ++n) m(flat_index({to, n, n_max}), flat_index({from, n, n_max})) = 1.0;
    return OperatorMatrix(n_max, std::move(m));
}

// sigma_+ = |e><g|
inline OperatorMatrix sigma_plus(int n_max) { return qubit_operator(Qubit::e, Qubit::g, n_max); }
// sigma_- = |g><e|
inline OperatorMatrix sigma_minus(int n_max) { return qubit_operator(Qubit::g, Qubit::e, n_max); }

// |g> is the +1 eigenvector, |e> the -1 eigenvector.
inline OperatorMatrix sigma_z(int n_max) {
    return qubit_operator(Qubit::g, Qubit::g, n_max) - qubit_operator(Qubit::e, Qubit::e, n_max);
}

inline OperatorMatrix excited_projector(int n_max) { return qubit_operator(Qubit::e, Qubit::e, n_max); }

// exp(-i H t / hbar) for Hermitian H given in joules, via eigendecomposition.
inline OperatorMatrix expm_hermitian(const OperatorMatrix& H, double t) {
    if (!std::isfinite(t)) throw InvalidParameter("evolution time must be finite");
    if (!H.is_hermitian()) throw HermiticityViolation("expm_hermitian requires a Hermitian operator");
    const Matrix sym = 0.5 * (H.entries() + H.entries().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Eigen::VectorXd& w = es.eigenvalues();
    Vector phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        phases(i) = std::polar(1.0, -w(i) * t / constants::hbar);
    }
    const Matrix& v = es.eigenvectors();
    return OperatorMatrix(H.n_max(), v * phases.asDiagonal() * v.adjoint());
}

// |<x|y>|^2
inline double fidelity(const Ket& x, const Ket& y) {
    if (x.n_max() != y.n_max()) {
        throw DimensionMismatch("fidelity between kets of truncation " + std::to_string(x.n_max()) + " and " +
                                std::to_string(y.n_max()));
    }
    return std::norm(x.amplitudes().dot(y.amplitudes()));
}

} // namespace sqcav
