#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "qpac/errors.hpp"

namespace qpac {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double TOL_HERM = 1e-10;
inline constexpr double TOL_PSD = 1e-10;
inline constexpr double TOL_COMPLETE = 1e-8;
inline constexpr double TOL_TRACE = 1e-9;
inline constexpr double TOL_PROB = 1e-9;

inline bool is_square(const ComplexMatrix& m) { return m.rows() == m.cols(); }

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const ComplexMatrix& m, double tol = TOL_HERM) {
    return is_square(m) && max_abs(m - m.adjoint()) <= tol;
}

inline void require_hermitian(const ComplexMatrix& m, double tol = TOL_HERM) {
    if (!is_square(m)) throw NotHermitian("matrix is not square");
    if (!m.allFinite()) throw NotHermitian("matrix has non-finite entries");
    if (max_abs(m - m.adjoint()) > tol) throw NotHermitian();
}

// Eigenvalues of a (pre-validated) Hermitian matrix, ascending.
inline RealVector herm_eigenvalues(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline void require_psd(const ComplexMatrix& m, double tol = TOL_PSD) {
    require_hermitian(m);
    if (herm_eigenvalues(m).minCoeff() < -tol) throw NotPsd();
}

// Hermitian, PSD, unit-trace matrix. The checked constructor costs an
// eigendecomposition; trusted() skips validation for matrices that are valid
// by construction (e.g. tensor products of valid states).
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
        require_hermitian(mat_);
        if (herm_eigenvalues(mat_).minCoeff() < -TOL_PSD)
            throw NotPsd("density matrix has eigenvalue below -1e-10");
        if (std::abs(mat_.trace().real() - 1.0) > TOL_TRACE ||
            std::abs(mat_.trace().imag()) > TOL_TRACE)
            throw InvariantViolation("density matrix trace differs from 1");
    }

    static DensityMatrix trusted(ComplexMatrix m) { return DensityMatrix(std::move(m), 0); }

    Eigen::Index dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

    // |v><v| from a (normalized) state vector
    static DensityMatrix pure(const ComplexVector& v) {
        ComplexVector u = v / v.norm();
        return trusted(u * u.adjoint());
    }

    static DensityMatrix maximally_mixed(Eigen::Index d) {
        return trusted(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
    }

private:
    DensityMatrix(ComplexMatrix m, int) : mat_(std::move(m)) {}
    ComplexMatrix mat_;
};

// Non-negative reals summing to 1 within tolerance.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
        double total = 0.0;
        for (double p : probs_) {
            if (p < 0.0) throw InvariantViolation("probability is negative");
            total += p;
        }
        if (std::abs(total - 1.0) > TOL_PROB)
            throw InvariantViolation("probabilities do not sum to 1");
    }

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    static ProbVector uniform(std::size_t n) {
        return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    static ProbVector point_mass(std::size_t n, std::size_t at) {
        std::vector<double> p(n, 0.0);
        p.at(at) = 1.0;
        return ProbVector(std::move(p));
    }

private:
    std::vector<double> probs_;
};

// Ordered list of PSD effects summing to identity.
class Povm {
public:
    Povm(Eigen::Index dim, std::vector<ComplexMatrix> effects)
        : dim_(dim), effects_(std::move(effects)) {
        ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
        for (const auto& e : effects_) {
            if (e.rows() != dim_ || e.cols() != dim_)
                throw DimMismatch("POVM effect dimension mismatch");
            require_psd(e);
            sum += e;
        }
        if (max_abs(sum - ComplexMatrix::Identity(dim_, dim_)) > TOL_COMPLETE)
            throw InvariantViolation("POVM effects do not sum to identity");
    }

    // Skips the per-effect PSD eigendecompositions; for effects valid by construction.
    static Povm trusted(Eigen::Index dim, std::vector<ComplexMatrix> effects) {
        return Povm(dim, std::move(effects), 0);
    }

    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return effects_.size(); }
    const ComplexMatrix& effect(std::size_t k) const { return effects_[k]; }
    const std::vector<ComplexMatrix>& effects() const { return effects_; }

    // projective measurement in the computational basis
    static Povm computational(Eigen::Index d) {
        std::vector<ComplexMatrix> effects;
        effects.reserve(static_cast<std::size_t>(d));
        for (Eigen::Index k = 0; k < d; ++k) {
            ComplexMatrix e = ComplexMatrix::Zero(d, d);
            e(k, k) = 1.0;
            effects.push_back(std::move(e));
        }
        return trusted(d, std::move(effects));
    }

private:
    Povm(Eigen::Index dim, std::vector<ComplexMatrix> effects, int)
        : dim_(dim), effects_(std::move(effects)) {}

    Eigen::Index dim_;
    std::vector<ComplexMatrix> effects_;
};

}  // namespace qpac
