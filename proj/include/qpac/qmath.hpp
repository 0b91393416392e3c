#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qpac/matrix.hpp"
#include "qpac/rng.hpp"

namespace qpac {

inline constexpr long long DIM_CAP_DEFAULT = 16384;

struct HermEig {
    RealVector eigenvalues;   // descending
    ComplexMatrix eigenvectors;  // columns, matching order
};

// Spectral decomposition H = V diag(lambda) V^dag with eigenvalues descending.
inline HermEig herm_eig(const ComplexMatrix& h) {
    require_hermitian(h);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    Eigen::Index d = h.rows();
    HermEig out;
    out.eigenvalues = es.eigenvalues().reverse();
    out.eigenvectors.resize(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        out.eigenvectors.col(k) = es.eigenvectors().col(d - 1 - k);
    return out;
}

// Spectral function f applied on the support only: eigenvalues <= support_cut map
// to 0. Small negative eigenvalues (PSD drift) are clipped to 0 first.
inline ComplexMatrix mat_func(const ComplexMatrix& h, const std::function<double(double)>& f,
                              double support_cut) {
    HermEig eig = herm_eig(h);
    RealVector g(eig.eigenvalues.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        double lam = eig.eigenvalues[k];
        if (lam < 0.0 && lam >= -TOL_PSD) lam = 0.0;
        g[k] = lam > support_cut ? f(lam) : 0.0;
    }
    return eig.eigenvectors * g.asDiagonal() * eig.eigenvectors.adjoint();
}

// relative support cut: 1e-12 times the largest eigenvalue
inline double support_cut_for(const ComplexMatrix& h) {
    double lam_max = herm_eigenvalues(h).maxCoeff();
    return 1e-12 * std::max(lam_max, 0.0);
}

inline ComplexMatrix mat_sqrt(const ComplexMatrix& h) {
    return mat_func(h, [](double x) { return std::sqrt(x); }, support_cut_for(h));
}

inline ComplexMatrix mat_inv_sqrt(const ComplexMatrix& h) {
    return mat_func(h, [](double x) { return 1.0 / std::sqrt(x); }, support_cut_for(h));
}

// sum of singular values
inline double trace_norm(const ComplexMatrix& a) {
    if (!is_square(a)) throw DimMismatch("trace_norm expects a square matrix");
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    return svd.singularValues().sum();
}

inline double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw DimMismatch("trace_distance dimension mismatch");
    // the difference is Hermitian, so the trace norm is the sum of |eigenvalues|
    RealVector lam = herm_eigenvalues(rho1.mat() - rho2.mat());
    double d = 0.5 * lam.cwiseAbs().sum();
    return std::clamp(d, 0.0, 1.0);
}

// F(rho1, rho2) = || sqrt(rho1) sqrt(rho2) ||_1
inline double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw DimMismatch("fidelity dimension mismatch");
    double f = trace_norm(mat_sqrt(rho1.mat()) * mat_sqrt(rho2.mat()));
    return std::clamp(f, 0.0, 1.0);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

inline DensityMatrix tensor_product(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    long long dim_cap = DIM_CAP_DEFAULT) {
    long long d = static_cast<long long>(rho1.dim()) * rho2.dim();
    if (d > dim_cap) throw DimCapExceeded(d, dim_cap);
    return DensityMatrix::trusted(kron(rho1.mat(), rho2.mat()));
}

// Haar-random orthonormal measurement basis: complex Gaussian matrix followed by
// modified Gram-Schmidt. Normalizing by the (real, positive) column norms fixes
// the phase convention, so a seed gives the same basis on every platform.
inline Povm haar_basis(Eigen::Index dim, Rng& rng) {
    if (dim < 1) throw InvalidParams("haar_basis needs dim >= 1");
    ComplexMatrix g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    ComplexMatrix q(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        ComplexVector v = g.col(j);
        // two orthogonalization passes keep the basis orthonormal at large dim
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < j; ++k) v -= q.col(k).dot(v) * q.col(k);
        q.col(j) = v / v.norm();
    }
    std::vector<ComplexMatrix> effects;
    effects.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k)
        effects.push_back(q.col(k) * q.col(k).adjoint());
    return Povm::trusted(dim, std::move(effects));
}

// Born rule: probs[k] = tr(E_k rho), clipped at 0 and renormalized. Drift beyond
// TOL_PROB means the POVM is broken and is an error.
inline ProbVector outcome_distribution(const DensityMatrix& rho, const Povm& m) {
    if (rho.dim() != m.dim()) throw DimMismatch("outcome_distribution dimension mismatch");
    std::vector<double> p(m.size());
    double total = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        double v = (m.effect(k) * rho.mat()).trace().real();
        p[k] = std::max(v, 0.0);
        total += p[k];
    }
    if (std::abs(total - 1.0) > TOL_PROB)
        throw InvariantViolation("outcome probabilities drift beyond tolerance");
    for (double& v : p) v /= total;
    return ProbVector(std::move(p));
}

inline std::size_t sample_index(const ProbVector& p, Rng& rng) {
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += p[k];
        if (u < acc) return k;
    }
    return p.size() - 1;
}

inline std::size_t sample_outcome(const DensityMatrix& rho, const Povm& m, Rng& rng) {
    return sample_index(outcome_distribution(rho, m), rng);
}

// classical trace distance between outcome distributions
inline double tv_distance(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size()) throw LengthMismatch("tv_distance length mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - q[k]);
    return std::clamp(0.5 * s, 0.0, 1.0);
}

}  // namespace qpac
