#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qpac/channels.hpp"
#include "qpac/qmath.hpp"

namespace qpac {

struct WeightedStateSet {
    std::vector<DensityMatrix> states;
    ProbVector priors;

    WeightedStateSet(std::vector<DensityMatrix> s, ProbVector p)
        : states(std::move(s)), priors(std::move(p)) {
        if (states.empty()) throw EmptySet("weighted state set is empty");
        if (states.size() != priors.size())
            throw LengthMismatch("states and priors differ in length");
        for (const auto& st : states)
            if (st.dim() != states[0].dim())
                throw DimMismatch("weighted state set has mixed dimensions");
    }

    Eigen::Index dim() const { return states[0].dim(); }
};

// Pretty good measurement: E_i = A^{-1/2} A_i A^{-1/2} with A_i = p_i sigma_i.
// The raw effects sum only to the support projector of A; the off-support
// residual is folded into effect 0 so the Povm invariants hold.
inline Povm pgm_build(const WeightedStateSet& w) {
    Eigen::Index d = w.dim();
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < w.states.size(); ++i)
        a += w.priors[i] * w.states[i].mat();
    ComplexMatrix inv_sqrt = mat_inv_sqrt(a);
    std::vector<ComplexMatrix> effects;
    effects.reserve(w.states.size());
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < w.states.size(); ++i) {
        ComplexMatrix e = inv_sqrt * (w.priors[i] * w.states[i].mat()) * inv_sqrt;
        e = 0.5 * (e + e.adjoint().eval());
        sum += e;
        effects.push_back(std::move(e));
    }
    effects[0] += ComplexMatrix::Identity(d, d) - sum;
    return Povm::trusted(d, std::move(effects));
}

// entry (k, i) = Pr(PGM(sigma_k) = i)
inline RealMatrix pgm_confusion(const WeightedStateSet& w) {
    Povm pgm = pgm_build(w);
    std::size_t n = w.states.size();
    RealMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        ProbVector row = outcome_distribution(w.states[k], pgm);
        for (std::size_t i = 0; i < n; ++i) m(k, i) = row[i];
    }
    return m;
}

// Binary measurement {E_yes, E_no}.
struct BinaryMeasurement {
    ComplexMatrix e_yes;
    ComplexMatrix e_no;

    Povm as_povm() const { return Povm::trusted(e_yes.rows(), {e_yes, e_no}); }
};

// The (eta, N)-bichromatic state discrimination instance. The eta promise is
// validated at construction unless the cross fidelity is already known.
class BsdInstance {
public:
    BsdInstance(std::vector<DensityMatrix> yes, std::vector<DensityMatrix> no, double eta,
                int cap_n)
        : BsdInstance(std::move(yes), std::move(no), eta, cap_n, set_fidelity_or_throw()) {
        double f = set_fidelity(yes_, no_);
        if (f > eta_ + 1e-9)
            throw InvariantViolation("cross fidelity exceeds the eta promise");
    }

    // trusted path: cross_fidelity was computed by the caller (e.g. via tensor
    // factors) and already checked against eta
    static BsdInstance with_known_fidelity(std::vector<DensityMatrix> yes,
                                           std::vector<DensityMatrix> no, double eta,
                                           int cap_n) {
        return BsdInstance(std::move(yes), std::move(no), eta, cap_n, 0);
    }

    const std::vector<DensityMatrix>& yes_states() const { return yes_; }
    const std::vector<DensityMatrix>& no_states() const { return no_; }
    double eta() const { return eta_; }
    int cap_n() const { return cap_n_; }
    Eigen::Index dim() const { return yes_[0].dim(); }

private:
    struct set_fidelity_or_throw {};

    BsdInstance(std::vector<DensityMatrix> yes, std::vector<DensityMatrix> no, double eta,
                int cap_n, int)
        : yes_(std::move(yes)), no_(std::move(no)), eta_(eta), cap_n_(cap_n) {
        if (yes_.empty() || no_.empty()) throw EmptySet("BSD side is empty");
        if (static_cast<int>(yes_.size()) > cap_n_ || static_cast<int>(no_.size()) > cap_n_)
            throw InvariantViolation("BSD side exceeds the size bound N");
        for (const auto& s : yes_)
            if (s.dim() != yes_[0].dim()) throw DimMismatch("BSD states have mixed dimensions");
        for (const auto& s : no_)
            if (s.dim() != yes_[0].dim()) throw DimMismatch("BSD states have mixed dimensions");
    }

    BsdInstance(std::vector<DensityMatrix> yes, std::vector<DensityMatrix> no, double eta,
                int cap_n, set_fidelity_or_throw)
        : BsdInstance(std::move(yes), std::move(no), eta, cap_n, 0) {}

    std::vector<DensityMatrix> yes_;
    std::vector<DensityMatrix> no_;
    double eta_;
    int cap_n_;
};

// Groups the PGM effects of yes ++ no into a binary measurement.
inline BinaryMeasurement grouped_pgm_binary(const BsdInstance& inst, const ProbVector& priors) {
    std::vector<DensityMatrix> all = inst.yes_states();
    all.insert(all.end(), inst.no_states().begin(), inst.no_states().end());
    if (priors.size() != all.size())
        throw LengthMismatch("priors length differs from yes ++ no");
    Povm pgm = pgm_build(WeightedStateSet(std::move(all), priors));
    Eigen::Index d = inst.dim();
    ComplexMatrix e_yes = ComplexMatrix::Zero(d, d);
    ComplexMatrix e_no = ComplexMatrix::Zero(d, d);
    std::size_t s = inst.yes_states().size();
    for (std::size_t k = 0; k < pgm.size(); ++k)
        (k < s ? e_yes : e_no) += pgm.effect(k);
    return BinaryMeasurement{std::move(e_yes), std::move(e_no)};
}

// Optimal binary test between weighted states a_yes, a_no: project onto the
// strictly positive eigenspace of their difference; zero eigenvalues go to e_no.
inline BinaryMeasurement helstrom_binary(const ComplexMatrix& a_yes, const ComplexMatrix& a_no) {
    require_hermitian(a_yes);
    require_hermitian(a_no);
    if (a_yes.rows() != a_no.rows()) throw DimMismatch("helstrom_binary dimension mismatch");
    HermEig eig = herm_eig(a_yes - a_no);
    Eigen::Index d = a_yes.rows();
    ComplexMatrix e_yes = ComplexMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        if (eig.eigenvalues[k] > 0.0)
            e_yes += eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint();
    ComplexMatrix e_no = ComplexMatrix::Identity(d, d) - e_yes;
    return BinaryMeasurement{std::move(e_yes), std::move(e_no)};
}

// Pairwise-fidelity sum over yes x no; at most N^2 eta.
inline double bsd_error_bound(const BsdInstance& inst) {
    double sum = 0.0;
    for (const auto& a : inst.yes_states())
        for (const auto& b : inst.no_states()) sum += fidelity(a, b);
    return sum;
}

// worst-case error of a binary measurement over all states of the instance
inline double bsd_worst_case_error(const BsdInstance& inst, const BinaryMeasurement& m) {
    double worst = 0.0;
    for (const auto& s : inst.yes_states())
        worst = std::max(worst, (m.e_no * s.mat()).trace().real());
    for (const auto& s : inst.no_states())
        worst = std::max(worst, (m.e_yes * s.mat()).trace().real());
    return worst;
}

// Approximate minimax measurement: multiplicative weights over the <= 2N pure
// prior strategies with exact Helstrom best responses; returns the round-averaged
// measurement. Worst-case error <= bsd_error_bound + sqrt(ln(2N)/rounds).
inline BinaryMeasurement minimax_bsd(const BsdInstance& inst, int rounds, double step) {
    if (rounds < 1) throw InvalidConfig("minimax_bsd needs rounds >= 1");
    if (step <= 0.0 || step > 1.0) throw InvalidConfig("minimax_bsd needs step in (0, 1]");
    std::size_t s = inst.yes_states().size();
    std::size_t t = inst.no_states().size();
    std::size_t n = s + t;
    Eigen::Index d = inst.dim();
    double lr = step * std::sqrt(8.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2))) /
                                 static_cast<double>(rounds));
    std::vector<double> logw(n, 0.0);
    ComplexMatrix avg_yes = ComplexMatrix::Zero(d, d);
    for (int r = 0; r < rounds; ++r) {
        double wmax = *std::max_element(logw.begin(), logw.end());
        std::vector<double> p(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += (p[i] = std::exp(logw[i] - wmax));
        ComplexMatrix a_yes = ComplexMatrix::Zero(d, d);
        ComplexMatrix a_no = ComplexMatrix::Zero(d, d);
        for (std::size_t i = 0; i < s; ++i)
            a_yes += (p[i] / total) * inst.yes_states()[i].mat();
        for (std::size_t j = 0; j < t; ++j)
            a_no += (p[s + j] / total) * inst.no_states()[j].mat();
        BinaryMeasurement best = helstrom_binary(a_yes, a_no);
        // adversary gains the per-state error probability
        for (std::size_t i = 0; i < s; ++i)
            logw[i] += lr * (best.e_no * inst.yes_states()[i].mat()).trace().real();
        for (std::size_t j = 0; j < t; ++j)
            logw[s + j] += lr * (best.e_yes * inst.no_states()[j].mat()).trace().real();
        avg_yes += best.e_yes;
    }
    avg_yes /= static_cast<double>(rounds);
    avg_yes = 0.5 * (avg_yes + avg_yes.adjoint().eval());
    ComplexMatrix e_no = ComplexMatrix::Identity(d, d) - avg_yes;
    return BinaryMeasurement{std::move(avg_yes), std::move(e_no)};
}

// Block-matrix inequality for PSD M: ||M_{1,2}||_2^2 <= 1/2 ||(M^2)_{1,2}||_1.
// Returns (lhs, rhs) for assertion lhs <= rhs + 1e-9.
inline std::pair<double, double> block_lemma_check(const ComplexMatrix& m, Eigen::Index n1) {
    require_psd(m);
    Eigen::Index n = m.rows();
    if (n1 < 1 || n1 >= n) throw InvalidParams("block split out of range");
    Eigen::Index n2 = n - n1;
    ComplexMatrix m12 = m.block(0, n1, n1, n2);
    double lhs = m12.squaredNorm();
    ComplexMatrix m2 = m * m;
    ComplexMatrix sq12 = m2.block(0, n1, n1, n2);
    // trace norm of a rectangular block: sum of singular values
    Eigen::BDCSVD<ComplexMatrix> svd(sq12);
    double rhs = 0.5 * svd.singularValues().sum();
    return {lhs, rhs};
}

}  // namespace qpac
