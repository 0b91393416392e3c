#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qpac/discrimination.hpp"
#include "qpac/generators.hpp"
#include "qpac/io.hpp"
#include "qpac/learners.hpp"

namespace qpac {

// ---------------------------------------------------------------------------
// grouped PGM bound

struct PgmBoundReport {
    int instances = 0;
    double max_violation = -1.0;  // max(LHS - RHS) over instances
    bool pass = false;

    json to_json() const {
        return json{{"instances", instances}, {"max_violation", max_violation}, {"pass", pass}};
    }
};

inline ProbVector random_priors(std::size_t n, Rng& rng) {
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) total += (v = -std::log(1.0 - rng.uniform()));
    for (double& v : p) v /= total;
    return ProbVector(std::move(p));
}

inline DensityMatrix random_state(Eigen::Index d, Rng& rng) {
    return rng.uniform() < 0.5 ? random_pure_state(d, rng)
                               : random_mixed_state(d, 0, rng);
}

// LHS = sum_{i in yes, j in no} [p_i Pr(PGM(s_i)=j) + p_j Pr(PGM(s_j)=i)],
// RHS = sum of pairwise fidelities.
inline PgmBoundReport verify_pgm_bound(int instances, int max_dim, int max_side, Rng& rng,
                                       double tol = 1e-8) {
    PgmBoundReport rep;
    rep.instances = instances;
    for (int it = 0; it < instances; ++it) {
        Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.uniform_index(max_dim - 1));
        std::size_t s = 1 + rng.uniform_index(max_side);
        std::size_t t = 1 + rng.uniform_index(max_side);
        std::vector<DensityMatrix> states;
        for (std::size_t i = 0; i < s + t; ++i) states.push_back(random_state(d, rng));
        ProbVector priors = random_priors(s + t, rng);
        WeightedStateSet w(states, priors);
        RealMatrix conf = pgm_confusion(w);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = s; j < s + t; ++j) {
                lhs += priors[i] * conf(i, j) + priors[j] * conf(j, i);
                rhs += fidelity(states[i], states[j]);
            }
        rep.max_violation = std::max(rep.max_violation, lhs - rhs);
    }
    rep.pass = rep.max_violation <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// PSD block-matrix lemma

struct BlockLemmaReport {
    int instances = 0;
    double max_violation = -1.0;
    bool pass = false;

    json to_json() const {
        return json{{"instances", instances}, {"max_violation", max_violation}, {"pass", pass}};
    }
};

inline BlockLemmaReport verify_block_lemma(int instances, int max_dim, Rng& rng,
                                           double tol = 1e-9) {
    BlockLemmaReport rep;
    rep.instances = instances;
    for (int it = 0; it < instances; ++it) {
        Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.uniform_index(max_dim - 1));
        // occasionally rank-deficient to exercise the support edge
        Eigen::Index rank = rng.uniform() < 0.2
                                ? 1 + static_cast<Eigen::Index>(rng.uniform_index(d))
                                : d;
        ComplexMatrix g(d, rank);
        for (Eigen::Index j = 0; j < rank; ++j)
            for (Eigen::Index i = 0; i < d; ++i)
                g(i, j) = std::complex<double>(rng.normal(), rng.normal());
        ComplexMatrix m = g * g.adjoint();
        m = 0.5 * (m + m.adjoint().eval());
        for (Eigen::Index n1 = 1; n1 < d; ++n1) {
            auto [lhs, rhs] = block_lemma_check(m, n1);
            rep.max_violation = std::max(rep.max_violation, lhs - rhs);
        }
    }
    rep.pass = rep.max_violation <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// fidelity / trace-distance laws

struct FidelityLawsReport {
    int pairs = 0;
    double max_fvdg_violation = -1.0;
    double max_mult_violation = -1.0;
    bool pass = false;

    json to_json() const {
        return json{{"pairs", pairs},
                    {"max_fvdg_violation", max_fvdg_violation},
                    {"max_mult_violation", max_mult_violation},
                    {"pass", pass}};
    }
};

inline FidelityLawsReport verify_fidelity_laws(int pairs, int max_dim, Rng& rng,
                                               double tol = 1e-8) {
    FidelityLawsReport rep;
    rep.pairs = pairs;
    for (int it = 0; it < pairs; ++it) {
        Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.uniform_index(max_dim - 1));
        DensityMatrix a = random_state(d, rng);
        DensityMatrix b = random_state(d, rng);
        double f = fidelity(a, b);
        double dt = trace_distance(a, b);
        // 1 - F <= Delta <= sqrt(1 - F^2)
        rep.max_fvdg_violation = std::max(rep.max_fvdg_violation, (1.0 - f) - dt);
        rep.max_fvdg_violation =
            std::max(rep.max_fvdg_violation, dt - std::sqrt(std::max(0.0, 1.0 - f * f)));
        DensityMatrix a2 = random_state(2, rng);
        DensityMatrix b2 = random_state(2, rng);
        double lhs = fidelity(tensor_product(a, a2), tensor_product(b, b2));
        double rhs = f * fidelity(a2, b2);
        rep.max_mult_violation = std::max(rep.max_mult_violation, std::abs(lhs - rhs));
    }
    rep.pass = rep.max_fvdg_violation <= tol && rep.max_mult_violation <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// partition invariants

struct PartitionCheck {
    bool ok = true;
    std::string what;
};

inline PartitionCheck check_partition_invariants(const RealMatrix& dist, double epsilon,
                                                 const PartitionResult& res) {
    std::size_t n = static_cast<std::size_t>(dist.rows());
    std::vector<int> seen(n, 0);
    for (std::size_t i : res.s_yes) ++seen.at(i);
    for (std::size_t i : res.s_unknown) ++seen.at(i);
    for (std::size_t i : res.s_no) ++seen.at(i);
    for (std::size_t i = 0; i < n; ++i)
        if (seen[i] != 1) return {false, "sets do not partition the index set"};
    std::size_t ninth = (n + 8) / 9;
    if (res.s_yes.size() < ninth) return {false, "|S_yes| below ceil(n/9)"};
    if (!res.s_no.empty()) {
        for (std::size_t i : res.s_yes)
            for (std::size_t j : res.s_no)
                if (dist(i, j) < res.gamma - 1e-12)
                    return {false, "S_yes/S_no separation below gamma"};
    }
    if (!res.flag_extreme && res.s_no.size() < ninth)
        return {false, "|S_no| below ceil(n/9) without extreme flag"};
    if (res.flag_extreme) {
        for (std::size_t i : res.s_yes)
            if (dist(res.c_c, i) > epsilon + 1e-12)
                return {false, "extreme: S_yes member beyond epsilon of c_c"};
        for (std::size_t i : res.s_unknown)
            if (dist(res.c_c, i) > epsilon + 1e-12)
                return {false, "extreme: S_unknown member beyond epsilon of c_c"};
    }
    return {true, ""};
}

// Random pseudometric: points in a cube (optionally clustered) under scaled
// Euclidean distance, or the all-zero degenerate instance.
inline RealMatrix random_pseudometric(std::size_t n, Rng& rng) {
    double mode = rng.uniform();
    if (mode < 0.1) return RealMatrix::Zero(n, n);
    int k = 3;
    std::vector<std::vector<double>> pts(n, std::vector<double>(k));
    if (mode < 0.55) {
        for (auto& p : pts)
            for (double& v : p) v = rng.uniform();
    } else {
        std::size_t clusters = 1 + rng.uniform_index(std::max<std::size_t>(1, n / 3));
        std::vector<std::vector<double>> centers(clusters, std::vector<double>(k));
        for (auto& cpt : centers)
            for (double& v : cpt) v = rng.uniform();
        double spread = 0.02 * rng.uniform();
        for (auto& p : pts) {
            const auto& cpt = centers[rng.uniform_index(clusters)];
            for (int i = 0; i < k; ++i) p[i] = cpt[i] + spread * (rng.uniform() - 0.5);
        }
    }
    RealMatrix d = RealMatrix::Zero(n, n);
    double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < k; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
            d(i, j) = d(j, i) = std::min(1.0, scale * std::sqrt(s));
        }
    return d;
}

struct PartitionReport {
    int instances = 0;
    int failures = 0;
    std::string first_failure;
    bool pass = false;

    json to_json() const {
        return json{{"instances", instances},
                    {"failures", failures},
                    {"first_failure", first_failure},
                    {"pass", pass}};
    }
};

inline PartitionReport verify_partition(int instances, int max_size,
                                        const std::vector<double>& epsilons, Rng& rng,
                                        double gamma_divisor = 4.0) {
    PartitionReport rep;
    for (int it = 0; it < instances; ++it) {
        std::size_t n = 1 + rng.uniform_index(max_size);
        RealMatrix dist = random_pseudometric(n, rng);
        for (double eps : epsilons) {
            ++rep.instances;
            PartitionResult res = partition(dist, eps, gamma_divisor, rng);
            PartitionCheck chk = check_partition_invariants(dist, eps, res);
            if (!chk.ok) {
                ++rep.failures;
                if (rep.first_failure.empty()) rep.first_failure = chk.what;
            }
        }
    }
    rep.pass = rep.failures == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// random orthonormal measurement constant (Sen)

struct SenEstimate {
    std::vector<int> dims;
    std::vector<int> trial_counts;
    std::vector<double> p5;  // 5th-percentile ratio per dimension
    bool pass = false;

    json to_json() const {
        return json{{"dims", dims}, {"trials", trial_counts}, {"p5", p5}, {"pass", pass}};
    }
};

// ratio ||M(s1) - M(s2)||_1 / ||s1 - s2||_F over random pure pairs and Haar bases
inline SenEstimate verify_sen(const std::vector<int>& dims, int trials, Rng& rng,
                              double threshold = 0.1) {
    if (trials < 100) throw InvalidParams("verify_sen needs at least 100 trials");
    SenEstimate est;
    est.dims = dims;
    for (int d : dims) {
        std::vector<double> ratios;
        ratios.reserve(trials);
        while (static_cast<int>(ratios.size()) < trials) {
            DensityMatrix s1 = random_pure_state(d, rng);
            DensityMatrix s2 = random_pure_state(d, rng);
            double frob = (s1.mat() - s2.mat()).norm();
            if (frob < 1e-12) continue;  // identical pair, excluded by construction
            Povm basis = haar_basis(d, rng);
            double l1 = 2.0 * tv_distance(outcome_distribution(s1, basis),
                                          outcome_distribution(s2, basis));
            ratios.push_back(l1 / frob);
        }
        std::sort(ratios.begin(), ratios.end());
        est.p5.push_back(ratios[static_cast<std::size_t>(0.05 * ratios.size())]);
        est.trial_counts.push_back(trials);
    }
    est.pass = true;
    for (double p : est.p5)
        if (p < threshold) est.pass = false;
    // non-vanishing as the dimension grows
    if (!est.p5.empty() && est.p5.back() < 0.5 * est.p5.front()) est.pass = false;
    return est;
}

// ---------------------------------------------------------------------------
// agnostic hard instance (birthday scaling)

struct BirthdayReport {
    std::vector<int> dims;
    std::vector<double> median_sparse;  // family with Theta(d)-sized support
    std::vector<double> median_dense;   // family with Theta(d/100)-sized support
    double ratio = 0.0;                 // sparse-family median(last) / median(first)
    bool pass = false;

    json to_json() const {
        return json{{"dims", dims},
                    {"median_wide_support", median_sparse},
                    {"median_narrow_support", median_dense},
                    {"ratio", ratio},
                    {"pass", pass}};
    }
};

namespace detail {

// samples until a non-e0 index repeats; returns the number of draws
inline int draws_until_collision(double p0, int support, double mass_per_dim, Rng& rng) {
    std::map<int, int> seen;
    int draws = 0;
    double p_support = std::min(mass_per_dim * support, 1.0 - p0);
    while (true) {
        ++draws;
        double u = rng.uniform();
        if (u < p0) continue;  // e0 draw
        if (u >= p0 + p_support) continue;  // residual mass outside the support
        int idx = static_cast<int>((u - p0) / mass_per_dim);
        if (idx >= support) idx = support - 1;
        if (++seen[idx] == 2) return draws;
    }
}

}  // namespace detail

inline BirthdayReport birthday_demo(const std::vector<int>& dims, int trials, Rng& rng) {
    BirthdayReport rep;
    rep.dims = dims;
    for (int d : dims) {
        std::vector<double> sparse, dense;
        for (int t = 0; t < trials; ++t) {
            // D1 family: weight 1/3 on e0, 1/d on 2/3 of the d dimensions
            int support1 = std::max(1, (2 * d) / 3);
            sparse.push_back(detail::draws_until_collision(1.0 / 3.0, support1, 1.0 / d, rng));
            // D2 family: weight 1/3 on e0, 100/d on 2/300 of the d dimensions
            int support2 = std::max(1, (2 * d) / 300);
            dense.push_back(detail::draws_until_collision(1.0 / 3.0, support2, 100.0 / d, rng));
        }
        auto median = [](std::vector<double>& v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        rep.median_sparse.push_back(median(sparse));
        rep.median_dense.push_back(median(dense));
    }
    if (rep.median_sparse.size() >= 2 && rep.median_sparse.front() > 0.0)
        rep.ratio = rep.median_sparse.back() / rep.median_sparse.front();
    rep.pass = rep.ratio >= 2.5 && rep.ratio <= 6.5;
    return rep;
}

}  // namespace qpac
