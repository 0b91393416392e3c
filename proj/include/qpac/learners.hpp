#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qpac/channels.hpp"
#include "qpac/discrimination.hpp"

namespace qpac {

inline constexpr double LOG_FLOOR = 1e-300;

struct LearnerConfig {
    double epsilon = 0.2;
    double delta = 0.1;
    double k_pure = 2.0;     // multiplier hidden in the Theta() of the pure sample bound
    double k_mixed = 1.0;    // multiplier hidden in the Theta() of the mixed sample bound
    double gamma_divisor = 4.0;
    long long dim_cap = DIM_CAP_DEFAULT;

    // Desk-scale knobs for the mixed learner's joint measurement: samples measured
    // jointly per loop are additionally capped at t_joint_max, and the minimax
    // solver runs bsd_rounds rounds.
    int t_joint_max = 8;
    int bsd_rounds = 24;
    double bsd_step = 1.0;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidConfig("epsilon out of (0, 1]");
        if (!(delta > 0.0 && delta < 1.0)) throw InvalidConfig("delta out of (0, 1)");
        if (k_pure <= 0.0 || k_mixed <= 0.0) throw InvalidConfig("multipliers must be positive");
        if (gamma_divisor <= 0.0) throw InvalidConfig("gamma_divisor must be positive");
        if (dim_cap < 1) throw InvalidConfig("dim_cap must be positive");
        if (t_joint_max < 1) throw InvalidConfig("t_joint_max must be positive");
        if (bsd_rounds < 1) throw InvalidConfig("bsd_rounds must be positive");
        if (bsd_step <= 0.0 || bsd_step > 1.0) throw InvalidConfig("bsd_step out of (0, 1]");
    }
};

enum class LearnerKind { pure, mixed };

inline std::size_t choose_sample_count(LearnerKind kind, std::size_t class_size,
                                       const LearnerConfig& cfg) {
    if (class_size < 1) throw InvalidParams("class_size must be >= 1");
    double logc = std::log2(static_cast<double>(class_size));
    double logd = std::log2(1.0 / cfg.delta);
    double t;
    if (kind == LearnerKind::pure) {
        t = cfg.k_pure * (logc + logd) / (cfg.epsilon * cfg.epsilon);
    } else {
        t = cfg.k_mixed * logc * logc * (logc + logd) / (cfg.epsilon * cfg.epsilon);
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t)));
}

struct PartitionResult {
    std::vector<std::size_t> s_yes;
    std::vector<std::size_t> s_unknown;
    std::vector<std::size_t> s_no;
    bool flag_extreme = false;
    std::size_t c_c = 0;
    double gamma = 0.0;
    int i_star = 0;
};

// Partition sub-algorithm over a pseudometric on the remaining concepts.
// Indices in the result refer to rows of the distance matrix.
inline PartitionResult partition(const RealMatrix& distances, double epsilon,
                                 double gamma_divisor, Rng& rng) {
    std::size_t n = static_cast<std::size_t>(distances.rows());
    if (n < 1 || distances.rows() != distances.cols())
        throw InvalidParams("partition needs a square non-empty distance matrix");
    double logc = std::max(1.0, std::log2(static_cast<double>(n)));
    double gamma = epsilon / (gamma_divisor * logc);

    PartitionResult res;
    res.gamma = gamma;
    std::vector<std::size_t> s_no(n);
    for (std::size_t i = 0; i < n; ++i) s_no[i] = i;
    std::vector<std::size_t> s_yes, s_unknown;
    double third = static_cast<double>(n) / 3.0;
    std::size_t bins = static_cast<std::size_t>(std::ceil(1.0 / gamma)) + 1;

    while (static_cast<double>(s_yes.size() + s_unknown.size()) <= third) {
        std::size_t cc = s_no[rng.uniform_index(s_no.size())];
        std::vector<std::size_t> b(bins + 1, 0);
        for (std::size_t c : s_no) {
            double dist = distances(cc, c);
            auto m = static_cast<std::size_t>(std::floor(dist / gamma));  // bin index m+1
            if (m + 1 <= bins) ++b[m + 1];
        }
        int i_star = -1;
        std::size_t prefix = 0;  // sum of b_1 .. b_{i-1}
        for (std::size_t i = 2; i <= bins; ++i) {
            prefix += b[i - 1];
            if (b[i] < 2 * prefix) {
                i_star = static_cast<int>(i);
                break;
            }
        }
        if (i_star < 0)
            throw InternalInvariantViolation("partition: no i* found; distances are not a pseudometric?");
        std::size_t head = prefix + b[i_star];  // b_1 + ... + b_{i*}
        res.c_c = cc;
        res.i_star = i_star;
        double ball = (i_star - 1) * gamma;
        double shell = i_star * gamma;

        if (static_cast<double>(head) > third) {
            // extreme case: restart from the full set and add the cluster once
            res.flag_extreme = true;
            s_no.resize(n);
            for (std::size_t i = 0; i < n; ++i) s_no[i] = i;
            s_yes.clear();
            s_unknown.clear();
            std::vector<std::size_t> keep;
            for (std::size_t c : s_no) {
                double dist = distances(cc, c);
                if (dist < ball) s_yes.push_back(c);
                else if (dist < shell) s_unknown.push_back(c);
                else keep.push_back(c);
            }
            s_no = std::move(keep);
            break;
        }
        std::vector<std::size_t> keep;
        for (std::size_t c : s_no) {
            double dist = distances(cc, c);
            if (dist < ball) s_yes.push_back(c);
            else if (dist < shell) s_unknown.push_back(c);
            else keep.push_back(c);
        }
        s_no = std::move(keep);
    }
    res.s_yes = std::move(s_yes);
    res.s_unknown = std::move(s_unknown);
    res.s_no = std::move(s_no);
    std::sort(res.s_yes.begin(), res.s_yes.end());
    std::sort(res.s_unknown.begin(), res.s_unknown.end());
    std::sort(res.s_no.begin(), res.s_no.end());
    return res;
}

namespace detail {

inline bool output_is_pure(const DensityMatrix& rho) {
    return herm_eigenvalues(rho.mat()).maxCoeff() >= 1.0 - 1e-8;
}

}  // namespace detail

struct LearnStats {
    std::size_t samples = 0;
    int loops = 0;
};

// Algorithm: fresh Haar basis per sample, then log-likelihood argmax over the
// class. Ties break to the lowest concept index.
inline std::size_t learn_pure(SampleOracle& oracle, const ConceptClass& c,
                              const LearnerConfig& cfg, Rng& rng,
                              LearnStats* stats = nullptr) {
    cfg.validate();
    for (std::size_t i = 0; i < c.size(); ++i)
        for (const auto& out : c[i].outputs())
            if (!detail::output_is_pure(out)) throw NotPureClass();
    if (c.size() == 1) return 0;

    std::size_t t = choose_sample_count(LearnerKind::pure, c.size(), cfg);
    std::vector<double> loglik(c.size(), 0.0);
    auto handles = oracle.draw(t);
    for (const auto& h : handles) {
        Povm basis = haar_basis(c.out_dim(), rng);
        std::size_t outcome = oracle.measure({h}, basis);
        for (std::size_t i = 0; i < c.size(); ++i) {
            double p = (basis.effect(outcome) * c[i].output(h.x()).mat()).trace().real();
            loglik[i] += std::log(std::max(p, 0.0) + LOG_FLOOR);
        }
    }
    if (stats) {
        stats->samples = t;
        stats->loops = 1;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (loglik[i] > loglik[best]) best = i;
    return best;
}

// Mixed-output learner: repeatedly draw fresh samples, partition the surviving
// concepts, solve the induced BSD on tensor-product states, and prune.
inline std::size_t learn_mixed(SampleOracle& oracle, const ConceptClass& c,
                               const LearnerConfig& cfg, Rng& rng,
                               LearnStats* stats = nullptr) {
    cfg.validate();
    if (stats) *stats = LearnStats{};
    if (c.size() == 1) return 0;

    Eigen::Index d2 = c.out_dim();
    // samples measured jointly per loop: the formula count clamped so that
    // d2^T stays within both dim_cap and the desk-scale joint cap
    std::size_t t_formula = choose_sample_count(LearnerKind::mixed, c.size(), cfg);
    std::size_t t = std::min<std::size_t>(t_formula, cfg.t_joint_max);
    if (d2 > 1) {
        long long joint = 1;
        std::size_t t_cap = 0;
        while (t_cap < t && joint * d2 <= cfg.dim_cap) {
            joint *= d2;
            ++t_cap;
        }
        if (t_cap == 0) throw DimCapExceeded(d2, cfg.dim_cap);
        t = t_cap;
    }

    std::vector<std::size_t> c_r(c.size());
    for (std::size_t i = 0; i < c_r.size(); ++i) c_r[i] = i;
    int max_loops =
        static_cast<int>(std::ceil(std::log(static_cast<double>(c.size())) / std::log(9.0 / 8.0))) + 1;

    for (int loop = 0; loop < max_loops; ++loop) {
        if (c_r.size() == 1) return c_r[0];
        if (stats) stats->loops = loop + 1;

        auto handles = oracle.draw(t);
        if (stats) stats->samples += t;

        // empirical concept distances over the drawn inputs; a pseudometric that
        // concentrates to the true D-average distance
        std::size_t m = c_r.size();
        RealMatrix dist = RealMatrix::Zero(m, m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                double sum = 0.0;
                for (const auto& h : handles)
                    sum += trace_distance(c[c_r[a]].output(h.x()), c[c_r[b]].output(h.x()));
                dist(a, b) = dist(b, a) = sum / static_cast<double>(handles.size());
            }

        PartitionResult part = partition(dist, cfg.epsilon, cfg.gamma_divisor, rng);

        if (part.flag_extreme && part.s_no.empty()) {
            // BSD is undefined with an empty side; the cluster center is the answer
            return c_r[part.c_c];
        }

        // amplified states: tensor product of outputs over the drawn inputs
        auto amplified = [&](std::size_t local) {
            ComplexMatrix st = c[c_r[local]].output(handles[0].x()).mat();
            for (std::size_t j = 1; j < handles.size(); ++j)
                st = kron(st, c[c_r[local]].output(handles[j].x()).mat());
            return DensityMatrix::trusted(std::move(st));
        };
        std::vector<DensityMatrix> yes_states, no_states;
        yes_states.reserve(part.s_yes.size());
        no_states.reserve(part.s_no.size());
        for (std::size_t i : part.s_yes) yes_states.push_back(amplified(i));
        for (std::size_t j : part.s_no) no_states.push_back(amplified(j));

        // cross fidelity from the small per-sample factors (multiplicativity)
        double eta = 0.0;
        for (std::size_t i : part.s_yes)
            for (std::size_t j : part.s_no) {
                double f = 1.0;
                for (const auto& h : handles)
                    f *= fidelity(c[c_r[i]].output(h.x()), c[c_r[j]].output(h.x()));
                eta = std::max(eta, f);
            }
        int cap_n = static_cast<int>(std::max(yes_states.size(), no_states.size()));
        BsdInstance inst = BsdInstance::with_known_fidelity(std::move(yes_states),
                                                            std::move(no_states), eta, cap_n);
        BinaryMeasurement meas = minimax_bsd(inst, cfg.bsd_rounds, cfg.bsd_step);
        std::size_t outcome = oracle.measure(handles, meas.as_povm());  // 0 = yes, 1 = no

        if (outcome == 0 && part.flag_extreme) return c_r[part.c_c];
        const std::vector<std::size_t>& removed = (outcome == 0) ? part.s_no : part.s_yes;
        std::set<std::size_t> drop(removed.begin(), removed.end());
        std::vector<std::size_t> next;
        next.reserve(c_r.size() - drop.size());
        for (std::size_t local = 0; local < c_r.size(); ++local)
            if (!drop.count(local)) next.push_back(c_r[local]);
        c_r = std::move(next);
    }
    // each non-terminating loop removes at least |C_r|/9 concepts, so this is
    // unreachable for a correct partition
    throw InternalInvariantViolation("learn_mixed exceeded the guaranteed loop bound");
}

// Approximate state discrimination: wrap each candidate state as a constant
// concept and delegate to the matching learner.
inline std::size_t approx_discriminate(SampleOracle& oracle, const std::vector<DensityMatrix>& s,
                                       const LearnerConfig& cfg, Rng& rng,
                                       LearnStats* stats = nullptr) {
    if (s.empty()) throw EmptySet("approx_discriminate on empty set");
    std::vector<ChannelConcept> concepts;
    concepts.reserve(s.size());
    for (const auto& st : s) concepts.push_back(ChannelConcept::constant(1, st));
    ConceptClass cls(std::move(concepts));
    bool all_pure = true;
    for (const auto& st : s)
        if (!detail::output_is_pure(st)) all_pure = false;
    if (all_pure) return learn_pure(oracle, cls, cfg, rng, stats);
    return learn_mixed(oracle, cls, cfg, rng, stats);
}

// Builds the constant-output class an ASD oracle must be constructed over.
inline ConceptClass asd_class(const std::vector<DensityMatrix>& s) {
    std::vector<ChannelConcept> concepts;
    concepts.reserve(s.size());
    for (const auto& st : s) concepts.push_back(ChannelConcept::constant(1, st));
    return ConceptClass(std::move(concepts));
}

}  // namespace qpac
