#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qpac/discrimination.hpp"
#include "qpac/verify.hpp"

using namespace qpac;

namespace {

DensityMatrix basis_state(Eigen::Index d, Eigen::Index k) {
    ComplexVector v = ComplexVector::Zero(d);
    v[k] = 1.0;
    return DensityMatrix::pure(v);
}

DensityMatrix plus_state() {
    ComplexVector v(2);
    v << 1.0, 1.0;
    return DensityMatrix::pure(v);
}

}  // namespace

TEST_CASE("pgm_build produces a valid POVM") {
    Rng rng(3);
    for (int it = 0; it < 20; ++it) {
        std::size_t n = 1 + rng.uniform_index(5);
        Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));
        std::vector<DensityMatrix> states;
        for (std::size_t i = 0; i < n; ++i) states.push_back(random_state(d, rng));
        Povm pgm = pgm_build(WeightedStateSet(states, random_priors(n, rng)));
        CHECK(pgm.size() == n);
        CHECK_NOTHROW(Povm(d, pgm.effects()));  // re-validate with the checked ctor
    }
}

TEST_CASE("pgm handles rank-deficient ensembles (off-support residual)") {
    // two pure states in dim 4 span only a 2-dim subspace
    std::vector<DensityMatrix> states{basis_state(4, 0), basis_state(4, 1)};
    Povm pgm = pgm_build(WeightedStateSet(states, ProbVector::uniform(2)));
    CHECK_NOTHROW(Povm(4, pgm.effects()));
    RealMatrix conf = pgm_confusion(WeightedStateSet(states, ProbVector::uniform(2)));
    CHECK(conf(0, 0) == Catch::Approx(1.0).margin(1e-9));
    CHECK(conf(1, 1) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("pgm two-state closed form") {
    // equal priors on pure states: average success = (1 + sqrt(1 - |<a|b>|^2)) / 2
    std::vector<DensityMatrix> states{basis_state(2, 0), plus_state()};
    WeightedStateSet w(states, ProbVector::uniform(2));
    RealMatrix conf = pgm_confusion(w);
    double success = 0.5 * (conf(0, 0) + conf(1, 1));
    double overlap2 = 0.5;  // |<0|+>|^2
    CHECK(success == Catch::Approx(0.5 * (1.0 + std::sqrt(1.0 - overlap2))).margin(1e-9));
    CHECK(success == Catch::Approx(0.8535533906).margin(1e-9));
}

TEST_CASE("pgm single state is the trivial measurement") {
    WeightedStateSet w({DensityMatrix::maximally_mixed(3)}, ProbVector::uniform(1));
    RealMatrix conf = pgm_confusion(w);
    CHECK(conf(0, 0) == Catch::Approx(1.0));
}

TEST_CASE("helstrom_binary achieves the optimal binary error") {
    Rng rng(7);
    for (int it = 0; it < 50; ++it) {
        Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));
        DensityMatrix a = random_state(d, rng), b = random_state(d, rng);
        BinaryMeasurement m = helstrom_binary((0.5 * a.mat()).eval(), (0.5 * b.mat()).eval());
        double err = 0.5 * (m.e_no * a.mat()).trace().real() +
                     0.5 * (m.e_yes * b.mat()).trace().real();
        double optimal = 0.5 * (1.0 - trace_distance(a, b));
        CHECK(err == Catch::Approx(optimal).margin(1e-8));
        CHECK_NOTHROW(Povm(d, {m.e_yes, m.e_no}));
    }
    CHECK_THROWS_AS(helstrom_binary(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)),
                    DimMismatch);
}

TEST_CASE("BsdInstance validates the eta promise and size bound") {
    std::vector<DensityMatrix> yes{basis_state(2, 0)};
    std::vector<DensityMatrix> no{basis_state(2, 1)};
    CHECK_NOTHROW(BsdInstance(yes, no, 0.0, 1));
    CHECK_THROWS_AS(BsdInstance(yes, {plus_state()}, 0.1, 1), InvariantViolation);
    CHECK_THROWS_AS(BsdInstance(yes, no, 0.0, 0), InvariantViolation);
    CHECK_THROWS_AS(BsdInstance({}, no, 0.0, 1), EmptySet);
}

TEST_CASE("grouped PGM binary measurement satisfies the weighted error bound") {
    Rng rng(11);
    for (int it = 0; it < 100; ++it) {
        Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));
        std::size_t s = 1 + rng.uniform_index(3), t = 1 + rng.uniform_index(3);
        std::vector<DensityMatrix> yes, no;
        for (std::size_t i = 0; i < s; ++i) yes.push_back(random_state(d, rng));
        for (std::size_t j = 0; j < t; ++j) no.push_back(random_state(d, rng));
        BsdInstance inst = BsdInstance::with_known_fidelity(yes, no, 1.0,
                                                            static_cast<int>(std::max(s, t)));
        ProbVector priors = random_priors(s + t, rng);
        BinaryMeasurement m = grouped_pgm_binary(inst, priors);
        double lhs = 0.0;
        for (std::size_t i = 0; i < s; ++i)
            lhs += priors[i] * (m.e_no * yes[i].mat()).trace().real();
        for (std::size_t j = 0; j < t; ++j)
            lhs += priors[s + j] * (m.e_yes * no[j].mat()).trace().real();
        CHECK(lhs <= bsd_error_bound(inst) + 1e-8);
    }
}

TEST_CASE("minimax_bsd worst-case error meets the regret-augmented bound") {
    Rng rng(13);
    const int rounds = 400;
    for (int it = 0; it < 10; ++it) {
        Eigen::Index d = 4;
        std::size_t s = 1 + rng.uniform_index(3), t = 1 + rng.uniform_index(3);
        std::vector<DensityMatrix> yes, no;
        // near-orthogonal supports keep the pairwise fidelities small
        for (std::size_t i = 0; i < s; ++i) {
            ComplexMatrix m = 0.98 * basis_state(d, static_cast<Eigen::Index>(i % 2)).mat() +
                              0.02 * DensityMatrix::maximally_mixed(d).mat();
            yes.push_back(DensityMatrix::trusted(std::move(m)));
        }
        for (std::size_t j = 0; j < t; ++j) {
            ComplexMatrix m = 0.98 * basis_state(d, 2 + static_cast<Eigen::Index>(j % 2)).mat() +
                              0.02 * DensityMatrix::maximally_mixed(d).mat();
            no.push_back(DensityMatrix::trusted(std::move(m)));
        }
        int cap = static_cast<int>(std::max(s, t));
        BsdInstance inst(yes, no, set_fidelity(yes, no) + 1e-12, cap);
        BinaryMeasurement m = minimax_bsd(inst, rounds, 1.0);
        double budget = bsd_error_bound(inst) +
                        std::sqrt(std::log(2.0 * cap) / static_cast<double>(rounds));
        CHECK(bsd_worst_case_error(inst, m) <= budget + 1e-9);
        CHECK_NOTHROW(Povm(d, {m.e_yes, m.e_no}));
    }
    BsdInstance inst({basis_state(2, 0)}, {basis_state(2, 1)}, 0.0, 1);
    CHECK_THROWS_AS(minimax_bsd(inst, 0, 1.0), InvalidConfig);
    CHECK_THROWS_AS(minimax_bsd(inst, 10, 1.5), InvalidConfig);
}

TEST_CASE("minimax_bsd on orthogonal states is near-perfect") {
    BsdInstance inst({basis_state(2, 0)}, {basis_state(2, 1)}, 0.0, 1);
    BinaryMeasurement m = minimax_bsd(inst, 50, 1.0);
    CHECK(bsd_worst_case_error(inst, m) < 1e-9);
}

TEST_CASE("block lemma equality on the all-ones 2x2 matrix") {
    ComplexMatrix ones = ComplexMatrix::Ones(2, 2);
    auto [lhs, rhs] = block_lemma_check(ones, 1);
    CHECK(lhs == Catch::Approx(1.0).margin(1e-12));
    CHECK(rhs == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("block lemma on random PSD matrices, all splits") {
    Rng rng(17);
    BlockLemmaReport rep = verify_block_lemma(100, 8, rng);
    INFO("max violation " << rep.max_violation);
    CHECK(rep.pass);
    CHECK_THROWS_AS(block_lemma_check(ComplexMatrix::Identity(3, 3), 0), InvalidParams);
    CHECK_THROWS_AS(block_lemma_check(ComplexMatrix::Identity(3, 3), 3), InvalidParams);
    ComplexMatrix neg = -ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(block_lemma_check(neg, 1), NotPsd);
}

TEST_CASE("grouped PGM bound verification suite on random instances") {
    Rng rng(19);
    PgmBoundReport rep = verify_pgm_bound(100, 6, 4, rng);
    INFO("max violation " << rep.max_violation);
    CHECK(rep.pass);
}
