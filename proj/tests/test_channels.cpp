#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "qpac/channels.hpp"
#include "qpac/generators.hpp"

using namespace qpac;

namespace {

DensityMatrix basis_state(Eigen::Index d, Eigen::Index k) {
    ComplexVector v = ComplexVector::Zero(d);
    v[k] = 1.0;
    return DensityMatrix::pure(v);
}

std::shared_ptr<const ConceptClass> two_constant_class() {
    std::vector<ChannelConcept> cs;
    cs.push_back(ChannelConcept::constant(1, basis_state(2, 0)));
    cs.push_back(ChannelConcept::constant(1, basis_state(2, 1)));
    return std::make_shared<const ConceptClass>(std::move(cs));
}

}  // namespace

TEST_CASE("ChannelConcept validation") {
    CHECK_THROWS_AS(ChannelConcept(2, {basis_state(2, 0)}), InvalidParams);
    CHECK_THROWS_AS(ChannelConcept(2, {basis_state(2, 0), basis_state(3, 0)}), DimMismatch);
    ChannelConcept c = ChannelConcept::constant(3, basis_state(2, 1));
    CHECK(c.in_dim() == 3);
    CHECK(c.out_dim() == 2);
    CHECK((c.output(0).mat() - c.output(2).mat()).norm() == 0.0);
}

TEST_CASE("ConceptClass validation") {
    CHECK_THROWS_AS(ConceptClass({}), EmptySet);
    std::vector<ChannelConcept> mixed_dims;
    mixed_dims.push_back(ChannelConcept::constant(1, basis_state(2, 0)));
    mixed_dims.push_back(ChannelConcept::constant(1, basis_state(3, 0)));
    CHECK_THROWS_AS(ConceptClass(std::move(mixed_dims)), DimMismatch);
}

TEST_CASE("concept_distance") {
    InputDistribution u1 = InputDistribution::uniform(1);
    ChannelConcept a = ChannelConcept::constant(1, basis_state(2, 0));
    ChannelConcept b = ChannelConcept::constant(1, basis_state(2, 1));
    CHECK(concept_distance(a, a, u1) == Catch::Approx(0.0));
    CHECK(concept_distance(a, b, u1) == Catch::Approx(1.0));

    // two inputs: equal on one, orthogonal on the other -> average 1/2
    ChannelConcept c(2, {basis_state(2, 0), basis_state(2, 0)});
    ChannelConcept d(2, {basis_state(2, 0), basis_state(2, 1)});
    CHECK(concept_distance(c, d, InputDistribution::uniform(2)) == Catch::Approx(0.5));

    // non-uniform weights
    InputDistribution w(ProbVector({0.25, 0.75}));
    CHECK(concept_distance(c, d, w) == Catch::Approx(0.75));

    CHECK_THROWS_AS(concept_distance(a, c, u1), DimMismatch);
}

TEST_CASE("distance_matrix is a symmetric pseudometric snapshot") {
    Rng rng(3);
    GeneratedClass g = gen_class("random_mixed", GenParams{.n = 5, .d1 = 2, .d2 = 3}, rng);
    RealMatrix m = distance_matrix(g.concepts, g.inputs);
    CHECK(m.rows() == 5);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.diagonal().cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 5; ++j)
            for (Eigen::Index k = 0; k < 5; ++k)
                CHECK(m(i, j) <= m(i, k) + m(k, j) + 1e-12);
}

TEST_CASE("set_fidelity") {
    std::vector<DensityMatrix> s1{basis_state(2, 0)};
    std::vector<DensityMatrix> s2{basis_state(2, 1)};
    CHECK(set_fidelity(s1, s2) == Catch::Approx(0.0).margin(1e-9));
    s2.push_back(basis_state(2, 0));
    CHECK(set_fidelity(s1, s2) == Catch::Approx(1.0).margin(1e-9));
    CHECK_THROWS_AS(set_fidelity({}, s2), EmptySet);
}

TEST_CASE("SampleOracle draw and consumption contract") {
    auto cls = two_constant_class();
    SampleOracle oracle(cls, 0, InputDistribution::uniform(1), 42);
    auto handles = oracle.draw(3);
    CHECK(oracle.samples_drawn() == 3);
    CHECK(handles[0].x() == 0);
    CHECK(handles[0].dim() == 2);

    Povm comp = Povm::computational(2);
    CHECK(oracle.measure({handles[0]}, comp) == 0);  // target outputs |0>
    CHECK_THROWS_AS(oracle.measure({handles[0]}, comp), HandleConsumed);

    // joint measurement consumes every handle involved
    Povm comp4 = Povm::computational(4);
    CHECK(oracle.measure({handles[1], handles[2]}, comp4) == 0);
    CHECK_THROWS_AS(oracle.measure({handles[1]}, comp), HandleConsumed);

    auto more = oracle.draw(1);
    CHECK_THROWS_AS(oracle.measure(more, comp4), DimMismatch);
    CHECK_THROWS_AS(oracle.measure({}, comp), EmptySet);
}

TEST_CASE("SampleOracle enforces the joint dimension cap") {
    auto cls = two_constant_class();
    SampleOracle oracle(cls, 0, InputDistribution::uniform(1), 7, /*dim_cap=*/4);
    auto handles = oracle.draw(3);
    Povm comp8 = Povm::computational(8);
    CHECK_THROWS_AS(oracle.measure(handles, comp8), DimCapExceeded);
}

TEST_CASE("SampleOracle input labels follow the input distribution") {
    std::vector<ChannelConcept> cs;
    cs.push_back(ChannelConcept(2, {basis_state(2, 0), basis_state(2, 1)}));
    auto cls = std::make_shared<const ConceptClass>(std::move(cs));

    SampleOracle point(cls, 0, InputDistribution(ProbVector::point_mass(2, 1)), 11);
    for (const auto& h : point.draw(50)) CHECK(h.x() == 1);

    SampleOracle fair(cls, 0, InputDistribution::uniform(2), 12);
    auto handles = fair.draw(20000);
    int ones = 0;
    for (const auto& h : handles) ones += h.x();
    double freq = ones / 20000.0;
    CHECK(freq > 0.48);
    CHECK(freq < 0.52);
    CHECK(fair.audit_draw_log().size() == 20000);
}

TEST_CASE("SampleOracle measurement statistics match the Born rule") {
    // target outputs |+>; computational measurement should be a fair coin
    ComplexVector plus(2);
    plus << 1.0, 1.0;
    std::vector<ChannelConcept> cs;
    cs.push_back(ChannelConcept::constant(1, DensityMatrix::pure(plus)));
    cs.push_back(ChannelConcept::constant(1, basis_state(2, 0)));
    auto cls = std::make_shared<const ConceptClass>(std::move(cs));
    SampleOracle oracle(cls, 0, InputDistribution::uniform(1), 13);
    Povm comp = Povm::computational(2);
    int zeros = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        auto h = oracle.draw(1);
        if (oracle.measure(h, comp) == 0) ++zeros;
    }
    double freq = static_cast<double>(zeros) / n;
    CHECK(freq > 0.48);
    CHECK(freq < 0.52);
}

TEST_CASE("SampleOracle constructor validation") {
    auto cls = two_constant_class();
    CHECK_THROWS_AS(SampleOracle(cls, 5, InputDistribution::uniform(1), 1), InvalidParams);
    CHECK_THROWS_AS(SampleOracle(cls, 0, InputDistribution::uniform(2), 1), DimMismatch);
}
