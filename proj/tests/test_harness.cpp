#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "qpac/qpac.hpp"

using namespace qpac;

TEST_CASE("gen_class random_pure produces pure outputs of the right shape") {
    Rng rng(1);
    GeneratedClass g = gen_class("random_pure", GenParams{.n = 5, .d1 = 3, .d2 = 4}, rng);
    CHECK(g.concepts.size() == 5);
    CHECK(g.concepts.in_dim() == 3);
    CHECK(g.concepts.out_dim() == 4);
    for (std::size_t i = 0; i < g.concepts.size(); ++i)
        for (const auto& out : g.concepts[i].outputs())
            CHECK(herm_eigenvalues(out.mat()).maxCoeff() == Catch::Approx(1.0).margin(1e-9));
    CHECK(g.inputs.weights[0] == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("gen_class random_mixed respects the rank parameter") {
    Rng rng(2);
    GeneratedClass g =
        gen_class("random_mixed", GenParams{.n = 2, .d1 = 1, .d2 = 6, .rank = 2}, rng);
    for (std::size_t i = 0; i < g.concepts.size(); ++i) {
        RealVector lam = herm_eigenvalues(g.concepts[i].output(0).mat());
        int positive = 0;
        for (Eigen::Index k = 0; k < lam.size(); ++k)
            if (lam[k] > 1e-9) ++positive;
        CHECK(positive == 2);
    }
}

TEST_CASE("gen_class string spaces neighbors by the requested step") {
    Rng rng(3);
    GenParams p;
    p.n = 6;
    p.d2 = 2;
    p.step = 0.1;
    GeneratedClass g = gen_class("string", p, rng);
    for (std::size_t i = 0; i + 1 < g.concepts.size(); ++i)
        CHECK(concept_distance(g.concepts[i], g.concepts[i + 1], g.inputs) ==
              Catch::Approx(0.1).margin(1e-9));
    // endpoints drift much further apart than one step
    CHECK(concept_distance(g.concepts[0], g.concepts[5], g.inputs) > 0.4);
}

TEST_CASE("gen_class clustered keeps cluster members close") {
    Rng rng(4);
    GenParams p;
    p.n = 8;
    p.d2 = 3;
    p.clusters = 2;
    p.spread = 0.02;
    GeneratedClass g = gen_class("clustered", p, rng);
    InputDistribution u = g.inputs;
    // members i and i+2 share a cluster; i and i+1 do not
    double within = concept_distance(g.concepts[0], g.concepts[2], u);
    double across = concept_distance(g.concepts[0], g.concepts[1], u);
    CHECK(within < 0.05);
    CHECK(across > within);
}

TEST_CASE("gen_class rejects bad parameters") {
    Rng rng(5);
    CHECK_THROWS_AS(gen_class("random_pure", GenParams{.n = 0}, rng), InvalidParams);
    CHECK_THROWS_AS(gen_class("no_such_kind", GenParams{}, rng), InvalidParams);
    CHECK_THROWS_AS(gen_class("string", GenParams{.d2 = 1}, rng), InvalidParams);
    CHECK_THROWS_AS(gen_class("string", GenParams{.step = 1.5}, rng), InvalidParams);
    CHECK_THROWS_AS(gen_class("clustered", GenParams{.n = 2, .clusters = 5}, rng), InvalidParams);
    CHECK_THROWS_AS(gen_class("constant_set", GenParams{}, rng), InvalidParams);
}

TEST_CASE("concept class JSON round trip") {
    Rng rng(6);
    GeneratedClass g = gen_class("random_mixed", GenParams{.n = 3, .d1 = 2, .d2 = 3}, rng);
    json j = class_to_json(g.concepts);
    CHECK(j.at("d1") == 2);
    CHECK(j.at("d2") == 3);
    ConceptClass back = class_from_json(j);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (int x = 0; x < 2; ++x)
            CHECK((back[i].output(x).mat() - g.concepts[i].output(x).mat())
                      .cwiseAbs()
                      .maxCoeff() < 1e-15);

    const std::string path = "roundtrip_class.json";
    save_class(g.concepts, path);
    ConceptClass loaded = load_class(path);
    CHECK(loaded.size() == 3);
    std::remove(path.c_str());
}

TEST_CASE("class_from_json rejects malformed input") {
    CHECK_THROWS_AS(class_from_json(json{{"d1", 1}}), ParseError);
    CHECK_THROWS_AS(class_from_json(json{{"d1", 1}, {"d2", 2}, {"concepts", json::array()}}),
                    ParseError);
    // entry that is not an [re, im] pair
    json j = json::parse(R"({"d1":1,"d2":1,"concepts":[[[[1.0]]]]})");
    CHECK_THROWS_AS(class_from_json(j), ParseError);
    // valid shape, invalid density matrix (trace 2)
    json j2 = json::parse(R"({"d1":1,"d2":1,"concepts":[[[[[2.0,0.0]]]]]})");
    CHECK_THROWS_AS(class_from_json(j2), InvariantViolation);
    CHECK_THROWS_AS(load_class("/nonexistent/path.json"), ParseError);
}

TEST_CASE("run_experiment is reproducible and scores against the truth") {
    ExperimentSpec spec;
    spec.learner = "pure";
    spec.generator = "random_pure";
    spec.gen.n = 4;
    spec.gen.d2 = 2;
    spec.trials = 10;
    spec.seed = 77;
    TrialReport a = run_experiment(spec);
    TrialReport b = run_experiment(spec);
    REQUIRE(a.records.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(a.records[i].target == b.records[i].target);
        CHECK(a.records[i].hypothesis == b.records[i].hypothesis);
        CHECK(a.records[i].distance == b.records[i].distance);
        CHECK(a.records[i].samples == b.records[i].samples);
        CHECK(a.records[i].distance >= 0.0);
    }
    CHECK(a.success_rate == b.success_rate);
    CHECK(a.success_rate >= 0.5);  // random pure classes are easy at these sizes

    // different seed changes the record stream
    spec.seed = 78;
    TrialReport c = run_experiment(spec);
    bool any_diff = false;
    for (std::size_t i = 0; i < 10; ++i)
        if (a.records[i].target != c.records[i].target ||
            a.records[i].hypothesis != c.records[i].hypothesis)
            any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("TrialReport CSV uses the documented header") {
    ExperimentSpec spec;
    spec.learner = "pure";
    spec.gen.n = 2;
    spec.trials = 2;
    TrialReport rep = run_experiment(spec);
    std::string csv = rep.to_csv();
    CHECK(csv.rfind("trial,target,hypothesis,distance,samples,loops,ms\n", 0) == 0);
    // one line per record plus the header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("defaults save/load round trip") {
    CalibrationResult cal;
    cal.k_pure = 4.0;
    cal.k_mixed = 2.0;
    const std::string path = "defaults_roundtrip.json";
    save_defaults(cal, path);
    LearnerConfig cfg;
    load_defaults(cfg, path);
    CHECK(cfg.k_pure == 4.0);
    CHECK(cfg.k_mixed == 2.0);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_defaults(cfg, "/nonexistent/defaults.json"), ParseError);
}

TEST_CASE("fidelity-laws verification suite") {
    Rng rng(9);
    FidelityLawsReport rep = verify_fidelity_laws(300, 6, rng);
    INFO("fvdg " << rep.max_fvdg_violation << " mult " << rep.max_mult_violation);
    CHECK(rep.pass);
}

TEST_CASE("measurement-constant estimate stays bounded away from zero") {
    Rng rng(10);
    SenEstimate est = verify_sen({4, 16}, 150, rng);
    REQUIRE(est.p5.size() == 2);
    CHECK(est.p5[0] >= 0.1);
    CHECK(est.p5[1] >= 0.1);
    CHECK(est.pass);
    CHECK_THROWS_AS(verify_sen({4}, 50, rng), InvalidParams);
}

TEST_CASE("birthday demo scales like the square root of the support") {
    Rng rng(11);
    BirthdayReport rep = birthday_demo({100, 400, 1600}, 500, rng);
    INFO("ratio " << rep.ratio);
    CHECK(rep.ratio >= 2.5);
    CHECK(rep.ratio <= 6.5);
    CHECK(rep.pass);
    // the narrow-support family collides fast at every dimension
    for (std::size_t i = 0; i + 1 < rep.median_dense.size(); ++i)
        CHECK(rep.median_dense[i + 1] <= 3.0 * rep.median_dense[i]);
}

TEST_CASE("run_experiment validates its spec") {
    ExperimentSpec spec;
    spec.trials = 0;
    CHECK_THROWS_AS(run_experiment(spec), InvalidParams);
    spec.trials = 1;
    spec.learner = "bogus";
    TrialReport rep = run_experiment(spec);
    CHECK(rep.records[0].hypothesis == -1);  // per-trial errors are recorded, not thrown
    CHECK(!rep.records[0].error.empty());
}
