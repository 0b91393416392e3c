#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qpac/generators.hpp"
#include "qpac/io.hpp"
#include "qpac/learners.hpp"

namespace qpac {

struct ExperimentSpec {
    std::string learner = "pure";  // pure | mixed | asd
    std::string generator = "random_pure";
    GenParams gen;
    LearnerConfig cfg;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string out_path;  // empty = do not write

    void validate() const {
        if (trials < 1) throw InvalidParams("trials must be >= 1");
        cfg.validate();
    }

    json to_json() const {
        return json{{"learner", learner},
                    {"generator", generator},
                    {"n", gen.n},
                    {"d1", gen.d1},
                    {"d2", gen.d2},
                    {"step", gen.step},
                    {"clusters", gen.clusters},
                    {"spread", gen.spread},
                    {"rank", gen.rank},
                    {"epsilon", cfg.epsilon},
                    {"delta", cfg.delta},
                    {"k_pure", cfg.k_pure},
                    {"k_mixed", cfg.k_mixed},
                    {"gamma_divisor", cfg.gamma_divisor},
                    {"dim_cap", cfg.dim_cap},
                    {"t_joint_max", cfg.t_joint_max},
                    {"bsd_rounds", cfg.bsd_rounds},
                    {"trials", trials},
                    {"seed", seed}};
    }
};

struct TrialRecord {
    int trial = 0;
    int target = 0;
    int hypothesis = -1;  // -1 = learner error
    double distance = 1.0;
    std::size_t samples = 0;
    int loops = 0;
    double ms = 0.0;
    std::string error;
};

struct TrialReport {
    ExperimentSpec spec;
    std::vector<TrialRecord> records;
    double success_rate = 0.0;  // fraction with distance <= epsilon
    double mean_samples = 0.0;
    double half_width = 0.0;  // 1.96 * binomial standard error

    json to_json() const {
        json recs = json::array();
        for (const auto& r : records)
            recs.push_back(json{{"trial", r.trial},
                                {"target", r.target},
                                {"hypothesis", r.hypothesis},
                                {"distance", r.distance},
                                {"samples", r.samples},
                                {"loops", r.loops},
                                {"ms", r.ms},
                                {"error", r.error}});
        return json{{"spec", spec.to_json()},
                    {"records", std::move(recs)},
                    {"aggregates",
                     json{{"success_rate", success_rate},
                          {"mean_samples", mean_samples},
                          {"half_width", half_width}}}};
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "trial,target,hypothesis,distance,samples,loops,ms\n";
        for (const auto& r : records)
            os << r.trial << ',' << r.target << ',' << r.hypothesis << ',' << r.distance << ','
               << r.samples << ',' << r.loops << ',' << r.ms << '\n';
        return os.str();
    }
};

// Runs independent seeded trials. Success is scored by the true concept
// distance between target and hypothesis (the harness may read the oracle's
// secret); learner errors count as failures instead of aborting the batch.
inline TrialReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    TrialReport report;
    report.spec = spec;
    report.records.reserve(spec.trials);

    double total_samples = 0.0;
    int successes = 0;
    for (int trial = 0; trial < spec.trials; ++trial) {
        std::uint64_t trial_seed = splitmix64(spec.seed ^ static_cast<std::uint64_t>(trial));
        Rng rng(trial_seed);
        TrialRecord rec;
        rec.trial = trial;
        auto start = std::chrono::steady_clock::now();
        try {
            GeneratedClass gen = gen_class(spec.generator, spec.gen, rng);
            auto cls = std::make_shared<const ConceptClass>(std::move(gen.concepts));
            std::size_t target = rng.uniform_index(cls->size());
            rec.target = static_cast<int>(target);
            SampleOracle oracle(cls, target, gen.inputs, splitmix64(trial_seed), spec.cfg.dim_cap);
            LearnStats stats;
            std::size_t hyp;
            if (spec.learner == "pure") {
                hyp = learn_pure(oracle, *cls, spec.cfg, rng, &stats);
            } else if (spec.learner == "mixed") {
                hyp = learn_mixed(oracle, *cls, spec.cfg, rng, &stats);
            } else if (spec.learner == "asd") {
                // constant classes only; delegate on purity
                std::vector<DensityMatrix> states;
                for (std::size_t i = 0; i < cls->size(); ++i)
                    states.push_back((*cls)[i].output(0));
                hyp = approx_discriminate(oracle, states, spec.cfg, rng, &stats);
            } else {
                throw InvalidParams("unknown learner: " + spec.learner);
            }
            rec.hypothesis = static_cast<int>(hyp);
            rec.distance = concept_distance((*cls)[target], (*cls)[hyp], gen.inputs);
            rec.samples = stats.samples;
            rec.loops = stats.loops;
            if (rec.distance <= spec.cfg.epsilon) ++successes;
        } catch (const Error& e) {
            rec.error = e.what();
        }
        rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                           start)
                     .count();
        total_samples += static_cast<double>(rec.samples);
        report.records.push_back(std::move(rec));
    }
    report.success_rate = static_cast<double>(successes) / spec.trials;
    report.mean_samples = total_samples / spec.trials;
    report.half_width =
        1.96 * std::sqrt(report.success_rate * (1.0 - report.success_rate) / spec.trials);
    if (!spec.out_path.empty()) {
        std::ofstream f(spec.out_path);
        if (!f) throw Error("cannot open " + spec.out_path + " for writing");
        f << report.to_json().dump(2) << "\n";
    }
    return report;
}

struct CalibrationResult {
    double k_pure = 0.0;
    double k_mixed = 0.0;
    json details;
};

inline void save_defaults(const CalibrationResult& cal, const std::string& path) {
    json j = json::object();
    // a kind that was not calibrated stays at 0 and is not persisted
    if (cal.k_pure > 0.0) j["k_pure"] = cal.k_pure;
    if (cal.k_mixed > 0.0) j["k_mixed"] = cal.k_mixed;
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << j.dump(2) << "\n";
}

inline void load_defaults(LearnerConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    json j;
    f >> j;
    if (j.contains("k_pure")) cfg.k_pure = j.at("k_pure").get<double>();
    if (j.contains("k_mixed")) cfg.k_mixed = j.at("k_mixed").get<double>();
}

// Smallest multiplier in {1,2,4,8,16} meeting the 1 - delta target on every
// calibration class (|C| in {4,16}, d2 in {2,4}, epsilon 0.2, delta 0.1).
inline CalibrationResult calibrate_constants(const std::vector<std::string>& kinds,
                                             int trials_per_cell, std::uint64_t seed,
                                             const std::string& defaults_path = "") {
    if (kinds.empty()) throw InvalidParams("calibrate needs at least one kind");
    if (trials_per_cell < 1) throw InvalidParams("trials budget must be positive");
    CalibrationResult result;
    result.details = json::array();
    for (const std::string& kind : kinds) {
        if (kind != "random_pure" && kind != "random_mixed")
            throw InvalidParams("calibration kind must be random_pure or random_mixed");
        bool pure = (kind == "random_pure");
        double chosen = 0.0;
        for (double k : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            bool all_ok = true;
            for (int n : {4, 16}) {
                for (int d2 : {2, 4}) {
                    ExperimentSpec spec;
                    spec.learner = pure ? "pure" : "mixed";
                    spec.generator = kind;
                    spec.gen.n = n;
                    spec.gen.d1 = 2;
                    spec.gen.d2 = d2;
                    spec.cfg.epsilon = 0.2;
                    spec.cfg.delta = 0.1;
                    if (pure) spec.cfg.k_pure = k;
                    else spec.cfg.k_mixed = k;
                    spec.trials = trials_per_cell;
                    spec.seed = splitmix64(seed ^ (n * 131ULL + d2 * 17ULL +
                                                   static_cast<std::uint64_t>(k)));
                    TrialReport rep = run_experiment(spec);
                    result.details.push_back(json{{"kind", kind},
                                                  {"k", k},
                                                  {"n", n},
                                                  {"d2", d2},
                                                  {"success_rate", rep.success_rate}});
                    if (rep.success_rate < 1.0 - spec.cfg.delta) {
                        all_ok = false;
                        break;
                    }
                }
                if (!all_ok) break;
            }
            if (all_ok) {
                chosen = k;
                break;
            }
        }
        if (chosen == 0.0) throw CalibrationFailed("no grid value suffices for " + kind);
        if (pure) result.k_pure = chosen;
        else result.k_mixed = chosen;
    }
    if (!defaults_path.empty()) save_defaults(result, defaults_path);
    return result;
}

}  // namespace qpac
