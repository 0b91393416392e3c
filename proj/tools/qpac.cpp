// Command-line front end: class generation, learner experiments, calibration,
// verification suites, and the birthday demo. Exit codes: 0 success,
// 2 invariant/verification failure, 3 configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpac/qpac.hpp"

namespace {

constexpr int EXIT_VERIFY_FAIL = 2;
constexpr int EXIT_CONFIG = 3;

void emit(const qpac::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw qpac::Error("cannot open " + out_path + " for writing");
        f << j.dump(2) << "\n";
    }
}

void emit_report(const qpac::TrialReport& rep, const std::string& out_path,
                 const std::string& format) {
    if (format == "csv") {
        if (out_path.empty()) {
            std::cout << rep.to_csv();
        } else {
            std::ofstream f(out_path);
            if (!f) throw qpac::Error("cannot open " + out_path + " for writing");
            f << rep.to_csv();
        }
    } else {
        emit(rep.to_json(), out_path);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC learning of quantum channels: simulators and verification suites"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "json";
    long long dim_cap = qpac::DIM_CAP_DEFAULT;
    int trials = 200;
    app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--dim-cap", dim_cap, "joint-dimension cap for tensor products");
    app.add_option("--trials", trials, "trial / instance count");

    // shared generator and learner options
    std::string kind = "random_pure";
    qpac::GenParams gen;
    qpac::LearnerConfig cfg;
    std::string class_path, defaults_path;
    auto add_gen_opts = [&](CLI::App* cmd) {
        cmd->add_option("--kind", kind, "random_pure|random_mixed|string|clustered");
        cmd->add_option("--n", gen.n, "number of concepts");
        cmd->add_option("--d1", gen.d1, "input labels");
        cmd->add_option("--d2", gen.d2, "output dimension");
        cmd->add_option("--step", gen.step, "string generator: neighbor distance");
        cmd->add_option("--clusters", gen.clusters, "clustered generator: cluster count");
        cmd->add_option("--spread", gen.spread, "clustered generator: in-cluster spread");
        cmd->add_option("--rank", gen.rank, "mixed-state generator rank (0 = full)");
    };
    auto add_learn_opts = [&](CLI::App* cmd) {
        add_gen_opts(cmd);
        cmd->add_option("--epsilon", cfg.epsilon, "target accuracy");
        cmd->add_option("--delta", cfg.delta, "failure probability");
        cmd->add_option("--k-pure", cfg.k_pure, "pure sample-count multiplier");
        cmd->add_option("--k-mixed", cfg.k_mixed, "mixed sample-count multiplier");
        cmd->add_option("--t-joint-max", cfg.t_joint_max, "max jointly measured samples");
        cmd->add_option("--bsd-rounds", cfg.bsd_rounds, "minimax solver rounds");
        cmd->add_option("--defaults", defaults_path, "calibrated-constants file to load");
    };

    CLI::App* c_gen = app.add_subcommand("gen-class", "generate a concept class file");
    add_gen_opts(c_gen);

    CLI::App* c_pure = app.add_subcommand("run-pure", "run pure-output learner trials");
    add_learn_opts(c_pure);
    CLI::App* c_mixed = app.add_subcommand("run-mixed", "run mixed-output learner trials");
    add_learn_opts(c_mixed);
    CLI::App* c_asd = app.add_subcommand("run-asd", "run approximate state discrimination trials");
    add_learn_opts(c_asd);

    CLI::App* c_cal = app.add_subcommand("calibrate", "calibrate sample-count multipliers");
    std::vector<std::string> cal_kinds{"random_pure"};
    std::string cal_out = "qpac_defaults.json";
    c_cal->add_option("--kinds", cal_kinds, "random_pure and/or random_mixed");
    c_cal->add_option("--defaults-out", cal_out, "where to persist the constants");

    CLI::App* c_verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    c_verify->add_option("suite", suite, "pgm-bound|block-lemma|sen|fidelity-laws|partition")
        ->required();

    CLI::App* c_bday = app.add_subcommand("birthday-demo", "agnostic hard-instance collision scaling");
    std::vector<int> bday_dims{100, 400, 1600};
    c_bday->add_option("--dims", bday_dims, "dimensions (subset of 100/400/1600)");

    // let the global flags (--seed, --out, ...) appear after the subcommand
    for (CLI::App* sub : {c_gen, c_pure, c_mixed, c_asd, c_cal, c_verify, c_bday})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : EXIT_CONFIG;
    }

    try {
        cfg.dim_cap = dim_cap;
        qpac::Rng rng(seed);

        if (c_gen->parsed()) {
            qpac::GeneratedClass g = qpac::gen_class(kind, gen, rng);
            emit(qpac::class_to_json(g.concepts), out_path);
            return 0;
        }
        if (c_pure->parsed() || c_mixed->parsed() || c_asd->parsed()) {
            if (!defaults_path.empty()) qpac::load_defaults(cfg, defaults_path);
            qpac::ExperimentSpec spec;
            spec.learner = c_pure->parsed() ? "pure" : (c_mixed->parsed() ? "mixed" : "asd");
            spec.generator = kind;
            spec.gen = gen;
            spec.cfg = cfg;
            spec.trials = trials;
            spec.seed = seed;
            emit_report(qpac::run_experiment(spec), out_path, format);
            return 0;
        }
        if (c_cal->parsed()) {
            qpac::CalibrationResult cal =
                qpac::calibrate_constants(cal_kinds, std::max(trials, 300), seed, cal_out);
            emit(qpac::json{{"k_pure", cal.k_pure},
                            {"k_mixed", cal.k_mixed},
                            {"details", cal.details}},
                 out_path);
            return 0;
        }
        if (c_verify->parsed()) {
            qpac::json j;
            bool pass = false;
            if (suite == "pgm-bound") {
                auto rep = qpac::verify_pgm_bound(trials, 8, 6, rng);
                j = rep.to_json();
                pass = rep.pass;
            } else if (suite == "block-lemma") {
                auto rep = qpac::verify_block_lemma(trials, 12, rng);
                j = rep.to_json();
                pass = rep.pass;
            } else if (suite == "sen") {
                auto rep = qpac::verify_sen({4, 16, 64}, std::max(trials, 100), rng);
                j = rep.to_json();
                pass = rep.pass;
            } else if (suite == "fidelity-laws") {
                auto rep = qpac::verify_fidelity_laws(trials, 8, rng);
                j = rep.to_json();
                pass = rep.pass;
            } else if (suite == "partition") {
                auto rep = qpac::verify_partition(trials, 64, {0.05, 0.2, 0.5}, rng);
                j = rep.to_json();
                pass = rep.pass;
            } else {
                std::cerr << "unknown suite: " << suite << "\n";
                return EXIT_CONFIG;
            }
            emit(j, out_path);
            return pass ? 0 : EXIT_VERIFY_FAIL;
        }
        if (c_bday->parsed()) {
            auto rep = qpac::birthday_demo(bday_dims, std::max(trials, 1), rng);
            emit(rep.to_json(), out_path);
            return rep.pass ? 0 : EXIT_VERIFY_FAIL;
        }
    } catch (const qpac::InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const qpac::InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const qpac::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_VERIFY_FAIL;
    }
    return EXIT_CONFIG;
}
