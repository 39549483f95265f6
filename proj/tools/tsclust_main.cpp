// Command-line front end: generate / train / cluster / evaluate / weights /
// clique-demo. Exit codes: 0 success, 1 usage, 2 data or contract error,
// 3 capacity error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tsclust/experiments.hpp"
#include "tsclust/hardness.hpp"
#include "tsclust/hmm.hpp"
#include "tsclust/io.hpp"
#include "tsclust/mcmc.hpp"
#include "tsclust/spectral.hpp"
#include "tsclust/triangular.hpp"

namespace {

using namespace tsclust;

/// Flag combinations the parser cannot express declaratively; exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::pair<int, int> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("range must be 'first:last', got '" + text + "'");
    try {
        const int a = std::stoi(text.substr(0, colon));
        const int b = std::stoi(text.substr(colon + 1));
        if (a < 1 || b < a) throw UsageError("range must satisfy 1 <= first <= last");
        return {a, b};
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("range must be 'first:last', got '" + text + "'");
    }
}

struct SimilarityFlags {
    int window = 20;
    std::string norm = "l2";
    double scale_c = 1.0;
    double threshold_lambda = 0.0;
    double decay = 1.0;

    SimilarityConfig to_config() const {
        SimilarityConfig cfg;
        cfg.window = window;
        cfg.norm = norm == "l1" ? Norm::l1 : Norm::l2;
        cfg.scale_c = scale_c;
        cfg.threshold_lambda = threshold_lambda;
        cfg.decay = decay;
        cfg.validate();
        return cfg;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--window", window, "Trailing window length w")->check(CLI::Range(2, 1 << 20));
        cmd->add_option("--norm", norm, "Window distance norm")
            ->check(CLI::IsMember({"l1", "l2"}));
        cmd->add_option("--scale-c", scale_c, "Similarity scale c in exp(-c d)");
        cmd->add_option("--threshold-lambda", threshold_lambda,
                        "Zero similarities below this threshold");
        cmd->add_option("--decay", decay, "Geometric decay factor (1 = off)");
    }
};

int resolved_c_max(int c_max_flag, int n) {
    if (c_max_flag > 0) return c_max_flag;
    return std::max(2, n - 1);  // c = n always aligns perfectly, so exclude it
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
    SynthConfig cfg;
    std::string out_panel, out_truth;
};

void run_generate(const GenerateArgs& args) {
    const SynthResult result = gen_synthetic(args.cfg);
    write_panel_csv(args.out_panel, result.panel);
    write_timeline_csv(args.out_truth, result.truth);
    std::cout << "generated " << args.cfg.steps << " steps x " << args.cfg.n << " series (seed "
              << args.cfg.seed << ") -> " << args.out_panel << ", " << args.out_truth << "\n";
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string panel_path;
    std::string labels_mode = "truth";
    std::string labels_file;
    std::optional<std::string> train_range;
    std::string rates = "conditional";
    double alpha = 1.0;
    bool train_hmm = false;
    std::string out_params;
    std::string out_hmm_prefix = "hmm";
    SimilarityFlags sim;
    int c_min = 2, c_max = 0;
    std::uint64_t seed = 1;
};

TrainingSet build_training_set(const SeriesPanel& panel, const SimilarityConfig& cfg,
                               const TrainArgs& args, int first, int last) {
    TrainingSet data;
    std::optional<ClusterTimeline> truth;
    std::map<int, Partition> truth_at;
    if (args.labels_mode == "truth") {
        if (args.labels_file.empty())
            throw ContractError("train: --labels-file required with --labels truth");
        truth = read_timeline_csv(args.labels_file);
        for (const auto& [k, p] : truth->steps()) truth_at.emplace(k, p);
    }
    DescentConfig gd;
    gd.seed = args.seed;
    for (int k = first; k <= last; ++k) {
        data.sims.push_back(similarity_at(panel, k, cfg));
        if (args.labels_mode == "truth") {
            const auto it = truth_at.find(k);
            if (it == truth_at.end())
                throw ContractError("train: labels file has no entry for step " +
                                    std::to_string(k));
            data.labels.push_back(it->second);
        } else {
            data.labels.push_back(
                dynamic_spectral(data.sims.back(), args.c_min,
                                 resolved_c_max(args.c_max, panel.n_series()), gd)
                    .partition);
        }
    }
    data.validate();
    return data;
}

void run_train(const TrainArgs& args) {
    const auto range = args.train_range ? std::optional(parse_range(*args.train_range))
                                        : std::nullopt;
    const SeriesPanel panel = read_panel_csv(args.panel_path);
    const SimilarityConfig cfg = args.sim.to_config();
    int first = cfg.window;
    int last = std::max(cfg.window, panel.n_steps() / 2);  // first half by default
    if (range) {
        first = std::max(range->first, cfg.window);
        last = range->second;
    }
    if (last > panel.n_steps() || first > last)
        throw ContractError("train: range outside the panel's admissible steps");

    const TrainingSet data = build_training_set(panel, cfg, args, first, last);
    ExpTrainConfig train_cfg;
    train_cfg.rate_mode = args.rates == "pooled" ? RateMode::pooled : RateMode::conditional;
    const ExpModelParams params = train_exponential(data, train_cfg);
    write_params_csv(args.out_params, params);
    std::cout << "trained on steps " << first << ".." << last << " (" << data.size()
              << " observations) -> " << args.out_params << "\n";

    if (args.train_hmm) {
        const ClusterHmm hmm = hmm_train(data, args.alpha);
        write_hmm(args.out_hmm_prefix, hmm);
        std::cout << "hmm (" << hmm.state_count() << " states, alpha "
                  << format_double(args.alpha) << ") -> " << args.out_hmm_prefix << "_*.csv\n";
    }
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

struct ClusterArgs {
    std::string panel_path;
    std::string method = "spectral";
    std::string params_path;
    std::string hmm_prefix;
    std::optional<std::string> test_range;
    std::string out_path;
    std::string dump_similarity_dir;
    std::string dump_trace_dir;
    SimilarityFlags sim;
    int c_min = 2, c_max = 0;
    std::uint64_t seed = 1;
    std::uint64_t steps = 100000, burn_in = 10000, thin = 10;
    std::string estimator = "mode";
};

void run_cluster(const ClusterArgs& args) {
    const bool needs_params = args.method == "exponential" ||
                              args.method == "triangular-exact" ||
                              args.method == "triangular-mcmc";
    if (needs_params && args.params_path.empty())
        throw UsageError("cluster: --params required for method " + args.method);
    if (args.method == "hmm" && args.hmm_prefix.empty())
        throw UsageError("cluster: --hmm-prefix required for method hmm");
    if (!args.dump_trace_dir.empty() && args.method != "triangular-mcmc")
        throw UsageError("cluster: --dump-trace applies to triangular-mcmc only");
    const auto range = args.test_range ? std::optional(parse_range(*args.test_range))
                                       : std::nullopt;

    const SeriesPanel panel = read_panel_csv(args.panel_path);
    const SimilarityConfig cfg = args.sim.to_config();
    int first = cfg.window, last = panel.n_steps();
    if (range) {
        first = std::max(range->first, cfg.window);
        last = range->second;
    }
    if (last > panel.n_steps() || first > last)
        throw ContractError("cluster: range outside the panel's admissible steps");

    std::optional<ExpModelParams> params;
    if (needs_params) {
        params = read_params_csv(args.params_path);
        if (params->n() != panel.n_series())
            throw ContractError("cluster: parameter file n does not match the panel");
    }

    if (!args.dump_similarity_dir.empty())
        std::filesystem::create_directories(args.dump_similarity_dir);
    if (!args.dump_trace_dir.empty())
        std::filesystem::create_directories(args.dump_trace_dir);

    ClusterTimeline timeline;
    if (args.method == "hmm") {
        const ClusterHmm hmm = read_hmm(args.hmm_prefix);
        if (hmm.n() != panel.n_series())
            throw ContractError("cluster: HMM n does not match the panel");
        std::vector<SimilarityMatrix> observations;
        for (int k = first; k <= last; ++k) {
            observations.push_back(similarity_at(panel, k, cfg));
            if (!args.dump_similarity_dir.empty())
                write_similarity_csv(args.dump_similarity_dir + "/similarity_" +
                                         std::to_string(k) + ".csv",
                                     observations.back());
        }
        timeline = viterbi_decode(hmm, observations, first);
    } else {
        DescentConfig gd;
        gd.seed = args.seed;
        for (int k = first; k <= last; ++k) {
            const SimilarityMatrix s = similarity_at(panel, k, cfg);
            if (!args.dump_similarity_dir.empty())
                write_similarity_csv(
                    args.dump_similarity_dir + "/similarity_" + std::to_string(k) + ".csv", s);
            Partition p = Partition::singletons(panel.n_series());
            if (args.method == "shi-malik") {
                p = shi_malik(s);
            } else if (args.method == "spectral") {
                p = dynamic_spectral(s, args.c_min,
                                     resolved_c_max(args.c_max, panel.n_series()), gd)
                        .partition;
            } else if (args.method == "exponential") {
                p = exp_predict(s, *params);
            } else if (args.method == "triangular-exact") {
                p = exact_map(s, *params).partition;
            } else if (args.method == "triangular-mcmc") {
                ChainConfig chain;
                chain.steps = args.steps;
                chain.burn_in = args.burn_in;
                chain.thin = args.thin;
                chain.seed = mix_seed(args.seed, static_cast<std::uint64_t>(k));
                std::ofstream trace;
                if (!args.dump_trace_dir.empty()) {
                    trace.open(args.dump_trace_dir + "/trace_" + std::to_string(k) + ".csv");
                    if (!trace)
                        throw ContractError("cluster: cannot write trace for step " +
                                            std::to_string(k));
                }
                const ChainResult result =
                    run_chain(s, *params, chain, trace.is_open() ? &trace : nullptr);
                p = args.estimator == "best-visited" ? result.stats.best_visited
                                                     : result.stats.mode;
            } else {
                throw ContractError("cluster: unknown method " + args.method);
            }
            timeline.append(k, std::move(p));
        }
    }
    write_timeline_csv(args.out_path, timeline);
    std::cout << "clustered steps " << first << ".." << last << " with " << args.method
              << " -> " << args.out_path << "\n";
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string pred_path, truth_path, out_path;
    int exclude_post_change = 0;
};

void run_evaluate(const EvaluateArgs& args) {
    const ClusterTimeline pred = read_timeline_csv(args.pred_path);
    const ClusterTimeline truth = read_timeline_csv(args.truth_path);
    if (pred.n() != truth.n())
        throw ContractError("evaluate: timelines have different n");
    const EvalReport report = evaluate_timeline(pred, truth);
    // The truth's own stability is the natural baseline for the
    // prediction's.
    const double truth_stability = evaluate_timeline(truth, truth).stability;
    std::cout << "steps " << report.rows.size() << "\n"
              << "exact_match " << format_double(report.per_step_exact_match) << "\n"
              << "rand_index " << format_double(report.rand) << "\n"
              << "adjusted_rand " << format_double(report.adjusted) << "\n"
              << "stability " << format_double(report.stability) << "\n"
              << "stability_truth " << format_double(truth_stability) << "\n";
    if (args.exclude_post_change > 0)
        std::cout << "exact_match_excluding_post_change "
                  << format_double(exact_match_excluding_post_change(
                         pred, truth, args.exclude_post_change))
                  << "\n";
    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path);
        if (!out) throw ContractError("cannot open for writing: " + args.out_path);
        out << "time,pred,truth,exact,rand_index,adjusted_rand\n";
        for (const EvalRow& row : report.rows)
            out << row.k << ',' << row.pred << ',' << row.truth << ',' << (row.exact ? 1 : 0)
                << ',' << format_double(row.ri) << ',' << format_double(row.ari) << "\n";
    }
}

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

struct WeightsArgs {
    std::string panel_path, partition_text, out_path;
    int window = 20;
};

void run_weights(const WeightsArgs& args) {
    const SeriesPanel panel = read_panel_csv(args.panel_path);
    const Partition p = Partition::parse(args.partition_text);
    const std::vector<double> weights = inverse_vol_weights(panel, p, args.window);
    for (std::size_t s = 0; s < weights.size(); ++s)
        std::cout << "s" << s + 1 << " " << format_double(weights[s]) << "\n";
    if (!args.out_path.empty()) write_weights_csv(args.out_path, weights);
}

// ---------------------------------------------------------------------------
// clique-demo
// ---------------------------------------------------------------------------

struct CliqueArgs {
    std::string graph_path;
    int k = 1;
    double q = 0.75;
    int slack = 0;
};

void run_clique_demo(const CliqueArgs& args) {
    const SimpleGraph g = read_edge_list_file(args.graph_path);
    const ReductionInstance inst = build_reduction(g, args.k, args.q, args.slack);
    const KCliqueOutcome outcome = decide_kclique_via_map(inst);
    const StructureReport report = map_structure_report(inst, outcome.map.partition);
    std::cout << (outcome.has_k_clique ? "YES" : "NO") << "\n"
              << "graph |V| " << g.n_vertices() << " |E| " << g.edge_count() << ", k " << args.k
              << "\n"
              << "reduction N " << inst.n_extra << " |V'| " << inst.graph_prime.n_vertices()
              << " q " << format_double(inst.q) << "\n"
              << "map partitions evaluated " << outcome.map.n_evaluated << "\n"
              << "largest clique in MAP edges " << outcome.witness_component_size << "\n"
              << "check V_N complete: " << (report.vn_complete ? "pass" : "FAIL") << "\n"
              << "check V_N attached to a maximum clique (size "
              << report.attached_clique_size << " of " << report.max_clique_size
              << "): " << (report.attached_to_max_clique ? "pass" : "FAIL") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seeded time-series clustering: spectral, exponential-model, triangular-MAP,"
                 " MCMC, and HMM methods with synthetic experiments and the k-clique"
                 " reduction demo"};
    app.require_subcommand(1);
    app.set_config("--config")->description("key=value file mirroring flags (flags win)");

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic panel and ground truth");
    gen_cmd->configurable();
    gen_cmd->add_option("--n", gen.cfg.n, "Number of series")->check(CLI::Range(2, 13));
    gen_cmd->add_option("--steps", gen.cfg.steps, "Number of time steps")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--noise", gen.cfg.noise_sd, "Per-series noise standard deviation")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--regime-change-prob", gen.cfg.regime_change_prob,
                        "Per-step probability of redrawing the planted partition")
        ->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", gen.cfg.seed, "RNG seed");
    gen_cmd->add_option("--out-panel", gen.out_panel, "Panel CSV path")->required();
    gen_cmd->add_option("--out-truth", gen.out_truth, "Truth timeline CSV path")->required();

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Fit the pairwise exponential model"
                                                  " (and optionally the HMM)");
    train_cmd->configurable();
    train_cmd->add_option("--panel", train.panel_path, "Panel CSV")->required();
    train_cmd->add_option("--labels", train.labels_mode,
                          "Label source: truth file or spectral clustering")
        ->check(CLI::IsMember({"truth", "spectral"}));
    train_cmd->add_option("--labels-file", train.labels_file, "Truth timeline CSV");
    train_cmd->add_option("--train-range", train.train_range,
                          "Steps first:last (default: window..m/2)");
    train_cmd->add_option("--rates", train.rates, "Conditional or pooled rate estimates")
        ->check(CLI::IsMember({"conditional", "pooled"}));
    train_cmd->add_option("--alpha", train.alpha, "HMM transition smoothing")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_flag("--hmm", train.train_hmm, "Also train the clustering HMM");
    train_cmd->add_option("--out-params", train.out_params, "Parameter CSV path")->required();
    train_cmd->add_option("--out-hmm-prefix", train.out_hmm_prefix, "HMM file prefix");
    train_cmd->add_option("--c-min", train.c_min, "Smallest cluster count (spectral labels)");
    train_cmd->add_option("--c-max", train.c_max, "Largest cluster count (0 = n-1)");
    train_cmd->add_option("--seed", train.seed, "Seed for spectral restarts");
    train.sim.attach(train_cmd);

    ClusterArgs cluster;
    auto* cluster_cmd = app.add_subcommand("cluster", "Produce a clustering timeline");
    cluster_cmd->configurable();
    cluster_cmd->add_option("--panel", cluster.panel_path, "Panel CSV")->required();
    cluster_cmd
        ->add_option("--method", cluster.method, "Clustering method")
        ->check(CLI::IsMember({"shi-malik", "spectral", "exponential", "triangular-exact",
                               "triangular-mcmc", "hmm"}))
        ->required();
    cluster_cmd->add_option("--params", cluster.params_path, "Trained parameter CSV");
    cluster_cmd->add_option("--hmm-prefix", cluster.hmm_prefix, "Trained HMM file prefix");
    cluster_cmd->add_option("--test-range", cluster.test_range,
                            "Steps first:last (default: window..m)");
    cluster_cmd->add_option("--out", cluster.out_path, "Timeline CSV path")->required();
    cluster_cmd->add_option("--dump-similarity", cluster.dump_similarity_dir,
                            "Directory for per-step similarity CSVs");
    cluster_cmd->add_option("--dump-trace", cluster.dump_trace_dir,
                            "Directory for per-step MCMC chain traces");
    cluster_cmd->add_option("--c-min", cluster.c_min, "Smallest cluster count");
    cluster_cmd->add_option("--c-max", cluster.c_max, "Largest cluster count (0 = n-1)");
    cluster_cmd->add_option("--seed", cluster.seed, "Seed (spectral restarts, MCMC chains)");
    cluster_cmd->add_option("--steps", cluster.steps, "MCMC steps per time step");
    cluster_cmd->add_option("--burn-in", cluster.burn_in, "MCMC burn-in");
    cluster_cmd->add_option("--thin", cluster.thin, "MCMC thinning");
    cluster_cmd->add_option("--estimator", cluster.estimator, "MCMC MAP estimator")
        ->check(CLI::IsMember({"mode", "best-visited"}));
    cluster.sim.attach(cluster_cmd);

    EvaluateArgs eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "Compare a prediction timeline to truth");
    eval_cmd->configurable();
    eval_cmd->add_option("--pred", eval.pred_path, "Prediction timeline CSV")->required();
    eval_cmd->add_option("--truth", eval.truth_path, "Truth timeline CSV")->required();
    eval_cmd->add_option("--out", eval.out_path, "Per-step report CSV path");
    eval_cmd->add_option("--exclude-post-change", eval.exclude_post_change,
                         "Also report exact match excluding this many steps after each change");

    WeightsArgs weights;
    auto* weights_cmd = app.add_subcommand("weights", "Inverse-volatility composite weights");
    weights_cmd->configurable();
    weights_cmd->add_option("--panel", weights.panel_path, "Panel CSV")->required();
    weights_cmd->add_option("--partition", weights.partition_text, "Partition, e.g. \"1,2|3\"")
        ->required();
    weights_cmd->add_option("--window", weights.window, "Trailing volatility window")
        ->check(CLI::Range(2, 1 << 20));
    weights_cmd->add_option("--out", weights.out_path, "Weights CSV path");

    CliqueArgs clique;
    auto* clique_cmd = app.add_subcommand("clique-demo", "k-clique decision via triangular MAP");
    clique_cmd->configurable();
    clique_cmd->add_option("--graph", clique.graph_path, "Edge-list file (1-based 'u v' lines)")
        ->required();
    clique_cmd->add_option("--k", clique.k, "Clique size to decide")->required();
    clique_cmd->add_option("--q", clique.q, "Edge probability on E' (must be in (1/2,1))");
    clique_cmd->add_option("--slack", clique.slack, "Extra headroom above the N bound")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    if (train_cmd->parsed() && train.labels_mode == "truth" && train.labels_file.empty()) {
        std::cerr << "train: --labels-file is required unless --labels spectral\n";
        return 1;
    }

    try {
        if (gen_cmd->parsed()) run_generate(gen);
        if (train_cmd->parsed()) run_train(train);
        if (cluster_cmd->parsed()) run_cluster(cluster);
        if (eval_cmd->parsed()) run_evaluate(eval);
        if (weights_cmd->parsed()) run_weights(weights);
        if (clique_cmd->parsed()) run_clique_demo(clique);
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
