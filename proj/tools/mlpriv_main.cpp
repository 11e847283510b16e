// SPDX-License-Identifier: Apache-2.0
//
// mlpriv - privatize multi-layer networks with personalized edge flipping and
// recover community structure from the privatized tensor.

#include "mlpriv/detection.hpp"
#include "mlpriv/evaluation.hpp"
#include "mlpriv/experiments.hpp"
#include "mlpriv/net_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace mlpriv;

struct ProfileSource {
    std::string pref_path;
    double f_const = -1.0;
    double epsilon_uniform = -1.0;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--pref", pref_path, "preference file (node_id f_value per line)");
        cmd->add_option("--f-const", f_const, "constant preference f in [0,1] for all nodes");
        cmd->add_option("--epsilon-uniform", epsilon_uniform,
                        "uniform privacy budget; maps to f = sqrt((e^eps-1)/(e^eps+1))");
    }

    PrivacyProfile resolve(Index n) const {
        int given = !pref_path.empty();
        given += f_const >= 0.0;
        given += epsilon_uniform >= 0.0;
        if (given != 1)
            throw std::runtime_error(
                "give exactly one of --pref, --f-const, --epsilon-uniform");
        if (!pref_path.empty()) {
            PrivacyProfile p = read_preferences(pref_path);
            if (n > 0 && p.n() != n)
                throw std::runtime_error("preference file length does not match network size");
            return p;
        }
        if (n <= 0) throw std::runtime_error("network size unknown; use --n");
        if (f_const >= 0.0) return PrivacyProfile::constant(n, f_const);
        return PrivacyProfile::constant(n, preference_from_epsilon(epsilon_uniform));
    }
};

int run(int argc, char** argv) {
    CLI::App app{"privacy-preserving community detection in multi-layer networks"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out;
    std::string config_path;
    app.add_option("--seed", seed, "master RNG seed")->configurable(false);
    app.add_option("--out", out, "output file or directory")->configurable(false);
    app.add_option("--config", config_path, "experiment config file (key = value lines)")
        ->configurable(false);
    app.fallthrough();

    // generate
    auto* generate = app.add_subcommand("generate", "sample a synthetic DC-MSBM network");
    Index gen_n = 200, gen_k = 2, gen_l = 3;
    generate->add_option("--n", gen_n, "nodes")->required();
    generate->add_option("--k", gen_k, "communities")->required();
    generate->add_option("--l", gen_l, "layers")->required();

    // flip
    auto* flip = app.add_subcommand("flip", "apply the personalized edge-flipping mechanism");
    std::string flip_net;
    ProfileSource flip_profile;
    flip->add_option("--net", flip_net, "layered edge list")->required();
    flip_profile.add_options(flip);

    // debias
    auto* debias_cmd = app.add_subcommand("debias", "shift a flipped network by (f_i f_j - 1)/2");
    std::string debias_net;
    ProfileSource debias_profile;
    bool debias_rescale = false;
    debias_cmd->add_option("--net", debias_net, "flipped layered edge list")->required();
    debias_profile.add_options(debias_cmd);
    debias_cmd->add_flag("--rescale", debias_rescale, "also divide by f_i f_j (needs all f_i > 0)");

    // detect
    auto* detect_cmd = app.add_subcommand("detect", "community detection on a debiased tensor");
    std::string detect_tensor, detect_net;
    ProfileSource detect_profile;
    Index detect_k = 0;
    double detect_tau = 0.1;
    int detect_restarts = 10;
    detect_cmd->add_option("--tensor", detect_tensor, "debiased tensor file (.tensor/.t3b)");
    detect_cmd->add_option("--net", detect_net, "flipped edge list (debiased in memory)");
    detect_profile.add_options(detect_cmd);
    detect_cmd->add_option("--k", detect_k, "number of communities")->required();
    detect_cmd->add_option("--tau", detect_tau, "K-medians (1+tau) target, reported only");
    detect_cmd->add_option("--restarts", detect_restarts, "K-medians restarts");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "permutation-minimized Hamming error");
    std::string eval_labels, eval_truth;
    Index eval_k = 0;
    evaluate->add_option("--labels", eval_labels, "estimated labels file")->required();
    evaluate->add_option("--truth", eval_truth, "reference labels or ground-truth file")->required();
    evaluate->add_option("--k", eval_k, "number of communities (default: max label)");

    // estimate-k
    auto* estimate = app.add_subcommand("estimate-k", "scree-based estimate of K");
    std::string est_net;
    Index est_kappa = 15;
    estimate->add_option("--net", est_net, "layered edge list")->required();
    estimate->add_option("--kappa", est_kappa, "probe rank (upper bound for K)");

    // budget
    auto* budget = app.add_subcommand("budget", "per-edge privacy budget matrix");
    ProfileSource budget_profile;
    Index budget_n = 0;
    budget_profile.add_options(budget);
    budget->add_option("--n", budget_n, "node count (with --f-const/--epsilon-uniform)");

    // giant-component
    auto* giant = app.add_subcommand(
        "giant-component", "restrict to the intersection of per-layer giant components");
    std::string giant_net;
    giant->add_option("--net", giant_net, "layered edge list")->required();

    // diagnostics
    auto* diag = app.add_subcommand("diagnostics", "effective sizes, rate value, assumption flags");
    std::string diag_truth, diag_core, diag_pref;
    double diag_sn = std::numeric_limits<double>::quiet_NaN();
    diag->add_option("--truth", diag_truth, "ground-truth file (node community degree)")->required();
    diag->add_option("--core", diag_core, "core tensor file (K x K x L)")->required();
    diag->add_option("--pref", diag_pref, "preference file")->required();
    diag->add_option("--sn", diag_sn, "sparsity s_n (default: max core entry)");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a synthetic experiment grid");
    std::string exp_id, exp_net;
    bool exp_full = false;
    int exp_reps = 0;
    experiment->add_option("id", exp_id, "example1|example2|example3|flip-sweep|custom")->required();
    experiment->add_flag("--full", exp_full, "published grids instead of desk scale");
    experiment->add_option("--replications", exp_reps, "override replication count");
    experiment->add_option("--net", exp_net,
                           "flip-sweep only: run on this network instead of a synthetic one");

    CLI11_PARSE(app, argc, argv);

    const auto out_or = [&](const std::string& fallback) { return out.empty() ? fallback : out; };

    if (generate->parsed()) {
        const Synthetic syn = generate_synthetic(gen_n, gen_k, gen_l, seed);
        const std::string dir = out_or("generated");
        std::filesystem::create_directories(dir);
        write_layered_edgelist(dir + "/network.edges", syn.network);
        write_ground_truth(dir + "/truth.txt", syn.params);
        write_tensor3(dir + "/core.tensor", syn.params.core);
        std::cout << "wrote " << dir << "/network.edges, truth.txt, core.tensor\n";
        return 0;
    }

    if (flip->parsed()) {
        const MultiLayerNetwork net = read_layered_edgelist(flip_net);
        const PrivacyProfile profile = flip_profile.resolve(net.n);
        const MultiLayerNetwork flipped = flip_network(net, flip_matrix(profile), seed);
        const std::string path = out_or("flipped.edges");
        write_layered_edgelist(path, flipped);
        std::cout << "wrote " << path << "\n";
        return 0;
    }

    if (debias_cmd->parsed()) {
        const MultiLayerNetwork net = read_layered_edgelist(debias_net);
        const PrivacyProfile profile = debias_profile.resolve(net.n);
        const DebiasedTensor deb = debias(net, profile);
        const std::string path = out_or("debiased.tensor");
        if (debias_rescale)
            write_tensor3(path, rescale_debias(deb));
        else
            write_tensor3(path, deb.values);
        std::cout << "wrote " << path << "\n";
        return 0;
    }

    if (detect_cmd->parsed()) {
        Tensor3 tensor;
        if (!detect_tensor.empty()) {
            tensor = read_tensor3(detect_tensor);
        } else if (!detect_net.empty()) {
            const MultiLayerNetwork net = read_layered_edgelist(detect_net);
            const PrivacyProfile profile = detect_profile.resolve(net.n);
            tensor = debias(net, profile).values;
        } else {
            throw std::runtime_error("detect: need --tensor or --net");
        }
        const DetectionResult result = detect(tensor, detect_k, detect_tau, detect_restarts, seed);
        const std::string path = out_or("labels.txt");
        write_labels(path, result.labels);
        std::cout << "objective " << result.objective << " converged "
                  << (result.converged ? 1 : 0) << " tau " << result.tau;
        if (result.mode3_rank_truncated)
            std::cout << " (mode-3 rank truncated to " << result.mode3_rank << ")";
        std::cout << "\nwrote " << path << "\n";
        return 0;
    }

    if (evaluate->parsed()) {
        const std::vector<int> labels = read_labels(eval_labels);
        std::vector<int> truth;
        try {
            truth = read_labels(eval_truth);
        } catch (const std::exception&) {
            truth = read_ground_truth(eval_truth).labels;
        }
        Index k = eval_k;
        if (k == 0) {
            for (int c : labels) k = std::max<Index>(k, c + 1);
            for (int c : truth) k = std::max<Index>(k, c + 1);
        }
        std::printf("%.12g\n", hamming_error(labels, truth, k));
        return 0;
    }

    if (estimate->parsed()) {
        const MultiLayerNetwork net = read_layered_edgelist(est_net);
        const ScreeReport report = estimate_k(net, est_kappa);
        if (!out.empty()) write_scree_csv(out, report);
        std::cout << "suggested_k " << report.suggested_k << "\n";
        for (Index i = 0; i < report.singular_values.size(); ++i)
            std::cout << "sigma_" << (i + 1) << " " << report.singular_values(i) << "\n";
        return 0;
    }

    if (budget->parsed()) {
        const PrivacyProfile profile = budget_profile.resolve(budget_n);
        write_budget_csv(out_or("budget.csv"), privacy_budget(profile));
        std::cout << "wrote " << out_or("budget.csv") << "\n";
        return 0;
    }

    if (giant->parsed()) {
        const MultiLayerNetwork net = read_layered_edgelist(giant_net);
        const GiantComponentResult result = giant_component_intersection(net);
        const std::string dir = out_or("giant");
        std::filesystem::create_directories(dir);
        if (result.sub.n > 0) write_layered_edgelist(dir + "/network.edges", result.sub);
        std::ofstream ids(dir + "/nodes.txt");
        for (std::size_t i = 0; i < result.nodes.size(); ++i)
            ids << (i + 1) << " " << (result.nodes[i] + 1) << "\n";
        std::cout << "kept " << result.nodes.size() << " of " << net.n << " nodes\nwrote " << dir
                  << "/nodes.txt" << (result.sub.n > 0 ? " and network.edges" : "") << "\n";
        return 0;
    }

    if (diag->parsed()) {
        const GroundTruth gt = read_ground_truth(diag_truth);
        DcMsbmParams params;
        params.core = read_tensor3(diag_core);
        params.n = static_cast<Index>(gt.labels.size());
        params.K = params.core.dim(1);
        params.L = params.core.dim(3);
        params.labels = gt.labels;
        params.degrees = gt.degrees;
        const PrivacyProfile profile = read_preferences(diag_pref);
        DiagnosticsOptions opts;
        opts.sn = diag_sn;
        const std::string report = format_diagnostics(diagnostics(params, profile, opts));
        if (!out.empty()) {
            std::ofstream os(out);
            os << report;
        }
        std::cout << report;
        return 0;
    }

    if (experiment->parsed()) {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = parse_config_file(config_path);
        cfg.id = experiment_from_name(exp_id);
        cfg.seed = seed;
        cfg.full_scale = cfg.full_scale || exp_full;
        if (exp_reps > 0) cfg.replications = exp_reps;
        if (!out.empty()) cfg.out_dir = out;
        if (cfg.out_dir.empty()) cfg.out_dir = "results";
        cfg.apply_defaults();
        ExperimentTable table;
        if (!exp_net.empty()) {
            if (cfg.id != ExperimentId::kFlipSweep)
                throw std::runtime_error("--net applies to the flip-sweep experiment only");
            table = run_flip_sweep(cfg, read_layered_edgelist(exp_net), cfg.k);
        } else {
            table = run_experiment(cfg);
        }
        write_experiment_outputs(cfg, table);
        std::cout << table.summary_csv();
        std::cout << "wrote " << cfg.out_dir << "/" << experiment_name(table.id)
                  << "_{replications,summary}.csv\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
