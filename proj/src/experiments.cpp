// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/experiments.hpp"

#include "mlpriv/detection.hpp"
#include "mlpriv/evaluation.hpp"
#include "mlpriv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mlpriv {

using rng::Purpose;
using rng::Substream;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Picks m distinct node indices by partial Fisher-Yates.
std::vector<Index> sample_nodes(Index n, Index m, Substream& s) {
    std::vector<Index> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), Index{0});
    for (Index i = 0; i < m; ++i) {
        const Index j = i + static_cast<Index>(s.below(static_cast<std::uint64_t>(n - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    ids.resize(static_cast<std::size_t>(m));
    return ids;
}

struct Cell {
    Index n = 0;
    Index l = 0;
    std::string param_name;
    double param_value = 0.0;
};

PrivacyProfile cell_profile(ExperimentId id, const Cell& cell, std::uint64_t rep_seed) {
    const Index n = cell.n;
    Substream s(rep_seed, Purpose::kProfile);
    PrivacyProfile profile;
    profile.f = Vector::Ones(n);
    switch (id) {
        case ExperimentId::kExample1:
            for (Index i = 0; i < n; ++i) profile.f(i) = s.uniform(0.0, cell.param_value);
            break;
        case ExperimentId::kExample2:
            for (Index i = 0; i < n; ++i) profile.f(i) = s.uniform(0.95, 1.0);
            break;
        case ExperimentId::kExample3: {
            const double a = cell.param_value;
            const Index m = std::min<Index>(
                n, static_cast<Index>(std::floor(2.0 * std::pow(static_cast<double>(n), a))));
            const double f_priv =
                std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n * cell.l));
            for (Index i : sample_nodes(n, m, s)) profile.f(i) = f_priv;
            break;
        }
        case ExperimentId::kCustom:
            profile.f.setConstant(preference_from_epsilon(cell.param_value));
            break;
        case ExperimentId::kFlipSweep: {
            const Index m = static_cast<Index>(std::floor(cell.param_value * static_cast<double>(n)));
            profile.f.setConstant(0.98);
            for (Index i : sample_nodes(n, m, s)) profile.f(i) = 0.02;
            break;
        }
    }
    return profile;
}

ExperimentTable run_synthetic_cells(const ExperimentConfig& cfg, const std::vector<Cell>& cells) {
    const int reps = cfg.replications;
    const Index tasks = static_cast<Index>(cells.size()) * reps;
    std::vector<ReplicationRow> rows(static_cast<std::size_t>(tasks));

#pragma omp parallel for schedule(dynamic)
    for (Index task = 0; task < tasks; ++task) {
        const Index cell_idx = task / reps;
        const int rep = static_cast<int>(task % reps);
        const Cell& cell = cells[static_cast<std::size_t>(cell_idx)];
        ReplicationRow& row = rows[static_cast<std::size_t>(task)];
        row.n = cell.n;
        row.l = cell.l;
        row.k = cfg.k;
        row.param_name = cell.param_name;
        row.param_value = cell.param_value;
        row.replication = rep + 1;
        const std::uint64_t rep_seed =
            rng::derive_seed(cfg.seed, Purpose::kReplication,
                             rng::pack2(static_cast<std::uint64_t>(cell_idx),
                                        static_cast<std::uint64_t>(rep)));
        try {
            const Synthetic syn = generate_synthetic(cell.n, cfg.k, cell.l, rep_seed);
            const PrivacyProfile profile = cell_profile(cfg.id, cell, rep_seed);
            const MultiLayerNetwork flipped =
                flip_network(syn.network, flip_matrix(profile), rep_seed);
            const DebiasedTensor deb = debias(flipped, profile);
            const DetectionResult det = detect(deb, cfg.k, cfg.tau, cfg.restarts, rep_seed);
            row.error = hamming_error(det.labels, syn.params.labels, cfg.k);
        } catch (const std::exception& e) {
            row.error = std::numeric_limits<double>::quiet_NaN();
            row.message = e.what();
        }
    }

    ExperimentTable table;
    table.id = cfg.id;
    table.rows = std::move(rows);
    return table;
}

}  // namespace

ExperimentId experiment_from_name(const std::string& name) {
    if (name == "example1") return ExperimentId::kExample1;
    if (name == "example2") return ExperimentId::kExample2;
    if (name == "example3") return ExperimentId::kExample3;
    if (name == "flip-sweep") return ExperimentId::kFlipSweep;
    if (name == "custom") return ExperimentId::kCustom;
    throw std::invalid_argument("unknown experiment id: " + name);
}

std::string experiment_name(ExperimentId id) {
    switch (id) {
        case ExperimentId::kExample1: return "example1";
        case ExperimentId::kExample2: return "example2";
        case ExperimentId::kExample3: return "example3";
        case ExperimentId::kFlipSweep: return "flip-sweep";
        case ExperimentId::kCustom: return "custom";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (replications < 1) throw std::invalid_argument("ExperimentConfig: replications must be >= 1");
    if (k < 1) throw std::invalid_argument("ExperimentConfig: K must be >= 1");
    if (n_grid.empty() || l_grid.empty())
        throw std::invalid_argument("ExperimentConfig: n and L grids must be nonempty");
    switch (id) {
        case ExperimentId::kExample1:
            if (b_grid.empty()) throw std::invalid_argument("ExperimentConfig: b grid empty");
            break;
        case ExperimentId::kExample3:
            if (a_grid.empty()) throw std::invalid_argument("ExperimentConfig: a grid empty");
            break;
        case ExperimentId::kFlipSweep:
            if (beta_grid.empty()) throw std::invalid_argument("ExperimentConfig: beta grid empty");
            break;
        case ExperimentId::kCustom:
            if (eps_grid.empty()) throw std::invalid_argument("ExperimentConfig: eps grid empty");
            break;
        default: break;
    }
}

void ExperimentConfig::apply_defaults() {
    const auto bgrid = [] {
        std::vector<double> b;
        for (int i = 0; i <= 9; ++i) b.push_back(0.5 + 0.05 * i);
        return b;
    };
    switch (id) {
        case ExperimentId::kExample1:
            if (n_grid.empty()) n_grid = full_scale ? std::vector<Index>{400, 800} : std::vector<Index>{400};
            if (l_grid.empty()) l_grid = full_scale ? std::vector<Index>{4, 8, 16, 32} : std::vector<Index>{4, 16};
            if (b_grid.empty()) b_grid = bgrid();
            if (k == 0) k = 4;
            if (replications == 0) replications = full_scale ? 100 : 20;
            break;
        case ExperimentId::kExample2:
            if (n_grid.empty()) {
                n_grid.clear();
                for (Index n = 100; n <= (full_scale ? 500 : 400); n += 50) n_grid.push_back(n);
            }
            if (l_grid.empty())
                l_grid = full_scale ? std::vector<Index>{4, 8, 16, 32, 64, 128}
                                    : std::vector<Index>{4, 8, 16, 32};
            if (k == 0) k = 4;
            if (replications == 0) replications = full_scale ? 100 : 20;
            break;
        case ExperimentId::kExample3:
            if (n_grid.empty())
                n_grid = full_scale ? std::vector<Index>{500, 1000, 1500, 2000, 2500}
                                    : std::vector<Index>{500, 1000};
            if (l_grid.empty()) l_grid = {4};
            if (a_grid.empty()) a_grid = {0.1, 0.3, 0.5, 0.7};
            if (k == 0) k = 4;
            if (replications == 0) replications = full_scale ? 100 : 10;
            break;
        case ExperimentId::kFlipSweep:
            if (n_grid.empty()) n_grid = {500};
            if (l_grid.empty()) l_grid = {3};
            if (k == 0) k = 2;
            if (beta_grid.empty())
                for (int i = 1; i <= 10; ++i) beta_grid.push_back(0.02 * i);
            if (replications == 0) replications = full_scale ? 100 : 20;
            break;
        case ExperimentId::kCustom:
            if (n_grid.empty()) n_grid = {300};
            if (l_grid.empty()) l_grid = {8};
            if (eps_grid.empty()) eps_grid = {0.4, 0.2, 0.1};
            if (k == 0) k = 2;
            if (replications == 0) replications = 20;
            break;
    }
    if (replications == 0) replications = 20;
    if (k == 0) k = 4;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config");
    ExperimentConfig cfg;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string value, tok;
        while (ls >> tok) {
            if (tok == "=") continue;
            if (!value.empty()) value += " ";
            value += tok;
        }
        // Tolerate "key=value" without spaces.
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            if (value.empty())
                value = key.substr(eq + 1);
            else
                value = key.substr(eq + 1) + " " + value;
            key.erase(eq);
        }
        if (value.empty())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": missing value for '" +
                                     key + "'");
        apply_config_line(cfg, key, value);
    }
    return cfg;
}

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const auto parse_doubles = [](const std::string& v) {
        std::vector<double> out;
        std::string item;
        std::istringstream ss(v);
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.push_back(std::stod(item));
        }
        return out;
    };
    const auto parse_indices = [&](const std::string& v) {
        std::vector<Index> out;
        for (double d : parse_doubles(v)) out.push_back(static_cast<Index>(d));
        return out;
    };

    if (key == "experiment") cfg.id = experiment_from_name(value);
    else if (key == "n_grid" || key == "n") cfg.n_grid = parse_indices(value);
    else if (key == "l_grid" || key == "L") cfg.l_grid = parse_indices(value);
    else if (key == "k" || key == "K") cfg.k = static_cast<Index>(std::stoll(value));
    else if (key == "b_grid") cfg.b_grid = parse_doubles(value);
    else if (key == "a_grid") cfg.a_grid = parse_doubles(value);
    else if (key == "beta_grid") cfg.beta_grid = parse_doubles(value);
    else if (key == "eps_grid") cfg.eps_grid = parse_doubles(value);
    else if (key == "replications" || key == "R") cfg.replications = std::stoi(value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "out") cfg.out_dir = value;
    else if (key == "full") cfg.full_scale = (value == "1" || value == "true");
    else if (key == "tau") cfg.tau = std::stod(value);
    else if (key == "restarts") cfg.restarts = std::stoi(value);
    else throw std::invalid_argument("unknown config key: " + key);
}

std::string ExperimentTable::to_csv() const {
    std::ostringstream os;
    os << "experiment,n,L,K,param_name,param_value,replication,hamming_error\n";
    const std::string name = experiment_name(id);
    for (const ReplicationRow& r : rows) {
        os << name << "," << r.n << "," << r.l << "," << r.k << "," << r.param_name << ","
           << fmt(r.param_value) << "," << r.replication << ",";
        if (std::isnan(r.error))
            os << "nan";
        else
            os << fmt(r.error);
        os << "\n";
    }
    return os.str();
}

std::vector<CellSummary> summarize(const ExperimentTable& table) {
    std::vector<CellSummary> cells;
    std::vector<std::vector<double>> values;
    for (const ReplicationRow& r : table.rows) {
        if (cells.empty() || cells.back().n != r.n || cells.back().l != r.l ||
            cells.back().param_name != r.param_name || cells.back().param_value != r.param_value) {
            cells.push_back({r.n, r.l, r.param_name, r.param_value, 0, 0.0, 0.0});
            values.emplace_back();
        }
        if (!std::isnan(r.error)) values.back().push_back(r.error);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& v = values[c];
        cells[c].replications = static_cast<int>(v.size());
        if (v.empty()) {
            cells[c].mean = std::numeric_limits<double>::quiet_NaN();
            cells[c].stderr_mean = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        cells[c].mean = mean;
        if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            cells[c].stderr_mean =
                std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
        }
    }
    return cells;
}

std::string ExperimentTable::summary_csv() const {
    std::ostringstream os;
    os << "experiment,n,L,K,param_name,param_value,replications,mean_error,stderr\n";
    const std::string name = experiment_name(id);
    const Index k = rows.empty() ? 0 : rows.front().k;
    for (const CellSummary& c : summarize(*this)) {
        os << name << "," << c.n << "," << c.l << "," << k << "," << c.param_name << ","
           << fmt(c.param_value) << "," << c.replications << ",";
        os << (std::isnan(c.mean) ? std::string("nan") : fmt(c.mean)) << ",";
        os << (std::isnan(c.stderr_mean) ? std::string("nan") : fmt(c.stderr_mean)) << "\n";
    }
    return os.str();
}

ExperimentTable run_example1(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.id = ExperimentId::kExample1;
    cfg.apply_defaults();
    cfg.validate();
    std::vector<Cell> cells;
    for (Index n : cfg.n_grid)
        for (Index l : cfg.l_grid)
            for (double b : cfg.b_grid) cells.push_back({n, l, "b", b});
    return run_synthetic_cells(cfg, cells);
}

ExperimentTable run_example2(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.id = ExperimentId::kExample2;
    cfg.apply_defaults();
    cfg.validate();
    std::vector<Cell> cells;
    // Scenario A: varying n at L = 8 (or the first L); scenario B: varying L
    // at n = 200 (or the first n).
    const Index l_fixed =
        std::find(cfg.l_grid.begin(), cfg.l_grid.end(), 8) != cfg.l_grid.end() ? 8
                                                                               : cfg.l_grid.front();
    for (Index n : cfg.n_grid) cells.push_back({n, l_fixed, "n", static_cast<double>(n)});
    const Index n_fixed =
        std::find(cfg.n_grid.begin(), cfg.n_grid.end(), 200) != cfg.n_grid.end() ? 200
                                                                                 : cfg.n_grid.front();
    for (Index l : cfg.l_grid) cells.push_back({n_fixed, l, "L", static_cast<double>(l)});
    return run_synthetic_cells(cfg, cells);
}

ExperimentTable run_example3(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.id = ExperimentId::kExample3;
    cfg.apply_defaults();
    cfg.validate();
    std::vector<Cell> cells;
    for (Index n : cfg.n_grid)
        for (Index l : cfg.l_grid)
            for (double a : cfg.a_grid) cells.push_back({n, l, "a", a});
    return run_synthetic_cells(cfg, cells);
}

ExperimentTable run_uniform_eps_sweep(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.id = ExperimentId::kCustom;
    cfg.apply_defaults();
    cfg.validate();
    std::vector<Cell> cells;
    for (Index n : cfg.n_grid)
        for (Index l : cfg.l_grid)
            for (double eps : cfg.eps_grid) cells.push_back({n, l, "eps", eps});
    return run_synthetic_cells(cfg, cells);
}

ExperimentTable run_flip_sweep(const ExperimentConfig& cfg_in, const MultiLayerNetwork& net,
                               Index k) {
    ExperimentConfig cfg = cfg_in;
    cfg.id = ExperimentId::kFlipSweep;
    cfg.k = k;
    cfg.apply_defaults();
    cfg.validate();

    // Reference labels: the same pipeline with privacy waived (f = 1, the
    // debias shift vanishes and no edge is flipped).
    DebiasedTensor identity;
    identity.values = net.adjacency;
    identity.profile = PrivacyProfile::constant(net.n, 1.0);
    const DetectionResult reference =
        detect(identity, k, cfg.tau, cfg.restarts, rng::derive_seed(cfg.seed, Purpose::kGeneric, 0));

    std::vector<Cell> cells;
    for (double beta : cfg.beta_grid) cells.push_back({net.n, net.L, "beta", beta});

    const int reps = cfg.replications;
    const Index tasks = static_cast<Index>(cells.size()) * reps;
    std::vector<ReplicationRow> rows(static_cast<std::size_t>(tasks));

#pragma omp parallel for schedule(dynamic)
    for (Index task = 0; task < tasks; ++task) {
        const Index cell_idx = task / reps;
        const int rep = static_cast<int>(task % reps);
        const Cell& cell = cells[static_cast<std::size_t>(cell_idx)];
        ReplicationRow& row = rows[static_cast<std::size_t>(task)];
        row.n = cell.n;
        row.l = cell.l;
        row.k = k;
        row.param_name = cell.param_name;
        row.param_value = cell.param_value;
        row.replication = rep + 1;
        const std::uint64_t rep_seed =
            rng::derive_seed(cfg.seed, Purpose::kReplication,
                             rng::pack2(static_cast<std::uint64_t>(cell_idx),
                                        static_cast<std::uint64_t>(rep)));
        try {
            const PrivacyProfile profile = cell_profile(ExperimentId::kFlipSweep, cell, rep_seed);
            const MultiLayerNetwork flipped = flip_network(net, flip_matrix(profile), rep_seed);
            const DebiasedTensor deb = debias(flipped, profile);
            const DetectionResult det = detect(deb, k, cfg.tau, cfg.restarts, rep_seed);
            row.error = hamming_error(det.labels, reference.labels, k);
        } catch (const std::exception& e) {
            row.error = std::numeric_limits<double>::quiet_NaN();
            row.message = e.what();
        }
    }

    ExperimentTable table;
    table.id = cfg.id;
    table.rows = std::move(rows);
    return table;
}

ExperimentTable run_experiment(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.apply_defaults();
    switch (cfg.id) {
        case ExperimentId::kExample1: return run_example1(cfg);
        case ExperimentId::kExample2: return run_example2(cfg);
        case ExperimentId::kExample3: return run_example3(cfg);
        case ExperimentId::kCustom: return run_uniform_eps_sweep(cfg);
        case ExperimentId::kFlipSweep: {
            const Synthetic syn = generate_synthetic(cfg.n_grid.front(), cfg.k, cfg.l_grid.front(),
                                                     rng::derive_seed(cfg.seed, Purpose::kGeneric, 1));
            return run_flip_sweep(cfg, syn.network, cfg.k);
        }
    }
    throw std::logic_error("run_experiment: unreachable");
}

void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentTable& table) {
    if (cfg.out_dir.empty()) throw std::invalid_argument("write_experiment_outputs: no out dir");
    std::filesystem::create_directories(cfg.out_dir);
    const std::string base = cfg.out_dir + "/" + experiment_name(table.id);
    {
        std::ofstream out(base + "_replications.csv");
        if (!out) throw std::runtime_error(base + "_replications.csv: cannot open");
        out << table.to_csv();
    }
    {
        std::ofstream out(base + "_summary.csv");
        if (!out) throw std::runtime_error(base + "_summary.csv: cannot open");
        out << table.summary_csv();
    }
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman: need two equal-length series");
    const auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace mlpriv
