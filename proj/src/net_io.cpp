// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/net_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mlpriv {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

[[noreturn]] void parse_fail(const std::string& path, long line, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line << ": " << what;
    throw std::runtime_error(os.str());
}

// Line reader over plain or gzip files (gzread is transparent for both, but
// plain ifstream avoids the zlib detour for the common case).
class LineReader {
public:
    explicit LineReader(const std::string& path) : path_(path) {
        if (has_suffix(path, ".gz")) {
            gz_ = gzopen(path.c_str(), "rb");
            if (!gz_) throw std::runtime_error(path + ": cannot open");
        } else {
            stream_.open(path);
            if (!stream_) throw std::runtime_error(path + ": cannot open");
        }
    }
    ~LineReader() {
        if (gz_) gzclose(gz_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line) {
        ++line_no_;
        if (gz_) {
            line.clear();
            char buf[4096];
            for (;;) {
                if (gzgets(gz_, buf, sizeof(buf)) == nullptr) return !line.empty();
                line += buf;
                if (!line.empty() && line.back() == '\n') {
                    line.pop_back();
                    if (!line.empty() && line.back() == '\r') line.pop_back();
                    return true;
                }
            }
        }
        if (!std::getline(stream_, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    long line_no() const { return line_no_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream stream_;
    gzFile gz_ = nullptr;
    long line_no_ = 0;
};

class LineWriter {
public:
    explicit LineWriter(const std::string& path) {
        if (has_suffix(path, ".gz")) {
            gz_ = gzopen(path.c_str(), "wb");
            if (!gz_) throw std::runtime_error(path + ": cannot open for writing");
        } else {
            stream_.open(path);
            if (!stream_) throw std::runtime_error(path + ": cannot open for writing");
        }
    }
    ~LineWriter() {
        if (gz_) gzclose(gz_);
    }
    LineWriter(const LineWriter&) = delete;
    LineWriter& operator=(const LineWriter&) = delete;

    void write(const std::string& s) {
        if (gz_) {
            if (gzwrite(gz_, s.data(), static_cast<unsigned>(s.size())) !=
                static_cast<int>(s.size()))
                throw std::runtime_error("gzwrite failed");
        } else {
            stream_ << s;
        }
    }

private:
    std::ofstream stream_;
    gzFile gz_ = nullptr;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

LayeredEdgeList read_edgelist_file(const std::string& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) parse_fail(path, 1, "missing header");
    std::istringstream header(line);
    std::string kw_layers, kw_nodes;
    long long L = 0, n = 0;
    if (!(header >> kw_layers >> L >> kw_nodes >> n) || kw_layers != "layers" || kw_nodes != "nodes")
        parse_fail(path, reader.line_no(), "expected header 'layers L nodes n'");
    if (L < 1 || n < 1) parse_fail(path, reader.line_no(), "layer and node counts must be positive");

    LayeredEdgeList list;
    list.n = n;
    list.L = L;
    list.edges.resize(static_cast<std::size_t>(L));
    std::vector<std::set<std::pair<Index, Index>>> seen(static_cast<std::size_t>(L));
    while (reader.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long layer = 0, i = 0, j = 0;
        if (!(ls >> layer >> i >> j)) parse_fail(path, reader.line_no(), "expected 'layer i j'");
        std::string rest;
        if (ls >> rest) parse_fail(path, reader.line_no(), "trailing tokens after edge");
        if (layer < 1 || layer > L) parse_fail(path, reader.line_no(), "layer id out of range");
        if (i < 1 || i > n || j < 1 || j > n)
            parse_fail(path, reader.line_no(), "node id out of range");
        const Index lo = std::min(static_cast<Index>(i), static_cast<Index>(j));
        const Index hi = std::max(static_cast<Index>(i), static_cast<Index>(j));
        auto& layer_seen = seen[static_cast<std::size_t>(layer - 1)];
        if (!layer_seen.insert({lo, hi}).second)
            parse_fail(path, reader.line_no(), "duplicate edge within layer");
        list.edges[static_cast<std::size_t>(layer - 1)].push_back({lo, hi});
    }
    return list;
}

MultiLayerNetwork to_network(const LayeredEdgeList& list) {
    MultiLayerNetwork net;
    net.n = list.n;
    net.L = list.L;
    net.adjacency = Tensor3(list.n, list.n, list.L);
    for (Index l = 0; l < list.L; ++l)
        for (const auto& [i, j] : list.edges[static_cast<std::size_t>(l)]) {
            net.adjacency(i - 1, j - 1, l) = 1.0;
            net.adjacency(j - 1, i - 1, l) = 1.0;
        }
    return net;
}

LayeredEdgeList to_edgelist(const MultiLayerNetwork& net) {
    LayeredEdgeList list;
    list.n = net.n;
    list.L = net.L;
    list.edges.resize(static_cast<std::size_t>(net.L));
    for (Index l = 0; l < net.L; ++l)
        for (Index j = 0; j < net.n; ++j)
            for (Index i = 0; i <= j; ++i)
                if (net.adjacency(i, j, l) != 0.0)
                    list.edges[static_cast<std::size_t>(l)].push_back({i + 1, j + 1});
    return list;
}

MultiLayerNetwork read_layered_edgelist(const std::string& path) {
    return to_network(read_edgelist_file(path));
}

void write_layered_edgelist(const std::string& path, const MultiLayerNetwork& net) {
    const LayeredEdgeList list = to_edgelist(net);
    LineWriter out(path);
    std::ostringstream os;
    os << "layers " << list.L << " nodes " << list.n << "\n";
    for (Index l = 0; l < list.L; ++l)
        for (const auto& [i, j] : list.edges[static_cast<std::size_t>(l)])
            os << (l + 1) << " " << i << " " << j << "\n";
    out.write(os.str());
}

Tensor3 read_tensor3(const std::string& path) {
    if (has_suffix(path, ".t3b")) return read_tensor3_binary(path);
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) parse_fail(path, 1, "missing header");
    std::istringstream header(line);
    std::string kw;
    long long i1 = 0, i2 = 0, i3 = 0;
    if (!(header >> kw >> i1 >> i2 >> i3) || kw != "tensor3")
        parse_fail(path, reader.line_no(), "expected header 'tensor3 I1 I2 I3'");
    if (i1 < 1 || i2 < 1 || i3 < 1) parse_fail(path, reader.line_no(), "dims must be positive");
    Tensor3 t(i1, i2, i3);
    while (reader.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long i = 0, j = 0, l = 0;
        double value = 0.0;
        if (!(ls >> i >> j >> l >> value)) parse_fail(path, reader.line_no(), "expected 'i j l value'");
        if (i < 1 || i > i1 || j < 1 || j > i2 || l < 1 || l > i3)
            parse_fail(path, reader.line_no(), "index out of range");
        if (!std::isfinite(value)) parse_fail(path, reader.line_no(), "non-finite value");
        t(i - 1, j - 1, l - 1) = value;
    }
    return t;
}

void write_tensor3(const std::string& path, const Tensor3& t) {
    if (has_suffix(path, ".t3b")) {
        write_tensor3_binary(path, t);
        return;
    }
    LineWriter out(path);
    std::ostringstream os;
    os << "tensor3 " << t.dim(1) << " " << t.dim(2) << " " << t.dim(3) << "\n";
    for (Index l = 0; l < t.dim(3); ++l)
        for (Index j = 0; j < t.dim(2); ++j)
            for (Index i = 0; i < t.dim(1); ++i)
                if (t(i, j, l) != 0.0)
                    os << (i + 1) << " " << (j + 1) << " " << (l + 1) << " "
                       << fmt_double(t(i, j, l)) << "\n";
    out.write(os.str());
}

Tensor3 read_tensor3_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MLT3", 4) != 0)
        throw std::runtime_error(path + ": bad tensor3 binary magic");
    std::int64_t dims[3];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in || dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
        throw std::runtime_error(path + ": bad tensor3 binary dims");
    Tensor3 t(dims[0], dims[1], dims[2]);
    in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(sizeof(double)) * t.size());
    if (!in) throw std::runtime_error(path + ": truncated tensor3 binary payload");
    return t;
}

void write_tensor3_binary(const std::string& path, const Tensor3& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.write("MLT3", 4);
    const std::int64_t dims[3] = {t.dim(1), t.dim(2), t.dim(3)};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(sizeof(double)) * t.size());
    if (!out) throw std::runtime_error(path + ": write failed");
}

PrivacyProfile read_preferences(const std::string& path) {
    LineReader reader(path);
    std::string line;
    std::vector<std::pair<long long, double>> rows;
    while (reader.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long id = 0;
        double f = 0.0;
        if (!(ls >> id >> f)) parse_fail(path, reader.line_no(), "expected 'node_id f_value'");
        if (f < 0.0 || f > 1.0) parse_fail(path, reader.line_no(), "preference outside [0,1]");
        rows.push_back({id, f});
    }
    if (rows.empty()) parse_fail(path, 1, "empty preference file");
    const Index n = static_cast<Index>(rows.size());
    PrivacyProfile profile;
    profile.f = Vector::Constant(n, -1.0);
    for (const auto& [id, f] : rows) {
        if (id < 1 || id > n)
            throw std::runtime_error(path + ": node ids must be exactly 1.." + std::to_string(n));
        if (profile.f(id - 1) >= 0.0)
            throw std::runtime_error(path + ": duplicate node id " + std::to_string(id));
        profile.f(id - 1) = f;
    }
    return profile;
}

void write_preferences(const std::string& path, const PrivacyProfile& profile) {
    LineWriter out(path);
    std::ostringstream os;
    for (Index i = 0; i < profile.n(); ++i)
        os << (i + 1) << " " << fmt_double(profile.f(i)) << "\n";
    out.write(os.str());
}

std::vector<int> read_labels(const std::string& path) {
    LineReader reader(path);
    std::string line;
    std::vector<std::pair<long long, long long>> rows;
    while (reader.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long id = 0, label = 0;
        if (!(ls >> id >> label)) parse_fail(path, reader.line_no(), "expected 'node_id label'");
        if (label < 1) parse_fail(path, reader.line_no(), "labels are 1-based");
        rows.push_back({id, label});
    }
    if (rows.empty()) parse_fail(path, 1, "empty label file");
    const Index n = static_cast<Index>(rows.size());
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (const auto& [id, label] : rows) {
        if (id < 1 || id > n)
            throw std::runtime_error(path + ": node ids must be exactly 1.." + std::to_string(n));
        if (labels[static_cast<std::size_t>(id - 1)] >= 0)
            throw std::runtime_error(path + ": duplicate node id " + std::to_string(id));
        labels[static_cast<std::size_t>(id - 1)] = static_cast<int>(label - 1);
    }
    return labels;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
    LineWriter out(path);
    std::ostringstream os;
    for (std::size_t i = 0; i < labels.size(); ++i)
        os << (i + 1) << " " << (labels[i] + 1) << "\n";
    out.write(os.str());
}

GroundTruth read_ground_truth(const std::string& path) {
    LineReader reader(path);
    std::string line;
    std::vector<std::tuple<long long, long long, double>> rows;
    while (reader.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long id = 0, label = 0;
        double degree = 0.0;
        if (!(ls >> id >> label >> degree))
            parse_fail(path, reader.line_no(), "expected 'node_id community_label degree'");
        if (label < 1) parse_fail(path, reader.line_no(), "labels are 1-based");
        if (!(degree > 0.0)) parse_fail(path, reader.line_no(), "degree must be positive");
        rows.push_back({id, label, degree});
    }
    if (rows.empty()) parse_fail(path, 1, "empty ground-truth file");
    const Index n = static_cast<Index>(rows.size());
    GroundTruth gt;
    gt.labels.assign(static_cast<std::size_t>(n), -1);
    gt.degrees = Vector::Zero(n);
    for (const auto& [id, label, degree] : rows) {
        if (id < 1 || id > n)
            throw std::runtime_error(path + ": node ids must be exactly 1.." + std::to_string(n));
        if (gt.labels[static_cast<std::size_t>(id - 1)] >= 0)
            throw std::runtime_error(path + ": duplicate node id " + std::to_string(id));
        gt.labels[static_cast<std::size_t>(id - 1)] = static_cast<int>(label - 1);
        gt.degrees(id - 1) = degree;
        gt.k = std::max(gt.k, static_cast<Index>(label));
    }
    return gt;
}

void write_ground_truth(const std::string& path, const DcMsbmParams& params) {
    LineWriter out(path);
    std::ostringstream os;
    for (Index i = 0; i < params.n; ++i)
        os << (i + 1) << " " << (params.labels[static_cast<std::size_t>(i)] + 1) << " "
           << fmt_double(params.degrees(i)) << "\n";
    out.write(os.str());
}

void write_budget_csv(const std::string& path, const BudgetMatrix& budget) {
    LineWriter out(path);
    std::ostringstream os;
    for (Index i = 0; i < budget.eps.rows(); ++i) {
        for (Index j = 0; j < budget.eps.cols(); ++j) {
            if (j) os << ",";
            const double e = budget.eps(i, j);
            if (std::isinf(e))
                os << "inf";
            else
                os << fmt_double(e);
        }
        os << "\n";
    }
    out.write(os.str());
}

void write_scree_csv(const std::string& path, const ScreeReport& report) {
    LineWriter out(path);
    std::ostringstream os;
    os << "k,sigma\n";
    for (Index k = 0; k < report.singular_values.size(); ++k)
        os << (k + 1) << "," << fmt_double(report.singular_values(k)) << "\n";
    out.write(os.str());
}

namespace {

// Union-find; the BFS oracle in the tests is the independent counterpart.
class DisjointSets {
public:
    explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }
    Index find(Index a) {
        while (parent_[static_cast<std::size_t>(a)] != a) {
            parent_[static_cast<std::size_t>(a)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(a)])];
            a = parent_[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // smaller id becomes the root
        parent_[static_cast<std::size_t>(b)] = a;
    }

private:
    std::vector<Index> parent_;
};

}  // namespace

GiantComponentResult giant_component_intersection(const MultiLayerNetwork& net) {
    const Index n = net.n, L = net.L;
    std::vector<char> keep(static_cast<std::size_t>(n), 1);
    for (Index l = 0; l < L; ++l) {
        DisjointSets sets(n);
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < j; ++i)
                if (net.adjacency(i, j, l) != 0.0) sets.unite(i, j);

        std::vector<Index> size(static_cast<std::size_t>(n), 0);
        for (Index i = 0; i < n; ++i) ++size[static_cast<std::size_t>(sets.find(i))];
        // Roots are the smallest ids of their components, so scanning in id
        // order makes the smallest-id component win ties.
        Index best_root = 0, best_size = -1;
        for (Index i = 0; i < n; ++i)
            if (size[static_cast<std::size_t>(i)] > best_size) {
                best_size = size[static_cast<std::size_t>(i)];
                best_root = i;
            }
        for (Index i = 0; i < n; ++i)
            if (sets.find(i) != best_root) keep[static_cast<std::size_t>(i)] = 0;
    }

    GiantComponentResult out;
    for (Index i = 0; i < n; ++i)
        if (keep[static_cast<std::size_t>(i)]) out.nodes.push_back(i);

    const Index m = static_cast<Index>(out.nodes.size());
    out.sub.n = m;
    out.sub.L = L;
    if (m > 0) {
        out.sub.adjacency = Tensor3(m, m, L);
        for (Index l = 0; l < L; ++l)
            for (Index b = 0; b < m; ++b)
                for (Index a = 0; a < m; ++a)
                    out.sub.adjacency(a, b, l) =
                        net.adjacency(out.nodes[static_cast<std::size_t>(a)],
                                      out.nodes[static_cast<std::size_t>(b)], l);
    }
    return out;
}

}  // namespace mlpriv
