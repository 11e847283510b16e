// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/detection.hpp"
#include "mlpriv/model.hpp"
#include "mlpriv/privacy.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mlpriv {

// Undirected layered edge list with 1-based node ids.  Readers reject ids out
// of range and duplicate pairs (after canonicalizing i <= j) with a
// positional diagnostic.  Paths ending in ".gz" are transparently
// (de)compressed.
struct LayeredEdgeList {
    Index n = 0;
    Index L = 0;
    std::vector<std::vector<std::pair<Index, Index>>> edges;  // per layer, canonical i <= j
};

LayeredEdgeList read_edgelist_file(const std::string& path);
MultiLayerNetwork to_network(const LayeredEdgeList& list);
LayeredEdgeList to_edgelist(const MultiLayerNetwork& net);

// Format: header "layers L nodes n", then one "layer i j" line per edge.
MultiLayerNetwork read_layered_edgelist(const std::string& path);
void write_layered_edgelist(const std::string& path, const MultiLayerNetwork& net);

// Text tensor: header "tensor3 I1 I2 I3", then "i j l value" per nonzero
// (1-based).  Binary variant: magic "MLT3", three little-endian int64 dims,
// then I1*I2*I3 doubles in mode-1-fiber order; selected by the ".t3b"
// extension in read_tensor3/write_tensor3.
Tensor3 read_tensor3(const std::string& path);
void write_tensor3(const std::string& path, const Tensor3& t);
Tensor3 read_tensor3_binary(const std::string& path);
void write_tensor3_binary(const std::string& path, const Tensor3& t);

// One "node_id f_value" line per node, ids 1..n each exactly once.
PrivacyProfile read_preferences(const std::string& path);
void write_preferences(const std::string& path, const PrivacyProfile& profile);

// One "node_id label" line per node (labels 1-based on disk).
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);

// Ground truth: one "node_id community_label degree" line per node.
struct GroundTruth {
    std::vector<int> labels;  // 0-based
    Vector degrees;
    Index k = 0;  // max label
};
GroundTruth read_ground_truth(const std::string& path);
void write_ground_truth(const std::string& path, const DcMsbmParams& params);

// Budget matrix as CSV; +infinity serialized as the literal "inf".
void write_budget_csv(const std::string& path, const BudgetMatrix& budget);

// Scree report as CSV "k,sigma".
void write_scree_csv(const std::string& path, const ScreeReport& report);

struct GiantComponentResult {
    std::vector<Index> nodes;  // original 0-based ids kept, ascending
    MultiLayerNetwork sub;     // induced subnetwork on those nodes
};

// Nodes lying in the largest connected component of every layer
// simultaneously (ties between equal-size components go to the one containing
// the smallest node id), plus the induced subnetwork.  An empty intersection
// yields an empty node list and a zero-size network, not an error.
GiantComponentResult giant_component_intersection(const MultiLayerNetwork& net);

}  // namespace mlpriv
