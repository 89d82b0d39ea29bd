#pragma once

#include <vector>

#include "spatialsim/geometry.hpp"
#include "spatialsim/matrix.hpp"

namespace spatialsim {

// One or more configurations encoded as complete directed graphs (no self
// loops) and packed into a single node/edge table so segment operations can
// process a whole batch at once. Node and edge indices are global; node_graph
// and edge_graph map each row back to its graph.
struct GraphBatch {
    int n_graphs = 0;
    Matrix x;                       // (total_nodes, kFeatureDim)
    Matrix e;                       // (total_edges, 2 * kFeatureDim)
    std::vector<int> senders;       // per edge, global node index
    std::vector<int> receivers;     // per edge, global node index
    std::vector<int> node_graph;    // per node, owning graph index
    std::vector<int> edge_graph;    // per edge, owning graph index
    Matrix u;                       // (n_graphs, kFeatureDim) mean of node features

    int total_nodes() const { return x.rows(); }
    int total_edges() const { return e.rows(); }
};

using Graph = GraphBatch;

// Edges are enumerated sender-major: for each sender i in node order, all
// receivers j != i in node order. Edge features are [x_sender | x_receiver].
Graph build_graph(const Configuration& config);

GraphBatch batch_graphs(const std::vector<Graph>& graphs);
std::vector<Graph> unbatch_graphs(const GraphBatch& batch);

}  // namespace spatialsim
