#include "spatialsim/graph.hpp"

#include <stdexcept>

namespace spatialsim {

Graph build_graph(const Configuration& config) {
    const int n = static_cast<int>(config.size());
    if (n <= 0) throw std::invalid_argument("empty configuration");
    const int e = n * (n - 1);

    Graph g;
    g.n_graphs = 1;
    g.x = Matrix(n, kFeatureDim);
    g.e = Matrix(e, 2 * kFeatureDim);
    g.senders.reserve(static_cast<std::size_t>(e));
    g.receivers.reserve(static_cast<std::size_t>(e));
    g.node_graph.assign(static_cast<std::size_t>(n), 0);
    g.edge_graph.assign(static_cast<std::size_t>(e), 0);
    g.u = Matrix(1, kFeatureDim);

    for (int i = 0; i < n; ++i) {
        const FeatureVector f = feature_vector(config.objects[static_cast<std::size_t>(i)]);
        for (int c = 0; c < kFeatureDim; ++c) {
            g.x(i, c) = f[static_cast<std::size_t>(c)];
            g.u(0, c) += f[static_cast<std::size_t>(c)] / n;
        }
    }
    int row = 0;
    for (int s = 0; s < n; ++s) {
        for (int r = 0; r < n; ++r) {
            if (r == s) continue;
            g.senders.push_back(s);
            g.receivers.push_back(r);
            for (int c = 0; c < kFeatureDim; ++c) {
                g.e(row, c) = g.x(s, c);
                g.e(row, kFeatureDim + c) = g.x(r, c);
            }
            ++row;
        }
    }
    return g;
}

GraphBatch batch_graphs(const std::vector<Graph>& graphs) {
    if (graphs.empty()) throw std::invalid_argument("empty graph batch");
    int total_nodes = 0;
    int total_edges = 0;
    int total_graphs = 0;
    for (const Graph& g : graphs) {
        total_nodes += g.total_nodes();
        total_edges += g.total_edges();
        total_graphs += g.n_graphs;
    }

    GraphBatch batch;
    batch.n_graphs = total_graphs;
    batch.x = Matrix(total_nodes, kFeatureDim);
    batch.e = Matrix(total_edges, 2 * kFeatureDim);
    batch.u = Matrix(total_graphs, kFeatureDim);
    batch.senders.reserve(static_cast<std::size_t>(total_edges));
    batch.receivers.reserve(static_cast<std::size_t>(total_edges));
    batch.node_graph.reserve(static_cast<std::size_t>(total_nodes));
    batch.edge_graph.reserve(static_cast<std::size_t>(total_edges));

    int node_base = 0;
    int graph_base = 0;
    int node_row = 0;
    int edge_row = 0;
    for (const Graph& g : graphs) {
        for (int i = 0; i < g.total_nodes(); ++i, ++node_row) {
            for (int c = 0; c < kFeatureDim; ++c) batch.x(node_row, c) = g.x(i, c);
            batch.node_graph.push_back(graph_base + g.node_graph[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < g.total_edges(); ++i, ++edge_row) {
            for (int c = 0; c < 2 * kFeatureDim; ++c) batch.e(edge_row, c) = g.e(i, c);
            batch.senders.push_back(node_base + g.senders[static_cast<std::size_t>(i)]);
            batch.receivers.push_back(node_base + g.receivers[static_cast<std::size_t>(i)]);
            batch.edge_graph.push_back(graph_base + g.edge_graph[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < g.n_graphs; ++i) {
            for (int c = 0; c < kFeatureDim; ++c) batch.u(graph_base + i, c) = g.u(i, c);
        }
        node_base += g.total_nodes();
        graph_base += g.n_graphs;
    }
    return batch;
}

std::vector<Graph> unbatch_graphs(const GraphBatch& batch) {
    std::vector<Graph> out(static_cast<std::size_t>(batch.n_graphs));
    std::vector<int> node_count(static_cast<std::size_t>(batch.n_graphs), 0);
    std::vector<int> edge_count(static_cast<std::size_t>(batch.n_graphs), 0);
    for (int gi : batch.node_graph) ++node_count[static_cast<std::size_t>(gi)];
    for (int gi : batch.edge_graph) ++edge_count[static_cast<std::size_t>(gi)];

    std::vector<int> node_base(static_cast<std::size_t>(batch.n_graphs), 0);
    for (int g = 1; g < batch.n_graphs; ++g) {
        node_base[static_cast<std::size_t>(g)] =
            node_base[static_cast<std::size_t>(g - 1)] + node_count[static_cast<std::size_t>(g - 1)];
    }

    for (int g = 0; g < batch.n_graphs; ++g) {
        Graph& out_g = out[static_cast<std::size_t>(g)];
        out_g.n_graphs = 1;
        out_g.x = Matrix(node_count[static_cast<std::size_t>(g)], kFeatureDim);
        out_g.e = Matrix(edge_count[static_cast<std::size_t>(g)], 2 * kFeatureDim);
        out_g.u = Matrix(1, kFeatureDim);
        out_g.node_graph.assign(static_cast<std::size_t>(node_count[static_cast<std::size_t>(g)]), 0);
        out_g.edge_graph.assign(static_cast<std::size_t>(edge_count[static_cast<std::size_t>(g)]), 0);
        for (int c = 0; c < kFeatureDim; ++c) out_g.u(0, c) = batch.u(g, c);
    }

    std::vector<int> node_fill(static_cast<std::size_t>(batch.n_graphs), 0);
    for (int i = 0; i < batch.total_nodes(); ++i) {
        const int g = batch.node_graph[static_cast<std::size_t>(i)];
        Graph& out_g = out[static_cast<std::size_t>(g)];
        const int r = node_fill[static_cast<std::size_t>(g)]++;
        for (int c = 0; c < kFeatureDim; ++c) out_g.x(r, c) = batch.x(i, c);
    }
    std::vector<int> edge_fill(static_cast<std::size_t>(batch.n_graphs), 0);
    for (int i = 0; i < batch.total_edges(); ++i) {
        const int g = batch.edge_graph[static_cast<std::size_t>(i)];
        Graph& out_g = out[static_cast<std::size_t>(g)];
        const int r = edge_fill[static_cast<std::size_t>(g)]++;
        for (int c = 0; c < 2 * kFeatureDim; ++c) out_g.e(r, c) = batch.e(i, c);
        out_g.senders.push_back(batch.senders[static_cast<std::size_t>(i)] -
                                node_base[static_cast<std::size_t>(g)]);
        out_g.receivers.push_back(batch.receivers[static_cast<std::size_t>(i)] -
                                  node_base[static_cast<std::size_t>(g)]);
    }
    return out;
}

}  // namespace spatialsim
