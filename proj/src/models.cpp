#include "spatialsim/models.hpp"

#include <cmath>
#include <stdexcept>

namespace spatialsim {

namespace {

constexpr int kEdgeOutDim = 20;  // E' width (input edge width preserved)
constexpr int kNodeOutDim = 10;  // X' width (input node width preserved)

Matrix init_weight(int in_dim, int out_dim, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    Matrix w(in_dim, out_dim);
    for (int i = 0; i < in_dim; ++i) {
        for (int j = 0; j < out_dim; ++j) w(i, j) = rng.uniform(-bound, bound);
    }
    return w;
}

MlpBlock make_mlp(ParamStore& store, const std::string& prefix, int in_dim, int hidden,
                  int depth, int out_dim, Rng& rng) {
    MlpBlock mlp;
    int width = in_dim;
    for (int layer = 0; layer <= depth; ++layer) {
        const int next = layer == depth ? out_dim : hidden;
        const std::string tag = prefix + "." + std::to_string(layer);
        mlp.w.push_back(store.create(tag + ".w", init_weight(width, next, rng)));
        mlp.b.push_back(store.create(tag + ".b", Matrix(1, next)));
        width = next;
    }
    return mlp;
}

PassBlocks make_pass(ParamStore& store, const std::string& prefix, const ModelConfig& cfg,
                     int pass, Rng& rng) {
    // Pass 1 consumes the raw graph (u is the 10-wide feature mean); later
    // passes consume the previous pass's E'/X'/u' widths.
    const int u_in = pass == 0 ? kFeatureDim : cfg.d_u;
    PassBlocks blocks;
    switch (cfg.layer_kind) {
        case LayerKind::mpgnn:
            blocks.mlp_e = make_mlp(store, prefix + ".mlp_e",
                                    2 * kNodeOutDim + kEdgeOutDim + u_in, cfg.h, cfg.d,
                                    kEdgeOutDim, rng);
            blocks.mlp_x = make_mlp(store, prefix + ".mlp_x", kNodeOutDim + kEdgeOutDim + u_in,
                                    cfg.h, cfg.d, kNodeOutDim, rng);
            blocks.mlp_u = make_mlp(store, prefix + ".mlp_u", kNodeOutDim + u_in, cfg.h, cfg.d,
                                    cfg.d_u, rng);
            break;
        case LayerKind::rds:
            blocks.mlp_x = make_mlp(store, prefix + ".mlp_x", kNodeOutDim + u_in, cfg.h, cfg.d,
                                    kNodeOutDim, rng);
            blocks.mlp_u = make_mlp(store, prefix + ".mlp_u", kNodeOutDim + u_in, cfg.h, cfg.d,
                                    cfg.d_u, rng);
            break;
        case LayerKind::deepset:
            blocks.mlp_x = make_mlp(store, prefix + ".mlp_x", kNodeOutDim, cfg.h, cfg.d,
                                    cfg.d_u, rng);
            break;
        case LayerKind::mlp:
            throw std::logic_error("make_pass: baseline has no graph passes");
    }
    return blocks;
}

std::vector<PassBlocks> make_tower(ParamStore& store, const std::string& prefix,
                                   const ModelConfig& cfg, Rng& rng) {
    std::vector<PassBlocks> tower;
    for (int pass = 0; pass < cfg.n_passes; ++pass) {
        tower.push_back(make_pass(store, prefix + ".pass" + std::to_string(pass), cfg, pass, rng));
    }
    return tower;
}

int baseline_hidden_width(const ModelConfig& cfg) {
    const double mean_n = 0.5 * (cfg.n_min + cfg.n_max);
    const double factor = cfg.task == TaskKind::comparison ? 2.0 : 1.0;
    return static_cast<int>(std::lround(16.0 * mean_n * factor));
}

int baseline_input_width(const ModelConfig& cfg) {
    const int per_config = cfg.n_max * kFeatureDim;
    return cfg.task == TaskKind::comparison ? 2 * per_config : per_config;
}

void write_flat(Matrix& flat, int row, int slot_base, const Configuration& config) {
    for (std::size_t i = 0; i < config.objects.size(); ++i) {
        const FeatureVector f = feature_vector(config.objects[i]);
        const int base = slot_base + static_cast<int>(i) * kFeatureDim;
        for (int c = 0; c < kFeatureDim; ++c) flat(row, base + c) = f[static_cast<std::size_t>(c)];
    }
}

}  // namespace

std::string layer_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::mpgnn: return "mpgnn";
        case LayerKind::rds: return "rds";
        case LayerKind::deepset: return "deepset";
        case LayerKind::mlp: return "mlp";
    }
    throw std::invalid_argument("unknown layer kind");
}

LayerKind layer_from_name(const std::string& name) {
    if (name == "mpgnn") return LayerKind::mpgnn;
    if (name == "rds") return LayerKind::rds;
    if (name == "deepset") return LayerKind::deepset;
    if (name == "mlp") return LayerKind::mlp;
    throw std::invalid_argument("unknown layer kind: " + name);
}

ModelConfig default_config(LayerKind kind, TaskKind task, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max) throw std::invalid_argument("invalid n_obj range");
    ModelConfig cfg;
    cfg.layer_kind = kind;
    cfg.task = task;
    cfg.n_min = n_min;
    cfg.n_max = n_max;
    switch (kind) {
        case LayerKind::mpgnn: cfg.d = 1; break;
        case LayerKind::rds: cfg.d = 2; break;
        case LayerKind::deepset: cfg.d = 4; break;
        case LayerKind::mlp: cfg.d = 2; break;
    }
    return cfg;
}

Model build_model(const ModelConfig& config, std::uint64_t seed) {
    if (config.h < 1 || config.d < 1 || config.d_u < 1 || config.n_passes < 1)
        throw std::invalid_argument("model dims must be >= 1");
    Model model;
    model.config = config;
    Rng rng(seed);
    if (config.layer_kind == LayerKind::mlp) {
        model.mlp_flat = make_mlp(model.params, "flat", baseline_input_width(config),
                                  baseline_hidden_width(config), config.d, 2, rng);
        return model;
    }
    model.tower1 = make_tower(model.params, "t1", config, rng);
    int head_in = config.d_u;
    if (config.task == TaskKind::comparison) {
        model.tower2 = make_tower(model.params, "t2", config, rng);
        head_in = 2 * config.d_u;
    }
    model.mlp_out = make_mlp(model.params, "out", head_in, config.h, config.d, 2, rng);
    return model;
}

std::size_t count_params(const Model& model) { return model.params.count_scalars(); }

Var apply_mlp(const MlpBlock& mlp, const Var& x) {
    Var h = x;
    for (std::size_t layer = 0; layer < mlp.w.size(); ++layer) {
        h = add(matmul(h, mlp.w[layer]), mlp.b[layer]);
        if (layer + 1 < mlp.w.size()) h = relu(h);
    }
    return h;
}

Var tower_forward(const Model& model, const std::vector<PassBlocks>& tower,
                  const GraphBatch& batch) {
    Var x = constant(batch.x);
    Var e = constant(batch.e);
    Var u = constant(batch.u);
    for (const PassBlocks& blocks : tower) {
        switch (model.config.layer_kind) {
            case LayerKind::mpgnn: {
                Var u_edge = gather_rows(u, batch.edge_graph);
                Var e_in = concat({gather_rows(x, batch.senders),
                                   gather_rows(x, batch.receivers), e, u_edge});
                e = apply_mlp(blocks.mlp_e, e_in);
                Var incoming = segment_sum(e, batch.receivers, batch.total_nodes());
                Var u_node = gather_rows(u, batch.node_graph);
                x = apply_mlp(blocks.mlp_x, concat({x, incoming, u_node}));
                Var node_sum = segment_sum(x, batch.node_graph, batch.n_graphs);
                u = apply_mlp(blocks.mlp_u, concat({node_sum, u}));
                break;
            }
            case LayerKind::rds: {
                Var u_node = gather_rows(u, batch.node_graph);
                x = apply_mlp(blocks.mlp_x, concat({x, u_node}));
                Var node_sum = segment_sum(x, batch.node_graph, batch.n_graphs);
                u = apply_mlp(blocks.mlp_u, concat({node_sum, u}));
                break;
            }
            case LayerKind::deepset: {
                x = apply_mlp(blocks.mlp_x, x);
                u = segment_sum(x, batch.node_graph, batch.n_graphs);
                break;
            }
            case LayerKind::mlp:
                throw std::logic_error("tower_forward: baseline has no graph passes");
        }
    }
    return u;
}

Var classify(const Model& model, const GraphBatch& batch) {
    if (model.config.task != TaskKind::identification)
        throw std::invalid_argument("classify: model is not an identification model");
    return apply_mlp(model.mlp_out, tower_forward(model, model.tower1, batch));
}

Var dim_forward(const Model& model, const GraphBatch& g1, const GraphBatch& g2) {
    if (model.config.task != TaskKind::comparison)
        throw std::invalid_argument("dim_forward: model is not a comparison model");
    if (g1.n_graphs != g2.n_graphs)
        throw std::invalid_argument("dim_forward: mismatched batch sizes");
    Var u1 = tower_forward(model, model.tower1, g1);
    Var u2 = tower_forward(model, model.tower2, g2);
    return apply_mlp(model.mlp_out, concat({u1, u2}));
}

Var mlp_baseline_forward(const Model& model, const Matrix& flat) {
    if (model.config.layer_kind != LayerKind::mlp)
        throw std::invalid_argument("mlp_baseline_forward: model is not the MLP baseline");
    const int want = baseline_input_width(model.config);
    if (flat.cols() != want)
        throw std::invalid_argument("mlp_baseline_forward: input width " +
                                    std::to_string(flat.cols()) + ", expected " +
                                    std::to_string(want));
    return apply_mlp(model.mlp_flat, constant(flat));
}

Matrix flatten_samples(const std::vector<const Sample*>& samples, const ModelConfig& config) {
    Matrix flat(static_cast<int>(samples.size()), baseline_input_width(config));
    const int block = config.n_max * kFeatureDim;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Sample& sample = *samples[i];
        if (static_cast<int>(sample.first.size()) > config.n_max ||
            static_cast<int>(sample.second.size()) > config.n_max)
            throw std::invalid_argument("flatten_samples: configuration exceeds padded width");
        write_flat(flat, static_cast<int>(i), 0, sample.first);
        if (config.task == TaskKind::comparison)
            write_flat(flat, static_cast<int>(i), block, sample.second);
    }
    return flat;
}

Var forward_samples(const Model& model, const std::vector<const Sample*>& samples) {
    if (samples.empty()) throw std::invalid_argument("forward_samples: empty batch");
    if (model.config.layer_kind == LayerKind::mlp)
        return mlp_baseline_forward(model, flatten_samples(samples, model.config));
    std::vector<Graph> first;
    first.reserve(samples.size());
    for (const Sample* s : samples) first.push_back(build_graph(s->first));
    if (model.config.task == TaskKind::identification)
        return classify(model, batch_graphs(first));
    std::vector<Graph> second;
    second.reserve(samples.size());
    for (const Sample* s : samples) second.push_back(build_graph(s->second));
    return dim_forward(model, batch_graphs(first), batch_graphs(second));
}

}  // namespace spatialsim
