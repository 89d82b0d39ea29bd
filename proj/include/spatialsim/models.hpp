#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spatialsim/dataset.hpp"
#include "spatialsim/graph.hpp"
#include "spatialsim/optim.hpp"
#include "spatialsim/rng.hpp"
#include "spatialsim/tensor.hpp"

namespace spatialsim {

enum class LayerKind { mpgnn, rds, deepset, mlp };

std::string layer_name(LayerKind kind);
LayerKind layer_from_name(const std::string& name);

struct ModelConfig {
    LayerKind layer_kind = LayerKind::mpgnn;
    TaskKind task = TaskKind::identification;
    int h = 16;        // MLP hidden width inside the graph layers
    int d = 1;         // hidden-layer depth of every MLP block
    int d_u = 16;      // updated global width u'
    int n_passes = 1;  // N
    // Object-count range of the target datasets; drives the baseline's input
    // padding and hidden width (16 * mean n_obj, doubled for comparison).
    int n_min = 0;
    int n_max = 0;
};

// Depth defaults per layer kind: MPGNN 1, RDS 2, Deep Set 4, MLP baseline 2.
ModelConfig default_config(LayerKind kind, TaskKind task, int n_min, int n_max);

struct MlpBlock {
    std::vector<Var> w;
    std::vector<Var> b;
};

// One message-passing round's parameter blocks; unused blocks stay empty
// (RDS has no edge MLP, Deep Set has neither edge nor global MLP).
struct PassBlocks {
    MlpBlock mlp_e;
    MlpBlock mlp_x;
    MlpBlock mlp_u;
};

struct Model {
    ModelConfig config;
    ParamStore params;
    std::vector<PassBlocks> tower1;  // one entry per pass
    std::vector<PassBlocks> tower2;  // comparison only (independent weights)
    MlpBlock mlp_out;
    MlpBlock mlp_flat;  // MLP baseline
};

Model build_model(const ModelConfig& config, std::uint64_t seed);
std::size_t count_params(const Model& model);

// Hidden layers ReLU, final layer linear.
Var apply_mlp(const MlpBlock& mlp, const Var& x);

// Runs the configured layer for N passes and returns u' (n_graphs x d_u).
Var tower_forward(const Model& model, const std::vector<PassBlocks>& tower,
                  const GraphBatch& batch);

// Identification head: logits (n_graphs x 2).
Var classify(const Model& model, const GraphBatch& batch);
// Comparison head over two independent towers: logits (n_graphs x 2).
Var dim_forward(const Model& model, const GraphBatch& g1, const GraphBatch& g2);
// MLP baseline over pre-flattened inputs: logits (rows(flat) x 2).
Var mlp_baseline_forward(const Model& model, const Matrix& flat);

// Zero-padded flat encoding for the baseline: one object per 10-float slot,
// n_max slots per configuration (two blocks for comparison).
Matrix flatten_samples(const std::vector<const Sample*>& samples, const ModelConfig& config);

// Dispatches to the right forward for any model kind.
Var forward_samples(const Model& model, const std::vector<const Sample*>& samples);

}  // namespace spatialsim
