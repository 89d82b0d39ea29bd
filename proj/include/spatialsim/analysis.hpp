#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "spatialsim/train.hpp"

namespace spatialsim {

// ---------------------------------------------------------------------------
// Decision heatmaps

struct Heatmap {
    Matrix grid;  // grid(r, c) = H with the object at the center of cell (r, c)
    int resolution = 0;
    double extent = kWorldSide;  // world square [0, extent]^2
    int object_index = 0;
    double star_x = 0.0, star_y = 0.0;  // original position of the moved object
    int star_row = 0, star_col = 0;
};

// H = C_plus - C_minus of the model with config.objects[object_index] moved to
// each cell center; row r maps to y, column c to x. The star cell holds H of
// the unmodified input instead. Identification models see the moved
// configuration directly; comparison models see (config, moved copy).
Heatmap make_heatmap(const Model& model, const Configuration& config, int object_index,
                     int resolution);

// H of the unmodified input (comparison: config against an exact copy).
double model_h(const Model& model, const Configuration& config);
// H with one object displaced to (x, y); the cell primitive behind the grid.
double model_h_moved(const Model& model, const Configuration& config, int object_index,
                     double x, double y);

void write_heatmap_text(const std::string& path, const Heatmap& hm);
// Uncompressed binary PPM with a blue-white-red ramp centered at H = 0.
void write_heatmap_ppm(const std::string& path, const Heatmap& hm);

// ---------------------------------------------------------------------------
// Experiment drivers

struct ExperimentScale {
    std::string name;
    int seeds = 3;
    int epochs = 20;
    int stage_epochs = 5;
    int batch_size = 128;
    double lr = 1e-3;

    int ident_train = 10000, ident_eval = 5000;
    // Table 1 groups; empty groups are skipped.
    std::vector<int> ident_low, ident_medium, ident_high;

    int comp_train = 10000, comp_eval = 5000;  // per curriculum stage
    std::vector<std::pair<int, int>> comp_ranges;

    std::vector<LayerKind> table_models;

    std::vector<std::pair<int, int>> gen_train_ranges;
    std::vector<std::pair<int, int>> gen_test_ranges;
    std::vector<LayerKind> gen_models;

    std::vector<LayerKind> sweep_models;
    std::vector<int> ident_sweep_sizes;
    std::vector<int> comp_sweep_sizes;

    std::vector<int> distractor_ident_ns;
    std::pair<int, int> distractor_comp_range{3, 8};
    int nd_max = 3;
    std::vector<LayerKind> distractor_models;

    int preset_n = 5;
    int preset_train = 4000, preset_eval = 2000;
    std::vector<LayerKind> preset_models;
};

ExperimentScale desk_scale();
ExperimentScale paper_scale();
ExperimentScale scale_by_name(const std::string& name);

using ProgressFn = std::function<void(const std::string&)>;

// First `size` samples; label balance is preserved for even sizes because
// generated datasets alternate labels.
Dataset truncate_dataset(const Dataset& dataset, int size);

struct RunResult {
    double test_accuracy = 0.0;
    RunReport report;
};

// Build + train + test one model on one bundle (comparison runs the
// curriculum). The model seed is derived from spec.seed.
RunResult run_identification(LayerKind kind, const IdentificationBundle& bundle,
                             const TrainSpec& spec);
RunResult run_comparison(LayerKind kind, const ComparisonBundle& bundle, const TrainSpec& spec);

// Rows: models. Columns: n_obj groups (Table 1) or ranges (Table 2).
MatrixTable bench_table1(const ExperimentScale& scale, std::uint64_t seed, const ProgressFn& log);
MatrixTable bench_table2(const ExperimentScale& scale, std::uint64_t seed, const ProgressFn& log);

struct GenMatrixResult {
    std::vector<LayerKind> models;
    std::vector<std::string> train_names;
    std::vector<std::string> test_names;
    // cells[model][train_range][test_range]
    std::vector<std::vector<std::vector<TableCell>>> cells;
};

GenMatrixResult bench_gen_matrix(const ExperimentScale& scale, std::uint64_t seed,
                                 const ProgressFn& log);
std::string gen_matrix_text(const GenMatrixResult& result);

struct SweepResult {
    LayerKind model = LayerKind::mpgnn;
    TaskKind task = TaskKind::identification;
    std::vector<int> sizes;
    std::vector<TableCell> cells;
};

std::vector<SweepResult> bench_sweep(const ExperimentScale& scale, std::uint64_t seed,
                                     const ProgressFn& log);
std::string sweep_text(const std::vector<SweepResult>& results);

// Rows: models. Columns: identification, comparison (aggregated over n_d).
MatrixTable bench_distractors(const ExperimentScale& scale, std::uint64_t seed,
                              const ProgressFn& log);
// Rows: models. Columns: presets.
MatrixTable bench_presets(const ExperimentScale& scale, std::uint64_t seed, const ProgressFn& log);

}  // namespace spatialsim
