#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spatialsim/dataset.hpp"
#include "spatialsim/datagen.hpp"
#include "spatialsim/models.hpp"

namespace spatialsim {

enum class Selection { best_valid, last };

struct TrainSpec {
    int epochs = 20;
    double lr = 1e-3;
    int batch_size = 128;
    std::uint64_t seed = 0;
    Selection selection = Selection::best_valid;
    int stage_epochs = 5;  // curriculum stages
    // When > 0, every epoch draws exactly this many sample indices by cycling
    // the (possibly truncated) training set, holding optimizer-step counts
    // constant across training-set sizes.
    int cycle_to = 0;
};

struct EpochStats {
    int stage = 0;  // curriculum stage, 0 for plain training
    double stage_theta_max = 0.0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double valid_accuracy = 0.0;
};

struct RunReport {
    std::vector<EpochStats> epochs;
    double test_accuracy = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t model_hash = 0;
};

double evaluate(const Model& model, const Dataset& dataset);
std::vector<int> predict(const Model& model, const Dataset& dataset);

// Mini-batch cross-entropy training with Adam; shuffling, initialization and
// everything downstream derive from spec.seed, so a rerun is bit-identical.
// test may be null (report.test_accuracy stays 0).
RunReport train(Model& model, const Dataset& train_set, const Dataset& valid_set,
                const Dataset* test, const TrainSpec& spec);

// Sequential training over the five rotation-curriculum stages with
// spec.stage_epochs epochs each; parameters carry across stages.
RunReport train_curriculum(Model& model, const std::array<Dataset, kCurriculumStages>& stages,
                           const Dataset& valid_set, const Dataset* test, const TrainSpec& spec);

struct TableCell {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> values;
};

TableCell aggregate(const std::vector<double>& values);

struct MatrixGroup {
    std::string name;
    std::vector<int> dataset_ids;
};

struct MatrixTable {
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;
    std::vector<std::vector<TableCell>> cells;  // [row][col]
};

// cells[m][g] aggregates run(models[m], id, seed) over the group's dataset ids
// and all seeds.
MatrixTable run_matrix(const std::vector<LayerKind>& models,
                       const std::vector<MatrixGroup>& groups,
                       const std::vector<std::uint64_t>& seeds,
                       const std::function<double(LayerKind, int, std::uint64_t)>& run);

// Line-delimited epoch records followed by a human-readable summary.
std::string report_text(const RunReport& report);
std::string table_text(const MatrixTable& table);

}  // namespace spatialsim
