#include "spatialsim/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "spatialsim/tensor.hpp"

namespace spatialsim {

namespace {

constexpr int kEvalBatch = 256;
constexpr std::uint64_t kShuffleTag = 0x5348554646ULL;  // substream for epoch shuffles

void check_task(const Model& model, const Dataset& dataset, const char* where) {
    if (model.config.task != dataset.meta.task)
        throw std::invalid_argument(std::string(where) + ": model expects " +
                                    task_name(model.config.task) + " data, got " +
                                    task_name(dataset.meta.task));
}

std::vector<const Sample*> batch_pointers(const Dataset& dataset, const std::vector<int>& order,
                                          std::size_t begin, std::size_t end) {
    std::vector<const Sample*> batch;
    batch.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i)
        batch.push_back(&dataset.samples[static_cast<std::size_t>(order[i])]);
    return batch;
}

struct Snapshot {
    std::vector<Matrix> values;
};

Snapshot take_snapshot(const Model& model) {
    Snapshot snap;
    for (const ParamStore::Entry& entry : model.params.entries())
        snap.values.push_back(entry.tensor->value);
    return snap;
}

void restore_snapshot(Model& model, const Snapshot& snap) {
    auto& entries = model.params.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].tensor->value = snap.values[i];
}

// One stage of mini-batch training; appends per-epoch stats to the report and
// keeps the best-valid snapshot up to date.
void run_stage(Model& model, const Dataset& train_set, const Dataset& valid_set,
               const TrainSpec& spec, int epochs, int stage, double stage_theta_max,
               Rng& shuffle_rng, RunReport& report, Snapshot& best, double& best_valid) {
    const int n = static_cast<int>(train_set.samples.size());
    if (n == 0) throw std::invalid_argument("train: empty training set");
    const int per_epoch = spec.cycle_to > 0 ? spec.cycle_to : n;

    std::vector<int> base(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i)] = i;

    for (int epoch = 0; epoch < epochs; ++epoch) {
        // Cycle independently shuffled copies until the epoch quota is met.
        std::vector<int> order;
        order.reserve(static_cast<std::size_t>(per_epoch));
        while (static_cast<int>(order.size()) < per_epoch) {
            shuffle_rng.shuffle(base);
            const int take = std::min(n, per_epoch - static_cast<int>(order.size()));
            order.insert(order.end(), base.begin(), base.begin() + take);
        }

        double loss_sum = 0.0;
        int correct = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += spec.batch_size) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(spec.batch_size));
            const auto batch = batch_pointers(train_set, order, begin, end);
            std::vector<int> labels;
            labels.reserve(batch.size());
            for (const Sample* s : batch) labels.push_back(s->label);

            Var logits = forward_samples(model, batch);
            Var loss = softmax_cross_entropy(logits, labels);
            backward(loss);
            adam_step(model.params, spec.lr);

            loss_sum += loss->value(0, 0) * static_cast<double>(batch.size());
            const std::vector<int> preds = argmax_rows(logits->value);
            for (std::size_t i = 0; i < preds.size(); ++i)
                correct += preds[i] == labels[i] ? 1 : 0;
        }

        EpochStats stats;
        stats.stage = stage;
        stats.stage_theta_max = stage_theta_max;
        stats.train_loss = loss_sum / static_cast<double>(order.size());
        stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
        stats.valid_accuracy = evaluate(model, valid_set);
        report.epochs.push_back(stats);

        if (stats.valid_accuracy > best_valid) {
            best_valid = stats.valid_accuracy;
            best = take_snapshot(model);
        }
    }
}

RunReport finish(Model& model, const Dataset* test, const TrainSpec& spec, RunReport report,
                 const Snapshot& best, double best_valid,
                 std::chrono::steady_clock::time_point start) {
    if (spec.selection == Selection::best_valid && best_valid >= 0.0 && !best.values.empty())
        restore_snapshot(model, best);
    if (test != nullptr) report.test_accuracy = evaluate(model, *test);
    report.seed = spec.seed;
    report.model_hash = params_hash(model.params);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace

double evaluate(const Model& model, const Dataset& dataset) {
    check_task(model, dataset, "evaluate");
    const std::vector<int> preds = predict(model, dataset);
    int correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        correct += preds[i] == dataset.samples[i].label ? 1 : 0;
    return dataset.samples.empty() ? 0.0
                                   : static_cast<double>(correct) /
                                         static_cast<double>(dataset.samples.size());
}

std::vector<int> predict(const Model& model, const Dataset& dataset) {
    check_task(model, dataset, "predict");
    std::vector<int> preds;
    preds.reserve(dataset.samples.size());
    for (std::size_t begin = 0; begin < dataset.samples.size(); begin += kEvalBatch) {
        const std::size_t end = std::min(dataset.samples.size(),
                                         begin + static_cast<std::size_t>(kEvalBatch));
        std::vector<const Sample*> batch;
        batch.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) batch.push_back(&dataset.samples[i]);
        Var logits = forward_samples(model, batch);
        for (int p : argmax_rows(logits->value)) preds.push_back(p);
    }
    return preds;
}

RunReport train(Model& model, const Dataset& train_set, const Dataset& valid_set,
                const Dataset* test, const TrainSpec& spec) {
    if (spec.epochs < 0 || spec.batch_size < 1 || spec.lr <= 0.0)
        throw std::invalid_argument("train: invalid spec");
    check_task(model, train_set, "train");
    check_task(model, valid_set, "train");
    const auto start = std::chrono::steady_clock::now();

    Rng shuffle_rng(part_seed(spec.seed, kShuffleTag));
    RunReport report;
    Snapshot best = take_snapshot(model);
    double best_valid = -1.0;
    run_stage(model, train_set, valid_set, spec, spec.epochs, 0, train_set.meta.theta_max,
              shuffle_rng, report, best, best_valid);
    return finish(model, test, spec, std::move(report), best, best_valid, start);
}

RunReport train_curriculum(Model& model, const std::array<Dataset, kCurriculumStages>& stages,
                           const Dataset& valid_set, const Dataset* test, const TrainSpec& spec) {
    if (spec.stage_epochs < 1 || spec.batch_size < 1 || spec.lr <= 0.0)
        throw std::invalid_argument("train_curriculum: invalid spec");
    for (const Dataset& stage : stages) check_task(model, stage, "train_curriculum");
    check_task(model, valid_set, "train_curriculum");
    for (std::size_t k = 1; k < stages.size(); ++k) {
        if (stages[k].meta.theta_max <= stages[k - 1].meta.theta_max)
            throw std::invalid_argument("train_curriculum: stages must increase in theta_max");
    }
    const auto start = std::chrono::steady_clock::now();

    Rng shuffle_rng(part_seed(spec.seed, kShuffleTag));
    RunReport report;
    Snapshot best = take_snapshot(model);
    double best_valid = -1.0;
    for (std::size_t k = 0; k < stages.size(); ++k) {
        run_stage(model, stages[k], valid_set, spec, spec.stage_epochs, static_cast<int>(k) + 1,
                  stages[k].meta.theta_max, shuffle_rng, report, best, best_valid);
    }
    return finish(model, test, spec, std::move(report), best, best_valid, start);
}

TableCell aggregate(const std::vector<double>& values) {
    TableCell cell;
    cell.values = values;
    if (values.empty()) return cell;
    for (double v : values) cell.mean += v;
    cell.mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - cell.mean) * (v - cell.mean);
    cell.stddev = std::sqrt(ss / static_cast<double>(values.size()));
    return cell;
}

MatrixTable run_matrix(const std::vector<LayerKind>& models,
                       const std::vector<MatrixGroup>& groups,
                       const std::vector<std::uint64_t>& seeds,
                       const std::function<double(LayerKind, int, std::uint64_t)>& run) {
    if (seeds.empty()) throw std::invalid_argument("run_matrix: need at least one seed");
    MatrixTable table;
    for (LayerKind kind : models) table.row_names.push_back(layer_name(kind));
    for (const MatrixGroup& group : groups) table.col_names.push_back(group.name);
    table.cells.resize(models.size());
    for (std::size_t m = 0; m < models.size(); ++m) {
        for (const MatrixGroup& group : groups) {
            std::vector<double> values;
            for (int id : group.dataset_ids) {
                for (std::uint64_t seed : seeds) values.push_back(run(models[m], id, seed));
            }
            table.cells[m].push_back(aggregate(values));
        }
    }
    return table;
}

std::string report_text(const RunReport& report) {
    std::string out;
    char buf[256];
    for (std::size_t i = 0; i < report.epochs.size(); ++i) {
        const EpochStats& e = report.epochs[i];
        std::snprintf(buf, sizeof(buf),
                      "epoch=%zu stage=%d theta_max=%.6f train_loss=%.6f train_acc=%.4f "
                      "valid_acc=%.4f\n",
                      i + 1, e.stage, e.stage_theta_max, e.train_loss, e.train_accuracy,
                      e.valid_accuracy);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "summary: epochs=%zu test_acc=%.4f wall_s=%.1f seed=%llu hash=%016llx\n",
                  report.epochs.size(), report.test_accuracy, report.wall_seconds,
                  static_cast<unsigned long long>(report.seed),
                  static_cast<unsigned long long>(report.model_hash));
    out += buf;
    return out;
}

std::string table_text(const MatrixTable& table) {
    std::string out = "model";
    for (const std::string& col : table.col_names) out += "\t" + col;
    out += "\n";
    char buf[64];
    for (std::size_t m = 0; m < table.row_names.size(); ++m) {
        out += table.row_names[m];
        for (const TableCell& cell : table.cells[m]) {
            std::snprintf(buf, sizeof(buf), "\t%.3f +- %.3f", cell.mean, cell.stddev);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace spatialsim
