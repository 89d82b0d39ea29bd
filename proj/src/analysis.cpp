#include "spatialsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "spatialsim/dataset_io.hpp"

namespace spatialsim {

namespace {

constexpr std::uint64_t kTagIdentData = 0x4944;
constexpr std::uint64_t kTagCompData = 0x4344;
constexpr std::uint64_t kTagDistractor = 0x4454;
constexpr std::uint64_t kTagPreset = 0x5054;
constexpr std::uint64_t kTagRun = 0x52554E;
constexpr std::uint64_t kTagModel = 0x4D4F44;

std::uint64_t run_seed(std::uint64_t seed, int k) {
    return part_seed(seed, kTagRun + static_cast<std::uint64_t>(k));
}

std::vector<std::uint64_t> run_seeds(std::uint64_t seed, int count) {
    std::vector<std::uint64_t> out;
    for (int k = 0; k < count; ++k) out.push_back(run_seed(seed, k));
    return out;
}

std::string range_name(const std::pair<int, int>& range) {
    return std::to_string(range.first) + "-" + std::to_string(range.second);
}

double h_from_logits(const Matrix& logits, int row) {
    return logits(row, 1) - logits(row, 0);
}

// Evaluates H for a batch of object placements in one forward pass.
std::vector<double> h_batch(const Model& model, const Configuration& config, int object_index,
                            const std::vector<std::pair<double, double>>& positions) {
    std::vector<Sample> moved(positions.size());
    std::vector<const Sample*> ptrs(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        Sample& s = moved[i];
        if (model.config.task == TaskKind::comparison) {
            s.first = config;
            s.second = config;
            s.second.objects[static_cast<std::size_t>(object_index)].x = positions[i].first;
            s.second.objects[static_cast<std::size_t>(object_index)].y = positions[i].second;
        } else {
            s.first = config;
            s.first.objects[static_cast<std::size_t>(object_index)].x = positions[i].first;
            s.first.objects[static_cast<std::size_t>(object_index)].y = positions[i].second;
        }
        ptrs[i] = &s;
    }
    Var logits = forward_samples(model, ptrs);
    std::vector<double> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        out[i] = h_from_logits(logits->value, static_cast<int>(i));
    return out;
}

TrainSpec spec_for(const ExperimentScale& scale, std::uint64_t seed) {
    TrainSpec spec;
    spec.epochs = scale.epochs;
    spec.stage_epochs = scale.stage_epochs;
    spec.batch_size = scale.batch_size;
    spec.lr = scale.lr;
    spec.seed = seed;
    return spec;
}

GenConfig ident_gen(const ExperimentScale& scale, std::uint64_t seed, int n) {
    GenConfig gen;
    gen.n_train = scale.ident_train;
    gen.n_eval = scale.ident_eval;
    gen.seed = part_seed(seed, kTagIdentData + (static_cast<std::uint64_t>(n) << 8));
    return gen;
}

GenConfig comp_gen(const ExperimentScale& scale, std::uint64_t seed, std::pair<int, int> range) {
    GenConfig gen;
    gen.n_train = scale.comp_train;
    gen.n_eval = scale.comp_eval;
    gen.seed = part_seed(seed, kTagCompData + (static_cast<std::uint64_t>(range.first) << 8) +
                                   (static_cast<std::uint64_t>(range.second) << 16));
    return gen;
}

std::string fmt(const char* format, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, args...);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Heatmaps

double model_h(const Model& model, const Configuration& config) {
    Sample sample;
    sample.first = config;
    if (model.config.task == TaskKind::comparison) sample.second = config;
    Var logits = forward_samples(model, {&sample});
    return h_from_logits(logits->value, 0);
}

double model_h_moved(const Model& model, const Configuration& config, int object_index,
                     double x, double y) {
    return h_batch(model, config, object_index, {{x, y}})[0];
}

Heatmap make_heatmap(const Model& model, const Configuration& config, int object_index,
                     int resolution) {
    if (object_index < 0 || object_index >= static_cast<int>(config.size()))
        throw std::invalid_argument("make_heatmap: object index " +
                                    std::to_string(object_index) + " out of range");
    if (resolution < 1) throw std::invalid_argument("make_heatmap: resolution must be >= 1");

    Heatmap hm;
    hm.resolution = resolution;
    hm.object_index = object_index;
    const ObjectSpec& obj = config.objects[static_cast<std::size_t>(object_index)];
    hm.star_x = obj.x;
    hm.star_y = obj.y;
    const double cell = hm.extent / resolution;
    auto clamp_cell = [resolution](double v) {
        return std::min(resolution - 1, std::max(0, static_cast<int>(v)));
    };
    hm.star_row = clamp_cell(hm.star_y / cell);
    hm.star_col = clamp_cell(hm.star_x / cell);

    hm.grid = Matrix(resolution, resolution);
    constexpr int kChunk = 256;
    std::vector<std::pair<double, double>> positions;
    std::vector<std::pair<int, int>> cells;
    auto flush = [&]() {
        if (positions.empty()) return;
        const std::vector<double> values = h_batch(model, config, object_index, positions);
        for (std::size_t i = 0; i < cells.size(); ++i)
            hm.grid(cells[i].first, cells[i].second) = values[i];
        positions.clear();
        cells.clear();
    };
    for (int r = 0; r < resolution; ++r) {
        for (int c = 0; c < resolution; ++c) {
            positions.emplace_back((c + 0.5) * cell, (r + 0.5) * cell);
            cells.emplace_back(r, c);
            if (static_cast<int>(positions.size()) == kChunk) flush();
        }
    }
    flush();
    hm.grid(hm.star_row, hm.star_col) = model_h(model, config);
    return hm;
}

void write_heatmap_text(const std::string& path, const Heatmap& hm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# heatmap resolution=" << hm.resolution << " extent=" << format_double(hm.extent)
        << " object=" << hm.object_index << " star_x=" << format_double(hm.star_x)
        << " star_y=" << format_double(hm.star_y) << "\n";
    for (int r = 0; r < hm.resolution; ++r) {
        for (int c = 0; c < hm.resolution; ++c) {
            if (c > 0) out << ' ';
            out << format_double(hm.grid(r, c));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_heatmap_ppm(const std::string& path, const Heatmap& hm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    double max_abs = 1e-12;
    for (int r = 0; r < hm.resolution; ++r) {
        for (int c = 0; c < hm.resolution; ++c)
            max_abs = std::max(max_abs, std::fabs(hm.grid(r, c)));
    }
    out << "P6\n" << hm.resolution << ' ' << hm.resolution << "\n255\n";
    // Row 0 of the grid is y=0; rasters draw top-down, so flip vertically.
    for (int r = hm.resolution - 1; r >= 0; --r) {
        for (int c = 0; c < hm.resolution; ++c) {
            const double t = hm.grid(r, c) / max_abs;  // [-1, 1]
            const double up = std::min(1.0, std::max(0.0, t));
            const double down = std::min(1.0, std::max(0.0, -t));
            const unsigned char rgb[3] = {
                static_cast<unsigned char>(255.0 * (1.0 - down)),
                static_cast<unsigned char>(255.0 * (1.0 - std::max(up, down))),
                static_cast<unsigned char>(255.0 * (1.0 - up)),
            };
            out.write(reinterpret_cast<const char*>(rgb), 3);
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Scales

ExperimentScale desk_scale() {
    ExperimentScale s;
    s.name = "desk";
    s.seeds = 3;
    s.ident_low = {5, 8};
    s.comp_ranges = {{3, 8}};
    s.table_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset, LayerKind::mlp};
    s.gen_train_ranges = {{3, 8}};
    s.gen_test_ranges = {{3, 8}, {9, 20}, {21, 30}};
    s.gen_models = {LayerKind::mpgnn, LayerKind::deepset};
    s.sweep_models = {LayerKind::mpgnn};
    s.ident_sweep_sizes = {10, 100, 1000, 10000};
    s.comp_sweep_sizes = {100, 1000, 10000};
    s.distractor_ident_ns = {5};
    s.distractor_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset};
    s.preset_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset};
    return s;
}

ExperimentScale paper_scale() {
    ExperimentScale s;
    s.name = "paper";
    s.seeds = 10;
    s.ident_train = 10000;
    s.ident_eval = 5000;
    for (int n = 3; n <= 8; ++n) s.ident_low.push_back(n);
    for (int n = 9; n <= 20; ++n) s.ident_medium.push_back(n);
    for (int n = 21; n <= 30; ++n) s.ident_high.push_back(n);
    s.comp_train = 100000;
    s.comp_eval = 10000;
    s.comp_ranges = {{3, 8}, {9, 20}, {21, 30}};
    s.table_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset, LayerKind::mlp};
    s.gen_train_ranges = {{3, 8}, {9, 20}, {21, 30}};
    s.gen_test_ranges = {{3, 8}, {9, 20}, {21, 30}};
    s.gen_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset};
    s.sweep_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset};
    s.ident_sweep_sizes = {10, 100, 1000, 10000};
    s.comp_sweep_sizes = {100, 1000, 10000, 100000};
    s.distractor_ident_ns = {3, 4, 5, 6, 7, 8};
    s.distractor_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset};
    s.preset_n = 5;
    s.preset_train = 10000;
    s.preset_eval = 5000;
    s.preset_models = {LayerKind::mpgnn, LayerKind::rds, LayerKind::deepset};
    return s;
}

ExperimentScale scale_by_name(const std::string& name) {
    if (name == "desk") return desk_scale();
    if (name == "paper") return paper_scale();
    throw std::invalid_argument("unknown scale: " + name + " (expected desk or paper)");
}

// ---------------------------------------------------------------------------
// Run helpers

Dataset truncate_dataset(const Dataset& dataset, int size) {
    if (size < 1 || size > static_cast<int>(dataset.samples.size()))
        throw std::invalid_argument("truncate_dataset: invalid size " + std::to_string(size));
    Dataset out;
    out.meta = dataset.meta;
    out.samples.assign(dataset.samples.begin(), dataset.samples.begin() + size);
    return out;
}

RunResult run_identification(LayerKind kind, const IdentificationBundle& bundle,
                             const TrainSpec& spec) {
    const DatasetMeta& meta = bundle.train.meta;
    Model model = build_model(default_config(kind, TaskKind::identification, meta.n_min,
                                             meta.n_max),
                              part_seed(spec.seed, kTagModel));
    RunResult result;
    result.report = train(model, bundle.train, bundle.valid, &bundle.test, spec);
    result.test_accuracy = result.report.test_accuracy;
    return result;
}

RunResult run_comparison(LayerKind kind, const ComparisonBundle& bundle, const TrainSpec& spec) {
    const DatasetMeta& meta = bundle.train.front().meta;
    Model model = build_model(default_config(kind, TaskKind::comparison, meta.n_min, meta.n_max),
                              part_seed(spec.seed, kTagModel));
    RunResult result;
    result.report = train_curriculum(model, bundle.train, bundle.valid, &bundle.test, spec);
    result.test_accuracy = result.report.test_accuracy;
    return result;
}

// ---------------------------------------------------------------------------
// Benches

MatrixTable bench_table1(const ExperimentScale& scale, std::uint64_t seed, const ProgressFn& log) {
    struct Group {
        std::string name;
        std::vector<int> ns;
    };
    std::vector<Group> groups;
    if (!scale.ident_low.empty()) groups.push_back({"low", scale.ident_low});
    if (!scale.ident_medium.empty()) groups.push_back({"medium", scale.ident_medium});
    if (!scale.ident_high.empty()) groups.push_back({"high", scale.ident_high});

    std::vector<int> all_ns;
    std::vector<MatrixGroup> matrix_groups;
    for (const Group& g : groups) {
        MatrixGroup mg;
        mg.name = g.name;
        for (int n : g.ns) {
            mg.dataset_ids.push_back(static_cast<int>(all_ns.size()));
            all_ns.push_back(n);
        }
        matrix_groups.push_back(mg);
    }

    std::vector<IdentificationBundle> bundles;
    for (int n : all_ns) bundles.push_back(gen_identification(n, ident_gen(scale, seed, n)));

    auto run = [&](LayerKind kind, int id, std::uint64_t run_seed_value) {
        const double acc =
            run_identification(kind, bundles[static_cast<std::size_t>(id)],
                               spec_for(scale, run_seed_value))
                .test_accuracy;
        log(fmt("table1 %s IDS_%d seed=%llu test_acc=%.4f", layer_name(kind).c_str(),
                all_ns[static_cast<std::size_t>(id)],
                static_cast<unsigned long long>(run_seed_value), acc));
        return acc;
    };
    return run_matrix(scale.table_models, matrix_groups, run_seeds(seed, scale.seeds), run);
}

MatrixTable bench_table2(const ExperimentScale& scale, std::uint64_t seed, const ProgressFn& log) {
    std::vector<MatrixGroup> groups;
    std::vector<ComparisonBundle> bundles;
    for (const auto& range : scale.comp_ranges) {
        groups.push_back({range_name(range), {static_cast<int>(bundles.size())}});
        bundles.push_back(
            gen_comparison_curriculum(range.first, range.second, comp_gen(scale, seed, range)));
    }
    auto run = [&](LayerKind kind, int id, std::uint64_t run_seed_value) {
        const double acc = run_comparison(kind, bundles[static_cast<std::size_t>(id)],
                                          spec_for(scale, run_seed_value))
                               .test_accuracy;
        log(fmt("table2 %s CDS_%s seed=%llu test_acc=%.4f", layer_name(kind).c_str(),
                groups[static_cast<std::size_t>(id)].name.c_str(),
                static_cast<unsigned long long>(run_seed_value), acc));
        return acc;
    };
    return run_matrix(scale.table_models, groups, run_seeds(seed, scale.seeds), run);
}

GenMatrixResult bench_gen_matrix(const ExperimentScale& scale, std::uint64_t seed,
                                 const ProgressFn& log) {
    GenMatrixResult result;
    result.models = scale.gen_models;
    for (const auto& range : scale.gen_train_ranges) result.train_names.push_back(range_name(range));
    for (const auto& range : scale.gen_test_ranges) result.test_names.push_back(range_name(range));

    std::vector<ComparisonBundle> train_bundles;
    for (const auto& range : scale.gen_train_ranges)
        train_bundles.push_back(
            gen_comparison_curriculum(range.first, range.second, comp_gen(scale, seed, range)));
    std::vector<Dataset> test_sets;
    for (const auto& range : scale.gen_test_ranges) {
        // Reuse the train bundle's test set when the ranges coincide.
        const auto it = std::find(scale.gen_train_ranges.begin(), scale.gen_train_ranges.end(),
                                  range);
        if (it != scale.gen_train_ranges.end()) {
            test_sets.push_back(
                train_bundles[static_cast<std::size_t>(it - scale.gen_train_ranges.begin())]
                    .test);
        } else {
            test_sets.push_back(
                gen_comparison_test(range.first, range.second, comp_gen(scale, seed, range)));
        }
    }

    const auto seeds = run_seeds(seed, scale.seeds);
    result.cells.resize(result.models.size());
    for (std::size_t m = 0; m < result.models.size(); ++m) {
        result.cells[m].resize(scale.gen_train_ranges.size());
        for (std::size_t tr = 0; tr < scale.gen_train_ranges.size(); ++tr) {
            std::vector<std::vector<double>> per_test(scale.gen_test_ranges.size());
            for (std::uint64_t s : seeds) {
                const ComparisonBundle& bundle = train_bundles[tr];
                const DatasetMeta& meta = bundle.train.front().meta;
                Model model = build_model(default_config(result.models[m], TaskKind::comparison,
                                                         meta.n_min, meta.n_max),
                                          part_seed(s, kTagModel));
                TrainSpec spec = spec_for(scale, s);
                train_curriculum(model, bundle.train, bundle.valid, nullptr, spec);
                for (std::size_t te = 0; te < test_sets.size(); ++te) {
                    const double acc = evaluate(model, test_sets[te]);
                    per_test[te].push_back(acc);
                    log(fmt("gen-matrix %s train=%s test=%s seed=%llu acc=%.4f",
                            layer_name(result.models[m]).c_str(), result.train_names[tr].c_str(),
                            result.test_names[te].c_str(), static_cast<unsigned long long>(s),
                            acc));
                }
            }
            for (const auto& values : per_test)
                result.cells[m][tr].push_back(aggregate(values));
        }
    }
    return result;
}

std::string gen_matrix_text(const GenMatrixResult& result) {
    std::string out = "train\\test";
    for (const std::string& name : result.test_names) out += "\t" + name;
    out += "\n";
    for (std::size_t m = 0; m < result.models.size(); ++m) {
        out += "# model " + layer_name(result.models[m]) + "\n";
        for (std::size_t tr = 0; tr < result.train_names.size(); ++tr) {
            out += result.train_names[tr];
            for (const TableCell& cell : result.cells[m][tr])
                out += fmt("\t%.3f +- %.3f", cell.mean, cell.stddev);
            out += "\n";
        }
    }
    return out;
}

std::vector<SweepResult> bench_sweep(const ExperimentScale& scale, std::uint64_t seed,
                                     const ProgressFn& log) {
    std::vector<SweepResult> results;
    const auto seeds = run_seeds(seed, scale.seeds);

    for (LayerKind kind : scale.sweep_models) {
        // Identification sweep on IDS_5-style data.
        const int ident_n = scale.distractor_ident_ns.empty() ? 5
                                                              : scale.distractor_ident_ns.front();
        IdentificationBundle ident = gen_identification(ident_n, ident_gen(scale, seed, ident_n));
        SweepResult sr;
        sr.model = kind;
        sr.task = TaskKind::identification;
        for (int size : scale.ident_sweep_sizes) {
            std::vector<double> accs;
            for (std::uint64_t s : seeds) {
                IdentificationBundle cut = ident;
                cut.train = truncate_dataset(ident.train, size);
                TrainSpec spec = spec_for(scale, s);
                spec.cycle_to = scale.ident_train;
                const double acc = run_identification(kind, cut, spec).test_accuracy;
                log(fmt("sweep ident %s size=%d seed=%llu acc=%.4f", layer_name(kind).c_str(),
                        size, static_cast<unsigned long long>(s), acc));
                accs.push_back(acc);
            }
            sr.sizes.push_back(size);
            sr.cells.push_back(aggregate(accs));
        }
        results.push_back(std::move(sr));
    }

    for (LayerKind kind : scale.sweep_models) {
        const auto range = scale.comp_ranges.empty() ? std::pair<int, int>{3, 8}
                                                     : scale.comp_ranges.front();
        ComparisonBundle comp =
            gen_comparison_curriculum(range.first, range.second, comp_gen(scale, seed, range));
        SweepResult sr;
        sr.model = kind;
        sr.task = TaskKind::comparison;
        for (int size : scale.comp_sweep_sizes) {
            std::vector<double> accs;
            for (std::uint64_t s : seeds) {
                ComparisonBundle cut = comp;
                for (Dataset& stage : cut.train) stage = truncate_dataset(stage, size);
                TrainSpec spec = spec_for(scale, s);
                spec.cycle_to = scale.comp_train;
                const double acc = run_comparison(kind, cut, spec).test_accuracy;
                log(fmt("sweep comp %s size=%d seed=%llu acc=%.4f", layer_name(kind).c_str(),
                        size, static_cast<unsigned long long>(s), acc));
                accs.push_back(acc);
            }
            sr.sizes.push_back(size);
            sr.cells.push_back(aggregate(accs));
        }
        results.push_back(std::move(sr));
    }
    return results;
}

std::string sweep_text(const std::vector<SweepResult>& results) {
    std::string out;
    for (const SweepResult& sr : results) {
        out += "# " + task_name(sr.task) + " " + layer_name(sr.model) + "\n";
        out += "samples\taccuracy\n";
        for (std::size_t i = 0; i < sr.sizes.size(); ++i)
            out += fmt("%d\t%.3f +- %.3f\n", sr.sizes[i], sr.cells[i].mean, sr.cells[i].stddev);
    }
    return out;
}

MatrixTable bench_distractors(const ExperimentScale& scale, std::uint64_t seed,
                              const ProgressFn& log) {
    // Column 0: identification over (n, n_d) variants; column 1: comparison
    // over n_d variants. Dataset ids encode the variant list below.
    struct IdentVariant {
        int n;
        int n_d;
    };
    std::vector<IdentVariant> ident_variants;
    for (int n : scale.distractor_ident_ns) {
        for (int nd = 0; nd <= scale.nd_max; ++nd) ident_variants.push_back({n, nd});
    }
    std::vector<IdentificationBundle> ident_bundles;
    for (const IdentVariant& v : ident_variants) {
        IdentificationBundle base = gen_identification(v.n, ident_gen(scale, seed, v.n));
        const std::uint64_t dseed =
            part_seed(seed, kTagDistractor + (static_cast<std::uint64_t>(v.n) << 8) +
                                (static_cast<std::uint64_t>(v.n_d) << 16));
        IdentificationBundle augmented = base;
        augmented.train = add_distractors(base.train, v.n_d, part_seed(dseed, 1));
        augmented.valid = add_distractors(base.valid, v.n_d, part_seed(dseed, 2));
        augmented.test = add_distractors(base.test, v.n_d, part_seed(dseed, 3));
        ident_bundles.push_back(std::move(augmented));
    }

    std::vector<ComparisonBundle> comp_bundles;
    {
        const auto range = scale.distractor_comp_range;
        ComparisonBundle base =
            gen_comparison_curriculum(range.first, range.second, comp_gen(scale, seed, range));
        for (int nd = 0; nd <= scale.nd_max; ++nd) {
            const std::uint64_t dseed =
                part_seed(seed, kTagDistractor + 0xC0000000ULL +
                                    (static_cast<std::uint64_t>(nd) << 16));
            ComparisonBundle augmented = base;
            for (std::size_t k = 0; k < augmented.train.size(); ++k)
                augmented.train[k] =
                    add_distractors(base.train[k], nd, part_seed(dseed, 10 + k));
            augmented.valid = add_distractors(base.valid, nd, part_seed(dseed, 2));
            augmented.test = add_distractors(base.test, nd, part_seed(dseed, 3));
            comp_bundles.push_back(std::move(augmented));
        }
    }

    std::vector<MatrixGroup> groups(2);
    groups[0].name = "identification";
    for (std::size_t i = 0; i < ident_bundles.size(); ++i)
        groups[0].dataset_ids.push_back(static_cast<int>(i));
    groups[1].name = "comparison";
    for (std::size_t i = 0; i < comp_bundles.size(); ++i)
        groups[1].dataset_ids.push_back(static_cast<int>(ident_bundles.size() + i));

    auto run = [&](LayerKind kind, int id, std::uint64_t run_seed_value) {
        double acc;
        if (id < static_cast<int>(ident_bundles.size())) {
            acc = run_identification(kind, ident_bundles[static_cast<std::size_t>(id)],
                                     spec_for(scale, run_seed_value))
                      .test_accuracy;
            const IdentVariant& v = ident_variants[static_cast<std::size_t>(id)];
            log(fmt("distractors ident %s n=%d nd=%d seed=%llu acc=%.4f",
                    layer_name(kind).c_str(), v.n, v.n_d,
                    static_cast<unsigned long long>(run_seed_value), acc));
        } else {
            const int nd = id - static_cast<int>(ident_bundles.size());
            acc = run_comparison(kind, comp_bundles[static_cast<std::size_t>(nd)],
                                 spec_for(scale, run_seed_value))
                      .test_accuracy;
            log(fmt("distractors comp %s nd=%d seed=%llu acc=%.4f", layer_name(kind).c_str(), nd,
                    static_cast<unsigned long long>(run_seed_value), acc));
        }
        return acc;
    };
    return run_matrix(scale.distractor_models, groups, run_seeds(seed, scale.seeds), run);
}

MatrixTable bench_presets(const ExperimentScale& scale, std::uint64_t seed, const ProgressFn& log) {
    const PresetKind kinds[] = {PresetKind::same_point, PresetKind::line,
                                PresetKind::scattered_red_circles, PresetKind::colored_circles,
                                PresetKind::random_diverse};
    std::vector<MatrixGroup> groups;
    std::vector<IdentificationBundle> bundles;
    for (PresetKind preset : kinds) {
        Rng ref_rng(part_seed(seed, kTagPreset + static_cast<std::uint64_t>(preset)));
        const Configuration ref = preset_config(preset, scale.preset_n, ref_rng);
        GenConfig gen;
        gen.n_train = scale.preset_train;
        gen.n_eval = scale.preset_eval;
        gen.seed = part_seed(seed, kTagPreset + 0x100 + static_cast<std::uint64_t>(preset));
        groups.push_back({preset_name(preset), {static_cast<int>(bundles.size())}});
        bundles.push_back(gen_identification_from_ref(ref, gen));
    }
    auto run = [&](LayerKind kind, int id, std::uint64_t run_seed_value) {
        const double acc = run_identification(kind, bundles[static_cast<std::size_t>(id)],
                                              spec_for(scale, run_seed_value))
                               .test_accuracy;
        log(fmt("presets %s %s seed=%llu acc=%.4f", layer_name(kind).c_str(),
                groups[static_cast<std::size_t>(id)].name.c_str(),
                static_cast<unsigned long long>(run_seed_value), acc));
        return acc;
    };
    return run_matrix(scale.preset_models, groups, run_seeds(seed, scale.seeds), run);
}

}  // namespace spatialsim
