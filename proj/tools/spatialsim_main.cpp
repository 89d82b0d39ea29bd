#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spatialsim/analysis.hpp"
#include "spatialsim/checkpoint.hpp"
#include "spatialsim/dataset_io.hpp"
#include "spatialsim/datagen.hpp"
#include "spatialsim/train.hpp"

namespace fs = std::filesystem;
using namespace spatialsim;

namespace {

constexpr std::uint64_t kTagCliModel = 0x4D4F44;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct GenIdentArgs {
    int n_obj = 5;
    int train = 10000;
    int eval = 5000;
    double eps = 0.01;
    std::uint64_t seed = 1;
    std::string out = ".";
};

void run_gen_ident(const GenIdentArgs& args) {
    GenConfig gen;
    gen.eps = args.eps;
    gen.n_train = args.train;
    gen.n_eval = args.eval;
    gen.seed = args.seed;
    const IdentificationBundle bundle = gen_identification(args.n_obj, gen);
    fs::create_directories(args.out);
    const fs::path dir(args.out);
    write_dataset((dir / ident_dataset_name(args.n_obj, "")).string(), bundle.train);
    write_dataset((dir / ident_dataset_name(args.n_obj, "valid")).string(), bundle.valid);
    write_dataset((dir / ident_dataset_name(args.n_obj, "test")).string(), bundle.test);
    std::printf("wrote %s (%d), %s (%d), %s (%d) in %s\n",
                ident_dataset_name(args.n_obj, "").c_str(), args.train,
                ident_dataset_name(args.n_obj, "valid").c_str(), args.eval,
                ident_dataset_name(args.n_obj, "test").c_str(), args.eval, args.out.c_str());
}

struct GenCompArgs {
    int n_min = 3;
    int n_max = 8;
    int train = 100000;
    int eval = 10000;
    double eps = 0.01;
    std::uint64_t seed = 1;
    std::string out = ".";
};

void run_gen_comp(const GenCompArgs& args) {
    GenConfig gen;
    gen.eps = args.eps;
    gen.n_train = args.train;
    gen.n_eval = args.eval;
    gen.seed = args.seed;
    const ComparisonBundle bundle = gen_comparison_curriculum(args.n_min, args.n_max, gen);
    fs::create_directories(args.out);
    const fs::path dir(args.out);
    for (int k = 0; k < kCurriculumStages; ++k) {
        write_dataset((dir / comp_dataset_name(args.n_min, args.n_max, std::to_string(k))).string(),
                      bundle.train[static_cast<std::size_t>(k)]);
    }
    write_dataset((dir / comp_dataset_name(args.n_min, args.n_max, "valid")).string(),
                  bundle.valid);
    write_dataset((dir / comp_dataset_name(args.n_min, args.n_max, "test")).string(), bundle.test);
    std::printf("wrote %s_0..%d plus valid/test in %s\n",
                comp_dataset_name(args.n_min, args.n_max, "").c_str(), kCurriculumStages - 1,
                args.out.c_str());
}

struct GenDistractorArgs {
    std::string base = ".";
    int nd_max = 3;
    std::uint64_t seed = 1;
};

void run_gen_distractors(const GenDistractorArgs& args) {
    if (args.nd_max < 1) throw std::invalid_argument("--nd-max must be >= 1");
    std::vector<fs::path> bases;
    for (const auto& entry : fs::directory_iterator(args.base)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        const bool dataset = name.rfind("IDS_", 0) == 0 || name.rfind("CDS_", 0) == 0 ||
                             name.rfind("PDS_", 0) == 0;
        if (dataset && name.find("_nd") == std::string::npos) bases.push_back(entry.path());
    }
    std::sort(bases.begin(), bases.end());
    if (bases.empty())
        throw std::invalid_argument("no IDS_*/CDS_*/PDS_* datasets found in " + args.base);
    for (const fs::path& path : bases) {
        const Dataset base = read_dataset(path.string());
        std::uint64_t name_tag = 0;
        for (char c : path.filename().string())
            name_tag = name_tag * 131 + static_cast<unsigned char>(c);
        for (int nd = 1; nd <= args.nd_max; ++nd) {
            const Dataset augmented = add_distractors(
                base, nd, part_seed(args.seed, name_tag + static_cast<std::uint64_t>(nd)));
            const fs::path out = path.parent_path() /
                                 (path.filename().string() + "_nd" + std::to_string(nd));
            write_dataset(out.string(), augmented);
            std::printf("wrote %s\n", out.string().c_str());
        }
    }
}

struct GenPresetArgs {
    std::string kind = "line";
    int n_obj = 5;
    int train = 10000;
    int eval = 5000;
    double eps = 0.01;
    std::uint64_t seed = 1;
    std::string out = ".";
};

void run_gen_preset(const GenPresetArgs& args) {
    const PresetKind kind = preset_from_name(args.kind);
    Rng ref_rng(part_seed(args.seed, 0x505245ULL + static_cast<std::uint64_t>(kind)));
    const Configuration ref = preset_config(kind, args.n_obj, ref_rng);
    GenConfig gen;
    gen.eps = args.eps;
    gen.n_train = args.train;
    gen.n_eval = args.eval;
    gen.seed = args.seed;
    const IdentificationBundle bundle = gen_identification_from_ref(ref, gen);
    fs::create_directories(args.out);
    const fs::path dir(args.out);
    const std::string base = "PDS_" + args.kind;
    write_dataset((dir / base).string(), bundle.train);
    write_dataset((dir / (base + "_valid")).string(), bundle.valid);
    write_dataset((dir / (base + "_test")).string(), bundle.test);
    std::printf("wrote %s, %s_valid, %s_test in %s\n", base.c_str(), base.c_str(), base.c_str(),
                args.out.c_str());
}

struct TrainArgs {
    std::string task = "ident";
    std::string model = "mpgnn";
    std::string data = ".";
    std::string name;  // dataset base name override
    int n_obj = 5;
    int n_min = 3;
    int n_max = 8;
    int epochs = 20;
    int stage_epochs = 5;
    double lr = 1e-3;
    int batch = 128;
    std::uint64_t seed = 1;
    std::string selection = "best-valid";
    int cycle_to = 0;
    bool no_curriculum = false;
    std::string out = "model.ckpt";
};

TrainSpec spec_from(const TrainArgs& args) {
    TrainSpec spec;
    spec.epochs = args.epochs;
    spec.stage_epochs = args.stage_epochs;
    spec.lr = args.lr;
    spec.batch_size = args.batch;
    spec.seed = args.seed;
    spec.cycle_to = args.cycle_to;
    if (args.selection == "best-valid") {
        spec.selection = Selection::best_valid;
    } else if (args.selection == "last") {
        spec.selection = Selection::last;
    } else {
        throw std::invalid_argument("--selection must be best-valid or last");
    }
    return spec;
}

void run_train(const TrainArgs& args) {
    const LayerKind kind = layer_from_name(args.model);
    const fs::path dir(args.data);
    const TrainSpec spec = spec_from(args);
    RunReport report;
    Model model;

    if (args.task == "ident") {
        const std::string base = args.name.empty() ? ident_dataset_name(args.n_obj, "")
                                                   : args.name;
        const Dataset train_set = read_dataset((dir / base).string());
        const Dataset valid_set = read_dataset((dir / (base + "_valid")).string());
        const Dataset test_set = read_dataset((dir / (base + "_test")).string());
        model = build_model(default_config(kind, TaskKind::identification, train_set.meta.n_min,
                                           train_set.meta.n_max),
                            part_seed(spec.seed, kTagCliModel));
        report = train(model, train_set, valid_set, &test_set, spec);
    } else if (args.task == "comp") {
        const std::string base = args.name.empty()
                                     ? comp_dataset_name(args.n_min, args.n_max, "")
                                     : args.name;
        const Dataset valid_set = read_dataset((dir / (base + "_valid")).string());
        const Dataset test_set = read_dataset((dir / (base + "_test")).string());
        if (args.no_curriculum) {
            // Plain training on the full-rotation stage only.
            const Dataset train_set =
                read_dataset((dir / (base + "_" + std::to_string(kCurriculumStages - 1))).string());
            model = build_model(default_config(kind, TaskKind::comparison, train_set.meta.n_min,
                                               train_set.meta.n_max),
                                part_seed(spec.seed, kTagCliModel));
            report = train(model, train_set, valid_set, &test_set, spec);
        } else {
            std::array<Dataset, kCurriculumStages> stages;
            for (int k = 0; k < kCurriculumStages; ++k)
                stages[static_cast<std::size_t>(k)] =
                    read_dataset((dir / (base + "_" + std::to_string(k))).string());
            model = build_model(default_config(kind, TaskKind::comparison,
                                               stages[0].meta.n_min, stages[0].meta.n_max),
                                part_seed(spec.seed, kTagCliModel));
            report = train_curriculum(model, stages, valid_set, &test_set, spec);
        }
    } else {
        throw std::invalid_argument("--task must be ident or comp");
    }

    save_checkpoint(args.out, model, spec.seed);
    std::fputs(report_text(report).c_str(), stdout);
    std::printf("checkpoint: %s (%zu parameters)\n", args.out.c_str(), count_params(model));
}

struct EvalArgs {
    std::string ckpt;
    std::string data;
};

void run_eval(const EvalArgs& args) {
    const LoadedCheckpoint loaded = load_checkpoint(args.ckpt);
    const Dataset dataset = read_dataset(args.data);
    std::printf("%.4f\n", evaluate(loaded.model, dataset));
}

struct HeatmapArgs {
    std::string ckpt;
    std::string data;
    int sample = 0;
    int object = 0;
    int res = 100;
    std::string out = "heatmap";
};

void run_heatmap(const HeatmapArgs& args) {
    const LoadedCheckpoint loaded = load_checkpoint(args.ckpt);
    const Dataset dataset = read_dataset(args.data);
    if (args.sample < 0 || args.sample >= static_cast<int>(dataset.samples.size()))
        throw std::invalid_argument("--sample index out of range (dataset has " +
                                    std::to_string(dataset.samples.size()) + " samples)");
    const Configuration& config =
        dataset.samples[static_cast<std::size_t>(args.sample)].first;
    const Heatmap hm = make_heatmap(loaded.model, config, args.object, args.res);
    write_heatmap_text(args.out + ".txt", hm);
    write_heatmap_ppm(args.out + ".ppm", hm);
    std::printf("wrote %s.txt and %s.ppm (star H=%.6f)\n", args.out.c_str(), args.out.c_str(),
                hm.grid(hm.star_row, hm.star_col));
}

struct BenchArgs {
    std::string mode;
    int seeds = 0;  // 0 = scale default
    std::string scale = "desk";
    std::uint64_t seed = 1;
    std::string out = ".";
};

void run_bench(const BenchArgs& args) {
    ExperimentScale scale = scale_by_name(args.scale);
    if (args.seeds > 0) scale.seeds = args.seeds;
    fs::create_directories(args.out);
    const auto log = [](const std::string& line) {
        std::fprintf(stderr, "%s\n", line.c_str());
    };
    std::string text;
    if (args.mode == "table1") {
        text = table_text(bench_table1(scale, args.seed, log));
    } else if (args.mode == "table2") {
        text = table_text(bench_table2(scale, args.seed, log));
    } else if (args.mode == "gen-matrix") {
        text = gen_matrix_text(bench_gen_matrix(scale, args.seed, log));
    } else if (args.mode == "sweep") {
        text = sweep_text(bench_sweep(scale, args.seed, log));
    } else if (args.mode == "distractors") {
        text = table_text(bench_distractors(scale, args.seed, log));
    } else if (args.mode == "presets") {
        text = table_text(bench_presets(scale, args.seed, log));
    } else {
        throw std::invalid_argument(
            "unknown bench mode: " + args.mode +
            " (expected table1|table2|gen-matrix|sweep|distractors|presets)");
    }
    const fs::path report = fs::path(args.out) / (args.mode + ".txt");
    write_text(report, text);
    std::fputs(text.c_str(), stdout);
    std::printf("report: %s\n", report.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SpatialSim: similarity-invariant spatial configuration benchmark"};
    app.require_subcommand(1);

    GenIdentArgs gi;
    CLI::App* gen_ident = app.add_subcommand("gen-ident", "Generate an Identification dataset");
    gen_ident->add_option("--n-obj", gi.n_obj, "Objects per configuration")->check(CLI::Range(1, 100));
    gen_ident->add_option("--train", gi.train, "Training samples");
    gen_ident->add_option("--eval", gi.eval, "Validation and test samples each");
    gen_ident->add_option("--eps", gi.eps, "Perturbation amplitude");
    gen_ident->add_option("--seed", gi.seed, "Generator seed");
    gen_ident->add_option("--out", gi.out, "Output directory");

    GenCompArgs gc;
    CLI::App* gen_comp = app.add_subcommand("gen-comp", "Generate a Comparison curriculum");
    gen_comp->add_option("--n-min", gc.n_min, "Minimum objects")->check(CLI::Range(1, 100));
    gen_comp->add_option("--n-max", gc.n_max, "Maximum objects")->check(CLI::Range(1, 100));
    gen_comp->add_option("--train", gc.train, "Training samples per curriculum stage");
    gen_comp->add_option("--eval", gc.eval, "Validation and test samples each");
    gen_comp->add_option("--eps", gc.eps, "Perturbation amplitude");
    gen_comp->add_option("--seed", gc.seed, "Generator seed");
    gen_comp->add_option("--out", gc.out, "Output directory");

    GenDistractorArgs gd;
    CLI::App* gen_distractors =
        app.add_subcommand("gen-distractors", "Add distractor variants of existing datasets");
    gen_distractors->add_option("--base", gd.base, "Directory holding base datasets");
    gen_distractors->add_option("--nd-max", gd.nd_max, "Maximum distractor count");
    gen_distractors->add_option("--seed", gd.seed, "Generator seed");

    GenPresetArgs gp;
    CLI::App* gen_preset =
        app.add_subcommand("gen-preset", "Generate an Identification dataset from a preset");
    gen_preset
        ->add_option("--kind", gp.kind,
                     "same-point|line|scattered-red-circles|colored-circles|random-diverse")
        ->required();
    gen_preset->add_option("--n-obj", gp.n_obj, "Objects per configuration");
    gen_preset->add_option("--train", gp.train, "Training samples");
    gen_preset->add_option("--eval", gp.eval, "Validation and test samples each");
    gen_preset->add_option("--eps", gp.eps, "Perturbation amplitude");
    gen_preset->add_option("--seed", gp.seed, "Generator seed");
    gen_preset->add_option("--out", gp.out, "Output directory");

    TrainArgs ta;
    CLI::App* train_cmd = app.add_subcommand("train", "Train a model");
    train_cmd->add_option("--task", ta.task, "ident|comp")->required();
    train_cmd->add_option("--model", ta.model, "mpgnn|rds|deepset|mlp")->required();
    train_cmd->add_option("--data", ta.data, "Dataset directory");
    train_cmd->add_option("--name", ta.name, "Dataset base name override (e.g. PDS_line)");
    train_cmd->add_option("--n-obj", ta.n_obj, "Identification dataset n_obj");
    train_cmd->add_option("--n-min", ta.n_min, "Comparison range minimum");
    train_cmd->add_option("--n-max", ta.n_max, "Comparison range maximum");
    train_cmd->add_option("--epochs", ta.epochs, "Epochs (plain training)");
    train_cmd->add_option("--stage-epochs", ta.stage_epochs, "Epochs per curriculum stage");
    train_cmd->add_option("--lr", ta.lr, "Adam learning rate");
    train_cmd->add_option("--batch", ta.batch, "Batch size");
    train_cmd->add_option("--seed", ta.seed, "Run seed (init + shuffling)");
    train_cmd->add_option("--selection", ta.selection, "best-valid|last");
    train_cmd->add_option("--cycle-to", ta.cycle_to,
                          "Cycle each epoch to this many samples (0 = dataset size)");
    train_cmd->add_flag("--no-curriculum", ta.no_curriculum,
                        "Comparison: train on the full-rotation stage only");
    train_cmd->add_option("--out", ta.out, "Checkpoint path");

    EvalArgs ea;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset file");
    eval_cmd->add_option("--ckpt", ea.ckpt, "Checkpoint path")->required();
    eval_cmd->add_option("--data", ea.data, "Dataset file")->required();

    HeatmapArgs ha;
    CLI::App* heatmap_cmd = app.add_subcommand("heatmap", "Decision heatmap for one sample");
    heatmap_cmd->add_option("--ckpt", ha.ckpt, "Checkpoint path")->required();
    heatmap_cmd->add_option("--data", ha.data, "Dataset file")->required();
    heatmap_cmd->add_option("--sample", ha.sample, "Sample index");
    heatmap_cmd->add_option("--object", ha.object, "Object index to move");
    heatmap_cmd->add_option("--res", ha.res, "Grid resolution")->check(CLI::Range(1, 2000));
    heatmap_cmd->add_option("--out", ha.out, "Output prefix (.txt and .ppm)");

    BenchArgs ba;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run an experiment matrix");
    bench_cmd->add_option("mode", ba.mode, "table1|table2|gen-matrix|sweep|distractors|presets")
        ->required();
    bench_cmd->add_option("--seeds", ba.seeds, "Seeds per cell (0 = scale default)");
    bench_cmd->add_option("--scale", ba.scale, "desk|paper");
    bench_cmd->add_option("--seed", ba.seed, "Base seed");
    bench_cmd->add_option("--out", ba.out, "Report directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen_ident) run_gen_ident(gi);
        if (*gen_comp) run_gen_comp(gc);
        if (*gen_distractors) run_gen_distractors(gd);
        if (*gen_preset) run_gen_preset(gp);
        if (*train_cmd) run_train(ta);
        if (*eval_cmd) run_eval(ea);
        if (*heatmap_cmd) run_heatmap(ha);
        if (*bench_cmd) run_bench(ba);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 0;
}
