#include "spatialsim/datagen.hpp"

#include <numbers>
#include <stdexcept>

namespace spatialsim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Fixed part tags for substream derivation (see rng.hpp).
constexpr std::uint64_t kPartRef = 0;
constexpr std::uint64_t kPartTrainBase = 1;  // stage k uses tag 1 + k
constexpr std::uint64_t kPartValid = 6;
constexpr std::uint64_t kPartTest = 7;
constexpr std::uint64_t kPartDistractors = 8;

ObjectSpec random_object(Rng& rng) {
    ObjectSpec obj;
    obj.x = rng.uniform(0.0, kWorldSide);
    obj.y = rng.uniform(0.0, kWorldSide);
    obj.size = rng.uniform(kSizeMin, kSizeMax);
    obj.orientation = rng.uniform(0.0, kTwoPi);
    for (double& channel : obj.color) channel = rng.uniform(0.0, 1.0);
    obj.shape = static_cast<Shape>(rng.below(kShapeCount));
    return obj;
}

SimilarityParams random_similarity(double theta_max, Rng& rng) {
    SimilarityParams p;
    p.phi = rng.uniform(0.0, theta_max);
    p.scale = rng.uniform(kSizeMin, kSizeMax);
    p.t = {rng.uniform(0.0, kWorldSide), rng.uniform(0.0, kWorldSide)};
    return p;
}

void check_counts(const GenConfig& gen) {
    if (gen.n_train <= 0 || gen.n_eval <= 0)
        throw std::invalid_argument("sample counts must be positive");
    if (gen.n_train % 2 != 0 || gen.n_eval % 2 != 0)
        throw std::invalid_argument("sample counts must be even for exact label balance");
}

// Alternating labels give exact 50/50 balance and keep any even-length prefix
// balanced, which the reduced-sample sweeps rely on.
int label_for(std::size_t index) { return index % 2 == 0 ? 1 : 0; }

Dataset gen_ident_part(const Configuration& ref, const GenConfig& gen, int count,
                       std::uint64_t part_tag) {
    Dataset out;
    out.meta.task = TaskKind::identification;
    out.meta.n_min = out.meta.n_max = static_cast<int>(ref.size());
    out.meta.theta_max = kTwoPi;
    out.meta.eps = gen.eps;
    out.meta.seed = gen.seed;
    out.samples.reserve(static_cast<std::size_t>(count));
    const std::uint64_t ps = part_seed(gen.seed, part_tag);
    for (int i = 0; i < count; ++i) {
        Rng rng = sample_rng(ps, static_cast<std::uint64_t>(i));
        Sample sample;
        sample.label = label_for(static_cast<std::size_t>(i));
        sample.first = sample.label == 1 ? make_ident_positive(ref, gen, rng)
                                         : make_ident_negative(ref, gen, rng);
        out.samples.push_back(std::move(sample));
    }
    return out;
}

Dataset gen_comp_part(int n_min, int n_max, double theta_max, const GenConfig& gen,
                      int count, std::uint64_t part_tag) {
    Dataset out;
    out.meta.task = TaskKind::comparison;
    out.meta.n_min = n_min;
    out.meta.n_max = n_max;
    out.meta.theta_max = theta_max;
    out.meta.eps = gen.eps;
    out.meta.seed = gen.seed;
    out.samples.reserve(static_cast<std::size_t>(count));
    const std::uint64_t ps = part_seed(gen.seed, part_tag);
    for (int i = 0; i < count; ++i) {
        Rng rng = sample_rng(ps, static_cast<std::uint64_t>(i));
        out.samples.push_back(make_comp_sample(n_min, n_max, theta_max,
                                               label_for(static_cast<std::size_t>(i)), gen, rng));
    }
    return out;
}

}  // namespace

std::array<double, 5> curriculum_theta_max() {
    return {kPi / 10.0, kPi / 2.0 + kPi / 10.0, kPi + kPi / 10.0,
            3.0 * kPi / 2.0 + kPi / 10.0, kTwoPi};
}

std::string task_name(TaskKind task) {
    return task == TaskKind::identification ? "identification" : "comparison";
}

TaskKind task_from_name(const std::string& name) {
    if (name == "identification") return TaskKind::identification;
    if (name == "comparison") return TaskKind::comparison;
    throw std::invalid_argument("unknown task kind: " + name);
}

Configuration sample_reference(int n_obj, Rng& rng) {
    if (n_obj <= 0) throw std::invalid_argument("n_obj must be >= 1");
    Configuration config;
    config.objects.reserve(static_cast<std::size_t>(n_obj));
    for (int i = 0; i < n_obj; ++i) config.objects.push_back(random_object(rng));
    return config;
}

Configuration make_ident_positive(const Configuration& ref, const GenConfig& gen, Rng& rng,
                                  double theta_max) {
    Configuration out = perturb(ref, gen.eps, rng);
    return apply_similarity(out, random_similarity(theta_max, rng));
}

Configuration make_ident_negative(const Configuration& ref, const GenConfig& gen, Rng& rng,
                                  double theta_max) {
    Configuration out = perturb(ref, gen.eps, rng, /*include_positions=*/false);
    for (ObjectSpec& obj : out.objects) {
        obj.x = rng.uniform(0.0, kWorldSide);
        obj.y = rng.uniform(0.0, kWorldSide);
    }
    return apply_similarity(out, random_similarity(theta_max, rng));
}

IdentificationBundle gen_identification(int n_obj, const GenConfig& gen) {
    check_counts(gen);
    Rng ref_rng = sample_rng(part_seed(gen.seed, kPartRef), 0);
    return gen_identification_from_ref(sample_reference(n_obj, ref_rng), gen);
}

IdentificationBundle gen_identification_from_ref(const Configuration& ref, const GenConfig& gen) {
    check_counts(gen);
    if (ref.objects.empty()) throw std::invalid_argument("empty configuration");
    IdentificationBundle bundle;
    bundle.reference = ref;
    bundle.train = gen_ident_part(ref, gen, gen.n_train, kPartTrainBase);
    bundle.valid = gen_ident_part(ref, gen, gen.n_eval, kPartValid);
    bundle.test = gen_ident_part(ref, gen, gen.n_eval, kPartTest);
    return bundle;
}

Sample make_comp_sample(int n_min, int n_max, double theta_max, int label,
                        const GenConfig& gen, Rng& rng) {
    if (n_min < 1 || n_min > n_max) throw std::invalid_argument("invalid n_obj range");
    if (theta_max <= 0.0 || theta_max > kTwoPi)
        throw std::invalid_argument("theta_max must be in (0, 2*pi]");
    const int n = n_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max - n_min + 1)));
    Sample sample;
    sample.label = label;
    sample.first = sample_reference(n, rng);
    if (label == 1) {
        sample.second = apply_similarity(perturb(sample.first, gen.eps, rng),
                                         random_similarity(theta_max, rng));
    } else {
        Configuration copy = perturb(sample.first, gen.eps, rng, /*include_positions=*/false);
        for (ObjectSpec& obj : copy.objects) {
            obj.x = rng.uniform(0.0, kWorldSide);
            obj.y = rng.uniform(0.0, kWorldSide);
        }
        sample.second = apply_similarity(copy, random_similarity(theta_max, rng));
    }
    return sample;
}

ComparisonBundle gen_comparison_curriculum(int n_min, int n_max, const GenConfig& gen) {
    check_counts(gen);
    ComparisonBundle bundle;
    const auto angles = curriculum_theta_max();
    for (int k = 0; k < kCurriculumStages; ++k) {
        bundle.train[static_cast<std::size_t>(k)] =
            gen_comp_part(n_min, n_max, angles[static_cast<std::size_t>(k)], gen, gen.n_train,
                          kPartTrainBase + static_cast<std::uint64_t>(k));
    }
    bundle.valid = gen_comp_part(n_min, n_max, kTwoPi, gen, gen.n_eval, kPartValid);
    bundle.test = gen_comp_part(n_min, n_max, kTwoPi, gen, gen.n_eval, kPartTest);
    return bundle;
}

Dataset gen_comparison_test(int n_min, int n_max, const GenConfig& gen) {
    check_counts(gen);
    return gen_comp_part(n_min, n_max, kTwoPi, gen, gen.n_eval, kPartTest);
}

Sample add_distractors(const Sample& sample, int n_d, Rng& rng) {
    if (n_d < 0) throw std::invalid_argument("n_d must be >= 0");
    Sample out = sample;
    for (int i = 0; i < n_d; ++i) out.first.objects.push_back(random_object(rng));
    if (!out.second.objects.empty()) {
        for (int i = 0; i < n_d; ++i) out.second.objects.push_back(random_object(rng));
    }
    return out;
}

Dataset add_distractors(const Dataset& dataset, int n_d, std::uint64_t seed) {
    if (n_d == 0) return dataset;
    Dataset out;
    out.meta = dataset.meta;
    out.meta.n_min += n_d;
    out.meta.n_max += n_d;
    out.samples.reserve(dataset.samples.size());
    const std::uint64_t ps = part_seed(seed, kPartDistractors);
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        Rng rng = sample_rng(ps, i);
        out.samples.push_back(add_distractors(dataset.samples[i], n_d, rng));
    }
    return out;
}

std::string preset_name(PresetKind kind) {
    switch (kind) {
        case PresetKind::same_point: return "same-point";
        case PresetKind::line: return "line";
        case PresetKind::scattered_red_circles: return "scattered-red-circles";
        case PresetKind::colored_circles: return "colored-circles";
        case PresetKind::random_diverse: return "random-diverse";
    }
    throw std::invalid_argument("unknown preset kind");
}

PresetKind preset_from_name(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(PresetKind::random_diverse); ++k) {
        const auto kind = static_cast<PresetKind>(k);
        if (preset_name(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown preset kind: " + name);
}

Configuration preset_config(PresetKind kind, int n_obj, Rng& rng) {
    if (n_obj <= 0) throw std::invalid_argument("n_obj must be >= 1");
    if (kind == PresetKind::random_diverse) return sample_reference(n_obj, rng);

    // Identical red circles; only their placement differs between presets.
    ObjectSpec proto;
    proto.size = rng.uniform(kSizeMin, kSizeMax);
    proto.orientation = rng.uniform(0.0, kTwoPi);
    proto.color = {1.0, 0.0, 0.0};
    proto.shape = Shape::circle;

    Configuration config;
    config.objects.reserve(static_cast<std::size_t>(n_obj));
    switch (kind) {
        case PresetKind::same_point: {
            proto.x = rng.uniform(0.0, kWorldSide);
            proto.y = rng.uniform(0.0, kWorldSide);
            config.objects.assign(static_cast<std::size_t>(n_obj), proto);
            break;
        }
        case PresetKind::line: {
            // Unit spacing, centered in the world square.
            const double x0 = kWorldSide / 2.0 - static_cast<double>(n_obj - 1) / 2.0;
            for (int i = 0; i < n_obj; ++i) {
                ObjectSpec obj = proto;
                obj.x = x0 + static_cast<double>(i);
                obj.y = kWorldSide / 2.0;
                config.objects.push_back(obj);
            }
            break;
        }
        case PresetKind::scattered_red_circles:
        case PresetKind::colored_circles: {
            for (int i = 0; i < n_obj; ++i) {
                ObjectSpec obj = proto;
                obj.x = rng.uniform(0.0, kWorldSide);
                obj.y = rng.uniform(0.0, kWorldSide);
                if (kind == PresetKind::colored_circles) {
                    for (double& channel : obj.color) channel = rng.uniform(0.0, 1.0);
                }
                config.objects.push_back(obj);
            }
            break;
        }
        default:
            throw std::invalid_argument("unknown preset kind");
    }
    return config;
}

std::string ident_dataset_name(int n_obj, const std::string& part) {
    std::string name = "IDS_" + std::to_string(n_obj);
    if (!part.empty()) name += "_" + part;
    return name;
}

std::string comp_dataset_name(int n_min, int n_max, const std::string& part) {
    std::string name = "CDS_" + std::to_string(n_min) + "_" + std::to_string(n_max);
    if (!part.empty()) name += "_" + part;
    return name;
}

}  // namespace spatialsim
