#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spatialsim/dataset.hpp"
#include "spatialsim/geometry.hpp"
#include "spatialsim/rng.hpp"

namespace spatialsim {

// Rotation curriculum: five training sets with increasing maximum rotation
// angle; validation and test always use the full [0, 2*pi] range.
std::array<double, 5> curriculum_theta_max();
inline constexpr int kCurriculumStages = 5;

struct GenConfig {
    double eps = 0.01;
    int n_train = 0;  // per training set
    int n_eval = 0;   // per validation/test set
    std::uint64_t seed = 0;
};

// n_obj objects with x,y ~ U([0,20]^2), size ~ U([0.5,2]),
// orientation ~ U([0,2*pi)), color ~ U([0,1]^3), uniform shape category.
Configuration sample_reference(int n_obj, Rng& rng);

// Positive pipeline: perturb by eps, then a random similarity with
// phi ~ U([0, theta_max]), s ~ U([0.5, 2]), t ~ U([0, 20]^2).
Configuration make_ident_positive(const Configuration& ref, const GenConfig& gen, Rng& rng,
                                  double theta_max = 2.0 * 3.14159265358979323846);

// Negative pipeline: perturb non-position features by eps, resample every
// position independently in the world square, then the same random similarity
// distribution as the positives.
Configuration make_ident_negative(const Configuration& ref, const GenConfig& gen, Rng& rng,
                                  double theta_max = 2.0 * 3.14159265358979323846);

struct IdentificationBundle {
    Configuration reference;
    Dataset train;
    Dataset valid;
    Dataset test;
};

// Balanced (alternating labels), deterministic per seed. Counts must be even.
IdentificationBundle gen_identification(int n_obj, const GenConfig& gen);

// Same, but identifies the provided reference (used by the preset study).
IdentificationBundle gen_identification_from_ref(const Configuration& ref, const GenConfig& gen);

// One Comparison record; n_obj ~ U{n_min..n_max} shared by both sides.
Sample make_comp_sample(int n_min, int n_max, double theta_max, int label,
                        const GenConfig& gen, Rng& rng);

struct ComparisonBundle {
    std::array<Dataset, kCurriculumStages> train;  // one per curriculum angle
    Dataset valid;                                 // theta_max = 2*pi
    Dataset test;                                  // theta_max = 2*pi
};

ComparisonBundle gen_comparison_curriculum(int n_min, int n_max, const GenConfig& gen);

// Just the bundle's full-rotation test split (bit-identical to it), for
// evaluations that never train on the range.
Dataset gen_comparison_test(int n_min, int n_max, const GenConfig& gen);

// Appends n_d freshly sampled objects to each configuration of the sample,
// independently per configuration. Label unchanged.
Sample add_distractors(const Sample& sample, int n_d, Rng& rng);

// Dataset-level variant with per-sample substreams; n_d is fixed across the
// dataset so that n_d = 0 reproduces the input exactly.
Dataset add_distractors(const Dataset& dataset, int n_d, std::uint64_t seed);

enum class PresetKind : int {
    same_point = 0,
    line = 1,
    scattered_red_circles = 2,
    colored_circles = 3,
    random_diverse = 4,
};

std::string preset_name(PresetKind kind);
PresetKind preset_from_name(const std::string& name);

// Reference configurations of graded regularity, from fully degenerate
// (identical red circles stacked on one point) to fully random.
Configuration preset_config(PresetKind kind, int n_obj, Rng& rng);

// supp-style dataset names: IDS_<n>[_valid|_test], CDS_<a>_<b>_<k>,
// CDS_<a>_<b>[_valid|_test].
std::string ident_dataset_name(int n_obj, const std::string& part);
std::string comp_dataset_name(int n_min, int n_max, const std::string& part);

}  // namespace spatialsim
