#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "spatialsim/rng.hpp"

namespace spatialsim {

// World conventions shared by the generators: objects live in a square of side
// 20 world units, sizes are radii in [0.5, 2], colors are RGB in [0, 1]^3 and
// orientation is a plain real reduced modulo 2*pi (no angular wrap-around in
// the noise model).
inline constexpr double kWorldSide = 20.0;
inline constexpr double kSizeMin = 0.5;
inline constexpr double kSizeMax = 2.0;

enum class Shape : int { square = 0, circle = 1, triangle = 2 };
inline constexpr int kShapeCount = 3;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// One scene object. Serializes to the fixed 10-feature layout
// [x, y, size, orientation, r, g, b, square, circle, triangle].
struct ObjectSpec {
    double x = 0.0;
    double y = 0.0;
    double size = 1.0;
    double orientation = 0.0;
    std::array<double, 3> color{0.0, 0.0, 0.0};
    Shape shape = Shape::square;

    bool operator==(const ObjectSpec&) const = default;
};

inline constexpr int kFeatureDim = 10;
using FeatureVector = std::array<double, kFeatureDim>;

// An unordered scene; the stored order of `objects` is incidental.
struct Configuration {
    std::vector<ObjectSpec> objects;

    std::size_t size() const { return objects.size(); }
    bool operator==(const Configuration&) const = default;
};

// Rotation by phi about the configuration barycenter, uniform scaling by s
// about the same center, then translation by t.
struct SimilarityParams {
    double phi = 0.0;
    double scale = 1.0;
    Vec2 t{0.0, 0.0};
};

// Reduce an angle to [0, 2*pi).
double mod_two_pi(double angle);

FeatureVector feature_vector(const ObjectSpec& obj);

// Inverse of feature_vector. Throws std::invalid_argument if the shape block
// is not one-hot.
ObjectSpec decode_feature_vector(const FeatureVector& features);

// Mean of object positions. Throws std::invalid_argument on an empty
// configuration.
Vec2 barycenter(const Configuration& config);

// position' = s * R(phi) * (position - B) + B + t with B the input barycenter;
// size scales by s, orientation advances by phi (mod 2*pi), color and shape
// are unchanged. Identity parameters return the input exactly.
Configuration apply_similarity(const Configuration& config, const SimilarityParams& p);

// Composition acting on a fixed configuration: applying `first` and then
// `second` equals applying compose(second, first), because the rotation
// center tracks the translated barycenter.
SimilarityParams compose(const SimilarityParams& second, const SimilarityParams& first);

// Additive uniform noise, scaled per feature by its sampling range:
// position +- eps*20 per axis, size +- eps*2, orientation +- eps*2*pi
// (reduced mod 2*pi), color +- eps (clamped to [0, 1]). Shape unchanged.
// When `include_positions` is false the position draws are skipped entirely
// (used for negative examples, whose positions are resampled anyway).
Configuration perturb(const Configuration& config, double eps, Rng& rng,
                      bool include_positions = true);

}  // namespace spatialsim
