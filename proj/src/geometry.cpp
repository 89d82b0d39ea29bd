#include "spatialsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spatialsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
}  // namespace

double mod_two_pi(double angle) {
    double reduced = std::fmod(angle, kTwoPi);
    if (reduced < 0.0) reduced += kTwoPi;
    return reduced;
}

FeatureVector feature_vector(const ObjectSpec& obj) {
    FeatureVector f{};
    f[0] = obj.x;
    f[1] = obj.y;
    f[2] = obj.size;
    f[3] = obj.orientation;
    f[4] = obj.color[0];
    f[5] = obj.color[1];
    f[6] = obj.color[2];
    f[7 + static_cast<int>(obj.shape)] = 1.0;
    return f;
}

ObjectSpec decode_feature_vector(const FeatureVector& f) {
    ObjectSpec obj;
    obj.x = f[0];
    obj.y = f[1];
    obj.size = f[2];
    obj.orientation = f[3];
    obj.color = {f[4], f[5], f[6]};
    int hot = -1;
    for (int k = 0; k < kShapeCount; ++k) {
        if (f[7 + k] == 1.0) {
            if (hot >= 0) throw std::invalid_argument("shape block is not one-hot");
            hot = k;
        } else if (f[7 + k] != 0.0) {
            throw std::invalid_argument("shape block is not one-hot");
        }
    }
    if (hot < 0) throw std::invalid_argument("shape block is not one-hot");
    obj.shape = static_cast<Shape>(hot);
    return obj;
}

Vec2 barycenter(const Configuration& config) {
    if (config.objects.empty()) throw std::invalid_argument("empty configuration");
    Vec2 sum;
    for (const ObjectSpec& obj : config.objects) {
        sum.x += obj.x;
        sum.y += obj.y;
    }
    const double inv = 1.0 / static_cast<double>(config.objects.size());
    return {sum.x * inv, sum.y * inv};
}

Configuration apply_similarity(const Configuration& config, const SimilarityParams& p) {
    if (p.phi == 0.0 && p.scale == 1.0 && p.t.x == 0.0 && p.t.y == 0.0) {
        return config;
    }
    const Vec2 b = barycenter(config);
    const double c = std::cos(p.phi);
    const double s = std::sin(p.phi);
    Configuration out = config;
    for (ObjectSpec& obj : out.objects) {
        const double dx = obj.x - b.x;
        const double dy = obj.y - b.y;
        obj.x = p.scale * (c * dx - s * dy) + b.x + p.t.x;
        obj.y = p.scale * (s * dx + c * dy) + b.y + p.t.y;
        obj.size *= p.scale;
        obj.orientation = mod_two_pi(obj.orientation + p.phi);
    }
    return out;
}

SimilarityParams compose(const SimilarityParams& second, const SimilarityParams& first) {
    return {first.phi + second.phi,
            first.scale * second.scale,
            {first.t.x + second.t.x, first.t.y + second.t.y}};
}

Configuration perturb(const Configuration& config, double eps, Rng& rng,
                      bool include_positions) {
    if (eps < 0.0) throw std::invalid_argument("perturbation factor must be >= 0");
    Configuration out = config;
    for (ObjectSpec& obj : out.objects) {
        if (include_positions) {
            obj.x += rng.uniform(-eps * kWorldSide, eps * kWorldSide);
            obj.y += rng.uniform(-eps * kWorldSide, eps * kWorldSide);
        }
        obj.size += rng.uniform(-eps * kSizeMax, eps * kSizeMax);
        obj.orientation = mod_two_pi(obj.orientation + rng.uniform(-eps * kTwoPi, eps * kTwoPi));
        for (double& channel : obj.color) {
            channel = clamp01(channel + rng.uniform(-eps, eps));
        }
    }
    return out;
}

}  // namespace spatialsim
