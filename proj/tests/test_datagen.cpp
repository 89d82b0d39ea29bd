#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "spatialsim/datagen.hpp"
#include "support/oracles.hpp"

using namespace spatialsim;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GenConfig small_gen(std::uint64_t seed, int n_train = 200, int n_eval = 100) {
    GenConfig g;
    g.n_train = n_train;
    g.n_eval = n_eval;
    g.seed = seed;
    return g;
}

// Residual bound for positives: perturbation moves each coordinate by at most
// eps * 20, so after aligning the sample back onto the reference the offset
// per object is at most that much per axis.
double positive_bound(double eps) { return 2.0 * eps * 20.0; }

}  // namespace

TEST_SUITE("datagen") {

TEST_CASE("reference sampling stays in range and is uniform-ish") {
    Rng rng(1);
    double sum_x = 0.0;
    int shape_counts[kShapeCount] = {0, 0, 0};
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Configuration c = sample_reference(1, rng);
        const ObjectSpec& o = c.objects[0];
        CHECK(o.x >= 0.0);
        CHECK(o.x < kWorldSide);
        CHECK(o.y >= 0.0);
        CHECK(o.y < kWorldSide);
        CHECK(o.size >= kSizeMin);
        CHECK(o.size < kSizeMax);
        CHECK(o.orientation >= 0.0);
        CHECK(o.orientation < kTwoPi);
        for (double ch : o.color) {
            CHECK(ch >= 0.0);
            CHECK(ch < 1.0);
        }
        sum_x += o.x;
        ++shape_counts[static_cast<int>(o.shape)];
    }
    CHECK(sum_x / n == doctest::Approx(10.0).epsilon(0.02));
    for (int s = 0; s < kShapeCount; ++s)
        CHECK(std::abs(shape_counts[s] / static_cast<double>(n) - 1.0 / 3.0) < 0.02);
}

TEST_CASE("sample_reference rejects non-positive counts") {
    Rng rng(2);
    CHECK_THROWS_AS(sample_reference(0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_reference(-3, rng), std::invalid_argument);
}

TEST_CASE("curriculum angles are the documented five") {
    const auto thetas = curriculum_theta_max();
    const double pi = std::numbers::pi;
    CHECK(thetas[0] == pi / 10.0);
    CHECK(thetas[1] == pi / 2.0 + pi / 10.0);
    CHECK(thetas[2] == pi + pi / 10.0);
    CHECK(thetas[3] == 3.0 * pi / 2.0 + pi / 10.0);
    CHECK(thetas[4] == kTwoPi);
    CHECK(std::is_sorted(thetas.begin(), thetas.end()));
}

TEST_CASE("identification bundle shape and balance") {
    const auto bundle = gen_identification(5, small_gen(42));
    CHECK(bundle.reference.size() == 5);
    CHECK(bundle.train.size() == 200);
    CHECK(bundle.valid.size() == 100);
    CHECK(bundle.test.size() == 100);
    for (const Dataset* ds : {&bundle.train, &bundle.valid, &bundle.test}) {
        int positives = 0;
        for (const Sample& s : ds->samples) {
            positives += s.label;
            CHECK(s.first.size() == 5);
            CHECK(s.second.size() == 0);
        }
        CHECK(positives * 2 == static_cast<int>(ds->size()));
        CHECK(ds->meta.task == TaskKind::identification);
        CHECK(ds->meta.theta_max == kTwoPi);
    }
    // alternating labels keep every even prefix balanced
    CHECK(bundle.train.samples[0].label == 1);
    CHECK(bundle.train.samples[1].label == 0);
}

TEST_CASE("generation is deterministic and seed-sensitive") {
    const auto a = gen_identification(4, small_gen(7));
    const auto b = gen_identification(4, small_gen(7));
    const auto c = gen_identification(4, small_gen(8));
    CHECK(a.reference == b.reference);
    CHECK(a.train.samples[17].first == b.train.samples[17].first);
    CHECK(a.test.samples[3].first == b.test.samples[3].first);
    CHECK_FALSE(a.reference == c.reference);
}

TEST_CASE("odd sample counts are rejected") {
    CHECK_THROWS_AS(gen_identification(5, small_gen(1, 201, 100)), std::invalid_argument);
    CHECK_THROWS_AS(gen_identification(5, small_gen(1, 200, 99)), std::invalid_argument);
    CHECK_THROWS_AS(gen_comparison_curriculum(3, 8, small_gen(1, 0, 10)),
                    std::invalid_argument);
}

TEST_CASE("alignment oracle separates identification classes") {
    // n = 8: positives always fit back onto the reference, negatives
    // essentially never do.
    GenConfig gen = small_gen(123);
    Rng ref_rng(99);
    const Configuration ref = sample_reference(8, ref_rng);
    const double bound = positive_bound(gen.eps);
    int neg_above = 0;
    Rng rng(1000);
    for (int i = 0; i < 1000; ++i) {
        const Configuration pos = make_ident_positive(ref, gen, rng);
        CHECK(testing::align_residual(pos, ref) <= bound);
        const Configuration neg = make_ident_negative(ref, gen, rng);
        if (testing::align_residual(neg, ref) > bound) ++neg_above;
    }
    CHECK(neg_above >= 990);
}

TEST_CASE("negative positions are fresh even with identity features") {
    GenConfig gen = small_gen(5);
    Rng ref_rng(31);
    const Configuration ref = sample_reference(6, ref_rng);
    Rng rng(77);
    const Configuration neg = make_ident_negative(ref, gen, rng);
    CHECK(neg.size() == ref.size());
    // non-position features survive (up to eps noise), positions do not
    for (std::size_t k = 0; k < ref.size(); ++k) {
        CHECK(neg.objects[k].shape == ref.objects[k].shape);
        CHECK(std::abs(neg.objects[k].color[0] - ref.objects[k].color[0]) <= gen.eps);
    }
    CHECK(testing::align_residual(neg, ref) > positive_bound(gen.eps));
}

TEST_CASE("comparison bundle: five stages, angles, full-rotation eval") {
    const auto bundle = gen_comparison_curriculum(3, 8, small_gen(11));
    const auto thetas = curriculum_theta_max();
    for (int k = 0; k < kCurriculumStages; ++k) {
        const Dataset& stage = bundle.train[static_cast<std::size_t>(k)];
        CHECK(stage.meta.theta_max == thetas[static_cast<std::size_t>(k)]);
        CHECK(stage.meta.task == TaskKind::comparison);
        CHECK(stage.size() == 200);
    }
    CHECK(bundle.valid.meta.theta_max == kTwoPi);
    CHECK(bundle.test.meta.theta_max == kTwoPi);
    for (const Sample& s : bundle.test.samples) {
        CHECK(s.first.size() == s.second.size());
        CHECK(s.first.size() >= 3);
        CHECK(s.first.size() <= 8);
    }
}

TEST_CASE("gen_comparison_test matches the bundle's test split") {
    const auto bundle = gen_comparison_curriculum(3, 6, small_gen(19));
    const Dataset alone = gen_comparison_test(3, 6, small_gen(19));
    REQUIRE(alone.size() == bundle.test.size());
    for (std::size_t i = 0; i < alone.size(); ++i) {
        CHECK(alone.samples[i].label == bundle.test.samples[i].label);
        CHECK(alone.samples[i].first == bundle.test.samples[i].first);
        CHECK(alone.samples[i].second == bundle.test.samples[i].second);
    }
}

TEST_CASE("comparison positives align, negatives do not") {
    GenConfig gen = small_gen(3);
    Rng rng(500);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const Sample pos = make_comp_sample(5, 8, kTwoPi, 1, gen, rng);
        CHECK(testing::align_residual(pos.second, pos.first) <= positive_bound(gen.eps));
        const Sample neg = make_comp_sample(5, 8, kTwoPi, 0, gen, rng);
        if (testing::align_residual(neg.second, neg.first) > positive_bound(gen.eps))
            ++checked;
    }
    CHECK(checked >= 396);
}

TEST_CASE("comparison rotation angles reach the last quadrant") {
    // recover the rotation on positives via the orientation shift; the test
    // set must exercise angles above 3*pi/2
    const auto bundle = gen_comparison_curriculum(4, 4, small_gen(21, 200, 400));
    int high = 0;
    for (const Sample& s : bundle.test.samples) {
        if (s.label != 1) continue;
        const double shift =
            mod_two_pi(s.second.objects[0].orientation - s.first.objects[0].orientation);
        if (shift > 3.0 * std::numbers::pi / 2.0) ++high;
    }
    CHECK(high > 10);
}

TEST_CASE("stage one keeps rotations small") {
    const auto bundle = gen_comparison_curriculum(4, 4, small_gen(22));
    // shift = phi + orientation noise, phi in [0, pi/10], noise within
    // +-eps*2*pi; unwrap values that land just below zero
    const double noise = 0.01 * kTwoPi + 1e-9;
    for (const Sample& s : bundle.train[0].samples) {
        if (s.label != 1) continue;
        double shift =
            mod_two_pi(s.second.objects[0].orientation - s.first.objects[0].orientation);
        if (shift > std::numbers::pi) shift -= kTwoPi;
        CHECK(shift >= -noise);
        CHECK(shift <= std::numbers::pi / 10.0 + noise);
    }
}

TEST_CASE("distractors extend both sides and keep labels") {
    const auto bundle = gen_comparison_curriculum(3, 5, small_gen(33));
    const Dataset with = add_distractors(bundle.test, 2, 4242);
    REQUIRE(with.size() == bundle.test.size());
    CHECK(with.meta.n_min == 5);
    CHECK(with.meta.n_max == 7);
    for (std::size_t i = 0; i < with.size(); ++i) {
        CHECK(with.samples[i].label == bundle.test.samples[i].label);
        CHECK(with.samples[i].first.size() == bundle.test.samples[i].first.size() + 2);
        CHECK(with.samples[i].second.size() == bundle.test.samples[i].second.size() + 2);
        // original objects are untouched
        for (std::size_t k = 0; k < bundle.test.samples[i].first.size(); ++k)
            CHECK(with.samples[i].first.objects[k] == bundle.test.samples[i].first.objects[k]);
    }
    const Dataset untouched = add_distractors(bundle.test, 0, 4242);
    CHECK(untouched.samples[7].first == bundle.test.samples[7].first);
}

TEST_CASE("identification distractors leave the second side empty") {
    const auto bundle = gen_identification(5, small_gen(44));
    const Dataset with = add_distractors(bundle.test, 3, 999);
    for (const Sample& s : with.samples) {
        CHECK(s.first.size() == 8);
        CHECK(s.second.size() == 0);
    }
}

TEST_CASE("preset configurations have the advertised structure") {
    Rng rng(8);
    const auto same = preset_config(PresetKind::same_point, 5, rng);
    for (const auto& o : same.objects) {
        CHECK(o.x == same.objects[0].x);
        CHECK(o.y == same.objects[0].y);
        CHECK(o.shape == Shape::circle);
        CHECK(o.color[0] == 1.0);
    }

    const auto line = preset_config(PresetKind::line, 5, rng);
    std::set<double> ys;
    for (const auto& o : line.objects) ys.insert(o.y);
    CHECK(ys.size() == 1);
    for (std::size_t k = 1; k < line.objects.size(); ++k)
        CHECK(line.objects[k].x - line.objects[k - 1].x == doctest::Approx(1.0));

    const auto scattered = preset_config(PresetKind::scattered_red_circles, 5, rng);
    std::set<double> xs;
    for (const auto& o : scattered.objects) {
        CHECK(o.shape == Shape::circle);
        CHECK(o.color[0] == 1.0);
        CHECK(o.color[1] == 0.0);
        xs.insert(o.x);
    }
    CHECK(xs.size() == 5);

    const auto colored = preset_config(PresetKind::colored_circles, 5, rng);
    std::set<double> reds;
    for (const auto& o : colored.objects) {
        CHECK(o.shape == Shape::circle);
        reds.insert(o.color[0]);
    }
    CHECK(reds.size() == 5);

    const auto diverse = preset_config(PresetKind::random_diverse, 5, rng);
    CHECK(diverse.size() == 5);
}

TEST_CASE("preset names round trip") {
    for (int k = 0; k < 5; ++k) {
        const auto kind = static_cast<PresetKind>(k);
        CHECK(preset_from_name(preset_name(kind)) == kind);
    }
    CHECK_THROWS_AS(preset_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("dataset names") {
    CHECK(ident_dataset_name(5, "") == "IDS_5");
    CHECK(ident_dataset_name(12, "test") == "IDS_12_test");
    CHECK(comp_dataset_name(3, 8, "") == "CDS_3_8");
    CHECK(comp_dataset_name(9, 20, "valid") == "CDS_9_20_valid");
    CHECK(comp_dataset_name(3, 8, "0") == "CDS_3_8_0");
}

TEST_CASE("task names round trip") {
    CHECK(task_from_name(task_name(TaskKind::identification)) == TaskKind::identification);
    CHECK(task_from_name(task_name(TaskKind::comparison)) == TaskKind::comparison);
    CHECK_THROWS_AS(task_from_name("other"), std::invalid_argument);
}

}  // TEST_SUITE
