#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "spatialsim/optim.hpp"
#include "spatialsim/rng.hpp"

using namespace spatialsim;

namespace {

Matrix scalar(double v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
}

}  // namespace

TEST_SUITE("optim") {

TEST_CASE("store rejects duplicates and unknown names") {
    ParamStore store;
    store.create("a", scalar(1.0));
    CHECK_THROWS_AS(store.create("a", scalar(2.0)), std::invalid_argument);
    CHECK_THROWS_AS(store.get("missing"), std::out_of_range);
    CHECK(store.has("a"));
    CHECK_FALSE(store.has("b"));
    CHECK(store.count_scalars() == 1);
}

TEST_CASE("first adam step moves by about lr against unit gradient") {
    ParamStore store;
    Var p = store.create("w", scalar(0.5));
    p->grad(0, 0) = 1.0;
    adam_step(store, 1e-3);
    // bias-corrected first step: lr * g / (|g| + eps) = lr to within eps
    CHECK(p->value(0, 0) == doctest::Approx(0.5 - 1e-3).epsilon(1e-6));
    CHECK(p->grad(0, 0) == 0.0);  // gradients cleared for the next batch
    CHECK(store.step_count() == 1);
}

TEST_CASE("adam matches an independent reference over many steps") {
    ParamStore store;
    Var p = store.create("w", scalar(2.0));

    double ref = 2.0, m = 0.0, v = 0.0;
    const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    for (int t = 1; t <= 200; ++t) {
        // gradient of 0.5 * w^2 is w
        const double g_ref = ref;
        m = b1 * m + (1.0 - b1) * g_ref;
        v = b2 * v + (1.0 - b2) * g_ref * g_ref;
        const double mhat = m / (1.0 - std::pow(b1, t));
        const double vhat = v / (1.0 - std::pow(b2, t));
        ref -= lr * mhat / (std::sqrt(vhat) + eps);

        p->grad(0, 0) = p->value(0, 0);
        adam_step(store, lr);
        CHECK(p->value(0, 0) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(store.step_count() == 200);
}

TEST_CASE("zero_grad clears every gradient") {
    ParamStore store;
    Var a = store.create("a", scalar(1.0));
    Var b = store.create("b", scalar(2.0));
    a->grad(0, 0) = 3.0;
    b->grad(0, 0) = 4.0;
    store.zero_grad();
    CHECK(a->grad(0, 0) == 0.0);
    CHECK(b->grad(0, 0) == 0.0);
}

TEST_CASE("params_hash tracks values, names and shapes") {
    ParamStore a, b;
    a.create("w", scalar(1.0));
    b.create("w", scalar(1.0));
    CHECK(params_hash(a) == params_hash(b));

    ParamStore c;
    c.create("w", scalar(std::nextafter(1.0, 2.0)));
    CHECK(params_hash(a) != params_hash(c));

    ParamStore d;
    d.create("x", scalar(1.0));
    CHECK(params_hash(a) != params_hash(d));
}

}  // TEST_SUITE
