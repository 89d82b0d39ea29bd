#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <functional>

#include "spatialsim/rng.hpp"
#include "spatialsim/tensor.hpp"
#include "support/oracles.hpp"

using namespace spatialsim;

namespace {

Matrix random_matrix(int r, int c, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

// Checks every entry of every parameter against central differences. The
// builder must construct the whole graph from the parameter nodes so that a
// bumped value is visible to the recomputation.
void check_grads(const std::vector<Var>& params, const std::function<Var()>& build) {
    Var loss = build();
    REQUIRE(loss->value.rows() == 1);
    REQUIRE(loss->value.cols() == 1);
    backward(loss);
    for (const Var& p : params) {
        const Matrix analytic = p->grad;
        for (int i = 0; i < p->value.rows(); ++i) {
            for (int j = 0; j < p->value.cols(); ++j) {
                const double fd = testing::finite_diff(
                    [&] { return build()->value(0, 0); }, &p->value, i, j);
                const double a = analytic(i, j);
                const double rel =
                    std::abs(a - fd) / std::max({1e-4, std::abs(a), std::abs(fd)});
                CHECK(rel <= 1e-5);
            }
        }
    }
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("relu forward") {
    Matrix m(1, 2);
    m(0, 0) = -1.0;
    m(0, 1) = 2.0;
    const Var r = relu(constant(m));
    CHECK(r->value(0, 0) == 0.0);
    CHECK(r->value(0, 1) == 2.0);
}

TEST_CASE("segment_sum forward") {
    Matrix m(3, 1);
    m(0, 0) = 1.0;
    m(1, 0) = 2.0;
    m(2, 0) = 3.0;
    const Var s = segment_sum(constant(m), {0, 0, 1}, 2);
    REQUIRE(s->value.rows() == 2);
    CHECK(s->value(0, 0) == 3.0);
    CHECK(s->value(1, 0) == 3.0);
}

TEST_CASE("segment_sum validates indices") {
    Matrix m(2, 1);
    CHECK_THROWS_AS(segment_sum(constant(m), {0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(segment_sum(constant(m), {0, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(segment_sum(constant(m), {0, -1}, 2), std::invalid_argument);
}

TEST_CASE("matmul forward") {
    Matrix a(2, 2), b(2, 1);
    a(0, 0) = 1.0; a(0, 1) = 2.0;
    a(1, 0) = 3.0; a(1, 1) = 4.0;
    b(0, 0) = 5.0; b(1, 0) = 6.0;
    const Var c = matmul(constant(a), constant(b));
    CHECK(c->value(0, 0) == 17.0);
    CHECK(c->value(1, 0) == 39.0);
    Matrix bad(3, 1);
    CHECK_THROWS_AS(matmul(constant(a), constant(bad)), std::invalid_argument);
}

TEST_CASE("add broadcasts a single row") {
    Matrix a(2, 2);
    a.fill(1.0);
    Matrix bias(1, 2);
    bias(0, 0) = 10.0;
    bias(0, 1) = 20.0;
    const Var s = add(constant(a), constant(bias));
    CHECK(s->value(0, 0) == 11.0);
    CHECK(s->value(1, 1) == 21.0);
}

TEST_CASE("sum of squares has gradient 2x") {
    Rng rng(1);
    Var x = parameter(random_matrix(3, 4, rng));
    const Var loss = sum_all(mul(x, x));
    backward(loss);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(x->grad(i, j) == doctest::Approx(2.0 * x->value(i, j)).epsilon(1e-12));
}

TEST_CASE("reused node accumulates gradient") {
    Matrix m(1, 1);
    m(0, 0) = 3.0;
    Var x = parameter(m);
    backward(sum_all(add(x, x)));
    CHECK(x->grad(0, 0) == 2.0);
}

TEST_CASE("matmul gradients") {
    Rng rng(2);
    Var a = parameter(random_matrix(3, 4, rng));
    Var b = parameter(random_matrix(4, 2, rng));
    check_grads({a, b}, [&] { return sum_all(mul(matmul(a, b), matmul(a, b))); });
}

TEST_CASE("bias broadcast gradients") {
    Rng rng(3);
    Var a = parameter(random_matrix(5, 3, rng));
    Var bias = parameter(random_matrix(1, 3, rng));
    check_grads({a, bias}, [&] { return sum_all(relu(add(a, bias))); });
}

TEST_CASE("relu and mul gradients") {
    Rng rng(4);
    Var a = parameter(random_matrix(4, 4, rng));
    Var b = parameter(random_matrix(4, 4, rng));
    check_grads({a, b}, [&] { return sum_all(mul(relu(a), b)); });
}

TEST_CASE("concat routes gradients to every part") {
    Rng rng(5);
    Var a = parameter(random_matrix(3, 2, rng));
    Var b = parameter(random_matrix(3, 3, rng));
    Var c = parameter(random_matrix(3, 1, rng));
    Var w = parameter(random_matrix(6, 1, rng));
    check_grads({a, b, c, w},
                [&] { return sum_all(mul(matmul(concat({a, b, c}), w),
                                         matmul(concat({a, b, c}), w))); });
}

TEST_CASE("gather_rows gradients scatter with accumulation") {
    Rng rng(6);
    Var a = parameter(random_matrix(3, 2, rng));
    const std::vector<int> rows{0, 2, 0, 1, 0};
    check_grads({a}, [&] { return sum_all(mul(gather_rows(a, rows), gather_rows(a, rows))); });
    CHECK_THROWS_AS(gather_rows(a, {3}), std::invalid_argument);
    CHECK_THROWS_AS(gather_rows(a, {-1}), std::invalid_argument);
}

TEST_CASE("segment_sum gradients") {
    Rng rng(7);
    Var a = parameter(random_matrix(5, 2, rng));
    const std::vector<int> seg{0, 1, 1, 0, 2};
    check_grads({a}, [&] {
        const Var s = segment_sum(a, seg, 3);
        return sum_all(mul(s, s));
    });
}

TEST_CASE("mean_rows gradients") {
    Rng rng(8);
    Var a = parameter(random_matrix(4, 3, rng));
    check_grads({a}, [&] {
        const Var m = mean_rows(a);
        return sum_all(mul(m, m));
    });
}

TEST_CASE("softmax cross entropy value") {
    Matrix logits(2, 2);
    logits(0, 0) = 1.0; logits(0, 1) = 2.0;
    logits(1, 0) = 0.5; logits(1, 1) = 0.5;
    const Var loss = softmax_cross_entropy(constant(logits), {1, 0});
    const double l0 = -std::log(std::exp(2.0) / (std::exp(1.0) + std::exp(2.0)));
    const double l1 = -std::log(0.5);
    CHECK(loss->value(0, 0) == doctest::Approx((l0 + l1) / 2.0).epsilon(1e-12));
}

TEST_CASE("softmax cross entropy is stable for huge logits") {
    Matrix logits(1, 2);
    logits(0, 0) = 1000.0;
    logits(0, 1) = -1000.0;
    const Var loss = softmax_cross_entropy(constant(logits), {0});
    CHECK(std::isfinite(loss->value(0, 0)));
    CHECK(loss->value(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("softmax cross entropy gradients") {
    Rng rng(9);
    Var logits = parameter(random_matrix(6, 2, rng, -2.0, 2.0));
    const std::vector<int> labels{0, 1, 1, 0, 1, 0};
    check_grads({logits}, [&] { return softmax_cross_entropy(logits, labels); });
}

TEST_CASE("softmax cross entropy validates labels") {
    Matrix logits(2, 2);
    CHECK_THROWS_AS(softmax_cross_entropy(constant(logits), {0}), std::invalid_argument);
    CHECK_THROWS_AS(softmax_cross_entropy(constant(logits), {0, 2}), std::invalid_argument);
}

TEST_CASE("backward requires a scalar root") {
    Matrix m(2, 2);
    CHECK_THROWS_AS(backward(parameter(m)), std::invalid_argument);
}

TEST_CASE("constants receive no gradient buffers") {
    Matrix m(2, 2);
    m.fill(1.0);
    Var c = constant(m);
    Var x = parameter(m);
    backward(sum_all(mul(c, x)));
    CHECK_FALSE(c->requires_grad);
    CHECK(x->grad(0, 0) == 1.0);
}

TEST_CASE("deep chain backward does not overflow the stack") {
    Matrix m(1, 1);
    m(0, 0) = 1.0;
    Var x = parameter(m);
    Var y = x;
    for (int i = 0; i < 60000; ++i) y = add(y, x);
    backward(sum_all(y));
    CHECK(x->grad(0, 0) == 60001.0);
}

TEST_CASE("argmax ties resolve to the lowest index") {
    Matrix m(3, 2);
    m(0, 0) = 0.3; m(0, 1) = 0.7;
    m(1, 0) = 0.5; m(1, 1) = 0.5;
    m(2, 0) = 0.9; m(2, 1) = 0.1;
    CHECK(argmax_rows(m) == std::vector<int>{1, 0, 0});
}

TEST_CASE("forward values are bit-identical across rebuilds") {
    Rng rng(10);
    const Matrix a = random_matrix(6, 6, rng);
    const Matrix b = random_matrix(6, 6, rng);
    auto run = [&] {
        return sum_all(relu(matmul(constant(a), constant(b))))->value(0, 0);
    };
    const double first = run();
    for (int i = 0; i < 5; ++i) CHECK(run() == first);
}

}  // TEST_SUITE
