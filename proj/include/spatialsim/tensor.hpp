#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "spatialsim/matrix.hpp"

namespace spatialsim {

// Reverse-mode autodiff over dense float64 matrices. Every operation builds a
// fresh node; backward() walks the graph in reverse topological order and
// accumulates exact adjoints into each requires_grad node. Reductions run in
// a fixed left-to-right order so repeated runs are bit-identical.
struct TensorNode {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<TensorNode>> parents;
    std::function<void(TensorNode&)> backprop;  // accumulates into parents' grads

    // Tears long parent chains down iteratively; the default recursive
    // shared_ptr destruction would exhaust the stack on deep graphs.
    ~TensorNode();
};

using Var = std::shared_ptr<TensorNode>;

Var constant(Matrix value);
Var parameter(Matrix value);

Var matmul(const Var& a, const Var& b);
// Elementwise sum; b may also be a 1-row matrix broadcast over a's rows.
Var add(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var relu(const Var& a);
// Concatenation along the last axis.
Var concat(const std::vector<Var>& parts);
// out.row(i) = a.row(rows[i]); adjoint scatters back with accumulation.
Var gather_rows(const Var& a, const std::vector<int>& rows);
// out.row(s) = sum of a.row(i) over i with segment_index[i] == s.
Var segment_sum(const Var& a, const std::vector<int>& segment_index, int n_segments);
Var mean_rows(const Var& a);
Var sum_all(const Var& a);
// Mean over rows of -log softmax(logits)[label]; logits (B, K), labels size B.
Var softmax_cross_entropy(const Var& logits, const std::vector<int>& labels);

// Seeds root (must be 1x1) with gradient 1 and propagates to all ancestors.
void backward(const Var& root);

// Row-wise argmax; ties resolve to the lowest column index.
std::vector<int> argmax_rows(const Matrix& m);

}  // namespace spatialsim
