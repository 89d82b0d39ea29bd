#include "spatialsim/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace spatialsim {

namespace {

std::string shape_str(const Matrix& m) {
    return "(" + std::to_string(m.rows()) + ", " + std::to_string(m.cols()) + ")";
}

[[noreturn]] void shape_error(const std::string& op, const Matrix& a, const Matrix& b) {
    throw std::invalid_argument(op + ": incompatible shapes " + shape_str(a) + " and " +
                                shape_str(b));
}

Var make_node(Matrix value, std::vector<Var> parents, std::function<void(TensorNode&)> backprop) {
    auto node = std::make_shared<TensorNode>();
    node->value = std::move(value);
    node->parents = std::move(parents);
    for (const Var& p : node->parents) node->requires_grad |= p->requires_grad;
    if (node->requires_grad) {
        node->grad = Matrix(node->value.rows(), node->value.cols());
        node->backprop = std::move(backprop);
    }
    return node;
}

}  // namespace

TensorNode::~TensorNode() {
    std::vector<Var> pending;
    auto drain = [&pending](std::vector<Var>& links) {
        for (Var& p : links)
            if (p && p.use_count() == 1) pending.push_back(std::move(p));
        links.clear();
    };
    drain(parents);
    while (!pending.empty()) {
        Var node = std::move(pending.back());
        pending.pop_back();
        drain(node->parents);
    }
}

Var constant(Matrix value) {
    auto node = std::make_shared<TensorNode>();
    node->value = std::move(value);
    return node;
}

Var parameter(Matrix value) {
    auto node = std::make_shared<TensorNode>();
    node->value = std::move(value);
    node->requires_grad = true;
    node->grad = Matrix(node->value.rows(), node->value.cols());
    return node;
}

Var matmul(const Var& a, const Var& b) {
    const Matrix& av = a->value;
    const Matrix& bv = b->value;
    if (av.cols() != bv.rows()) shape_error("matmul", av, bv);
    Matrix out(av.rows(), bv.cols());
    for (int i = 0; i < av.rows(); ++i) {
        double* out_row = out.row(i);
        const double* a_row = av.row(i);
        for (int k = 0; k < av.cols(); ++k) {
            const double aik = a_row[k];
            const double* b_row = bv.row(k);
            for (int j = 0; j < bv.cols(); ++j) out_row[j] += aik * b_row[j];
        }
    }
    return make_node(std::move(out), {a, b}, [](TensorNode& self) {
        const Matrix& g = self.grad;
        TensorNode& pa = *self.parents[0];
        TensorNode& pb = *self.parents[1];
        if (pa.requires_grad) {
            // dA = g * B^T
            for (int i = 0; i < pa.value.rows(); ++i) {
                double* da_row = pa.grad.row(i);
                const double* g_row = g.row(i);
                for (int k = 0; k < pb.value.rows(); ++k) {
                    const double* b_row = pb.value.row(k);
                    double acc = 0.0;
                    for (int j = 0; j < g.cols(); ++j) acc += g_row[j] * b_row[j];
                    da_row[k] += acc;
                }
            }
        }
        if (pb.requires_grad) {
            // dB = A^T * g
            for (int i = 0; i < pa.value.rows(); ++i) {
                const double* a_row = pa.value.row(i);
                const double* g_row = g.row(i);
                for (int k = 0; k < pb.value.rows(); ++k) {
                    const double aik = a_row[k];
                    double* db_row = pb.grad.row(k);
                    for (int j = 0; j < g.cols(); ++j) db_row[j] += aik * g_row[j];
                }
            }
        }
    });
}

Var add(const Var& a, const Var& b) {
    const Matrix& av = a->value;
    const Matrix& bv = b->value;
    const bool broadcast = bv.rows() == 1 && av.rows() != 1;
    if (av.cols() != bv.cols() || (!broadcast && av.rows() != bv.rows()))
        shape_error("add", av, bv);
    Matrix out = av;
    for (int i = 0; i < out.rows(); ++i) {
        double* out_row = out.row(i);
        const double* b_row = bv.row(broadcast ? 0 : i);
        for (int j = 0; j < out.cols(); ++j) out_row[j] += b_row[j];
    }
    return make_node(std::move(out), {a, b}, [broadcast](TensorNode& self) {
        const Matrix& g = self.grad;
        TensorNode& pa = *self.parents[0];
        TensorNode& pb = *self.parents[1];
        if (pa.requires_grad) {
            for (int i = 0; i < g.rows(); ++i) {
                double* da_row = pa.grad.row(i);
                const double* g_row = g.row(i);
                for (int j = 0; j < g.cols(); ++j) da_row[j] += g_row[j];
            }
        }
        if (pb.requires_grad) {
            for (int i = 0; i < g.rows(); ++i) {
                double* db_row = pb.grad.row(broadcast ? 0 : i);
                const double* g_row = g.row(i);
                for (int j = 0; j < g.cols(); ++j) db_row[j] += g_row[j];
            }
        }
    });
}

Var mul(const Var& a, const Var& b) {
    const Matrix& av = a->value;
    const Matrix& bv = b->value;
    if (!av.same_shape(bv)) shape_error("mul", av, bv);
    Matrix out = av;
    for (int i = 0; i < out.rows(); ++i) {
        double* out_row = out.row(i);
        const double* b_row = bv.row(i);
        for (int j = 0; j < out.cols(); ++j) out_row[j] *= b_row[j];
    }
    return make_node(std::move(out), {a, b}, [](TensorNode& self) {
        const Matrix& g = self.grad;
        TensorNode& pa = *self.parents[0];
        TensorNode& pb = *self.parents[1];
        for (int i = 0; i < g.rows(); ++i) {
            const double* g_row = g.row(i);
            const double* a_row = pa.value.row(i);
            const double* b_row = pb.value.row(i);
            for (int j = 0; j < g.cols(); ++j) {
                if (pa.requires_grad) pa.grad(i, j) += g_row[j] * b_row[j];
                if (pb.requires_grad) pb.grad(i, j) += g_row[j] * a_row[j];
            }
        }
    });
}

Var relu(const Var& a) {
    Matrix out = a->value;
    for (int i = 0; i < out.rows(); ++i) {
        double* row = out.row(i);
        for (int j = 0; j < out.cols(); ++j) row[j] = std::max(row[j], 0.0);
    }
    return make_node(std::move(out), {a}, [](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        if (!pa.requires_grad) return;
        for (int i = 0; i < self.grad.rows(); ++i) {
            const double* g_row = self.grad.row(i);
            const double* a_row = pa.value.row(i);
            double* da_row = pa.grad.row(i);
            for (int j = 0; j < self.grad.cols(); ++j) {
                if (a_row[j] > 0.0) da_row[j] += g_row[j];
            }
        }
    });
}

Var concat(const std::vector<Var>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat: no inputs");
    const int rows = parts.front()->value.rows();
    int cols = 0;
    for (const Var& p : parts) {
        if (p->value.rows() != rows) shape_error("concat", parts.front()->value, p->value);
        cols += p->value.cols();
    }
    Matrix out(rows, cols);
    int base = 0;
    for (const Var& p : parts) {
        const Matrix& pv = p->value;
        for (int i = 0; i < rows; ++i) {
            double* out_row = out.row(i) + base;
            const double* p_row = pv.row(i);
            for (int j = 0; j < pv.cols(); ++j) out_row[j] = p_row[j];
        }
        base += pv.cols();
    }
    return make_node(std::move(out), parts, [](TensorNode& self) {
        int base = 0;
        for (const Var& p : self.parents) {
            const int pcols = p->value.cols();
            if (p->requires_grad) {
                for (int i = 0; i < self.grad.rows(); ++i) {
                    const double* g_row = self.grad.row(i) + base;
                    double* dp_row = p->grad.row(i);
                    for (int j = 0; j < pcols; ++j) dp_row[j] += g_row[j];
                }
            }
            base += pcols;
        }
    });
}

Var gather_rows(const Var& a, const std::vector<int>& rows) {
    const Matrix& av = a->value;
    for (int r : rows) {
        if (r < 0 || r >= av.rows())
            throw std::invalid_argument("gather_rows: index " + std::to_string(r) +
                                        " out of range for " + shape_str(av));
    }
    Matrix out(static_cast<int>(rows.size()), av.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double* src = av.row(rows[i]);
        double* dst = out.row(static_cast<int>(i));
        for (int j = 0; j < av.cols(); ++j) dst[j] = src[j];
    }
    return make_node(std::move(out), {a}, [rows](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        if (!pa.requires_grad) return;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double* g_row = self.grad.row(static_cast<int>(i));
            double* da_row = pa.grad.row(rows[i]);
            for (int j = 0; j < self.grad.cols(); ++j) da_row[j] += g_row[j];
        }
    });
}

Var segment_sum(const Var& a, const std::vector<int>& segment_index, int n_segments) {
    const Matrix& av = a->value;
    if (static_cast<int>(segment_index.size()) != av.rows())
        throw std::invalid_argument("segment_sum: index count " +
                                    std::to_string(segment_index.size()) +
                                    " does not match rows of " + shape_str(av));
    for (int s : segment_index) {
        if (s < 0 || s >= n_segments)
            throw std::invalid_argument("segment_sum: segment " + std::to_string(s) +
                                        " outside [0, " + std::to_string(n_segments) + ")");
    }
    Matrix out(n_segments, av.cols());
    for (int i = 0; i < av.rows(); ++i) {
        const double* src = av.row(i);
        double* dst = out.row(segment_index[static_cast<std::size_t>(i)]);
        for (int j = 0; j < av.cols(); ++j) dst[j] += src[j];
    }
    return make_node(std::move(out), {a}, [segment_index](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        if (!pa.requires_grad) return;
        for (std::size_t i = 0; i < segment_index.size(); ++i) {
            const double* g_row = self.grad.row(segment_index[i]);
            double* da_row = pa.grad.row(static_cast<int>(i));
            for (int j = 0; j < self.grad.cols(); ++j) da_row[j] += g_row[j];
        }
    });
}

Var mean_rows(const Var& a) {
    const Matrix& av = a->value;
    if (av.rows() == 0) throw std::invalid_argument("mean_rows: empty input");
    Matrix out(1, av.cols());
    for (int i = 0; i < av.rows(); ++i) {
        const double* src = av.row(i);
        for (int j = 0; j < av.cols(); ++j) out(0, j) += src[j];
    }
    const double inv = 1.0 / av.rows();
    for (int j = 0; j < av.cols(); ++j) out(0, j) *= inv;
    return make_node(std::move(out), {a}, [inv](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        if (!pa.requires_grad) return;
        for (int i = 0; i < pa.value.rows(); ++i) {
            double* da_row = pa.grad.row(i);
            for (int j = 0; j < self.grad.cols(); ++j) da_row[j] += self.grad(0, j) * inv;
        }
    });
}

Var sum_all(const Var& a) {
    Matrix out(1, 1);
    const Matrix& av = a->value;
    double acc = 0.0;
    for (int i = 0; i < av.rows(); ++i) {
        const double* src = av.row(i);
        for (int j = 0; j < av.cols(); ++j) acc += src[j];
    }
    out(0, 0) = acc;
    return make_node(std::move(out), {a}, [](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        if (!pa.requires_grad) return;
        const double g = self.grad(0, 0);
        for (int i = 0; i < pa.grad.rows(); ++i) {
            double* da_row = pa.grad.row(i);
            for (int j = 0; j < pa.grad.cols(); ++j) da_row[j] += g;
        }
    });
}

Var softmax_cross_entropy(const Var& logits, const std::vector<int>& labels) {
    const Matrix& lv = logits->value;
    if (static_cast<int>(labels.size()) != lv.rows())
        throw std::invalid_argument("softmax_cross_entropy: " + std::to_string(labels.size()) +
                                    " labels for logits " + shape_str(lv));
    for (int y : labels) {
        if (y < 0 || y >= lv.cols())
            throw std::invalid_argument("softmax_cross_entropy: label " + std::to_string(y) +
                                        " outside [0, " + std::to_string(lv.cols()) + ")");
    }
    // probs cached for the adjoint: d logits = (softmax - onehot) / B.
    auto probs = std::make_shared<Matrix>(lv.rows(), lv.cols());
    Matrix out(1, 1);
    double total = 0.0;
    for (int i = 0; i < lv.rows(); ++i) {
        const double* row = lv.row(i);
        double m = row[0];
        for (int j = 1; j < lv.cols(); ++j) m = std::max(m, row[j]);
        double denom = 0.0;
        for (int j = 0; j < lv.cols(); ++j) denom += std::exp(row[j] - m);
        const double log_denom = std::log(denom);
        for (int j = 0; j < lv.cols(); ++j)
            (*probs)(i, j) = std::exp(row[j] - m) / denom;
        total += log_denom - (row[labels[static_cast<std::size_t>(i)]] - m);
    }
    out(0, 0) = total / lv.rows();
    return make_node(std::move(out), {logits}, [probs, labels](TensorNode& self) {
        TensorNode& pl = *self.parents[0];
        if (!pl.requires_grad) return;
        const double g = self.grad(0, 0) / pl.value.rows();
        for (int i = 0; i < pl.value.rows(); ++i) {
            double* dl_row = pl.grad.row(i);
            for (int j = 0; j < pl.value.cols(); ++j) {
                const double onehot = j == labels[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
                dl_row[j] += g * ((*probs)(i, j) - onehot);
            }
        }
    });
}

void backward(const Var& root) {
    if (root->value.rows() != 1 || root->value.cols() != 1)
        throw std::invalid_argument("backward: root must be a 1x1 scalar, got " +
                                    shape_str(root->value));
    if (!root->requires_grad) return;

    // Iterative post-order DFS; order holds each reachable node exactly once
    // with parents before children in the reversed walk below.
    std::vector<TensorNode*> order;
    std::unordered_set<TensorNode*> visited;
    std::vector<std::pair<TensorNode*, std::size_t>> stack;
    stack.emplace_back(root.get(), 0);
    visited.insert(root.get());
    while (!stack.empty()) {
        auto& [node, next_parent] = stack.back();
        if (next_parent < node->parents.size()) {
            TensorNode* parent = node->parents[next_parent++].get();
            if (parent->requires_grad && visited.insert(parent).second)
                stack.emplace_back(parent, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    root->grad(0, 0) += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if ((*it)->backprop) (*it)->backprop(**it);
    }
}

std::vector<int> argmax_rows(const Matrix& m) {
    std::vector<int> out(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        const double* row = m.row(i);
        int best = 0;
        for (int j = 1; j < m.cols(); ++j) {
            if (row[j] > row[best]) best = j;
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

}  // namespace spatialsim
