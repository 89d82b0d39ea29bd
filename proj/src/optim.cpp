#include "spatialsim/optim.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace spatialsim {

Var ParamStore::create(const std::string& name, Matrix init) {
    if (has(name)) throw std::invalid_argument("duplicate parameter name: " + name);
    Entry entry;
    entry.name = name;
    entry.tensor = parameter(std::move(init));
    entry.m = Matrix(entry.tensor->value.rows(), entry.tensor->value.cols());
    entry.v = Matrix(entry.tensor->value.rows(), entry.tensor->value.cols());
    entries_.push_back(std::move(entry));
    return entries_.back().tensor;
}

Var ParamStore::get(const std::string& name) const {
    for (const Entry& entry : entries_) {
        if (entry.name == name) return entry.tensor;
    }
    throw std::out_of_range("unknown parameter: " + name);
}

bool ParamStore::has(const std::string& name) const {
    for (const Entry& entry : entries_) {
        if (entry.name == name) return true;
    }
    return false;
}

std::size_t ParamStore::count_scalars() const {
    std::size_t total = 0;
    for (const Entry& entry : entries_) total += entry.tensor->value.size();
    return total;
}

void ParamStore::zero_grad() {
    for (Entry& entry : entries_) entry.tensor->grad.fill(0.0);
}

void adam_step(ParamStore& store, double lr) {
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    const int t = ++store.step_count_;
    const double bias1 = 1.0 - std::pow(kBeta1, t);
    const double bias2 = 1.0 - std::pow(kBeta2, t);
    for (ParamStore::Entry& entry : store.entries_) {
        Matrix& value = entry.tensor->value;
        Matrix& grad = entry.tensor->grad;
        for (int i = 0; i < value.rows(); ++i) {
            for (int j = 0; j < value.cols(); ++j) {
                const double g = grad(i, j);
                entry.m(i, j) = kBeta1 * entry.m(i, j) + (1.0 - kBeta1) * g;
                entry.v(i, j) = kBeta2 * entry.v(i, j) + (1.0 - kBeta2) * g * g;
                const double m_hat = entry.m(i, j) / bias1;
                const double v_hat = entry.v(i, j) / bias2;
                value(i, j) -= lr * m_hat / (std::sqrt(v_hat) + kEps);
            }
        }
        grad.fill(0.0);
    }
}

std::uint64_t params_hash(const ParamStore& store) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t bits) {
        h ^= bits;
        h *= 0x100000001b3ULL;
    };
    for (const ParamStore::Entry& entry : store.entries()) {
        for (char c : entry.name) mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        const Matrix& value = entry.tensor->value;
        mix(static_cast<std::uint64_t>(value.rows()));
        mix(static_cast<std::uint64_t>(value.cols()));
        for (std::size_t i = 0; i < value.size(); ++i)
            mix(std::bit_cast<std::uint64_t>(value.data()[i]));
    }
    return h;
}

}  // namespace spatialsim
