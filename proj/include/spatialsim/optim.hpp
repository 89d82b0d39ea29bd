#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spatialsim/tensor.hpp"

namespace spatialsim {

// Named parameter tensors plus their Adam state. Entries keep creation order
// so serialization and hashing are stable.
class ParamStore {
public:
    struct Entry {
        std::string name;
        Var tensor;
        Matrix m;  // Adam first-moment accumulator
        Matrix v;  // Adam second-moment accumulator
    };

    Var create(const std::string& name, Matrix init);
    Var get(const std::string& name) const;
    bool has(const std::string& name) const;

    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Entry>& entries() { return entries_; }
    std::size_t count_scalars() const;
    int step_count() const { return step_count_; }
    void set_step_count(int t) { step_count_ = t; }

    void zero_grad();

private:
    friend void adam_step(ParamStore& store, double lr);
    std::vector<Entry> entries_;
    int step_count_ = 0;
};

// Standard Adam update (beta1 0.9, beta2 0.999, eps 1e-8, bias-corrected).
// Gradients are zeroed afterward.
void adam_step(ParamStore& store, double lr);

// Order-sensitive FNV-style hash over every parameter's bit pattern; used by
// the determinism checks and reported in RunReports.
std::uint64_t params_hash(const ParamStore& store);

}  // namespace spatialsim
