#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spatialsim/geometry.hpp"

namespace spatialsim {

enum class TaskKind : int { identification = 0, comparison = 1 };

std::string task_name(TaskKind task);
TaskKind task_from_name(const std::string& name);

// A labeled record. Identification samples use `first` only; Comparison
// samples carry both configurations.
struct Sample {
    int label = 0;  // 1 = positive, 0 = negative
    Configuration first;
    Configuration second;  // empty for identification
};

// File header fields; see dataset_io for the on-disk layout.
struct DatasetMeta {
    TaskKind task = TaskKind::identification;
    int n_min = 0;
    int n_max = 0;
    double theta_max = 0.0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    int version = 1;
};

struct Dataset {
    DatasetMeta meta;
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
};

}  // namespace spatialsim
