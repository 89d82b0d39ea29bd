#pragma once

#include <string>

#include "spatialsim/dataset.hpp"

namespace spatialsim {

// Doubles rendered with 17 significant digits so read(write(x)) == x bitwise.
std::string format_double(double value);

// Line-delimited format: a header record (task, n_obj range, theta_max, eps,
// seed, generator version) followed by one JSON record per sample. Files are
// byte-identical across runs for the same dataset.
void write_dataset(const std::string& path, const Dataset& dataset);

// Throws std::runtime_error naming the offending line on malformed input.
Dataset read_dataset(const std::string& path);

}  // namespace spatialsim
