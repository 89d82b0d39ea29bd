#pragma once

#include <cstdint>
#include <string>

#include "spatialsim/models.hpp"

namespace spatialsim {

// Single-file JSON container: model hyperparameters, the RNG seed the model
// was built with, and every parameter's name, shape and row-major values
// (17 significant digits, so save/load round-trips exactly).
void save_checkpoint(const std::string& path, const Model& model, std::uint64_t seed);

struct LoadedCheckpoint {
    Model model;
    std::uint64_t seed = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace spatialsim
