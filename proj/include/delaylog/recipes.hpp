#pragma once

// Reproduction recipes for the reference figures and table: fixed
// parameters, data files written to an output directory, and a pass/fail
// check with the measured values.

#include "delaylog/io.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace delaylog {

struct RecipeCheck {
    std::string name;
    bool passed = false;
    std::string detail; // measured vs expected
};

struct RecipeResult {
    std::string name;
    bool passed = false;
    std::vector<RecipeCheck> checks;
    std::vector<std::filesystem::path> files;
    Json measured;
};

struct RecipeOptions {
    std::uint64_t rng_seed = 1;
    unsigned workers = 1;
};

std::vector<std::string> const& recipe_names();

/// Throws InvalidInputError for an unknown name.
RecipeResult reproduce_recipe(std::string_view name, std::filesystem::path const& out_dir,
                              RecipeOptions const& options = {});

Json recipe_to_json(RecipeResult const& r);

/// Throws RecipeFailure listing the failed checks.
void require_passed(RecipeResult const& r);

} // namespace delaylog
