#pragma once

#include <filesystem>

#include "aebt/simplex.hpp"

namespace aebt {

// Reads a dataset from CSV: one observation per row, D numeric columns,
// optional single header line (taken as component names). Every row is
// closed onto the simplex on ingestion. Throws input_error with row/column
// diagnostics on malformed content.
CompositionalDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace aebt
