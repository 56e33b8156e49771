#pragma once

#include <filesystem>

#include "frfx/dataset.hpp"

namespace frfx {

/// Reads a UCR-convention classification file: one series per row, class
/// label first, values after; separators may be tabs, commas or spaces.
/// Labels are normalized to {0, 1} with the smaller raw label mapped to 0,
/// and the time grid is a uniform [0, 1] with as many points as columns.
FunctionalDataset load_ucr(const std::filesystem::path& path);

/// Writes a dataset back in the same convention (comma separated, full
/// precision). load_ucr(save_ucr(d)) reproduces values and labels exactly.
void save_ucr(const FunctionalDataset& dataset,
              const std::filesystem::path& path);

}  // namespace frfx
