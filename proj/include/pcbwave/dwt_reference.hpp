#pragma once

#include "pcbwave/dwt.hpp"

namespace pcbwave {

/// Serial dense transcription of the one-level filter-bank equations,
/// written with explicit loops and no code shared with the production
/// kernels. Kept as the correctness oracle for decompose_level and as the
/// baseline side of the benchmark.
LevelBands decompose_level_reference(const Grid& input, const FilterPair& filter);

}  // namespace pcbwave
