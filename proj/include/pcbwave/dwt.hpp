#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcbwave/image.hpp"
#include "pcbwave/wavelet.hpp"

namespace pcbwave {

// Separable 2-D discrete wavelet decomposition.
//
// Conventions (fixed, load-bearing for every downstream module):
//  * one level = row pass (filter along rows, keep every second column)
//    followed by a column pass on each intermediate;
//  * both branches are downsampled convolutions sampled at the even phase,
//    out[m] = sum_i taps[i] * in[2m - i];
//  * out-of-range indices wrap periodically.
// With orthonormal taps the analysis operator is orthogonal, so
// reconstruct() applies its adjoint and is exact up to rounding.

enum class SubbandKind { LL, LH, HL, HH };

const char* subband_kind_name(SubbandKind kind);

struct Subband {
    SubbandKind kind = SubbandKind::LL;
    int level = 1;  // 1-based decomposition depth
    Grid coefficients;

    int height() const { return coefficients.height(); }
    int width() const { return coefficients.width(); }
    /// "LL2", "HH1", ...
    std::string name() const;
};

/// One decomposition step: the four half-size bands of the next level.
struct LevelBands {
    Grid ll, lh, hl, hh;
};

/// Multi-level pyramid: detail triples for levels 1..L plus the final
/// approximation LL_L. Total coefficient count equals the source pixel
/// count (critical sampling).
struct SubbandPyramid {
    struct DetailTriple {
        Subband lh, hl, hh;
    };

    int levels = 0;
    FilterPair filter;
    int source_height = 0;
    int source_width = 0;
    std::vector<DetailTriple> detail_bands;  // index k-1 holds level k
    Subband approximation;                   // LL_levels

    std::size_t coefficient_count() const;
    /// Bands in canonical order: (LH1, HL1, HH1), ..., (LHL, HLL, HHL), LL_L.
    std::vector<const Subband*> all_bands() const;
};

/// Single analysis step. Input height and width must be even.
LevelBands decompose_level(const Grid& input, const FilterPair& filter);

/// L analysis steps, recursing on the approximation band only.
/// Both image dimensions must be divisible by 2^levels.
SubbandPyramid decompose(const Image& image, int levels, const FilterPair& filter);

/// Exact inverse of decompose for a structurally valid pyramid.
Image reconstruct(const SubbandPyramid& pyramid);

}  // namespace pcbwave
