#include "pcbwave/dwt_reference.hpp"

#include <string>

namespace pcbwave {

namespace {

inline int wrap_index(int index, int n) {
    int r = index % n;
    if (r < 0) r += n;
    return r;
}

}  // namespace

LevelBands decompose_level_reference(const Grid& input, const FilterPair& filter) {
    if (input.empty()) throw Error("decompose_level_reference: empty input");
    const int height = input.height();
    const int width = input.width();
    if (height % 2 != 0 || width % 2 != 0)
        throw OddDimensionError("decompose_level_reference: dimensions must be even");

    const int half_w = width / 2;
    const int half_h = height / 2;
    const int n_low = static_cast<int>(filter.lowpass.size());
    const int n_high = static_cast<int>(filter.highpass.size());

    // Row-filtered intermediates L and H, height x width/2.
    Grid inter_low(height, half_w);
    Grid inter_high(height, half_w);
    for (int row = 0; row < height; ++row) {
        for (int m = 0; m < half_w; ++m) {
            double acc = 0.0;
            for (int i = 0; i < n_low; ++i)
                acc += filter.lowpass[i] * input.at(row, wrap_index(2 * m - i, width));
            inter_low.at(row, m) = acc;
        }
        for (int m = 0; m < half_w; ++m) {
            double acc = 0.0;
            for (int i = 0; i < n_high; ++i)
                acc += filter.highpass[i] * input.at(row, wrap_index(2 * m - i, width));
            inter_high.at(row, m) = acc;
        }
    }

    // Column pass: LL/LH from L, HL/HH from H.
    LevelBands bands;
    bands.ll = Grid(half_h, half_w);
    bands.lh = Grid(half_h, half_w);
    bands.hl = Grid(half_h, half_w);
    bands.hh = Grid(half_h, half_w);
    for (int n = 0; n < half_h; ++n) {
        for (int col = 0; col < half_w; ++col) {
            double acc = 0.0;
            for (int i = 0; i < n_low; ++i)
                acc += filter.lowpass[i] * inter_low.at(wrap_index(2 * n - i, height), col);
            bands.ll.at(n, col) = acc;

            acc = 0.0;
            for (int i = 0; i < n_high; ++i)
                acc += filter.highpass[i] * inter_low.at(wrap_index(2 * n - i, height), col);
            bands.lh.at(n, col) = acc;

            acc = 0.0;
            for (int i = 0; i < n_low; ++i)
                acc += filter.lowpass[i] * inter_high.at(wrap_index(2 * n - i, height), col);
            bands.hl.at(n, col) = acc;

            acc = 0.0;
            for (int i = 0; i < n_high; ++i)
                acc += filter.highpass[i] * inter_high.at(wrap_index(2 * n - i, height), col);
            bands.hh.at(n, col) = acc;
        }
    }
    return bands;
}

}  // namespace pcbwave
