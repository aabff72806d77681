#include "pcbwave/dwt.hpp"

#include <numeric>
#include <string>

namespace pcbwave {

namespace {

inline int wrap(int index, int n) {
    index %= n;
    return index < 0 ? index + n : index;
}

// Filter along each row, keeping the even output phase for both branches.
// Outputs are height x width/2. Rows are independent, so the loop
// parallelizes without changing any per-entry accumulation order.
void analyze_rows(const Grid& in, const FilterPair& filter, Grid& low, Grid& high) {
    const int height = in.height();
    const int width = in.width();
    const int half = width / 2;
    const int taps = filter.taps();
    low = Grid(height, half);
    high = Grid(height, half);
#pragma omp parallel for schedule(static) if (in.size() > 16384)
    for (int r = 0; r < height; ++r) {
        for (int m = 0; m < half; ++m) {
            double acc_low = 0.0;
            double acc_high = 0.0;
            for (int i = 0; i < taps; ++i) {
                const double sample = in.at(r, wrap(2 * m - i, width));
                acc_low += filter.lowpass[i] * sample;
                acc_high += filter.highpass[i] * sample;
            }
            low.at(r, m) = acc_low;
            high.at(r, m) = acc_high;
        }
    }
}

// Same filtering along columns. Outputs are height/2 x width.
void analyze_cols(const Grid& in, const FilterPair& filter, Grid& low, Grid& high) {
    const int height = in.height();
    const int width = in.width();
    const int half = height / 2;
    const int taps = filter.taps();
    low = Grid(half, width);
    high = Grid(half, width);
#pragma omp parallel for schedule(static) if (in.size() > 16384)
    for (int n = 0; n < half; ++n) {
        for (int c = 0; c < width; ++c) {
            double acc_low = 0.0;
            double acc_high = 0.0;
            for (int i = 0; i < taps; ++i) {
                const double sample = in.at(wrap(2 * n - i, height), c);
                acc_low += filter.lowpass[i] * sample;
                acc_high += filter.highpass[i] * sample;
            }
            low.at(n, c) = acc_low;
            high.at(n, c) = acc_high;
        }
    }
}

// Adjoint of analyze_cols: scatter both bands back over the rows.
Grid synthesize_cols(const Grid& low, const Grid& high, const FilterPair& filter) {
    const int half = low.height();
    const int width = low.width();
    const int height = half * 2;
    const int taps = filter.taps();
    Grid out(height, width, 0.0);
    for (int n = 0; n < half; ++n) {
        for (int c = 0; c < width; ++c) {
            const double a = low.at(n, c);
            const double d = high.at(n, c);
            for (int i = 0; i < taps; ++i) {
                out.at(wrap(2 * n - i, height), c) +=
                    filter.lowpass[i] * a + filter.highpass[i] * d;
            }
        }
    }
    return out;
}

// Adjoint of analyze_rows.
Grid synthesize_rows(const Grid& low, const Grid& high, const FilterPair& filter) {
    const int height = low.height();
    const int half = low.width();
    const int width = half * 2;
    const int taps = filter.taps();
    Grid out(height, width, 0.0);
    for (int r = 0; r < height; ++r) {
        for (int m = 0; m < half; ++m) {
            const double a = low.at(r, m);
            const double d = high.at(r, m);
            for (int i = 0; i < taps; ++i) {
                out.at(r, wrap(2 * m - i, width)) +=
                    filter.lowpass[i] * a + filter.highpass[i] * d;
            }
        }
    }
    return out;
}

void check_pyramid(const SubbandPyramid& pyramid) {
    if (pyramid.levels < 1) throw Error("reconstruct: pyramid has no levels");
    if (static_cast<int>(pyramid.detail_bands.size()) != pyramid.levels)
        throw Error("reconstruct: detail band count does not match levels");
    for (int k = 1; k <= pyramid.levels; ++k) {
        const auto& triple = pyramid.detail_bands[static_cast<std::size_t>(k) - 1];
        const int expect_h = pyramid.source_height >> k;
        const int expect_w = pyramid.source_width >> k;
        for (const Subband* band : {&triple.lh, &triple.hl, &triple.hh}) {
            if (band->height() != expect_h || band->width() != expect_w)
                throw Error("reconstruct: band " + band->name() + " has wrong shape");
            if (band->level != k)
                throw Error("reconstruct: band level mismatch");
        }
    }
    const int top_h = pyramid.source_height >> pyramid.levels;
    const int top_w = pyramid.source_width >> pyramid.levels;
    if (pyramid.approximation.height() != top_h || pyramid.approximation.width() != top_w)
        throw Error("reconstruct: approximation has wrong shape");
}

}  // namespace

const char* subband_kind_name(SubbandKind kind) {
    switch (kind) {
        case SubbandKind::LL: return "LL";
        case SubbandKind::LH: return "LH";
        case SubbandKind::HL: return "HL";
        case SubbandKind::HH: return "HH";
    }
    return "??";
}

std::string Subband::name() const {
    return std::string(subband_kind_name(kind)) + std::to_string(level);
}

std::size_t SubbandPyramid::coefficient_count() const {
    std::size_t total = approximation.coefficients.size();
    for (const auto& triple : detail_bands)
        total += triple.lh.coefficients.size() + triple.hl.coefficients.size() +
                 triple.hh.coefficients.size();
    return total;
}

std::vector<const Subband*> SubbandPyramid::all_bands() const {
    std::vector<const Subband*> bands;
    bands.reserve(detail_bands.size() * 3 + 1);
    for (const auto& triple : detail_bands) {
        bands.push_back(&triple.lh);
        bands.push_back(&triple.hl);
        bands.push_back(&triple.hh);
    }
    bands.push_back(&approximation);
    return bands;
}

LevelBands decompose_level(const Grid& input, const FilterPair& filter) {
    if (input.empty()) throw Error("decompose_level: empty input");
    if (input.height() % 2 != 0 || input.width() % 2 != 0)
        throw OddDimensionError("decompose_level: input dimensions must be even, got " +
                                std::to_string(input.height()) + "x" +
                                std::to_string(input.width()));
    Grid low, high;
    analyze_rows(input, filter, low, high);
    LevelBands bands;
    analyze_cols(low, filter, bands.ll, bands.lh);
    analyze_cols(high, filter, bands.hl, bands.hh);
    return bands;
}

SubbandPyramid decompose(const Image& image, int levels, const FilterPair& filter) {
    if (image.empty()) throw Error("decompose: empty image");
    if (levels < 1) throw Error("decompose: levels must be >= 1");
    if (levels > 30) throw NonDyadicError("decompose: levels out of range");
    const int stride = 1 << levels;
    if (image.height() % stride != 0 || image.width() % stride != 0)
        throw NonDyadicError("decompose: " + std::to_string(image.height()) + "x" +
                             std::to_string(image.width()) + " is not divisible by 2^" +
                             std::to_string(levels));

    SubbandPyramid pyramid;
    pyramid.levels = levels;
    pyramid.filter = filter;
    pyramid.source_height = image.height();
    pyramid.source_width = image.width();
    pyramid.detail_bands.reserve(static_cast<std::size_t>(levels));

    Grid approx = image;
    for (int k = 1; k <= levels; ++k) {
        LevelBands bands = decompose_level(approx, filter);
        pyramid.detail_bands.push_back(SubbandPyramid::DetailTriple{
            Subband{SubbandKind::LH, k, std::move(bands.lh)},
            Subband{SubbandKind::HL, k, std::move(bands.hl)},
            Subband{SubbandKind::HH, k, std::move(bands.hh)}});
        approx = std::move(bands.ll);
    }
    pyramid.approximation = Subband{SubbandKind::LL, levels, std::move(approx)};
    return pyramid;
}

Image reconstruct(const SubbandPyramid& pyramid) {
    check_pyramid(pyramid);
    Grid approx = pyramid.approximation.coefficients;
    for (int k = pyramid.levels; k >= 1; --k) {
        const auto& triple = pyramid.detail_bands[static_cast<std::size_t>(k) - 1];
        Grid low = synthesize_cols(approx, triple.lh.coefficients, pyramid.filter);
        Grid high = synthesize_cols(triple.hl.coefficients, triple.hh.coefficients, pyramid.filter);
        approx = synthesize_rows(low, high, pyramid.filter);
    }
    return approx;
}

}  // namespace pcbwave
