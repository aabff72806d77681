#include "pcbwave/wavelet.hpp"

#include <cmath>

#include "pcbwave/errors.hpp"

namespace pcbwave {

namespace {

std::vector<double> quadrature_mirror(const std::vector<double>& lowpass) {
    const int n = static_cast<int>(lowpass.size());
    std::vector<double> highpass(n);
    for (int i = 0; i < n; ++i) {
        const double flip = (i % 2 == 0) ? 1.0 : -1.0;
        highpass[i] = flip * lowpass[n - 1 - i];
    }
    return highpass;
}

}  // namespace

FilterPair filter_coefficients(FilterFamily family) {
    std::vector<double> lowpass;
    switch (family) {
        case FilterFamily::Haar: {
            const double c = 1.0 / std::sqrt(2.0);
            lowpass = {c, c};
            break;
        }
        case FilterFamily::Daubechies4: {
            // Four-tap Daubechies scaling filter, closed form.
            const double s3 = std::sqrt(3.0);
            const double norm = 4.0 * std::sqrt(2.0);
            lowpass = {(1.0 + s3) / norm, (3.0 + s3) / norm,
                       (3.0 - s3) / norm, (1.0 - s3) / norm};
            break;
        }
    }
    if (lowpass.empty()) throw Error("filter_coefficients: unknown family");
    return FilterPair{family, lowpass, quadrature_mirror(lowpass)};
}

std::optional<FilterFamily> parse_filter_family(std::string_view name) {
    if (name == "haar") return FilterFamily::Haar;
    if (name == "db4" || name == "daubechies4") return FilterFamily::Daubechies4;
    return std::nullopt;
}

std::string filter_family_name(FilterFamily family) {
    switch (family) {
        case FilterFamily::Haar: return "haar";
        case FilterFamily::Daubechies4: return "db4";
    }
    return "unknown";
}

}  // namespace pcbwave
