#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcbwave {

enum class FilterFamily { Haar, Daubechies4 };

/// Orthonormal quadrature-mirror filter pair.
/// Invariants: sum(lowpass^2) = sum(highpass^2) = 1,
/// highpass[i] = (-1)^i * lowpass[N-1-i], sum(highpass) = 0.
struct FilterPair {
    FilterFamily family;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    int taps() const { return static_cast<int>(lowpass.size()); }
};

FilterPair filter_coefficients(FilterFamily family);

std::optional<FilterFamily> parse_filter_family(std::string_view name);
std::string filter_family_name(FilterFamily family);

}  // namespace pcbwave
