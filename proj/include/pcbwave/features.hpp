#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcbwave/dwt.hpp"
#include "pcbwave/label.hpp"

namespace pcbwave {

// Sub-band statistics and feature-vector assembly. A feature vector for a
// k-level decomposition lists, in canonical order, mean then population SD
// for LH/HL/HH at each level 1..k and finally for LL_k: 2*(3k+1) values.
// The narrow "final level only" reading keeps just the four level-k bands.

enum class Statistic { Mean, Sd };

enum class BandsMode { AllLevels, FinalLevelOnly };

struct FeatureDescriptor {
    SubbandKind kind;
    int level;
    Statistic stat;

    /// "LH1_mean", "LL2_sd", ...
    std::string name() const;

    friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

struct FeatureSchema {
    int level = 1;
    FilterFamily filter = FilterFamily::Haar;
    BandsMode bands = BandsMode::AllLevels;
    std::vector<FeatureDescriptor> descriptors;

    std::size_t size() const { return descriptors.size(); }
};

FeatureSchema feature_schema(int level, FilterFamily filter,
                             BandsMode bands = BandsMode::AllLevels);

/// Mean over all coefficients of the band.
double subband_mean(const Subband& band);

/// Population standard deviation (divisor = coefficient count).
double subband_sd(const Subband& band);

/// Decompose to `level` levels and emit statistics in schema order.
std::vector<double> extract_features(const Image& image, int level, const FilterPair& filter,
                                     BandsMode bands = BandsMode::AllLevels);

/// Same statistics read off an existing pyramid (must be deep enough).
std::vector<double> pyramid_features(const SubbandPyramid& pyramid, BandsMode bands);

std::optional<BandsMode> parse_bands_mode(std::string_view name);
std::string bands_mode_name(BandsMode mode);

/// Z-score scaler fitted on training rows. Constant features pass through
/// unscaled.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> sd;

    static Standardizer fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> apply(const std::vector<double>& x) const;
};

/// CSV export: header = descriptor names plus trailing `label` column,
/// one row per sample, full-precision values.
void write_features_csv(std::ostream& out, const FeatureSchema& schema,
                        const std::vector<std::vector<double>>& rows,
                        const std::vector<Label>& labels);

}  // namespace pcbwave
