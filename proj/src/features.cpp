#include "pcbwave/features.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "pcbwave/errors.hpp"

namespace pcbwave {

namespace {

const char* statistic_suffix(Statistic stat) {
    return stat == Statistic::Mean ? "mean" : "sd";
}

void append_band_descriptors(std::vector<FeatureDescriptor>& out, SubbandKind kind, int level) {
    out.push_back(FeatureDescriptor{kind, level, Statistic::Mean});
    out.push_back(FeatureDescriptor{kind, level, Statistic::Sd});
}

std::string format_full_precision(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace

std::string FeatureDescriptor::name() const {
    return std::string(subband_kind_name(kind)) + std::to_string(level) + "_" +
           statistic_suffix(stat);
}

FeatureSchema feature_schema(int level, FilterFamily filter, BandsMode bands) {
    if (level < 1 || level > 3)
        throw Error("feature_schema: level must be 1, 2 or 3");
    FeatureSchema schema;
    schema.level = level;
    schema.filter = filter;
    schema.bands = bands;
    const int first = bands == BandsMode::AllLevels ? 1 : level;
    for (int k = first; k <= level; ++k) {
        append_band_descriptors(schema.descriptors, SubbandKind::LH, k);
        append_band_descriptors(schema.descriptors, SubbandKind::HL, k);
        append_band_descriptors(schema.descriptors, SubbandKind::HH, k);
    }
    append_band_descriptors(schema.descriptors, SubbandKind::LL, level);
    return schema;
}

double subband_mean(const Subband& band) {
    if (band.coefficients.empty()) throw Error("subband_mean: empty band");
    double sum = 0.0;
    for (double v : band.coefficients.values()) sum += v;
    return sum / static_cast<double>(band.coefficients.size());
}

double subband_sd(const Subband& band) {
    if (band.coefficients.empty()) throw Error("subband_sd: empty band");
    const double mean = subband_mean(band);
    double sum_sq = 0.0;
    for (double v : band.coefficients.values()) {
        const double d = v - mean;
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(band.coefficients.size()));
}

std::vector<double> pyramid_features(const SubbandPyramid& pyramid, BandsMode bands) {
    const int level = pyramid.levels;
    std::vector<double> values;
    const int first = bands == BandsMode::AllLevels ? 1 : level;
    values.reserve(static_cast<std::size_t>(level - first + 1) * 6 + 2);
    for (int k = first; k <= level; ++k) {
        const auto& triple = pyramid.detail_bands[static_cast<std::size_t>(k) - 1];
        for (const Subband* band : {&triple.lh, &triple.hl, &triple.hh}) {
            values.push_back(subband_mean(*band));
            values.push_back(subband_sd(*band));
        }
    }
    values.push_back(subband_mean(pyramid.approximation));
    values.push_back(subband_sd(pyramid.approximation));
    return values;
}

std::vector<double> extract_features(const Image& image, int level, const FilterPair& filter,
                                     BandsMode bands) {
    if (level < 1 || level > 3)
        throw Error("extract_features: level must be 1, 2 or 3");
    return pyramid_features(decompose(image, level, filter), bands);
}

std::optional<BandsMode> parse_bands_mode(std::string_view name) {
    if (name == "all-levels" || name == "all") return BandsMode::AllLevels;
    if (name == "final-level-only" || name == "final") return BandsMode::FinalLevelOnly;
    return std::nullopt;
}

std::string bands_mode_name(BandsMode mode) {
    return mode == BandsMode::AllLevels ? "all-levels" : "final-level-only";
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw EmptyInputError("Standardizer::fit: no rows");
    const std::size_t dim = rows.front().size();
    for (const auto& row : rows)
        if (row.size() != dim)
            throw DimensionMismatchError("Standardizer::fit: ragged rows");

    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.sd.assign(dim, 0.0);
    for (const auto& row : rows)
        for (std::size_t j = 0; j < dim; ++j) s.mean[j] += row[j];
    for (std::size_t j = 0; j < dim; ++j) s.mean[j] /= static_cast<double>(rows.size());
    for (const auto& row : rows)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = row[j] - s.mean[j];
            s.sd[j] += d * d;
        }
    for (std::size_t j = 0; j < dim; ++j) {
        s.sd[j] = std::sqrt(s.sd[j] / static_cast<double>(rows.size()));
        if (s.sd[j] < 1e-12) s.sd[j] = 1.0;  // constant feature: leave centered only
    }
    return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& x) const {
    if (x.size() != mean.size())
        throw DimensionMismatchError("Standardizer::apply: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / sd[j];
    return out;
}

void write_features_csv(std::ostream& out, const FeatureSchema& schema,
                        const std::vector<std::vector<double>>& rows,
                        const std::vector<Label>& labels) {
    if (rows.size() != labels.size())
        throw LengthMismatchError("write_features_csv: rows/labels length mismatch");
    for (std::size_t j = 0; j < schema.descriptors.size(); ++j) {
        if (j) out << ',';
        out << schema.descriptors[j].name();
    }
    out << ",label\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != schema.descriptors.size())
            throw DimensionMismatchError("write_features_csv: row width does not match schema");
        for (std::size_t j = 0; j < rows[r].size(); ++j) {
            if (j) out << ',';
            out << format_full_precision(rows[r][j]);
        }
        out << ',' << label_name(labels[r]) << '\n';
    }
}

}  // namespace pcbwave
