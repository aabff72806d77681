#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pcbwave/features.hpp"
#include "pcbwave/svm.hpp"

namespace pcbwave {

/// On-disk model document: the trained SVM plus everything needed to take a
/// raw image to a prediction (feature schema, optional fitted scaler).
struct ModelFile {
    static constexpr int kFormatVersion = 1;

    SvmModel model;
    FeatureSchema schema;
    std::optional<Standardizer> standardizer;
};

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(const std::string& text);

void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace pcbwave
