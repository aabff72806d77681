#include "pcbwave/svm_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pcbwave/errors.hpp"

namespace pcbwave {

namespace {

using nlohmann::json;

json schema_to_json(const FeatureSchema& schema) {
    json descriptors = json::array();
    for (const auto& d : schema.descriptors) descriptors.push_back(d.name());
    return json{{"level", schema.level},
                {"filter", filter_family_name(schema.filter)},
                {"bands", bands_mode_name(schema.bands)},
                {"descriptors", descriptors}};
}

FeatureSchema schema_from_json(const json& j) {
    const auto filter = parse_filter_family(j.at("filter").get<std::string>());
    if (!filter) throw Error("model: unknown filter family in feature_schema");
    const auto bands = parse_bands_mode(j.at("bands").get<std::string>());
    if (!bands) throw Error("model: unknown bands mode in feature_schema");
    FeatureSchema schema = feature_schema(j.at("level").get<int>(), *filter, *bands);
    // The stored descriptor list must agree with the derived schema.
    const auto& stored = j.at("descriptors");
    if (stored.size() != schema.descriptors.size())
        throw Error("model: feature_schema descriptor count mismatch");
    for (std::size_t i = 0; i < schema.descriptors.size(); ++i)
        if (stored[i].get<std::string>() != schema.descriptors[i].name())
            throw Error("model: feature_schema descriptor mismatch at index " +
                        std::to_string(i));
    return schema;
}

}  // namespace

std::string model_to_json(const ModelFile& file) {
    json doc{{"format_version", ModelFile::kFormatVersion},
             {"sigma", file.model.sigma},
             {"cost", file.model.cost},
             {"bias", file.model.bias},
             {"label_map", json{{"true", +1}, {"pseudo", -1}}},
             {"support_vectors", file.model.support_vectors},
             {"dual_coefficients", file.model.dual_coefficients},
             {"feature_schema", schema_to_json(file.schema)}};
    if (file.standardizer)
        doc["standardizer"] = json{{"mean", file.standardizer->mean},
                                   {"sd", file.standardizer->sd}};
    return doc.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("model: invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != ModelFile::kFormatVersion)
            throw Error("model: unsupported format_version");
        ModelFile file;
        file.model.sigma = doc.at("sigma").get<double>();
        file.model.cost = doc.at("cost").get<double>();
        file.model.bias = doc.at("bias").get<double>();
        file.model.support_vectors =
            doc.at("support_vectors").get<std::vector<std::vector<double>>>();
        file.model.dual_coefficients = doc.at("dual_coefficients").get<std::vector<double>>();
        if (file.model.support_vectors.size() != file.model.dual_coefficients.size())
            throw Error("model: support_vectors/dual_coefficients length mismatch");
        const auto& label_map = doc.at("label_map");
        if (label_map.at("true").get<int>() != 1 || label_map.at("pseudo").get<int>() != -1)
            throw Error("model: unexpected label_map");
        file.schema = schema_from_json(doc.at("feature_schema"));
        for (const auto& sv : file.model.support_vectors)
            if (sv.size() != file.schema.descriptors.size())
                throw Error("model: support vector width does not match feature_schema");
        if (doc.contains("standardizer")) {
            Standardizer s;
            s.mean = doc.at("standardizer").at("mean").get<std::vector<double>>();
            s.sd = doc.at("standardizer").at("sd").get<std::vector<double>>();
            if (s.mean.size() != file.schema.descriptors.size() || s.mean.size() != s.sd.size())
                throw Error("model: standardizer width does not match feature_schema");
            file.standardizer = std::move(s);
        }
        return file;
    } catch (const json::exception& e) {
        throw Error(std::string("model: missing or mistyped field: ") + e.what());
    }
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open model file for writing: " + path.string());
    out << model_to_json(file);
    if (!out) throw IoError("failed writing model file: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

}  // namespace pcbwave
