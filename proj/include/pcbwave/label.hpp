#pragma once

#include <optional>
#include <string_view>

namespace pcbwave {

enum class Label { TrueDefect, PseudoDefect };

/// SVM target encoding: true defect -> +1, pseudo defect -> -1.
constexpr int label_target(Label label) {
    return label == Label::TrueDefect ? +1 : -1;
}

constexpr Label target_label(double target) {
    return target >= 0.0 ? Label::TrueDefect : Label::PseudoDefect;
}

constexpr const char* label_name(Label label) {
    return label == Label::TrueDefect ? "true" : "pseudo";
}

inline std::optional<Label> parse_label(std::string_view name) {
    if (name == "true") return Label::TrueDefect;
    if (name == "pseudo") return Label::PseudoDefect;
    return std::nullopt;
}

}  // namespace pcbwave
