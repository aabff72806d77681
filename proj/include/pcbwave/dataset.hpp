#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pcbwave/image.hpp"
#include "pcbwave/label.hpp"

namespace pcbwave {

struct LabeledSample {
    Image image;
    Label label = Label::TrueDefect;
    std::string source_id;  // path relative to the dataset root, or synthetic id
};

struct SplitSpec {
    int train_true = 0;
    int train_pseudo = 0;
    std::uint64_t seed = 0;
};

struct SplitResult {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> test;
};

/// Reads binary (P5) or ASCII (P2) PGM with maxval <= 255. Pixel values
/// become doubles, unscaled.
Image load_pgm(const std::filesystem::path& path);

/// Writes binary P5 with maxval 255. Pixels must round into [0, 255].
void write_pgm(const Image& image, const std::filesystem::path& path);

/// Expects root/true/*.pgm and root/pseudo/*.pgm; files enumerated in
/// lexicographic order, all images must share dimensions.
std::vector<LabeledSample> load_dataset(const std::filesystem::path& root);

/// Seeded per-class shuffle; first spec.train_* of each class go to train,
/// the remainder to test. Identical seed, identical split.
SplitResult split(const std::vector<LabeledSample>& samples, const SplitSpec& spec);

/// Synthetic stand-in dataset with class-distinct texture: "true" images
/// carry sharp high-contrast blobs and streaks, "pseudo" images smooth
/// low-contrast gradients plus fine grain. Deterministic per seed.
std::vector<LabeledSample> synth_generate(int n_per_class, int size, std::uint64_t seed);

/// Writes samples as root/<label>/<source_id basename>.pgm.
void save_dataset(const std::vector<LabeledSample>& samples,
                  const std::filesystem::path& root);

}  // namespace pcbwave
