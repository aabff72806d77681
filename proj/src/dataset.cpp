#include "pcbwave/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcbwave/rng.hpp"

namespace pcbwave {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

// --- PGM parsing ------------------------------------------------------

struct PgmCursor {
    const std::string& text;
    std::size_t pos = 0;

    bool eof() const { return pos >= text.size(); }

    // Skips whitespace and '#' comments that run to end of line.
    void skip_separators() {
        while (!eof()) {
            const char ch = text[pos];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos;
            } else if (ch == '#') {
                while (!eof() && text[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    long next_int(const char* what) {
        skip_separators();
        if (eof() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw MalformedPgmError(std::string("pgm: expected ") + what);
        long value = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            value = value * 10 + (text[pos] - '0');
            if (value > 1'000'000'000L) throw MalformedPgmError("pgm: number out of range");
            ++pos;
        }
        return value;
    }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading file: " + path.string());
    return std::move(buffer).str();
}

// --- synthetic texture generator ---------------------------------------

// Shared background: near-constant base, a gentle ramp and one
// low-frequency cosine. Both classes get the same background model so the
// separation lives in the texture, not the mean intensity.
Image synth_background(Rng& rng, int size) {
    const double base = 120.0 + rng.uniform(-1.0, 1.0);
    const double slope_x = rng.uniform(-2.0, 2.0) / size;
    const double slope_y = rng.uniform(-2.0, 2.0) / size;
    const double amp = rng.uniform(4.0, 9.0);
    const double fx = static_cast<double>(rng.uniform_int(1, 2));
    const double fy = static_cast<double>(rng.uniform_int(1, 2));
    const double phase = rng.uniform(0.0, 2.0 * kPi);

    Image img(size, size);
    const double half = size / 2.0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            img.at(y, x) = base + slope_x * (x - half) + slope_y * (y - half) +
                           amp * std::cos(2.0 * kPi * (fx * x + fy * y) / size + phase);
    return img;
}

void add_hard_disc(Image& img, Rng& rng) {
    const int size = img.width();
    const double cx = rng.uniform(3.0, size - 4.0);
    const double cy = rng.uniform(3.0, size - 4.0);
    const double radius = rng.uniform(1.5, 3.0);
    const double amp = rng.uniform(70.0, 90.0) * (rng.coin() ? 1.0 : -1.0);
    const double r2 = radius * radius;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            if (dx * dx + dy * dy <= r2) img.at(y, x) += amp;
        }
}

void add_streak(Image& img, Rng& rng) {
    const int size = img.width();
    const double x0 = rng.uniform(5.0, size - 6.0);
    const double y0 = rng.uniform(5.0, size - 6.0);
    const double theta = rng.uniform(0.0, kPi);
    const double length = rng.uniform(15.0, 30.0);
    const double amp = rng.uniform(55.0, 80.0) * (rng.coin() ? 1.0 : -1.0);
    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double px = x - x0;
            const double py = y - y0;
            const double t = std::clamp(px * dx + py * dy, 0.0, length);
            const double ox = px - t * dx;
            const double oy = py - t * dy;
            if (ox * ox + oy * oy <= 0.75 * 0.75) img.at(y, x) += amp;
        }
}

void add_soft_smudge(Image& img, Rng& rng) {
    const int size = img.width();
    const double cx = rng.uniform(8.0, size - 9.0);
    const double cy = rng.uniform(8.0, size - 9.0);
    const double radius = rng.uniform(5.0, 9.0);
    const double amp = rng.uniform(8.0, 14.0) * (rng.coin() ? 1.0 : -1.0);
    const double inv_r2 = 1.0 / (radius * radius);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            img.at(y, x) += amp * std::exp(-(dx * dx + dy * dy) * inv_r2);
        }
}

void clamp_to_bytes(Image& img) {
    for (double& v : img.values()) v = std::clamp(std::nearbyint(v), 0.0, 255.0);
}

Image synth_true_image(Rng& rng, int size) {
    Image img = synth_background(rng, size);
    for (int i = 0; i < 5; ++i) add_hard_disc(img, rng);
    for (int i = 0; i < 2; ++i) add_streak(img, rng);
    clamp_to_bytes(img);
    return img;
}

Image synth_pseudo_image(Rng& rng, int size) {
    Image img = synth_background(rng, size);
    for (double& v : img.values()) v += rng.uniform(-3.0, 3.0);
    const int smudges = static_cast<int>(rng.uniform_int(1, 2));
    for (int i = 0; i < smudges; ++i) add_soft_smudge(img, rng);
    clamp_to_bytes(img);
    return img;
}

std::vector<LabeledSample> load_class_dir(const fs::path& dir, Label label,
                                          const std::string& prefix) {
    if (!fs::is_directory(dir))
        throw IoError("dataset: missing class directory " + dir.string());
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        std::string ext = p.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".pgm") names.push_back(p.filename().string());
    }
    std::sort(names.begin(), names.end());
    if (names.empty())
        throw EmptyClassError("dataset: no PGM files in " + dir.string());

    std::vector<LabeledSample> samples;
    samples.reserve(names.size());
    for (const auto& name : names)
        samples.push_back(LabeledSample{load_pgm(dir / name), label, prefix + "/" + name});
    return samples;
}

}  // namespace

Image load_pgm(const fs::path& path) {
    const std::string text = read_file(path);
    if (text.size() < 2 || text[0] != 'P' || (text[1] != '5' && text[1] != '2'))
        throw MalformedPgmError("pgm: bad magic in " + path.string());
    const bool binary = text[1] == '5';

    PgmCursor cursor{text, 2};
    const long width = cursor.next_int("width");
    const long height = cursor.next_int("height");
    const long maxval = cursor.next_int("maxval");
    if (width < 1 || height < 1)
        throw MalformedPgmError("pgm: non-positive dimensions in " + path.string());
    if (maxval < 1 || maxval > 255)
        throw MalformedPgmError("pgm: unsupported maxval " + std::to_string(maxval) + " in " +
                                path.string());

    Image image(static_cast<int>(height), static_cast<int>(width));
    const std::size_t count = image.size();
    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        if (cursor.eof() || !std::isspace(static_cast<unsigned char>(text[cursor.pos])))
            throw MalformedPgmError("pgm: missing raster separator in " + path.string());
        std::size_t raster = cursor.pos + 1;
        if (text.size() - raster < count)
            throw MalformedPgmError("pgm: truncated raster in " + path.string());
        for (std::size_t i = 0; i < count; ++i)
            image.values()[i] = static_cast<double>(static_cast<unsigned char>(text[raster + i]));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            long value;
            try {
                value = cursor.next_int("pixel");
            } catch (const MalformedPgmError&) {
                throw MalformedPgmError("pgm: truncated raster in " + path.string());
            }
            if (value > maxval)
                throw MalformedPgmError("pgm: pixel above maxval in " + path.string());
            image.values()[i] = static_cast<double>(value);
        }
    }
    return image;
}

void write_pgm(const Image& image, const fs::path& path) {
    if (image.empty()) throw Error("write_pgm: empty image");
    std::string raster;
    raster.reserve(image.size());
    for (double v : image.values()) {
        const long rounded = std::lround(v);
        if (rounded < 0 || rounded > 255)
            throw OutOfRangeError("write_pgm: pixel value " + std::to_string(v) +
                                  " outside [0, 255]");
        raster.push_back(static_cast<char>(static_cast<unsigned char>(rounded)));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n" << raster;
    if (!out) throw IoError("failed writing file: " + path.string());
}

std::vector<LabeledSample> load_dataset(const fs::path& root) {
    if (!fs::is_directory(root)) throw IoError("dataset: not a directory: " + root.string());
    std::vector<LabeledSample> samples = load_class_dir(root / "true", Label::TrueDefect, "true");
    std::vector<LabeledSample> pseudo =
        load_class_dir(root / "pseudo", Label::PseudoDefect, "pseudo");
    samples.insert(samples.end(), std::make_move_iterator(pseudo.begin()),
                   std::make_move_iterator(pseudo.end()));

    for (const auto& s : samples)
        if (!s.image.same_shape(samples.front().image))
            throw MixedDimensionsError("dataset: " + s.source_id + " is " +
                                       std::to_string(s.image.height()) + "x" +
                                       std::to_string(s.image.width()) + ", expected " +
                                       std::to_string(samples.front().image.height()) + "x" +
                                       std::to_string(samples.front().image.width()));
    return samples;
}

SplitResult split(const std::vector<LabeledSample>& samples, const SplitSpec& spec) {
    std::vector<std::size_t> trues, pseudos;
    for (std::size_t i = 0; i < samples.size(); ++i)
        (samples[i].label == Label::TrueDefect ? trues : pseudos).push_back(i);

    if (spec.train_true < 0 || spec.train_pseudo < 0 ||
        static_cast<std::size_t>(spec.train_true) > trues.size() ||
        static_cast<std::size_t>(spec.train_pseudo) > pseudos.size())
        throw InfeasibleSplitError("split: requested " + std::to_string(spec.train_true) + "/" +
                                   std::to_string(spec.train_pseudo) + " from " +
                                   std::to_string(trues.size()) + "/" +
                                   std::to_string(pseudos.size()) + " available");

    Rng rng(spec.seed);
    deterministic_shuffle(trues, rng);
    deterministic_shuffle(pseudos, rng);

    SplitResult result;
    auto take = [&](const std::vector<std::size_t>& order, std::size_t n_train) {
        for (std::size_t i = 0; i < order.size(); ++i)
            (i < n_train ? result.train : result.test).push_back(samples[order[i]]);
    };
    take(trues, static_cast<std::size_t>(spec.train_true));
    take(pseudos, static_cast<std::size_t>(spec.train_pseudo));
    return result;
}

std::vector<LabeledSample> synth_generate(int n_per_class, int size, std::uint64_t seed) {
    if (n_per_class < 1) throw Error("synth_generate: n_per_class must be >= 1");
    if (size < 8) throw Error("synth_generate: size must be >= 8");

    Rng rng(seed);
    std::vector<LabeledSample> samples;
    samples.reserve(static_cast<std::size_t>(n_per_class) * 2);
    char name[32];
    for (int i = 0; i < n_per_class; ++i) {
        std::snprintf(name, sizeof(name), "true/true_%04d.pgm", i);
        samples.push_back(LabeledSample{synth_true_image(rng, size), Label::TrueDefect, name});
    }
    for (int i = 0; i < n_per_class; ++i) {
        std::snprintf(name, sizeof(name), "pseudo/pseudo_%04d.pgm", i);
        samples.push_back(
            LabeledSample{synth_pseudo_image(rng, size), Label::PseudoDefect, name});
    }
    return samples;
}

void save_dataset(const std::vector<LabeledSample>& samples, const fs::path& root) {
    fs::create_directories(root / "true");
    fs::create_directories(root / "pseudo");
    for (const auto& sample : samples) {
        const fs::path name = fs::path(sample.source_id).filename();
        write_pgm(sample.image, root / label_name(sample.label) / name);
    }
}

}  // namespace pcbwave
