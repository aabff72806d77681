// pcbwave: true-vs-pseudo PCB defect classification from wavelet texture
// features. Subcommands cover the whole pipeline: decompose, extract,
// synth, train, predict, eval, grid.
//
// Exit codes: 0 success, 1 usage error, 2 data/computation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcbwave/dataset.hpp"
#include "pcbwave/dwt.hpp"
#include "pcbwave/errors.hpp"
#include "pcbwave/eval.hpp"
#include "pcbwave/features.hpp"
#include "pcbwave/svm.hpp"
#include "pcbwave/svm_io.hpp"

namespace fs = std::filesystem;
using namespace pcbwave;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FilterFamily filter_from(const std::string& name) {
    const auto family = parse_filter_family(name);
    if (!family) throw UsageError("unknown filter family '" + name + "' (use haar or db4)");
    return *family;
}

BandsMode bands_from(const std::string& name) {
    const auto mode = parse_bands_mode(name);
    if (!mode)
        throw UsageError("unknown bands mode '" + name +
                         "' (use all-levels or final-level-only)");
    return *mode;
}

std::string format_value(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

// Affine min-max rescale of a coefficient plane to [0, 255] for the PGM
// visualization; raw values go to the CSV sidecar.
Image visualize(const Grid& coefficients) {
    double lo = coefficients.values().front();
    double hi = lo;
    for (double v : coefficients.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Image out(coefficients.height(), coefficients.width());
    if (hi - lo < 1e-300) {
        for (double& v : out.values()) v = 128.0;
        return out;
    }
    const double scale = 255.0 / (hi - lo);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = std::nearbyint((coefficients.values()[i] - lo) * scale);
    return out;
}

void write_band_csv(const Grid& coefficients, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    for (int r = 0; r < coefficients.height(); ++r) {
        for (int c = 0; c < coefficients.width(); ++c) {
            if (c) out << ',';
            out << format_value("%.17g", coefficients.at(r, c));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing file: " + path.string());
}

struct SplitFlags {
    int train_true = -1;
    int train_pseudo = -1;
    std::uint64_t seed = 42;

    void add_to(CLI::App* cmd, bool required) {
        auto* tt = cmd->add_option("--train-true", train_true,
                                   "true-defect images assigned to the training set");
        auto* tp = cmd->add_option("--train-pseudo", train_pseudo,
                                   "pseudo-defect images assigned to the training set");
        cmd->add_option("--seed", seed, "split shuffle seed")->capture_default_str();
        if (required) {
            tt->required();
            tp->required();
        }
    }
};

// ---------------------------------------------------------------------------

int cmd_decompose(const std::string& input, int levels, const std::string& filter_name,
                  const std::string& out_dir) {
    const FilterPair filter = filter_coefficients(filter_from(filter_name));
    const Image image = load_pgm(input);
    const SubbandPyramid pyramid = decompose(image, levels, filter);
    fs::create_directories(out_dir);
    for (const Subband* band : pyramid.all_bands()) {
        write_pgm(visualize(band->coefficients), fs::path(out_dir) / (band->name() + ".pgm"));
        write_band_csv(band->coefficients, fs::path(out_dir) / (band->name() + ".csv"));
    }
    std::cout << "wrote " << pyramid.all_bands().size() << " sub-bands to " << out_dir << "\n";
    return 0;
}

int cmd_extract(const std::string& data_dir, int level, const std::string& filter_name,
                const std::string& bands_name, const std::string& out_path) {
    const FilterFamily family = filter_from(filter_name);
    const BandsMode bands = bands_from(bands_name);
    const FilterPair filter = filter_coefficients(family);

    const auto samples = load_dataset(data_dir);
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    for (const auto& s : samples) {
        rows.push_back(extract_features(s.image, level, filter, bands));
        labels.push_back(s.label);
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + out_path);
    write_features_csv(out, feature_schema(level, family, bands), rows, labels);
    if (!out) throw IoError("failed writing file: " + out_path);
    std::cout << "wrote " << rows.size() << " feature rows to " << out_path << "\n";
    return 0;
}

int cmd_synth(int n_per_class, int size, std::uint64_t seed, const std::string& out_dir) {
    const auto samples = synth_generate(n_per_class, size, seed);
    save_dataset(samples, out_dir);
    std::cout << "wrote " << samples.size() << " images (" << n_per_class << " per class) to "
              << out_dir << "\n";
    return 0;
}

int cmd_train(const std::string& data_dir, int level, double sigma, double cost,
              const SplitFlags& split_flags, const std::string& filter_name,
              const std::string& bands_name, bool standardize, double kkt_tol, int max_passes,
              const std::string& model_path) {
    const FilterFamily family = filter_from(filter_name);
    const BandsMode bands = bands_from(bands_name);
    const FilterPair filter = filter_coefficients(family);

    const auto samples = load_dataset(data_dir);
    const SplitResult parts =
        split(samples, SplitSpec{split_flags.train_true, split_flags.train_pseudo,
                                 split_flags.seed});

    std::vector<std::vector<double>> rows;
    std::vector<int> targets;
    for (const auto& s : parts.train) {
        rows.push_back(extract_features(s.image, level, filter, bands));
        targets.push_back(label_target(s.label));
    }

    ModelFile file;
    file.schema = feature_schema(level, family, bands);
    if (standardize) {
        file.standardizer = Standardizer::fit(rows);
        for (auto& row : rows) row = file.standardizer->apply(row);
    }

    TrainConfig config;
    config.sigma = sigma;
    config.cost = cost;
    config.kkt_tolerance = kkt_tol;
    config.max_passes = max_passes;
    file.model = train(rows, targets, config);

    save_model(file, model_path);

    long correct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (label_target(predict(file.model, rows[i])) == targets[i]) ++correct;
    std::cout << "trained on " << rows.size() << " samples: "
              << file.model.support_vectors.size() << " support vectors, train accuracy "
              << format_value("%.2f", 100.0 * correct / rows.size()) << "%, model " << model_path
              << "\n";
    return 0;
}

std::vector<double> features_for_model(const ModelFile& file, const Image& image) {
    const FilterPair filter = filter_coefficients(file.schema.filter);
    std::vector<double> row =
        extract_features(image, file.schema.level, filter, file.schema.bands);
    if (file.standardizer) row = file.standardizer->apply(row);
    return row;
}

int cmd_predict(const std::string& model_path, const std::string& input) {
    const ModelFile file = load_model(model_path);
    const std::vector<double> row = features_for_model(file, load_pgm(input));
    const double value = decision_value(file.model, row);
    std::cout << label_name(value >= 0.0 ? Label::TrueDefect : Label::PseudoDefect) << " "
              << format_value("%.9g", value) << "\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_dir,
             const SplitFlags& split_flags, const std::string& subset) {
    const ModelFile file = load_model(model_path);
    auto samples = load_dataset(data_dir);
    if (subset != "all") {
        if (split_flags.train_true < 0 || split_flags.train_pseudo < 0)
            throw UsageError("--subset " + subset +
                             " needs --train-true and --train-pseudo to reproduce the split");
        SplitResult parts =
            split(samples, SplitSpec{split_flags.train_true, split_flags.train_pseudo,
                                     split_flags.seed});
        if (subset == "train")
            samples = std::move(parts.train);
        else if (subset == "test")
            samples = std::move(parts.test);
        else
            throw UsageError("unknown subset '" + subset + "' (use train, test or all)");
    }

    std::vector<Label> predictions, actuals;
    for (const auto& s : samples) {
        predictions.push_back(predict(file.model, features_for_model(file, s.image)));
        actuals.push_back(s.label);
    }
    std::cout << render_confusion(confusion(predictions, actuals));
    return 0;
}

int cmd_grid(const std::string& data_dir, const std::vector<double>& sigmas,
             const std::vector<double>& costs, const std::vector<int>& levels,
             const SplitFlags& split_flags, const std::string& filter_name,
             const std::string& bands_name, bool standardize, int jobs,
             const std::string& csv_path) {
    GridOptions options;
    options.sigmas = sigmas;
    options.costs = costs;
    options.levels = levels;
    options.filter = filter_from(filter_name);
    options.bands = bands_from(bands_name);
    options.standardize = standardize;
    options.jobs = jobs;

    const auto samples = load_dataset(data_dir);
    const SplitResult parts =
        split(samples, SplitSpec{split_flags.train_true, split_flags.train_pseudo,
                                 split_flags.seed});

    const GridResult result = grid_search(parts.train, parts.test, options);
    std::cout << render_grid_table(result);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw IoError("cannot open file for writing: " + csv_path);
        write_grid_csv(out, result);
        if (!out) throw IoError("failed writing file: " + csv_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"true-vs-pseudo PCB defect classification with wavelet features"};
    app.require_subcommand(1);

    // decompose
    auto* decompose_cmd =
        app.add_subcommand("decompose", "write per-sub-band PGMs (rescaled) and raw CSVs");
    std::string dec_in, dec_out, dec_filter = "haar";
    int dec_levels = 2;
    decompose_cmd->add_option("--in", dec_in, "input PGM image")->required();
    decompose_cmd->add_option("--levels", dec_levels, "decomposition depth")->required();
    decompose_cmd->add_option("--filter", dec_filter, "haar or db4")->capture_default_str();
    decompose_cmd->add_option("--out", dec_out, "output directory")->required();

    // extract
    auto* extract_cmd = app.add_subcommand("extract", "extract feature CSV from a dataset");
    std::string ext_data, ext_out, ext_filter = "haar", ext_bands = "all-levels";
    int ext_level = 2;
    extract_cmd->add_option("--data", ext_data, "dataset root (true/ and pseudo/)")->required();
    extract_cmd->add_option("--level", ext_level, "decomposition level (1, 2 or 3)")->required();
    extract_cmd->add_option("--filter", ext_filter, "haar or db4")->capture_default_str();
    extract_cmd->add_option("--bands", ext_bands, "all-levels or final-level-only")
        ->capture_default_str();
    extract_cmd->add_option("--out", ext_out, "output CSV path")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    int synth_n = 25, synth_size = 64;
    std::uint64_t synth_seed = 42;
    std::string synth_out;
    synth_cmd->add_option("--n", synth_n, "images per class")->required();
    synth_cmd->add_option("--size", synth_size, "image side length")->capture_default_str();
    synth_cmd->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "output dataset root")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train an SVM and write the model file");
    std::string trn_data, trn_model, trn_filter = "haar", trn_bands = "all-levels";
    int trn_level = 2, trn_max_passes = 10000;
    double trn_sigma = 1.0, trn_cost = 1.0, trn_tol = 1e-3;
    bool trn_standardize = false;
    SplitFlags trn_split;
    train_cmd->add_option("--data", trn_data, "dataset root")->required();
    train_cmd->add_option("--level", trn_level, "decomposition level (1, 2 or 3)")->required();
    train_cmd->add_option("--sigma", trn_sigma, "kernel width")->required();
    train_cmd->add_option("--cost", trn_cost, "box constraint c")->required();
    trn_split.add_to(train_cmd, /*required=*/true);
    train_cmd->add_option("--filter", trn_filter, "haar or db4")->capture_default_str();
    train_cmd->add_option("--bands", trn_bands, "all-levels or final-level-only")
        ->capture_default_str();
    train_cmd->add_flag("--standardize", trn_standardize,
                        "z-score features, fitted on the training subset");
    train_cmd->add_option("--kkt-tol", trn_tol, "KKT tolerance")->capture_default_str();
    train_cmd->add_option("--max-passes", trn_max_passes, "optimizer pass budget")
        ->capture_default_str();
    train_cmd->add_option("--model", trn_model, "output model JSON path")->required();

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "classify one image");
    std::string prd_model, prd_in;
    predict_cmd->add_option("--model", prd_model, "model JSON path")->required();
    predict_cmd->add_option("--in", prd_in, "input PGM image")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "confusion matrix and accuracy on a dataset");
    std::string evl_model, evl_data, evl_subset = "all";
    SplitFlags evl_split;
    eval_cmd->add_option("--model", evl_model, "model JSON path")->required();
    eval_cmd->add_option("--data", evl_data, "dataset root")->required();
    evl_split.add_to(eval_cmd, /*required=*/false);
    eval_cmd->add_option("--subset", evl_subset, "train, test or all")->capture_default_str();

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "accuracy table over (sigma, cost, level)");
    std::string grd_data, grd_filter = "haar", grd_bands = "all-levels", grd_csv;
    std::vector<double> grd_sigmas, grd_costs;
    std::vector<int> grd_levels;
    bool grd_standardize = false;
    int grd_jobs = 1;
    SplitFlags grd_split;
    grid_cmd->add_option("--data", grd_data, "dataset root")->required();
    grid_cmd->add_option("--sigmas", grd_sigmas, "kernel widths")->required()->delimiter(',');
    grid_cmd->add_option("--costs", grd_costs, "box constraints")->required()->delimiter(',');
    grid_cmd->add_option("--levels", grd_levels, "decomposition levels")
        ->required()
        ->delimiter(',');
    grd_split.add_to(grid_cmd, /*required=*/true);
    grid_cmd->add_option("--filter", grd_filter, "haar or db4")->capture_default_str();
    grid_cmd->add_option("--bands", grd_bands, "all-levels or final-level-only")
        ->capture_default_str();
    grid_cmd->add_flag("--standardize", grd_standardize,
                       "z-score features, fitted on the training subset");
    grid_cmd->add_option("--jobs", grd_jobs, "parallel grid cells")->capture_default_str();
    grid_cmd->add_option("--csv", grd_csv, "also write a long-form CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 1;
    }

    try {
        if (app.got_subcommand(decompose_cmd))
            return cmd_decompose(dec_in, dec_levels, dec_filter, dec_out);
        if (app.got_subcommand(extract_cmd))
            return cmd_extract(ext_data, ext_level, ext_filter, ext_bands, ext_out);
        if (app.got_subcommand(synth_cmd))
            return cmd_synth(synth_n, synth_size, synth_seed, synth_out);
        if (app.got_subcommand(train_cmd))
            return cmd_train(trn_data, trn_level, trn_sigma, trn_cost, trn_split, trn_filter,
                             trn_bands, trn_standardize, trn_tol, trn_max_passes, trn_model);
        if (app.got_subcommand(predict_cmd)) return cmd_predict(prd_model, prd_in);
        if (app.got_subcommand(eval_cmd))
            return cmd_eval(evl_model, evl_data, evl_split, evl_subset);
        if (app.got_subcommand(grid_cmd))
            return cmd_grid(grd_data, grd_sigmas, grd_costs, grd_levels, grd_split, grd_filter,
                            grd_bands, grd_standardize, grd_jobs, grd_csv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
