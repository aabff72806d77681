#include "pcbwave/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcbwave/errors.hpp"

namespace pcbwave {

namespace {

std::string format(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, value);
    return buf;
}

struct LevelData {
    std::vector<std::vector<double>> train_features;
    std::vector<std::vector<double>> test_features;
    std::optional<Standardizer> standardizer;
};

std::vector<int> targets_of(const std::vector<LabeledSample>& samples) {
    std::vector<int> targets;
    targets.reserve(samples.size());
    for (const auto& s : samples) targets.push_back(label_target(s.label));
    return targets;
}

}  // namespace

double ConfusionMatrix::true_rate() const {
    if (tp + fn == 0) throw EmptyInputError("confusion: no actual true defects");
    return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double ConfusionMatrix::pseudo_rate() const {
    if (fp + tn == 0) throw EmptyInputError("confusion: no actual pseudo defects");
    return 100.0 * static_cast<double>(tn) / static_cast<double>(fp + tn);
}

ConfusionMatrix confusion(const std::vector<Label>& predictions,
                          const std::vector<Label>& actuals) {
    if (predictions.size() != actuals.size())
        throw LengthMismatchError("confusion: predictions/actuals length mismatch");
    if (predictions.empty()) throw EmptyInputError("confusion: no samples");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool actual_true = actuals[i] == Label::TrueDefect;
        const bool predicted_true = predictions[i] == Label::TrueDefect;
        if (actual_true)
            (predicted_true ? cm.tp : cm.fn)++;
        else
            (predicted_true ? cm.fp : cm.tn)++;
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw EmptyInputError("accuracy: empty confusion matrix");
    return 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

std::string render_confusion(const ConfusionMatrix& cm) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s%16s%18s%12s\n", "", "predicted true",
                  "predicted pseudo", "correct");
    out << line;
    std::snprintf(line, sizeof(line), "%-16s%16ld%18ld%11.2f%%\n", "actual true", cm.tp, cm.fn,
                  cm.true_rate());
    out << line;
    std::snprintf(line, sizeof(line), "%-16s%16ld%18ld%11.2f%%\n", "actual pseudo", cm.fp, cm.tn,
                  cm.pseudo_rate());
    out << line;
    std::snprintf(line, sizeof(line), "accuracy: %.2f%%\n", accuracy(cm));
    out << line;
    return out.str();
}

const GridCell* GridResult::best() const {
    const GridCell* best_cell = nullptr;
    for (const auto& cell : cells)
        if (cell.accuracy && (!best_cell || *cell.accuracy > *best_cell->accuracy))
            best_cell = &cell;
    return best_cell;
}

GridResult grid_search(const std::vector<LabeledSample>& train_set,
                       const std::vector<LabeledSample>& test_set, const GridOptions& options) {
    if (options.sigmas.empty() || options.costs.empty() || options.levels.empty())
        throw Error("grid_search: sigma, cost and level grids must be nonempty");
    if (train_set.empty() || test_set.empty())
        throw EmptyInputError("grid_search: train and test sets must be nonempty");
    bool has_true = false, has_pseudo = false;
    for (const auto& s : train_set)
        (s.label == Label::TrueDefect ? has_true : has_pseudo) = true;
    if (!has_true || !has_pseudo)
        throw SingleClassError("grid_search: training set must contain both classes");

    const FilterPair filter = filter_coefficients(options.filter);

    // Features depend only on the level; extract once per level, outside the
    // cell loop. Scaler (when requested) is fitted on the training rows.
    std::map<int, LevelData> per_level;
    for (int level : options.levels) {
        if (per_level.count(level)) continue;
        LevelData data;
        for (const auto& s : train_set)
            data.train_features.push_back(
                extract_features(s.image, level, filter, options.bands));
        for (const auto& s : test_set)
            data.test_features.push_back(
                extract_features(s.image, level, filter, options.bands));
        if (options.standardize) {
            data.standardizer = Standardizer::fit(data.train_features);
            for (auto& row : data.train_features) row = data.standardizer->apply(row);
            for (auto& row : data.test_features) row = data.standardizer->apply(row);
        }
        per_level.emplace(level, std::move(data));
    }

    const std::vector<int> train_targets = targets_of(train_set);

    GridResult result;
    std::vector<double> sigmas = options.sigmas;
    std::vector<double> costs = options.costs;
    std::vector<int> levels = options.levels;
    std::sort(sigmas.begin(), sigmas.end());
    std::sort(costs.begin(), costs.end());
    std::sort(levels.begin(), levels.end());
    sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());
    costs.erase(std::unique(costs.begin(), costs.end()), costs.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    for (double sigma : sigmas)
        for (double cost : costs)
            for (int level : levels)
                result.cells.push_back(GridCell{sigma, cost, level, std::nullopt, {}, {}});

    const int n_cells = static_cast<int>(result.cells.size());
#ifdef _OPENMP
    const int jobs = std::max(1, options.jobs);
#endif
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs) if (jobs > 1)
    for (int idx = 0; idx < n_cells; ++idx) {
        GridCell& cell = result.cells[static_cast<std::size_t>(idx)];
        const LevelData& data = per_level.at(cell.level);
        try {
            TrainConfig config;
            config.sigma = cell.sigma;
            config.cost = cell.cost;
            config.kkt_tolerance = options.kkt_tolerance;
            config.max_passes = options.max_passes;
            const SvmModel model = train(data.train_features, train_targets, config);

            std::vector<Label> predictions;
            predictions.reserve(test_set.size());
            for (const auto& row : data.test_features)
                predictions.push_back(predict(model, row));
            std::vector<Label> actuals;
            actuals.reserve(test_set.size());
            for (const auto& s : test_set) actuals.push_back(s.label);

            cell.cm = confusion(predictions, actuals);
            cell.accuracy = accuracy(cell.cm);
        } catch (const Error& e) {
            cell.diagnostic = e.what();
        }
    }
    return result;
}

std::string render_grid_table(const GridResult& result) {
    std::set<int> level_set;
    for (const auto& cell : result.cells) level_set.insert(cell.level);
    const std::vector<int> levels(level_set.begin(), level_set.end());

    // Group cells by (sigma, cost); cells are already sorted.
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-10s%-10s", "sigma", "cost");
    out << buf;
    for (int level : levels) {
        std::snprintf(buf, sizeof(buf), "%d-level", level);
        char cell[64];
        std::snprintf(cell, sizeof(cell), "%-12s", buf);
        out << cell;
    }
    out << '\n';

    std::size_t i = 0;
    while (i < result.cells.size()) {
        const double sigma = result.cells[i].sigma;
        const double cost = result.cells[i].cost;
        std::snprintf(buf, sizeof(buf), "%-10g%-10g", sigma, cost);
        out << buf;
        std::map<int, const GridCell*> row;
        while (i < result.cells.size() && result.cells[i].sigma == sigma &&
               result.cells[i].cost == cost) {
            row[result.cells[i].level] = &result.cells[i];
            ++i;
        }
        for (int level : levels) {
            const auto it = row.find(level);
            if (it != row.end() && it->second->accuracy)
                std::snprintf(buf, sizeof(buf), "%.2f%%", *it->second->accuracy);
            else
                std::snprintf(buf, sizeof(buf), "--");
            char cell[64];
            std::snprintf(cell, sizeof(cell), "%-12s", buf);
            out << cell;
        }
        out << '\n';
    }

    if (const GridCell* best = result.best()) {
        std::snprintf(buf, sizeof(buf), "%.2f%%", *best->accuracy);
        out << "best: sigma=" << format("%g", best->sigma) << " cost=" << format("%g", best->cost)
            << " level=" << best->level << " accuracy=" << buf << '\n';
    } else {
        out << "best: none (no cell completed)\n";
    }

    bool any_failed = false;
    for (const auto& cell : result.cells)
        if (!cell.accuracy) {
            if (!any_failed) out << "failed cells:\n";
            any_failed = true;
            out << "  sigma=" << format("%g", cell.sigma) << " cost=" << format("%g", cell.cost)
                << " level=" << cell.level << ": " << cell.diagnostic << '\n';
        }
    return out.str();
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
    out << "sigma,cost,level,accuracy,tp,fn,fp,tn\n";
    char buf[128];
    for (const auto& cell : result.cells) {
        if (!cell.accuracy) continue;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.2f,%ld,%ld,%ld,%ld\n", cell.sigma,
                      cell.cost, cell.level, *cell.accuracy, cell.cm.tp, cell.cm.fn, cell.cm.fp,
                      cell.cm.tn);
        out << buf;
    }
}

}  // namespace pcbwave
