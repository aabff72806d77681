#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcbwave/dataset.hpp"
#include "pcbwave/features.hpp"
#include "pcbwave/svm.hpp"

namespace pcbwave {

/// 2x2 counts; rows are actual classes, columns predicted classes.
struct ConfusionMatrix {
    long tp = 0;  // true defect predicted true
    long fn = 0;  // true defect predicted pseudo
    long fp = 0;  // pseudo defect predicted true
    long tn = 0;  // pseudo defect predicted pseudo

    long total() const { return tp + fn + fp + tn; }
    /// Correct-classification percentage for actual true defects.
    double true_rate() const;
    /// Correct-classification percentage for actual pseudo defects.
    double pseudo_rate() const;
};

ConfusionMatrix confusion(const std::vector<Label>& predictions,
                          const std::vector<Label>& actuals);

/// Overall correct-classification percentage.
double accuracy(const ConfusionMatrix& cm);

/// Rows-actual / columns-predicted text rendering with per-class rates.
std::string render_confusion(const ConfusionMatrix& cm);

struct GridOptions {
    std::vector<double> sigmas;
    std::vector<double> costs;
    std::vector<int> levels;
    FilterFamily filter = FilterFamily::Haar;
    BandsMode bands = BandsMode::AllLevels;
    bool standardize = false;
    double kkt_tolerance = 1e-3;
    int max_passes = 10000;
    int jobs = 1;
};

struct GridCell {
    double sigma = 0.0;
    double cost = 0.0;
    int level = 1;
    std::optional<double> accuracy;  // absent when the cell failed
    ConfusionMatrix cm;
    std::string diagnostic;  // failure cause for absent cells
};

struct GridResult {
    std::vector<GridCell> cells;  // sorted by (sigma, cost, level)

    /// Best completed cell; ties resolve to the first in sort order.
    const GridCell* best() const;
};

/// Trains one model per completed (sigma, cost, level) cell on the train
/// set and scores it on the test set. Cells are independent; failures are
/// recorded, not propagated. Deterministic for any jobs count.
GridResult grid_search(const std::vector<LabeledSample>& train_set,
                       const std::vector<LabeledSample>& test_set, const GridOptions& options);

/// One row per (sigma, cost), one accuracy column per level.
std::string render_grid_table(const GridResult& result);

/// Long-form CSV: sigma,cost,level,accuracy,tp,fn,fp,tn. Absent cells are
/// omitted.
void write_grid_csv(std::ostream& out, const GridResult& result);

}  // namespace pcbwave
