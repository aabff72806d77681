#pragma once

#include <span>
#include <vector>

#include "pcbwave/label.hpp"

namespace pcbwave {

// Soft-margin binary SVM with the Gaussian kernel
//
//     K(x, y) = exp(-||x - y||^2 / sigma^2)
//
// Note the sigma^2 denominator: there is no factor 2. Most libraries use
// exp(-||x-y||^2 / (2 sigma^2)) or a gamma parameter; converting to this
// convention means gamma = 1 / sigma^2.
//
// Training solves the dual
//     max  sum a_n - 1/2 sum_nm a_n a_m t_n t_m K(x_n, x_m)
//     s.t. 0 <= a_n <= cost,  sum a_n t_n = 0
// by deterministic two-variable updates: the worst KKT violator is paired
// with the index of largest |E_i - E_j|, with fixed tie-breaks, so a given
// input always produces the same model.

struct TrainConfig {
    double sigma = 1.0;
    double cost = 1.0;
    double kkt_tolerance = 1e-3;
    int max_passes = 10000;
};

struct SvmModel {
    double sigma = 1.0;
    double cost = 1.0;
    double bias = 0.0;
    /// Training points with a_n > 0, in training order.
    std::vector<std::vector<double>> support_vectors;
    /// a_n * t_n, aligned with support_vectors.
    std::vector<double> dual_coefficients;
};

/// Optional training diagnostics.
struct TrainStats {
    int iterations = 0;
    double max_violation = 0.0;
};

double rbf_kernel(std::span<const double> x, std::span<const double> y, double sigma);

/// Full n x n kernel matrix, row-major. Entries are computed independently,
/// so the parallel fill is bitwise identical for any thread count.
std::vector<double> gram_matrix(const std::vector<std::vector<double>>& samples, double sigma);

/// Labels are +1 / -1. Throws SingleClassError if only one class is
/// present, DimensionMismatchError on ragged samples, ConvergenceError if
/// the KKT tolerance is not met within max_passes.
SvmModel train(const std::vector<std::vector<double>>& samples, const std::vector<int>& labels,
               const TrainConfig& config, TrainStats* stats = nullptr);

/// y(x) = sum_n (a_n t_n) K(x, x_n) + b over the support set.
double decision_value(const SvmModel& model, std::span<const double> x);

/// sign(y) through the fixed label map; y == 0 classifies as true defect.
Label predict(const SvmModel& model, std::span<const double> x);

/// Dual objective at an arbitrary feasible point; verification instrument.
double dual_objective(const std::vector<std::vector<double>>& samples,
                      const std::vector<int>& labels, const std::vector<double>& duals,
                      double sigma);

}  // namespace pcbwave
