#include "pcbwave/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pcbwave/errors.hpp"

namespace pcbwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sigma(double sigma) {
    if (!(sigma > 0.0)) throw Error("rbf_kernel: sigma must be positive");
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return sum;
}

// Two-variable SMO state over a fixed kernel matrix.
class SmoSolver {
public:
    SmoSolver(const std::vector<double>& kernel, const std::vector<int>& labels,
              const TrainConfig& config)
        : kernel_(kernel),
          labels_(labels),
          cost_(config.cost),
          tol_(config.kkt_tolerance),
          n_(static_cast<int>(labels.size())),
          bound_eps_(1e-8 * std::max(1.0, config.cost)),
          duals_(labels.size(), 0.0),
          cache_(labels.size(), 0.0) {}

    // Runs until no violation exceeds the tolerance or the pass budget is
    // exhausted. Returns the number of pair updates performed.
    int solve(int max_passes, double* final_violation) {
        int iterations = 0;
        for (int pass = 0; pass < max_passes; ++pass) {
            bias_ = compute_bias();
            const auto order = violation_order();
            const double worst = violation(order.front());
            if (worst <= tol_) {
                if (final_violation) *final_violation = worst;
                return iterations;
            }
            bool progressed = false;
            for (int i : order) {
                if (violation(i) <= tol_) break;  // order is descending
                if (optimize_from(i)) {
                    progressed = true;
                    break;
                }
            }
            ++iterations;
            if (!progressed) break;  // numerical floor reached
        }
        bias_ = compute_bias();
        double worst = 0.0;
        for (int i = 0; i < n_; ++i) worst = std::max(worst, violation(i));
        if (final_violation) *final_violation = worst;
        if (worst > tol_)
            throw ConvergenceError("svm: KKT violation " + std::to_string(worst) +
                                   " above tolerance " + std::to_string(tol_) + " after " +
                                   std::to_string(iterations) + " updates");
        return iterations;
    }

    const std::vector<double>& duals() const { return duals_; }
    double bias() const { return bias_; }

private:
    double k(int i, int j) const { return kernel_[static_cast<std::size_t>(i) * n_ + j]; }

    // Margin sum without bias: f_i = sum_m a_m t_m K(i, m); kept incremental.
    double f(int i) const { return cache_[static_cast<std::size_t>(i)]; }

    // Bias rule shared by training and the final model: mean of t_n - f_n
    // over free support vectors, else midpoint of the feasible interval.
    double compute_bias() const {
        double sum = 0.0;
        int free_count = 0;
        for (int i = 0; i < n_; ++i) {
            if (duals_[i] > bound_eps_ && duals_[i] < cost_ - bound_eps_) {
                sum += labels_[i] - f(i);
                ++free_count;
            }
        }
        if (free_count > 0) return sum / free_count;

        double lo = -kInf;
        double hi = kInf;
        for (int i = 0; i < n_; ++i) {
            const double margin_bias = labels_[i] > 0 ? 1.0 - f(i) : -1.0 - f(i);
            if (duals_[i] <= bound_eps_) {
                // t_i (f_i + b) >= 1
                if (labels_[i] > 0)
                    lo = std::max(lo, margin_bias);
                else
                    hi = std::min(hi, margin_bias);
            } else {
                // at the box bound: t_i (f_i + b) <= 1
                if (labels_[i] > 0)
                    hi = std::min(hi, margin_bias);
                else
                    lo = std::max(lo, margin_bias);
            }
        }
        if (lo == -kInf && hi == kInf) return 0.0;
        if (lo == -kInf) return hi;
        if (hi == kInf) return lo;
        return 0.5 * (lo + hi);
    }

    double violation(int i) const {
        const double margin = labels_[i] * (f(i) + bias_);
        if (duals_[i] <= bound_eps_) return std::max(0.0, 1.0 - margin);
        if (duals_[i] >= cost_ - bound_eps_) return std::max(0.0, margin - 1.0);
        return std::abs(margin - 1.0);
    }

    // Indices sorted by violation, descending; index breaks ties.
    std::vector<int> violation_order() const {
        std::vector<int> order(static_cast<std::size_t>(n_));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
            return violation(a) > violation(b);
        });
        return order;
    }

    bool optimize_from(int i) {
        const double e_i = f(i) + bias_ - labels_[i];
        std::vector<int> partners(static_cast<std::size_t>(n_));
        std::iota(partners.begin(), partners.end(), 0);
        std::stable_sort(partners.begin(), partners.end(), [&](int a, int b) {
            return std::abs(e_i - (f(a) + bias_ - labels_[a])) >
                   std::abs(e_i - (f(b) + bias_ - labels_[b]));
        });
        for (int j : partners) {
            if (j == i) continue;
            if (optimize_pair(i, j)) return true;
        }
        return false;
    }

    // Objective restricted to the pair, dropping terms that do not involve
    // (a_i, a_j); used only when the curvature is degenerate.
    double pair_objective(int i, int j, double ai, double aj) const {
        const double ti = labels_[i];
        const double tj = labels_[j];
        const double vi = f(i) - duals_[i] * ti * k(i, i) - duals_[j] * tj * k(i, j);
        const double vj = f(j) - duals_[i] * ti * k(i, j) - duals_[j] * tj * k(j, j);
        return ai + aj - 0.5 * k(i, i) * ai * ai - 0.5 * k(j, j) * aj * aj -
               ti * tj * k(i, j) * ai * aj - ti * ai * vi - tj * aj * vj;
    }

    bool optimize_pair(int i, int j) {
        const double ti = labels_[i];
        const double tj = labels_[j];
        const double s = ti * tj;
        const double ai_old = duals_[i];
        const double aj_old = duals_[j];

        double lo, hi;
        if (labels_[i] != labels_[j]) {
            lo = std::max(0.0, aj_old - ai_old);
            hi = std::min(cost_, cost_ + aj_old - ai_old);
        } else {
            lo = std::max(0.0, ai_old + aj_old - cost_);
            hi = std::min(cost_, ai_old + aj_old);
        }
        if (hi - lo < 1e-14 * std::max(1.0, cost_)) return false;

        const double e_i = f(i) + bias_ - labels_[i];
        const double e_j = f(j) + bias_ - labels_[j];
        const double eta = 2.0 * k(i, j) - k(i, i) - k(j, j);

        double aj_new;
        if (eta < -1e-15) {
            aj_new = aj_old - tj * (e_i - e_j) / eta;
            aj_new = std::clamp(aj_new, lo, hi);
        } else {
            // Flat (or numerically flat) direction: pick the better endpoint.
            const double ai_at_lo = ai_old + s * (aj_old - lo);
            const double ai_at_hi = ai_old + s * (aj_old - hi);
            const double obj_lo = pair_objective(i, j, ai_at_lo, lo);
            const double obj_hi = pair_objective(i, j, ai_at_hi, hi);
            if (obj_lo > obj_hi + 1e-12)
                aj_new = lo;
            else if (obj_hi > obj_lo + 1e-12)
                aj_new = hi;
            else
                return false;
        }

        if (std::abs(aj_new - aj_old) < 1e-12 * (aj_new + aj_old + 1.0)) return false;

        double ai_new = ai_old + s * (aj_old - aj_new);
        ai_new = std::clamp(ai_new, 0.0, cost_);

        const double di = (ai_new - ai_old) * ti;
        const double dj = (aj_new - aj_old) * tj;
        for (int m = 0; m < n_; ++m) cache_[m] += di * k(i, m) + dj * k(j, m);
        duals_[i] = ai_new;
        duals_[j] = aj_new;
        return true;
    }

    const std::vector<double>& kernel_;
    const std::vector<int>& labels_;
    double cost_;
    double tol_;
    int n_;
    double bound_eps_;
    double bias_ = 0.0;
    std::vector<double> duals_;
    std::vector<double> cache_;
};

}  // namespace

double rbf_kernel(std::span<const double> x, std::span<const double> y, double sigma) {
    check_sigma(sigma);
    if (x.size() != y.size())
        throw DimensionMismatchError("rbf_kernel: vectors of length " +
                                     std::to_string(x.size()) + " and " +
                                     std::to_string(y.size()));
    return std::exp(-squared_distance(x, y) / (sigma * sigma));
}

std::vector<double> gram_matrix(const std::vector<std::vector<double>>& samples, double sigma) {
    check_sigma(sigma);
    const int n = static_cast<int>(samples.size());
    const std::size_t dim = n > 0 ? samples.front().size() : 0;
    for (const auto& s : samples)
        if (s.size() != dim) throw DimensionMismatchError("gram_matrix: ragged samples");

    std::vector<double> gram(static_cast<std::size_t>(n) * n);
    const double inv = 1.0 / (sigma * sigma);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int i = 0; i < n; ++i) {
        gram[static_cast<std::size_t>(i) * n + i] = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double value =
                std::exp(-squared_distance(samples[static_cast<std::size_t>(i)],
                                           samples[static_cast<std::size_t>(j)]) *
                         inv);
            gram[static_cast<std::size_t>(i) * n + j] = value;
            gram[static_cast<std::size_t>(j) * n + i] = value;
        }
    }
    return gram;
}

SvmModel train(const std::vector<std::vector<double>>& samples, const std::vector<int>& labels,
               const TrainConfig& config, TrainStats* stats) {
    if (samples.size() != labels.size())
        throw DimensionMismatchError("train: samples/labels length mismatch");
    if (samples.empty()) throw SingleClassError("train: no samples");
    if (!(config.sigma > 0.0)) throw Error("train: sigma must be positive");
    if (!(config.cost > 0.0)) throw Error("train: cost must be positive");
    if (!(config.kkt_tolerance > 0.0)) throw Error("train: kkt_tolerance must be positive");
    if (config.max_passes < 1) throw Error("train: max_passes must be >= 1");

    bool has_positive = false;
    bool has_negative = false;
    for (int t : labels) {
        if (t == 1)
            has_positive = true;
        else if (t == -1)
            has_negative = true;
        else
            throw Error("train: labels must be +1 or -1");
    }
    if (!has_positive || !has_negative)
        throw SingleClassError("train: both classes must be present");

    const std::vector<double> kernel = gram_matrix(samples, config.sigma);

    SmoSolver solver(kernel, labels, config);
    double final_violation = 0.0;
    const int iterations = solver.solve(config.max_passes, &final_violation);
    if (stats) {
        stats->iterations = iterations;
        stats->max_violation = final_violation;
    }

    SvmModel model;
    model.sigma = config.sigma;
    model.cost = config.cost;
    model.bias = solver.bias();
    const auto& duals = solver.duals();
    for (std::size_t n = 0; n < samples.size(); ++n) {
        if (duals[n] > 1e-12) {
            model.support_vectors.push_back(samples[n]);
            model.dual_coefficients.push_back(duals[n] * labels[n]);
        }
    }
    return model;
}

double decision_value(const SvmModel& model, std::span<const double> x) {
    double sum = model.bias;
    for (std::size_t n = 0; n < model.support_vectors.size(); ++n)
        sum += model.dual_coefficients[n] * rbf_kernel(model.support_vectors[n], x, model.sigma);
    return sum;
}

Label predict(const SvmModel& model, std::span<const double> x) {
    return decision_value(model, x) >= 0.0 ? Label::TrueDefect : Label::PseudoDefect;
}

double dual_objective(const std::vector<std::vector<double>>& samples,
                      const std::vector<int>& labels, const std::vector<double>& duals,
                      double sigma) {
    if (samples.size() != labels.size() || samples.size() != duals.size())
        throw DimensionMismatchError("dual_objective: length mismatch");
    double linear = 0.0;
    for (double a : duals) linear += a;
    double quad = 0.0;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        if (duals[n] == 0.0) continue;
        for (std::size_t m = 0; m < samples.size(); ++m) {
            if (duals[m] == 0.0) continue;
            quad += duals[n] * duals[m] * labels[n] * labels[m] *
                    rbf_kernel(samples[n], samples[m], sigma);
        }
    }
    return linear - 0.5 * quad;
}

}  // namespace pcbwave
