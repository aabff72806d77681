// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Library-level checks run in-process; pipeline-level checks run
// the real CLI binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pcbwave/dataset.hpp"
#include "pcbwave/dwt.hpp"
#include "pcbwave/dwt_reference.hpp"
#include "pcbwave/eval.hpp"
#include "pcbwave/features.hpp"
#include "pcbwave/rng.hpp"
#include "pcbwave/svm.hpp"
#include "support/helpers.hpp"
#include "support/svm_oracle.hpp"

using namespace pcbwave;
using namespace pcbwave::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
    std::string detail;
    bool passed = true;

    void require(bool ok, const std::string& why) {
        if (!ok && passed) {
            passed = false;
            detail = why;
        }
    }
};

int g_failures = 0;

void run_criterion(const std::string& name, double time_limit_s,
                   const std::function<void(Criterion&)>& body) {
    Criterion c;
    const auto start = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (time_limit_s > 0 && elapsed > time_limit_s)
        c.require(false, "exceeded time budget of " + std::to_string(time_limit_s) + " s");

    std::printf("[%s] %-28s (%.2f s%s%s)\n", c.passed ? "PASS" : "FAIL", name.c_str(), elapsed,
                c.detail.empty() ? "" : "; ", c.detail.c_str());
    if (!c.passed) ++g_failures;
}

// ---------------------------------------------------------------------- CLI

struct CliRunner {
    fs::path dir;

    explicit CliRunner(const std::string& tag) {
        dir = fs::temp_directory_path() / ("pcbwave_acceptance_" + tag);
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~CliRunner() { fs::remove_all(dir); }

    std::string path(const std::string& rel) const { return (dir / rel).string(); }

    std::pair<int, std::string> run(const std::string& args) const {
        const fs::path out = dir / "_stdout.txt";
        const std::string cmd =
            std::string(PCBWAVE_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        std::ifstream in(out, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, buf.str()};
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ------------------------------------------------------------------- helpers

double pyramid_energy(const SubbandPyramid& p) {
    double total = 0.0;
    for (const Subband* band : p.all_bands()) total += sum_squares(band->coefficients);
    return total;
}

struct SvmProblem {
    std::vector<std::vector<double>> samples;
    std::vector<int> labels;
};

SvmProblem random_svm_problem(Rng& rng) {
    const int dim = static_cast<int>(rng.uniform_int(1, 3));
    const int n = static_cast<int>(rng.uniform_int(2, 8));
    SvmProblem p;
    for (int i = 0; i < n; ++i) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        p.samples.push_back(std::move(x));
        p.labels.push_back(rng.coin() ? 1 : -1);
    }
    p.labels[0] = 1;
    p.labels[1] = -1;
    return p;
}

std::vector<double> recover_duals(const SvmProblem& p, const SvmModel& model) {
    std::vector<double> duals(p.samples.size(), 0.0);
    std::vector<bool> used(model.support_vectors.size(), false);
    for (std::size_t i = 0; i < p.samples.size(); ++i)
        for (std::size_t s = 0; s < model.support_vectors.size(); ++s)
            if (!used[s] && model.support_vectors[s] == p.samples[i] &&
                (model.dual_coefficients[s] > 0) == (p.labels[i] > 0)) {
                duals[i] = std::abs(model.dual_coefficients[s]);
                used[s] = true;
                break;
            }
    return duals;
}

void check_kkt_model(Criterion& c, const SvmProblem& p, const SvmModel& model, double cost,
                     double tol) {
    const std::vector<double> duals = recover_duals(p, model);
    double dual_sum = 0.0;
    const double bound_eps = 1e-8 * std::max(1.0, cost);
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
        const double a = duals[i];
        c.require(a >= 0.0 && a <= cost + 1e-9, "dual outside [0, cost]");
        dual_sum += a * p.labels[i];
        const double margin = p.labels[i] * decision_value(model, p.samples[i]);
        if (a <= bound_eps)
            c.require(margin >= 1.0 - tol, "KKT: zero dual with margin below 1");
        else if (a >= cost - bound_eps)
            c.require(margin <= 1.0 + tol, "KKT: bound dual with margin above 1");
        else
            c.require(std::abs(margin - 1.0) <= tol, "KKT: free dual off the margin");
    }
    c.require(std::abs(dual_sum) < 1e-6, "dual equality constraint violated");
}

// the nine (sigma, cost) pairs reported in the reference results table
const std::vector<std::pair<double, double>> kReferencePairs = {
    {0.01, 3}, {0.01, 5}, {0.01, 9}, {0.01, 11}, {0.01, 15},
    {0.02, 9}, {0.06, 9}, {0.06, 1}, {0.15, 3}};

}  // namespace

int main() {
    const FilterPair haar = filter_coefficients(FilterFamily::Haar);
    const FilterPair db4 = filter_coefficients(FilterFamily::Daubechies4);

    // --- DWT corpus shared by the reconstruction and energy criteria
    Rng corpus_rng(20260811);
    std::vector<Image> corpus;
    corpus.reserve(100);
    for (int i = 0; i < 100; ++i) corpus.push_back(random_image(corpus_rng, 64, 64));

    run_criterion("dwt-perfect-reconstruction", 2.0, [&](Criterion& c) {
        double worst = 0.0;
        for (const Image& img : corpus)
            for (const FilterPair* filter : {&haar, &db4})
                for (int levels = 1; levels <= 3; ++levels)
                    worst = std::max(worst,
                                     max_abs_diff(img, reconstruct(decompose(img, levels, *filter))));
        char buf[64];
        std::snprintf(buf, sizeof(buf), "max |x - idwt(dwt(x))| = %.3g", worst);
        c.require(worst < 1e-9, buf);
        c.detail = buf;
    });

    run_criterion("dwt-oracle-equivalence", 0.0, [&](Criterion& c) {
        Rng rng(77);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const int h = 2 * static_cast<int>(rng.uniform_int(1, 8));
            const int w = 2 * static_cast<int>(rng.uniform_int(1, 8));
            const Image img = random_image(rng, h, w);
            const FilterPair& filter = trial % 2 == 0 ? haar : db4;
            const LevelBands fast = decompose_level(img, filter);
            const LevelBands slow = decompose_level_reference(img, filter);
            for (auto [a, b] : {std::pair{&fast.ll, &slow.ll}, std::pair{&fast.lh, &slow.lh},
                                std::pair{&fast.hl, &slow.hl}, std::pair{&fast.hh, &slow.hh}})
                worst = std::max(worst, max_abs_diff(*a, *b));
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "20 images <= 16x16, worst diff = %.3g", worst);
        c.require(worst < 1e-12, buf);
        c.detail = buf;
    });

    run_criterion("energy-preservation", 0.0, [&](Criterion& c) {
        double worst = 0.0;
        for (const Image& img : corpus) {
            const double energy = sum_squares(img);
            for (const FilterPair* filter : {&haar, &db4})
                for (int levels = 1; levels <= 3; ++levels)
                    worst = std::max(worst,
                                     std::abs(pyramid_energy(decompose(img, levels, *filter)) -
                                              energy) /
                                         energy);
        }
        c.require(worst < 1e-6, "relative Parseval error " + std::to_string(worst));
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3g", worst);
        c.detail = std::string("worst relative energy error = ") + buf;
    });

    run_criterion("feature-lengths", 0.0, [&](Criterion& c) {
        Rng rng(5);
        const Image img = random_image(rng, 64, 64);
        const std::size_t expected[] = {8, 14, 20};
        for (int level = 1; level <= 3; ++level)
            c.require(extract_features(img, level, haar).size() == expected[level - 1],
                      "wrong feature count at level " + std::to_string(level));

        const double v = 11.5;
        const Image constant(64, 64, v);
        for (int level = 1; level <= 3; ++level) {
            const auto values = extract_features(constant, level, haar);
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double expect = i == values.size() - 2 ? std::pow(2.0, level) * v : 0.0;
                c.require(std::abs(values[i] - expect) < 1e-10,
                          "constant-image feature off closed form at level " +
                              std::to_string(level));
            }
        }
        c.detail = "lengths 8/14/20; constant-image closed form holds";
    });

    // --- SVM problems shared by the oracle and KKT criteria
    Rng svm_rng(20250811);
    std::vector<SvmProblem> problems;
    std::vector<TrainConfig> configs;
    for (int trial = 0; trial < 50; ++trial) {
        problems.push_back(random_svm_problem(svm_rng));
        TrainConfig config;
        config.sigma = svm_rng.uniform(0.5, 5.0);
        config.cost = svm_rng.coin() ? 1.0 : 10.0;
        config.kkt_tolerance = 1e-6;
        configs.push_back(config);
    }

    run_criterion("svm-oracle-equivalence", 10.0, [&](Criterion& c) {
        Rng rng(31415);
        double worst_gap = 0.0;
        int compared = 0;
        for (std::size_t t = 0; t < problems.size(); ++t) {
            const SvmProblem& p = problems[t];
            const TrainConfig& config = configs[t];
            const SvmModel model = train(p.samples, p.labels, config);
            const OracleSolution oracle =
                brute_force_dual(p.samples, p.labels, config.sigma, config.cost);

            const double smo_objective =
                dual_objective(p.samples, p.labels, recover_duals(p, model), config.sigma);
            const double gap = std::abs(smo_objective - oracle.objective) /
                               std::max(1.0, std::abs(oracle.objective));
            worst_gap = std::max(worst_gap, gap);
            c.require(gap < 1e-4, "objective gap " + std::to_string(gap));

            for (int q = 0; q < 20; ++q) {
                std::vector<double> x(p.samples[0].size());
                for (double& v : x) v = rng.uniform(-3.0, 3.0);
                const double y_smo = decision_value(model, x);
                const double y_oracle = oracle.decision(p.samples, p.labels, config.sigma, x);
                if (std::abs(y_smo) > 1e-6 && std::abs(y_oracle) > 1e-6) {
                    ++compared;
                    c.require((y_smo > 0) == (y_oracle > 0), "prediction disagreement");
                }
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "50 problems, worst gap %.3g, %d predictions compared",
                      worst_gap, compared);
        c.detail = buf;
    });

    run_criterion("kkt-suite", 0.0, [&](Criterion& c) {
        // the 50 random problems at tolerance 1e-3
        for (std::size_t t = 0; t < problems.size(); ++t) {
            TrainConfig config = configs[t];
            config.kkt_tolerance = 1e-3;
            const SvmModel model = train(problems[t].samples, problems[t].labels, config);
            check_kkt_model(c, problems[t], model, config.cost, 1e-3);
        }
        // plus the named fixtures
        const SvmProblem xor_problem{
            {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}, {1, -1, -1, 1}};
        TrainConfig xor_config;
        xor_config.sigma = 1.0;
        xor_config.cost = 10.0;
        check_kkt_model(c, xor_problem, train(xor_problem.samples, xor_problem.labels, xor_config),
                        xor_config.cost, 1e-3);

        const SvmProblem pair{{{1.0}, {-1.0}}, {1, -1}};
        TrainConfig pair_config;
        pair_config.sigma = 10.0;
        pair_config.cost = 100.0;
        check_kkt_model(c, pair, train(pair.samples, pair.labels, pair_config), pair_config.cost,
                        1e-3);
        c.detail = "52 trained models pass the three-case check at tol 1e-3";
    });

    run_criterion("xor-sanity", 0.0, [&](Criterion& c) {
        const SvmProblem p{{{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}, {1, -1, -1, 1}};
        TrainConfig config;
        config.sigma = 1.0;
        config.cost = 10.0;
        const SvmModel model = train(p.samples, p.labels, config);
        for (std::size_t i = 0; i < p.samples.size(); ++i)
            c.require(label_target(predict(model, p.samples[i])) == p.labels[i],
                      "training point misclassified");
        c.detail = "4/4 training points correct";
    });

    run_criterion("e2e-synthetic", 30.0, [&](Criterion& c) {
        CliRunner cli("e2e");
        auto [synth_code, synth_out] = cli.run("synth --n 50 --seed 42 --out " + cli.path("data"));
        c.require(synth_code == 0, "synth failed: " + synth_out);

        auto [grid_code, grid_out] =
            cli.run("grid --data " + cli.path("data") +
                    " --sigmas 0.1,1,10 --costs 1,10,100 --levels 2 --seed 7 --train-true 25"
                    " --train-pseudo 25 --csv " +
                    cli.path("grid.csv"));
        c.require(grid_code == 0, "grid failed: " + grid_out);

        // best accuracy from the CSV
        double best = -1.0;
        std::istringstream csv(slurp(cli.dir / "grid.csv"));
        std::string line;
        std::getline(csv, line);  // header
        while (std::getline(csv, line)) {
            double sigma, cost, acc;
            int level;
            long tp, fn, fp, tn;
            if (std::sscanf(line.c_str(), "%lf,%lf,%d,%lf,%ld,%ld,%ld,%ld", &sigma, &cost, &level,
                            &acc, &tp, &fn, &fp, &tn) == 8)
                best = std::max(best, acc);
        }
        c.require(best >= 95.0, "best-cell accuracy " + std::to_string(best) + "% < 95%");
        char buf[64];
        std::snprintf(buf, sizeof(buf), "best-cell test accuracy %.2f%%", best);
        c.detail = buf;
    });

    run_criterion("report-fidelity", 0.0, [&](Criterion& c) {
        // (a) grid report over the nine reference (sigma, cost) pairs
        CliRunner cli("report");
        auto [synth_code, synth_out] = cli.run("synth --n 16 --seed 3 --out " + cli.path("data"));
        c.require(synth_code == 0, "synth failed");
        auto [grid_code, grid_out] =
            cli.run("grid --data " + cli.path("data") +
                    " --sigmas 0.01,0.02,0.06,0.15 --costs 1,3,5,9,11,15 --levels 1,2,3"
                    " --seed 5 --train-true 8 --train-pseudo 8 --jobs 2");
        c.require(grid_code == 0, "grid failed");

        std::istringstream table(grid_out);
        std::string header;
        std::getline(table, header);
        for (const char* column : {"sigma", "cost", "1-level", "2-level", "3-level"})
            c.require(header.find(column) != std::string::npos,
                      std::string("missing table column ") + column);

        std::map<std::pair<double, double>, int> row_columns;
        std::string line;
        while (std::getline(table, line) && line.rfind("best:", 0) != 0) {
            std::istringstream fields(line);
            double sigma, cost;
            if (!(fields >> sigma >> cost)) continue;
            std::string cell;
            int count = 0;
            while (fields >> cell) ++count;
            row_columns[{sigma, cost}] = count;
        }
        for (const auto& pair : kReferencePairs) {
            const auto it = row_columns.find(pair);
            c.require(it != row_columns.end() && it->second == 3,
                      "missing or short row for sigma=" + std::to_string(pair.first) +
                          " cost=" + std::to_string(pair.second));
        }

        // (b) confusion semantics against the hand-entered 2-level counts
        std::vector<Label> preds, actuals;
        auto push = [&](Label a, Label p, int count) {
            for (int i = 0; i < count; ++i) {
                actuals.push_back(a);
                preds.push_back(p);
            }
        };
        push(Label::TrueDefect, Label::TrueDefect, 19);
        push(Label::TrueDefect, Label::PseudoDefect, 6);
        push(Label::PseudoDefect, Label::TrueDefect, 1);
        push(Label::PseudoDefect, Label::PseudoDefect, 25);
        const ConfusionMatrix cm = confusion(preds, actuals);
        c.require(std::abs(cm.true_rate() - 76.0) < 1e-9, "true rate != 76%");
        c.require(std::abs(cm.pseudo_rate() - 100.0 * 25.0 / 26.0) < 1e-9,
                  "pseudo rate != 25/26");
        c.require(std::abs(cm.pseudo_rate() - 96.0) < 0.2, "pseudo rate does not round to 96%");
        char acc_text[16];
        std::snprintf(acc_text, sizeof(acc_text), "%.2f", accuracy(cm));
        c.require(std::string(acc_text) == "86.27", "accuracy does not format as 86.27");
        c.detail = "9 reference rows x 3 level columns; (19,6,1,25) -> 76%, 96.15%, 86.27%";
    });

    run_criterion("determinism", 0.0, [&](Criterion& c) {
        CliRunner a("det_a"), b("det_b");
        const std::string train_tail =
            " --level 2 --sigma 10 --cost 10 --seed 7 --train-true 15 --train-pseudo 15"
            " --standardize --model ";
        const std::string grid_tail =
            " --sigmas 1,10 --costs 1,10 --levels 1,2 --seed 7 --train-true 15"
            " --train-pseudo 15 --jobs 2 --csv ";
        for (const CliRunner* r : {&a, &b}) {
            c.require(r->run("synth --n 30 --seed 11 --out " + r->path("data")).first == 0,
                      "synth failed");
            c.require(r->run("train --data " + r->path("data") + train_tail +
                             r->path("model.json"))
                              .first == 0,
                      "train failed");
        }
        c.require(slurp(a.dir / "model.json") == slurp(b.dir / "model.json"),
                  "model files differ");

        auto [code_a, out_a] =
            a.run("grid --data " + a.path("data") + grid_tail + a.path("grid.csv"));
        auto [code_b, out_b] =
            b.run("grid --data " + b.path("data") + grid_tail + b.path("grid.csv"));
        c.require(code_a == 0 && code_b == 0, "grid failed");
        c.require(out_a == out_b, "grid reports differ");
        c.require(slurp(a.dir / "grid.csv") == slurp(b.dir / "grid.csv"), "grid CSVs differ");

        auto [eval_a, eval_out_a] = a.run("eval --model " + a.path("model.json") + " --data " +
                                          a.path("data") +
                                          " --seed 7 --train-true 15 --train-pseudo 15"
                                          " --subset test");
        auto [eval_b, eval_out_b] = b.run("eval --model " + b.path("model.json") + " --data " +
                                          b.path("data") +
                                          " --seed 7 --train-true 15 --train-pseudo 15"
                                          " --subset test");
        c.require(eval_a == 0 && eval_b == 0, "eval failed");
        c.require(eval_out_a == eval_out_b, "eval reports differ");
        c.detail = "model files, grid reports/CSVs and eval reports byte-identical";
    });

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
