#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cavnet/channel_models.hpp"

namespace cavnet {

// Per-node fidelity curves over one sweep variable.
struct BenchmarkCurve {
    std::string sweep_name;
    std::vector<double> xs;                      // strictly increasing
    std::vector<std::vector<double>> per_node;   // [node offset][point], nodes first_node..
    int first_node = 2;

    void check() const;
};

double rmse(const std::vector<double>& analytical, const std::vector<double>& model);

struct FitReport {
    std::vector<double> candidates;
    std::vector<std::vector<double>> per_node_rmse; // [candidate][node offset]
    std::vector<double> mean_rmse;                  // [candidate]
    double selected = 0.0;
    std::size_t selected_index = 0;

    std::string to_csv() const;
    std::string summary() const;
};

// Evaluate every candidate hyperparameter against the benchmark; select the
// minimum mean RMSE across nodes, ties toward the smaller candidate.
FitReport grid_fit(const std::vector<double>& candidates, const BenchmarkCurve& benchmark,
                   const std::function<BenchmarkCurve(double)>& model_factory);

struct PowerFitResult {
    PowerFit fit;
    double residual_rss = 0.0;
    double residual_rmse = 0.0;
};

// Nonlinear least squares for F(C) = l1 C^l2 + l3: lambda2 grid 0.01..0.5
// with an exact inner linear solve for (l1, l3), then damped Gauss-Newton
// refinement from the best grid point. Deterministic; the result never has a
// larger residual than the best grid initialization.
PowerFitResult fit_power_exponential(const std::vector<std::pair<double, double>>& points);

struct CompareReport {
    std::vector<double> per_node_rmse;
    // First sweep value where the pointwise error exceeds 0.05 at any node.
    std::optional<double> divergence_x;

    std::string summary(const std::string& sweep_name) const;
};

CompareReport compare_report(const BenchmarkCurve& analytical, const BenchmarkCurve& model);

// Load per-node curves from a CSV in the netsim record schema: rows are
// grouped by the `x_column` value and the node index (nodes >= 2), fidelity
// averaged per group.
BenchmarkCurve benchmark_from_csv(std::istream& in, const std::string& x_column);

} // namespace cavnet
