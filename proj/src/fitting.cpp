#include "cavnet/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "cavnet/csv.hpp"
#include "cavnet/errors.hpp"

namespace cavnet {

void BenchmarkCurve::check() const {
    if (xs.empty() || per_node.empty()) throw ValidationError("BenchmarkCurve: empty");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw ValidationError("BenchmarkCurve: xs must be strictly increasing");
    for (const auto& node : per_node) {
        if (node.size() != xs.size())
            throw ValidationError("BenchmarkCurve: node series length mismatch");
        for (double f : node)
            if (f < -1e-9 || f > 1.0 + 1e-9)
                throw ValidationError("BenchmarkCurve: fidelity outside [0,1]");
    }
}

double rmse(const std::vector<double>& analytical, const std::vector<double>& model) {
    if (analytical.size() != model.size() || analytical.empty())
        throw ValidationError("rmse: series must have equal nonzero length");
    double acc = 0.0;
    for (std::size_t i = 0; i < analytical.size(); ++i) {
        const double d = analytical[i] - model[i];
        acc += d * d;
    }
    return std::sqrt(acc / analytical.size());
}

FitReport grid_fit(const std::vector<double>& candidates, const BenchmarkCurve& benchmark,
                   const std::function<BenchmarkCurve(double)>& model_factory) {
    if (candidates.empty()) throw ValidationError("grid_fit: need at least one candidate");
    benchmark.check();

    FitReport report;
    report.candidates = candidates;
    for (double cand : candidates) {
        const BenchmarkCurve model = model_factory(cand);
        model.check();
        if (model.per_node.size() != benchmark.per_node.size() || model.xs.size() != benchmark.xs.size())
            throw ValidationError("grid_fit: model curve shape does not match benchmark");
        std::vector<double> per_node;
        double mean = 0.0;
        for (std::size_t n = 0; n < benchmark.per_node.size(); ++n) {
            per_node.push_back(rmse(benchmark.per_node[n], model.per_node[n]));
            mean += per_node.back();
        }
        report.per_node_rmse.push_back(std::move(per_node));
        report.mean_rmse.push_back(mean / benchmark.per_node.size());
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (report.mean_rmse[i] < report.mean_rmse[best] ||
            (report.mean_rmse[i] == report.mean_rmse[best] && candidates[i] < candidates[best]))
            best = i;
    }
    report.selected_index = best;
    report.selected = candidates[best];
    return report;
}

std::string FitReport::to_csv() const {
    std::string out = "candidate";
    for (std::size_t n = 0; n < per_node_rmse.front().size(); ++n)
        out += ",rmse_node" + std::to_string(n + 2);
    out += ",rmse_mean,selected\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out += format_double(candidates[i]);
        for (double r : per_node_rmse[i]) out += "," + format_double(r);
        out += "," + format_double(mean_rmse[i]);
        out += i == selected_index ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

std::string FitReport::summary() const {
    std::string out = "grid_fit: selected " + format_double(selected) + " (mean RMSE " +
                      format_double(mean_rmse[selected_index]) + ")\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out += "  candidate " + format_double(candidates[i]) + ": mean RMSE " +
               format_double(mean_rmse[i]) + "\n";
    }
    return out;
}

namespace {

struct LinearSolveResult {
    double l1 = 0.0, l3 = 0.0, rss = 0.0;
};

// For fixed l2, the optimal (l1, l3) solve a 2x2 least-squares system in the
// basis {C^l2, 1}.
LinearSolveResult solve_linear(const std::vector<std::pair<double, double>>& pts, double l2) {
    double s_xx = 0, s_x = 0, s_1 = 0, s_xy = 0, s_y = 0;
    for (const auto& [c, f] : pts) {
        const double x = std::pow(c, l2);
        s_xx += x * x;
        s_x += x;
        s_1 += 1.0;
        s_xy += x * f;
        s_y += f;
    }
    const double det = s_xx * s_1 - s_x * s_x;
    LinearSolveResult r;
    if (std::abs(det) < 1e-14 * std::max(1.0, s_xx * s_1)) {
        // degenerate basis (all C^l2 equal): flat fit, l1 = 0
        r.l1 = 0.0;
        r.l3 = s_y / s_1;
    } else {
        r.l1 = (s_xy * s_1 - s_x * s_y) / det;
        r.l3 = (s_xx * s_y - s_x * s_xy) / det;
    }
    for (const auto& [c, f] : pts) {
        const double e = r.l1 * std::pow(c, l2) + r.l3 - f;
        r.rss += e * e;
    }
    return r;
}

double rss_of(const std::vector<std::pair<double, double>>& pts, const PowerFit& fit) {
    double rss = 0.0;
    for (const auto& [c, f] : pts) {
        const double e = fit.lambda1 * std::pow(c, fit.lambda2) + fit.lambda3 - f;
        rss += e * e;
    }
    return rss;
}

} // namespace

PowerFitResult fit_power_exponential(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4) throw ValidationError("fit_power_exponential: need >= 4 points");
    bool all_equal = true;
    for (const auto& [c, f] : points) {
        if (c <= 0) throw ValidationError("fit_power_exponential: C must be positive");
        if (c != points.front().first) all_equal = false;
    }
    if (all_equal) throw ValidationError("fit_power_exponential: degenerate points (all C equal)");

    // grid initialization over lambda2
    PowerFit best;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 50; ++i) {
        const double l2 = 0.01 * i;
        const LinearSolveResult lin = solve_linear(points, l2);
        if (lin.rss < best_rss) {
            best_rss = lin.rss;
            best = PowerFit{lin.l1, l2, lin.l3};
        }
    }

    // damped Gauss-Newton refinement; never accept a worse residual
    PowerFit cur = best;
    double cur_rss = best_rss;
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (const auto& [c, f] : points) {
            const double p = std::pow(c, cur.lambda2);
            const double r = cur.lambda1 * p + cur.lambda3 - f;
            Eigen::Vector3d j(p, cur.lambda1 * p * std::log(c), 1.0);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        if (jtr.norm() < 1e-15) break;
        const Eigen::Vector3d delta = jtj.ldlt().solve(-jtr);
        if (!delta.allFinite()) break;

        double step = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 25; ++halving, step *= 0.5) {
            PowerFit trial{cur.lambda1 + step * delta(0), cur.lambda2 + step * delta(1),
                           cur.lambda3 + step * delta(2)};
            const double trial_rss = rss_of(points, trial);
            if (trial_rss < cur_rss) {
                cur = trial;
                cur_rss = trial_rss;
                improved = true;
                break;
            }
        }
        if (!improved) break;
        if (cur_rss < 1e-28) break;
    }

    PowerFitResult result;
    result.fit = cur;
    result.residual_rss = cur_rss;
    result.residual_rmse = std::sqrt(cur_rss / points.size());
    return result;
}

CompareReport compare_report(const BenchmarkCurve& analytical, const BenchmarkCurve& model) {
    analytical.check();
    model.check();
    if (analytical.xs.size() != model.xs.size() ||
        analytical.per_node.size() != model.per_node.size())
        throw ValidationError("compare_report: mismatched sweeps");
    for (std::size_t i = 0; i < analytical.xs.size(); ++i) {
        const double a = analytical.xs[i], b = model.xs[i];
        if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
            throw ValidationError("compare_report: sweep abscissae differ");
    }

    CompareReport report;
    for (std::size_t n = 0; n < analytical.per_node.size(); ++n)
        report.per_node_rmse.push_back(rmse(analytical.per_node[n], model.per_node[n]));

    for (std::size_t i = 0; i < analytical.xs.size() && !report.divergence_x; ++i) {
        for (std::size_t n = 0; n < analytical.per_node.size(); ++n) {
            if (std::abs(analytical.per_node[n][i] - model.per_node[n][i]) > 0.05) {
                report.divergence_x = analytical.xs[i];
                break;
            }
        }
    }
    return report;
}

BenchmarkCurve benchmark_from_csv(std::istream& in, const std::string& x_column) {
    std::string header;
    if (!std::getline(in, header)) throw ValidationError("benchmark_from_csv: empty input");
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    auto col_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return i;
        throw ValidationError("benchmark_from_csv: missing column '" + name + "'");
    };
    const std::size_t xi = col_index(x_column);
    const std::size_t ni = col_index("node");
    const std::size_t fi = col_index("fidelity");

    std::map<double, std::map<int, std::pair<double, int>>> acc;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != cols.size())
            throw ValidationError("benchmark_from_csv: malformed row");
        const double x = std::stod(fields[xi]);
        const int node = std::stoi(fields[ni]);
        const double f = std::stod(fields[fi]);
        if (node < 2) continue;
        auto& slot = acc[x][node];
        slot.first += f;
        slot.second += 1;
    }
    if (acc.empty()) throw ValidationError("benchmark_from_csv: no usable rows");

    BenchmarkCurve curve;
    curve.sweep_name = x_column;
    const std::size_t n_nodes = acc.begin()->second.size();
    curve.per_node.assign(n_nodes, {});
    for (const auto& [x, nodes] : acc) {
        if (nodes.size() != n_nodes)
            throw ValidationError("benchmark_from_csv: inconsistent node coverage");
        curve.xs.push_back(x);
        std::size_t k = 0;
        for (const auto& [node, sum_count] : nodes)
            curve.per_node[k++].push_back(sum_count.first / sum_count.second);
    }
    curve.check();
    return curve;
}

std::string CompareReport::summary(const std::string& sweep_name) const {
    std::string out = "compare_report over " + sweep_name + "\n";
    for (std::size_t n = 0; n < per_node_rmse.size(); ++n)
        out += "  node " + std::to_string(n + 2) + " RMSE: " + format_double(per_node_rmse[n]) + "\n";
    if (divergence_x)
        out += "  divergence (pointwise error > 0.05) from " + sweep_name + " = " +
               format_double(*divergence_x) + "\n";
    else
        out += "  no divergence flagged\n";
    return out;
}

} // namespace cavnet
