#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mollikit/montecarlo.hpp"

namespace mollikit::io {

/// An experiment file may list several error distributions, quantile
/// levels and sample sizes; each combination is one table cell.
struct ExperimentPlan {
  ExperimentConfig base;
  std::vector<ErrorDist> dists;
  std::vector<double> taus;
  std::vector<int> ns;

  std::vector<ExperimentConfig> cells() const;
};

/// Keys: n, M, tau, error_dist, m_list, h_list, base_seed, kernel. n, tau
/// and error_dist may be scalars or arrays. Throws Error(Config).
ExperimentPlan parse_plan(const nlohmann::json& doc);
ExperimentPlan load_plan(const std::string& path);
nlohmann::json plan_to_json(const ExperimentPlan& plan);

nlohmann::json result_to_json(const ExperimentResult& result);

/// Full results document: experiment kind, timestamp, config echo, cells.
nlohmann::json results_document(const ExperimentPlan& plan, const std::vector<ExperimentResult>& results,
                                const std::string& timestamp);

/// Rows are estimator/parameter, columns are the (dist, tau, n) cells.
std::string results_table_csv(const std::vector<ExperimentResult>& results);

/// 17 significant digits, '.' decimal point.
std::string format_double(double v);

}  // namespace mollikit::io
