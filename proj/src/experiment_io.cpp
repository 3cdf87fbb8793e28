#include "mollikit/experiment_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "mollikit/error.hpp"

namespace mollikit::io {

using nlohmann::json;

namespace {

template <class T>
std::vector<T> scalar_or_array(const json& doc, const char* key, std::vector<T> fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& item : v) out.push_back(item.get<T>());
  } else {
    out.push_back(v.get<T>());
  }
  if (out.empty()) throw Error(ErrorCode::Config, fmt::format("config key '{}' must not be empty", key));
  return out;
}

std::string key_of(double v) { return fmt::format("{}", v); }

json map_to_json(const std::map<double, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[key_of(k)] = v;
  return out;
}

std::string cell_label(const ExperimentConfig& c) {
  return fmt::format("{}/tau={}/n={}", to_string(c.error_dist), c.tau, c.n);
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::vector<ExperimentConfig> ExperimentPlan::cells() const {
  std::vector<ExperimentConfig> out;
  for (ErrorDist dist : dists) {
    for (double tau : taus) {
      for (int n : ns) {
        ExperimentConfig c = base;
        c.error_dist = dist;
        c.tau = tau;
        c.n = n;
        c.validate();
        out.push_back(c);
      }
    }
  }
  return out;
}

ExperimentPlan parse_plan(const json& doc) {
  static const std::vector<std::string> known = {"n",      "M",         "tau",    "error_dist", "m_list",
                                                 "h_list", "base_seed", "kernel", "solver"};
  try {
    if (!doc.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
      }
    }
    ExperimentPlan plan;
    ExperimentConfig& c = plan.base;
    plan.ns = scalar_or_array<int>(doc, "n", {c.n});
    plan.taus = scalar_or_array<double>(doc, "tau", {c.tau});
    for (const auto& name : scalar_or_array<std::string>(doc, "error_dist", {to_string(c.error_dist)})) {
      plan.dists.push_back(parse_error_dist(name));
    }
    if (doc.contains("M")) c.M = doc.at("M").get<int>();
    if (doc.contains("m_list")) c.m_list = doc.at("m_list").get<std::vector<double>>();
    if (doc.contains("h_list")) c.h_list = doc.at("h_list").get<std::vector<double>>();
    if (doc.contains("base_seed")) c.base_seed = doc.at("base_seed").get<std::uint64_t>();
    if (doc.contains("kernel")) c.kernel = MollifierKernel::parse(doc.at("kernel").get<std::string>()).kind();
    if (doc.contains("solver")) {
      const json& s = doc.at("solver");
      c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
      c.solver.grad_tol = s.value("grad_tol", c.solver.grad_tol);
      c.solver.ridge = s.value("ridge", c.solver.ridge);
    }
    (void)plan.cells();  // validates every combination
    return plan;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::Config, std::string("malformed config: ") + ex.what());
  } catch (const Error& ex) {
    if (ex.code() == ErrorCode::Config) throw;
    throw Error(ErrorCode::Config, ex.what());
  }
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::Config, "malformed config '" + path + "': " + ex.what());
  }
  return parse_plan(doc);
}

json plan_to_json(const ExperimentPlan& plan) {
  const ExperimentConfig& c = plan.base;
  json dists = json::array();
  for (ErrorDist d : plan.dists) dists.push_back(to_string(d));
  return {
      {"n", plan.ns},
      {"M", c.M},
      {"tau", plan.taus},
      {"error_dist", dists},
      {"m_list", c.m_list},
      {"h_list", c.h_list},
      {"base_seed", c.base_seed},
      {"kernel", c.kernel == KernelKind::CompactBump ? "bump" : "gaussian"},
      {"solver", {{"max_iter", c.solver.max_iter}, {"grad_tol", c.solver.grad_tol}, {"ridge", c.solver.ridge}}},
  };
}

json result_to_json(const ExperimentResult& result) {
  json records = json::array();
  for (const auto& r : result.records) {
    json rec = {{"replication", r.replication}, {"seed", r.seed}, {"included", r.included}};
    if (!r.failure.empty()) rec["failure"] = r.failure;
    if (result.kind == ExperimentKind::Rmse) rec["theta_tau"] = r.theta_tau;
    rec["theta_m"] = r.theta_m;
    if (!r.theta_h.empty()) rec["theta_h"] = r.theta_h;
    if (!r.beta_m.empty()) {
      rec["beta_m"] = r.beta_m;
      rec["beta_q"] = r.beta_q;
    }
    records.push_back(std::move(rec));
  }
  const ExperimentConfig& c = result.config;
  json cell = {{"error_dist", to_string(c.error_dist)}, {"tau", c.tau}, {"n", c.n}, {"M", c.M}};
  if (result.kind == ExperimentKind::Rmse) {
    cell["rmse_tau"] = result.rmse_tau;
    cell["rmse_m"] = map_to_json(result.rmse_m);
    cell["rmse_h"] = map_to_json(result.rmse_h);
  } else {
    cell["mad_m"] = map_to_json(result.mad_m);
  }
  cell["excluded"] = result.excluded;
  cell["replications"] = std::move(records);
  return cell;
}

json results_document(const ExperimentPlan& plan, const std::vector<ExperimentResult>& results,
                      const std::string& timestamp) {
  json cells = json::array();
  for (const auto& r : results) cells.push_back(result_to_json(r));
  const bool rmse = results.empty() || results.front().kind == ExperimentKind::Rmse;
  return {
      {"experiment", rmse ? "rmse" : "mad"},
      {"timestamp", timestamp},
      {"config", plan_to_json(plan)},
      {"cells", std::move(cells)},
  };
}

std::string results_table_csv(const std::vector<ExperimentResult>& results) {
  std::string out = "estimator,parameter";
  for (const auto& r : results) out += "," + cell_label(r.config);
  out += "\n";
  auto row = [&](const std::string& name, const std::string& param, auto&& pick) {
    out += name + "," + param;
    for (const auto& r : results) out += "," + format_double(pick(r));
    out += "\n";
  };
  if (results.empty()) return out;
  const ExperimentConfig& first = results.front().config;
  if (results.front().kind == ExperimentKind::Rmse) {
    row("RMSE_tau", "", [](const ExperimentResult& r) { return r.rmse_tau; });
    for (double m : first.m_list) {
      row("RMSE_m", key_of(m), [m](const ExperimentResult& r) { return r.rmse_m.at(m); });
    }
    for (double h : first.h_list) {
      row("RMSE_h", key_of(h), [h](const ExperimentResult& r) { return r.rmse_h.at(h); });
    }
  } else {
    for (double m : first.m_list) {
      row("MAD_m", key_of(m), [m](const ExperimentResult& r) { return r.mad_m.at(m); });
    }
  }
  return out;
}

}  // namespace mollikit::io
