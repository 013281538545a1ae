#include "tfs/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tfs/errors.hpp"

namespace tfs {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError(name + " must be an array of arrays");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) {
      throw ConfigError(name + " rows have inconsistent lengths");
    }
    for (int k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

ModelConfig parse_model(const json& j) {
  ModelConfig mc;
  const std::string kind = j.value("kind", "linear_gaussian");
  if (!j.contains("T")) throw ConfigError("model.T is required");
  mc.T = j.at("T").get<int>();
  if (mc.T < 1) throw ConfigError("model.T must be >= 1");

  if (kind == "linear_gaussian") {
    mc.kind = ModelKind::LinearGaussian;
    mc.nu2 = j.value("nu2", 1.0);
    mc.tau2 = j.value("tau2", 1.0);
    if (j.contains("mu0")) {
      auto v = j.at("mu0");
      if (v.size() != 2) throw ConfigError("model.mu0 must have 2 entries");
      mc.mu0 << v[0].get<double>(), v[1].get<double>();
    }
    if (j.contains("sigma0")) {
      Eigen::MatrixXd s = parse_matrix(j.at("sigma0"), "model.sigma0");
      if (s.rows() != 2 || s.cols() != 2) {
        throw ConfigError("model.sigma0 must be 2x2");
      }
      mc.sigma0 = s;
    }
    const std::string fwd = j.value("forward_proposal", "optimal");
    if (fwd == "optimal") {
      mc.lg_options.forward = ForwardProposalKind::LocallyOptimal;
    } else if (fwd == "bootstrap") {
      mc.lg_options.forward = ForwardProposalKind::Bootstrap;
    } else {
      throw ConfigError("model.forward_proposal: unknown value " + fwd);
    }
    const std::string bwd = j.value("backward_proposal", "exact");
    if (bwd == "exact") {
      mc.lg_options.backward = BackwardProposalKind::ExactConditional;
    } else if (bwd == "xi") {
      mc.lg_options.backward = BackwardProposalKind::XiPrior;
    } else {
      throw ConfigError("model.backward_proposal: unknown value " + bwd);
    }
    const std::string comb = j.value("combining_proposal", "exact");
    if (comb == "exact") {
      mc.lg_options.combining = CombiningProposalKind::ExactConditional;
    } else if (comb == "transition") {
      mc.lg_options.combining = CombiningProposalKind::Transition;
    } else {
      throw ConfigError("model.combining_proposal: unknown value " + comb);
    }
  } else if (kind == "discrete") {
    mc.kind = ModelKind::Discrete;
    mc.transition = parse_matrix(j.at("transition"), "model.transition");
    mc.emission = parse_matrix(j.at("emission"), "model.emission");
    mc.x0 = j.value("x0", 0);
    if (j.contains("xi")) {
      if (j.at("xi").is_string()) {
        mc.xi_kind = j.at("xi").get<std::string>();
        if (mc.xi_kind != "uniform" && mc.xi_kind != "predictive") {
          throw ConfigError("model.xi: unknown value " + mc.xi_kind);
        }
      } else {
        mc.xi_kind = "table";
        mc.xi_table = parse_matrix(j.at("xi"), "model.xi");
      }
    }
    const std::string prop = j.value("proposals", "adapted");
    DiscreteProposalMode mode = DiscreteProposalMode::Adapted;
    if (prop == "prior") {
      mode = DiscreteProposalMode::Prior;
    } else if (prop != "adapted") {
      throw ConfigError("model.proposals: unknown value " + prop);
    }
    mc.discrete_options = {mode, mode, mode};
  } else {
    throw ConfigError("model.kind: unknown value " + kind);
  }
  return mc;
}

ExperimentConfig parse_experiment(const json& j, const ModelConfig& mc) {
  ExperimentConfig ec;
  ec.num_particles = j.value("N", 300);
  if (ec.num_particles < 1) throw ConfigError("experiment.N must be >= 1");
  ec.replicates = j.value("replicates", 50);
  if (ec.replicates < 1) {
    throw ConfigError("experiment.replicates must be >= 1");
  }
  ec.seed = j.value("seed", static_cast<std::uint64_t>(1));
  if (j.contains("t_list")) {
    for (const auto& v : j.at("t_list")) ec.t_list.push_back(v.get<int>());
    if (ec.t_list.empty()) throw ConfigError("experiment.t_list is empty");
  } else {
    ec.t_list = default_t_list(mc.T);
  }
  if (j.contains("nu2_list")) {
    for (const auto& v : j.at("nu2_list")) {
      ec.nu2_list.push_back(v.get<double>());
    }
  } else {
    ec.nu2_list = {mc.nu2};
  }
  if (j.contains("tau2_list")) {
    for (const auto& v : j.at("tau2_list")) {
      ec.tau2_list.push_back(v.get<double>());
    }
  } else {
    ec.tau2_list = {mc.tau2};
  }
  if (ec.nu2_list.empty() || ec.tau2_list.empty()) {
    throw ConfigError("experiment grid lists must be nonempty");
  }
  ec.estimator = estimator_from_string(j.value("estimator", "n"));
  ec.beta = beta_from_string(j.value("beta", "uniform"));
  ec.out = j.value("out", "");
  return ec;
}

}  // namespace

std::vector<int> default_t_list(int T) {
  std::vector<int> ts;
  const int lo = 3;
  const int hi = T - 2;
  if (hi < lo) return ts;
  for (int k = 1; k <= 9; ++k) {
    int t = std::clamp(k * T / 10, lo, hi);
    if (ts.empty() || ts.back() != t) ts.push_back(t);
  }
  return ts;
}

Config load_config(const std::string& path) {
  json j = load_json(path);
  Config cfg;
  if (!j.contains("model")) throw ConfigError("config: missing model section");
  try {
    cfg.model = parse_model(j.at("model"));
    cfg.experiment =
        parse_experiment(j.value("experiment", json::object()), cfg.model);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  // Range-check the meeting times against the estimator actually selected.
  const int T = cfg.model.T;
  for (int t : cfg.experiment.t_list) {
    bool ok = true;
    switch (cfg.experiment.estimator) {
      case EstimatorKind::OrderN: ok = (t >= 3 && t <= T - 2); break;
      case EstimatorKind::OrderN2: ok = (t >= 2 && t <= T - 1); break;
      case EstimatorKind::ForwardOnly: ok = (t >= 1 && t <= T); break;
    }
    if (!ok) {
      throw ConfigError("experiment.t_list: t = " + std::to_string(t) +
                        " is outside the valid range for estimator " +
                        to_string(cfg.experiment.estimator));
    }
  }
  return cfg;
}

Dataset simulate_dataset(const ModelConfig& mc, double nu2, double tau2,
                         std::uint64_t seed, std::uint64_t stream_id) {
  Dataset ds;
  ds.kind = mc.kind;
  ds.nu2 = (mc.kind == ModelKind::LinearGaussian) ? nu2 : 0.0;
  ds.tau2 = (mc.kind == ModelKind::LinearGaussian) ? tau2 : 0.0;
  ds.T = mc.T;
  ds.seed = seed;
  auto model = make_generative_model(mc, nu2, tau2);
  RngStream rng(seed, stream_id);
  SimulatedPath path = simulate(*model, rng, mc.T);
  ds.ys = std::move(path.observations);
  ds.states = std::move(path.states);
  return ds;
}

void save_dataset(const std::string& path, const Dataset& ds) {
  json j;
  j["kind"] =
      ds.kind == ModelKind::LinearGaussian ? "linear_gaussian" : "discrete";
  j["nu2"] = ds.nu2;
  j["tau2"] = ds.tau2;
  j["T"] = ds.T;
  j["seed"] = ds.seed;
  json ys = json::array();
  for (const auto& y : ds.ys) {
    if (y.size() == 1) {
      ys.push_back(y(0));
    } else {
      json row = json::array();
      for (int i = 0; i < y.size(); ++i) row.push_back(y(i));
      ys.push_back(row);
    }
  }
  j["y"] = ys;
  json xs = json::array();
  for (const auto& x : ds.states) {
    json row = json::array();
    for (int i = 0; i < x.size(); ++i) row.push_back(x(i));
    xs.push_back(row);
  }
  j["states"] = xs;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  out << j.dump(2) << "\n";
}

Dataset load_dataset(const std::string& path) {
  json j = load_json(path);
  Dataset ds;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    ds.kind = (kind == "discrete") ? ModelKind::Discrete
                                   : ModelKind::LinearGaussian;
    ds.nu2 = j.value("nu2", 0.0);
    ds.tau2 = j.value("tau2", 0.0);
    ds.T = j.at("T").get<int>();
    ds.seed = j.value("seed", static_cast<std::uint64_t>(0));
    for (const auto& v : j.at("y")) {
      if (v.is_array()) {
        Obs y(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) y(i) = v[i].get<double>();
        ds.ys.push_back(y);
      } else {
        ds.ys.push_back(Obs::Constant(1, v.get<double>()));
      }
    }
    if (j.contains("states")) {
      for (const auto& v : j.at("states")) {
        State x(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) x(i) = v[i].get<double>();
        ds.states.push_back(x);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("dataset " + path + ": " + e.what());
  }
  if (static_cast<int>(ds.ys.size()) != ds.T) {
    throw ConfigError("dataset " + path + ": y length does not match T");
  }
  return ds;
}

namespace {

DiscreteHmm build_discrete(const ModelConfig& mc, const std::vector<Obs>& ys) {
  DiscreteHmm hmm;
  hmm.num_states = static_cast<int>(mc.transition.rows());
  hmm.num_symbols = static_cast<int>(mc.emission.cols());
  hmm.transition = mc.transition;
  hmm.emission = mc.emission;
  hmm.x0 = mc.x0;
  hmm.observations.reserve(ys.size());
  for (const auto& y : ys) {
    hmm.observations.push_back(static_cast<int>(std::lround(y(0))));
  }
  const int T = hmm.horizon();
  if (mc.xi_kind == "uniform") {
    hmm.xi = uniform_xi(T, hmm.num_states);
  } else if (mc.xi_kind == "predictive") {
    hmm.xi = predictive_xi(hmm);
  } else {
    if (mc.xi_table.rows() != T || mc.xi_table.cols() != hmm.num_states) {
      throw ConfigError("model.xi table must be T x K");
    }
    hmm.xi = mc.xi_table;
  }
  return hmm;
}

}  // namespace

BuiltModel make_inference_model(const ModelConfig& mc, double nu2, double tau2,
                                const std::vector<Obs>& ys) {
  BuiltModel bm;
  if (mc.kind == ModelKind::LinearGaussian) {
    auto lg = std::make_unique<LinearGaussianModel>(nu2, tau2, mc.mu0,
                                                    mc.sigma0, ys,
                                                    mc.lg_options);
    bm.log_p_truth = lg->kalman().log_likelihood;
    bm.rts = lg->smoothed();
    bm.lg = lg.get();
    bm.model = std::move(lg);
  } else {
    DiscreteHmm hmm = build_discrete(mc, ys);
    bm.log_p_truth = std::log(exact_likelihood(hmm));
    bm.discrete = hmm;
    bm.model =
        std::make_unique<DiscreteHmmModel>(std::move(hmm), mc.discrete_options);
  }
  return bm;
}

std::unique_ptr<HmmModel> make_generative_model(const ModelConfig& mc,
                                                double nu2, double tau2) {
  if (mc.kind == ModelKind::LinearGaussian) {
    return std::make_unique<LinearGaussianModel>(nu2, tau2, mc.mu0, mc.sigma0);
  }
  DiscreteHmm hmm;
  hmm.num_states = static_cast<int>(mc.transition.rows());
  hmm.num_symbols = static_cast<int>(mc.emission.cols());
  hmm.transition = mc.transition;
  hmm.emission = mc.emission;
  hmm.x0 = mc.x0;
  hmm.observations.assign(mc.T, 0);  // placeholders; simulation ignores them
  hmm.xi = uniform_xi(mc.T, hmm.num_states);
  return std::make_unique<DiscreteHmmModel>(std::move(hmm));
}

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::OrderN2: return "n2";
    case EstimatorKind::OrderN: return "n";
    case EstimatorKind::ForwardOnly: return "forward-only";
  }
  return "?";
}

const char* to_string(BetaScheme scheme) {
  return scheme == BetaScheme::Uniform ? "uniform" : "proportional";
}

EstimatorKind estimator_from_string(const std::string& s) {
  if (s == "n2") return EstimatorKind::OrderN2;
  if (s == "n") return EstimatorKind::OrderN;
  if (s == "forward-only") return EstimatorKind::ForwardOnly;
  throw ConfigError("unknown estimator: " + s);
}

BetaScheme beta_from_string(const std::string& s) {
  if (s == "uniform") return BetaScheme::Uniform;
  if (s == "proportional") return BetaScheme::WeightProportional;
  throw ConfigError("unknown beta scheme: " + s);
}

}  // namespace tfs
