#ifndef TFS_CONFIG_HPP
#define TFS_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tfs/discrete_model.hpp"
#include "tfs/linear_gaussian.hpp"
#include "tfs/two_filter.hpp"

namespace tfs {

enum class ModelKind { LinearGaussian, Discrete };

/// Model section of a config file. For the discrete kind, `xi_kind` selects
/// uniform tables, exact predictive tables, or an explicit table.
struct ModelConfig {
  ModelKind kind = ModelKind::LinearGaussian;
  int T = 0;

  // linear_gaussian
  double nu2 = 1.0;
  double tau2 = 1.0;
  Eigen::Vector2d mu0 = Eigen::Vector2d::Zero();
  Eigen::Matrix2d sigma0 = Eigen::Matrix2d::Zero();
  LinearGaussianOptions lg_options;

  // discrete
  Eigen::MatrixXd transition;
  Eigen::MatrixXd emission;
  int x0 = 0;
  std::string xi_kind = "uniform";  // "uniform" | "predictive" | "table"
  Eigen::MatrixXd xi_table;
  DiscreteModelOptions discrete_options;
};

struct ExperimentConfig {
  int num_particles = 300;
  int replicates = 50;
  std::vector<int> t_list;          // empty -> default_t_list(T)
  std::vector<double> nu2_list;     // empty -> {model nu2}
  std::vector<double> tau2_list;    // empty -> {model tau2}
  std::uint64_t seed = 1;
  EstimatorKind estimator = EstimatorKind::OrderN;
  BetaScheme beta = BetaScheme::Uniform;
  std::string out;
};

struct Config {
  ModelConfig model;
  ExperimentConfig experiment;
};

/// Parses the JSON config file; throws ConfigError with a location message
/// on any schema violation.
Config load_config(const std::string& path);

/// Meeting-time defaults: the nine deciles k*T/10, clamped into [3, T-2]
/// and deduplicated.
std::vector<int> default_t_list(int T);

/// Simulated observation record, with latent states kept for audit.
struct Dataset {
  ModelKind kind = ModelKind::LinearGaussian;
  double nu2 = 0.0;
  double tau2 = 0.0;
  int T = 0;
  std::uint64_t seed = 0;
  std::vector<Obs> ys;        // y_1..y_T
  std::vector<State> states;  // x_0..x_T
};

Dataset simulate_dataset(const ModelConfig& mc, double nu2, double tau2,
                         std::uint64_t seed, std::uint64_t stream_id);
void save_dataset(const std::string& path, const Dataset& ds);
Dataset load_dataset(const std::string& path);

/// Inference-ready model plus its exact reference quantities: the Kalman
/// (linear Gaussian) or forward-recursion (discrete) log marginal
/// likelihood, and RTS-smoothed beliefs when available.
struct BuiltModel {
  std::unique_ptr<HmmModel> model;
  double log_p_truth = 0.0;
  const LinearGaussianModel* lg = nullptr;  // borrowed view, LG only
  std::vector<GaussianBelief> rts;          // LG only
  DiscreteHmm discrete;                     // discrete only (with data/xi)
};

BuiltModel make_inference_model(const ModelConfig& mc, double nu2, double tau2,
                                const std::vector<Obs>& ys);

std::unique_ptr<HmmModel> make_generative_model(const ModelConfig& mc,
                                                double nu2, double tau2);

const char* to_string(EstimatorKind kind);
const char* to_string(BetaScheme scheme);
EstimatorKind estimator_from_string(const std::string& s);
BetaScheme beta_from_string(const std::string& s);

}  // namespace tfs

#endif  // TFS_CONFIG_HPP
