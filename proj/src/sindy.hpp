#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "library.hpp"
#include "runlog.hpp"
#include "types.hpp"

namespace asindy {

// Regression data: library evaluations Theta and residual-force targets.
// Targets are in force units (mass times acceleration residual).
struct TrainingSet {
  Eigen::MatrixXd theta;    // n_samples x n_terms
  Eigen::MatrixXd targets;  // n_samples x 3 [N]
  double sample_dt = 0.0;
  LibrarySpec library;

  void validate() const;
  std::uint64_t digest() const;
};

struct SR3Settings {
  enum class Regularizer { L0, L1 };

  double lambda = 0.05;     // sparse regularizer weight
  double nu = 1.0;          // relaxation parameter
  double threshold = 1e-3;  // reported-coefficient cutoff [N per unit feature]
  int max_iter = 100;
  double tol = 1e-8;        // relative objective-change stop
  Regularizer reg = Regularizer::L0;

  // Optional equality constraints C w = d on each axis column of the
  // coefficient matrix: C is k x n_terms, d is k x 3 (one column per axis).
  Eigen::MatrixXd constraint_c;
  Eigen::MatrixXd constraint_d;

  bool has_constraints() const { return constraint_c.size() > 0; }
  void validate(std::size_t n_terms) const;
};

struct ModelMeta {
  std::string solver;  // "sr3" or "stlsq"
  std::string regularizer = "l0";
  double lambda = 0.0;
  double nu = 0.0;
  double threshold = 0.0;
  int max_iter = 0;
  double tol = 0.0;
  std::string training_digest;  // hex FNV-1a of the training set
  std::vector<int> constrained_terms;  // columns pinned by equality constraints
  // Per-axis objective values per iteration (SR3) or support-iteration
  // counts (STLSQ). Solve report only; not serialized.
  std::array<std::vector<double>, 3> objective_history;
  std::array<int, 3> iterations{0, 0, 0};
};

// Library descriptor plus sparse coefficient matrix Xi (n_terms x 3, one
// column per force axis, physical units).
struct SindyModel {
  LibrarySpec library;
  Eigen::MatrixXd xi;
  ModelMeta meta;

  // Indices of terms with a nonzero coefficient on any axis.
  std::vector<int> active_terms() const;

  // Residual-force prediction phi * Xi for a feature row.
  Vec3 predict(const Eigen::RowVectorXd& phi) const;

  // Sparsity contract: every coefficient is exactly 0 or at least the
  // threshold in magnitude (constraint-pinned columns exempt).
  void validate() const;
};

struct BuildTargetSettings {
  int smooth_window = 5;   // centered running mean [samples]
  int trim = 10;           // samples severed per edge
  int min_samples = 200;   // minimum log length before preprocessing
  double max_jitter = 0.2; // relative sampling-period tolerance
};

// Residual-force targets from a logged run: central-difference translational
// acceleration minus the known dynamics, smoothed, mass-scaled to force
// units, edges trimmed; library features evaluated on the retained samples.
TrainingSet build_target(const RunLog& log, const VehicleParams& params,
                         const LibrarySpec& library,
                         const BuildTargetSettings& settings = {});

// Concatenate training sets row-wise (same library required).
TrainingSet concat(const std::vector<TrainingSet>& sets);

// Constrained SR3: alternate a nu-regularized (optionally equality-
// constrained) least-squares step for w with the proximal step for the
// sparse auxiliary u, until the objective change drops below tol.
SindyModel solve_sr3(const TrainingSet& data, const SR3Settings& settings);

// Sequentially thresholded least squares, the cross-check solver.
SindyModel solve_stlsq(const TrainingSet& data, double threshold,
                       int max_iter = 20);

void save_model(const SindyModel& model, const std::string& path);
SindyModel load_model(const std::string& path);

}  // namespace asindy
