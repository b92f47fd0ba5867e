#include "sindy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "digest.hpp"
#include "errors.hpp"
#include "rigid_body.hpp"

namespace asindy {

void TrainingSet::validate() const {
  library.validate();
  const auto n_terms = static_cast<Eigen::Index>(library.size());
  if (theta.cols() != n_terms) {
    throw DataError("training set: theta column count does not match library");
  }
  if (theta.rows() != targets.rows() || targets.cols() != 3) {
    throw DataError("training set: theta/target shape mismatch");
  }
  if (theta.rows() < 10 * n_terms) {
    throw DataError("training set: need at least 10 samples per library term");
  }
  if (!theta.allFinite() || !targets.allFinite()) {
    throw DataError("training set: non-finite entries");
  }
}

std::uint64_t TrainingSet::digest() const {
  Fnv1a h;
  const auto rows = theta.rows(), cols = theta.cols();
  h.update(&rows, sizeof(rows));
  h.update(&cols, sizeof(cols));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) h.update(theta(i, j));
    for (Eigen::Index j = 0; j < 3; ++j) h.update(targets(i, j));
  }
  return h.value();
}

void SR3Settings::validate(std::size_t n_terms) const {
  if (lambda < 0.0) throw ConfigError("sr3: lambda must be >= 0");
  if (!(nu > 0.0)) throw ConfigError("sr3: nu must be > 0");
  if (max_iter < 1) throw ConfigError("sr3: max_iter must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("sr3: tol must be > 0");
  if (threshold < 0.0) throw ConfigError("sr3: threshold must be >= 0");
  if (has_constraints()) {
    if (constraint_c.cols() != static_cast<Eigen::Index>(n_terms)) {
      throw ConfigError("sr3: constraint C column count must match library");
    }
    if (constraint_d.rows() != constraint_c.rows() || constraint_d.cols() != 3) {
      throw ConfigError("sr3: constraint d must be k x 3");
    }
  }
}

std::vector<int> SindyModel::active_terms() const {
  std::vector<int> active;
  for (Eigen::Index i = 0; i < xi.rows(); ++i) {
    if (xi.row(i).cwiseAbs().maxCoeff() > 0.0) active.push_back(static_cast<int>(i));
  }
  return active;
}

Vec3 SindyModel::predict(const Eigen::RowVectorXd& phi) const {
  if (phi.cols() != xi.rows()) {
    throw DomainError("sindy model: feature row length does not match library");
  }
  return (phi * xi).transpose();
}

void SindyModel::validate() const {
  library.validate();
  if (xi.rows() != static_cast<Eigen::Index>(library.size()) || xi.cols() != 3) {
    throw DataError("sindy model: coefficient matrix shape mismatch");
  }
  for (Eigen::Index i = 0; i < xi.rows(); ++i) {
    const bool pinned =
        std::find(meta.constrained_terms.begin(), meta.constrained_terms.end(),
                  static_cast<int>(i)) != meta.constrained_terms.end();
    if (pinned) continue;
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double c = std::abs(xi(i, j));
      if (c != 0.0 && c < meta.threshold * (1.0 - 1e-12)) {
        throw DataError("sindy model: coefficient below sparsity threshold");
      }
    }
  }
}

namespace {

std::vector<double> running_mean(const std::vector<double>& x, int window) {
  if (window <= 1) return x;
  const int half = window / 2;
  const int n = static_cast<int>(x.size());
  std::vector<double> out(x.size());
  for (int k = 0; k < n; ++k) {
    const int lo = std::max(0, k - half);
    const int hi = std::min(n - 1, k + half);
    double acc = 0.0;
    for (int i = lo; i <= hi; ++i) acc += x[i];
    out[k] = acc / (hi - lo + 1);
  }
  return out;
}

// Column root-mean-square scales; zero-variance columns are unusable and
// reported by name.
Eigen::VectorXd column_scales(const Eigen::MatrixXd& theta,
                              const LibrarySpec& library) {
  Eigen::VectorXd rms(theta.cols());
  std::string degenerate;
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    rms(j) = std::sqrt(theta.col(j).squaredNorm() /
                       static_cast<double>(theta.rows()));
    if (rms(j) < 1e-12) {
      if (!degenerate.empty()) degenerate += ", ";
      degenerate += term_name(library.terms[j]);
    }
  }
  if (!degenerate.empty()) {
    throw SolverError("solver: degenerate library columns: " + degenerate);
  }
  return rms;
}

double prox_objective_term(const Eigen::VectorXd& u,
                           SR3Settings::Regularizer reg) {
  if (reg == SR3Settings::Regularizer::L1) return u.lpNorm<1>();
  double nnz = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) != 0.0) nnz += 1.0;
  }
  return nnz;
}

Eigen::VectorXd prox(const Eigen::VectorXd& w, double lambda, double nu,
                     SR3Settings::Regularizer reg) {
  Eigen::VectorXd u = w;
  if (reg == SR3Settings::Regularizer::L0) {
    const double cut = std::sqrt(2.0 * lambda * nu);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (std::abs(u(i)) <= cut) u(i) = 0.0;
    }
  } else {
    const double shift = lambda * nu;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u(i) = std::copysign(std::max(std::abs(u(i)) - shift, 0.0), u(i));
    }
  }
  return u;
}

}  // namespace

TrainingSet build_target(const RunLog& log, const VehicleParams& params,
                         const LibrarySpec& library,
                         const BuildTargetSettings& settings) {
  library.validate();
  const int n = static_cast<int>(log.rows.size());
  if (n < settings.min_samples) {
    throw DataError("build_target: log too short (" + std::to_string(n) +
                    " samples, need " + std::to_string(settings.min_samples) + ")");
  }
  log.validate_timing(settings.max_jitter);

  // Translational acceleration by central finite difference of logged
  // velocity; one-sided at the edges, which are trimmed afterwards.
  std::array<std::vector<double>, 3> accel, known;
  for (auto& a : accel) a.resize(n);
  for (auto& a : known) a.resize(n);
  for (int k = 0; k < n; ++k) {
    const int lo = std::max(0, k - 1);
    const int hi = std::min(n - 1, k + 1);
    const Vec3 dv = log.rows[hi].v - log.rows[lo].v;
    const double dt = log.rows[hi].t - log.rows[lo].t;
    const Vec3 a = dv / dt;
    const Vec3 f = known_dynamics(state_from(log.rows[k]),
                                  command_from(log.rows[k]), params)
                       .v_dot;
    for (int i = 0; i < 3; ++i) {
      accel[i][k] = a[i];
      known[i][k] = f[i];
    }
  }
  for (int i = 0; i < 3; ++i) {
    accel[i] = running_mean(accel[i], settings.smooth_window);
    known[i] = running_mean(known[i], settings.smooth_window);
  }

  const int first = settings.trim;
  const int last = n - settings.trim;  // exclusive
  if (last - first < 2) throw DataError("build_target: nothing left after trim");

  TrainingSet out;
  out.library = library;
  out.sample_dt = log.median_dt();
  out.theta.resize(last - first, static_cast<Eigen::Index>(library.size()));
  out.targets.resize(last - first, 3);
  for (int k = first; k < last; ++k) {
    const int r = k - first;
    out.theta.row(r) =
        eval_library(state_from(log.rows[k]), log.rows[k].thrust, library);
    for (int i = 0; i < 3; ++i) {
      out.targets(r, i) = params.m * (accel[i][k] - known[i][k]);
    }
  }
  out.validate();
  return out;
}

TrainingSet concat(const std::vector<TrainingSet>& sets) {
  if (sets.empty()) throw DataError("concat: no training sets");
  TrainingSet out;
  out.library = sets.front().library;
  out.sample_dt = sets.front().sample_dt;
  Eigen::Index rows = 0;
  for (const auto& s : sets) {
    if (s.library.terms != out.library.terms) {
      throw DataError("concat: training sets use different libraries");
    }
    rows += s.theta.rows();
  }
  out.theta.resize(rows, sets.front().theta.cols());
  out.targets.resize(rows, 3);
  Eigen::Index at = 0;
  for (const auto& s : sets) {
    out.theta.middleRows(at, s.theta.rows()) = s.theta;
    out.targets.middleRows(at, s.targets.rows()) = s.targets;
    at += s.theta.rows();
  }
  out.validate();
  return out;
}

SindyModel solve_sr3(const TrainingSet& data, const SR3Settings& settings) {
  data.validate();
  settings.validate(data.library.size());
  const Eigen::Index n = data.theta.cols();

  const Eigen::VectorXd rms = column_scales(data.theta, data.library);
  const Eigen::MatrixXd theta_s = data.theta * rms.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd gram =
      theta_s.transpose() * theta_s +
      Eigen::MatrixXd::Identity(n, n) / settings.nu;

  // Constraints are stated on physical coefficients; rescale columns to act
  // on the standardized ones.
  Eigen::MatrixXd c_s;
  std::vector<int> pinned;
  const bool constrained = settings.has_constraints();
  Eigen::Index kkt_dim = n;
  Eigen::FullPivLU<Eigen::MatrixXd> kkt_lu;
  Eigen::LDLT<Eigen::MatrixXd> gram_ldlt;
  if (constrained) {
    c_s = settings.constraint_c * rms.cwiseInverse().asDiagonal();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (settings.constraint_c.col(j).cwiseAbs().maxCoeff() > 0.0) {
        pinned.push_back(static_cast<int>(j));
      }
    }
    const Eigen::Index k = c_s.rows();
    kkt_dim = n + k;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(kkt_dim, kkt_dim);
    kkt.topLeftCorner(n, n) = gram;
    kkt.topRightCorner(n, k) = c_s.transpose();
    kkt.bottomLeftCorner(k, n) = c_s;
    kkt_lu.compute(kkt);
    if (!kkt_lu.isInvertible()) {
      throw SolverError("sr3: constraint system inconsistent or redundant");
    }
  } else {
    gram_ldlt.compute(gram);
  }

  auto solve_w = [&](const Eigen::VectorXd& rhs_top,
                     const Eigen::VectorXd& d_axis) -> Eigen::VectorXd {
    if (!constrained) return gram_ldlt.solve(rhs_top);
    Eigen::VectorXd rhs(kkt_dim);
    rhs.head(n) = rhs_top;
    rhs.tail(kkt_dim - n) = d_axis;
    return kkt_lu.solve(rhs).head(n);
  };

  SindyModel model;
  model.library = data.library;
  model.xi.resize(n, 3);
  model.meta.solver = "sr3";
  model.meta.regularizer =
      settings.reg == SR3Settings::Regularizer::L0 ? "l0" : "l1";
  model.meta.lambda = settings.lambda;
  model.meta.nu = settings.nu;
  model.meta.threshold = settings.threshold;
  model.meta.max_iter = settings.max_iter;
  model.meta.tol = settings.tol;
  model.meta.constrained_terms = pinned;
  {
    Fnv1a h;
    const std::uint64_t d = data.digest();
    h.update(&d, sizeof(d));
    model.meta.training_digest = h.hex();
  }

  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd y = data.targets.col(axis);
    const Eigen::VectorXd proj = theta_s.transpose() * y;
    const Eigen::VectorXd d_axis =
        constrained ? Eigen::VectorXd(settings.constraint_d.col(axis))
                    : Eigen::VectorXd();

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd w = solve_w(proj + u / settings.nu, d_axis);

    auto objective = [&](const Eigen::VectorXd& wv, const Eigen::VectorXd& uv) {
      return 0.5 * (y - theta_s * wv).squaredNorm() +
             settings.lambda * prox_objective_term(uv, settings.reg) +
             0.5 / settings.nu * (wv - uv).squaredNorm();
    };

    auto& history = model.meta.objective_history[axis];
    history.clear();
    double prev = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (; iter < settings.max_iter; ++iter) {
      u = prox(w, settings.lambda, settings.nu, settings.reg);
      w = solve_w(proj + u / settings.nu, d_axis);
      const double obj = objective(w, u);
      if (!history.empty() && obj > prev + 1e-12 * std::max(1.0, std::abs(prev))) {
        throw SolverError("sr3: objective increased between iterations");
      }
      history.push_back(obj);
      if (std::abs(prev - obj) <= settings.tol * std::max(1.0, std::abs(prev))) {
        ++iter;
        break;
      }
      prev = obj;
    }
    model.meta.iterations[axis] = iter;

    Eigen::VectorXd w_phys = w.cwiseQuotient(rms);
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool is_pinned =
          std::find(pinned.begin(), pinned.end(), static_cast<int>(j)) !=
          pinned.end();
      if (!is_pinned && std::abs(w_phys(j)) < settings.threshold) w_phys(j) = 0.0;
    }
    model.xi.col(axis) = w_phys;
  }

  model.validate();
  return model;
}

SindyModel solve_stlsq(const TrainingSet& data, double threshold,
                       int max_iter) {
  data.validate();
  if (threshold < 0.0) throw ConfigError("stlsq: threshold must be >= 0");
  if (max_iter < 1) throw ConfigError("stlsq: max_iter must be >= 1");
  const Eigen::Index n = data.theta.cols();

  const Eigen::VectorXd rms = column_scales(data.theta, data.library);
  const Eigen::MatrixXd theta_s = data.theta * rms.cwiseInverse().asDiagonal();

  SindyModel model;
  model.library = data.library;
  model.xi = Eigen::MatrixXd::Zero(n, 3);
  model.meta.solver = "stlsq";
  model.meta.threshold = threshold;
  model.meta.max_iter = max_iter;
  {
    Fnv1a h;
    const std::uint64_t d = data.digest();
    h.update(&d, sizeof(d));
    model.meta.training_digest = h.hex();
  }

  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd y = data.targets.col(axis);
    std::vector<int> active(n);
    for (Eigen::Index j = 0; j < n; ++j) active[j] = static_cast<int>(j);

    Eigen::VectorXd w_phys = Eigen::VectorXd::Zero(n);
    int iter = 0;
    while (iter < max_iter) {
      ++iter;
      if (active.empty()) break;
      Eigen::MatrixXd sub(theta_s.rows(), active.size());
      for (std::size_t j = 0; j < active.size(); ++j) {
        sub.col(j) = theta_s.col(active[j]);
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
      if (qr.rank() < static_cast<Eigen::Index>(active.size())) {
        std::string names;
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index j = qr.rank(); j < perm.size(); ++j) {
          if (!names.empty()) names += ", ";
          names += term_name(data.library.terms[active[perm(j)]]);
        }
        throw SolverError("stlsq: rank-deficient library, offending columns: " +
                          names);
      }
      const Eigen::VectorXd w_sub = qr.solve(y);

      w_phys.setZero();
      std::vector<int> next;
      for (std::size_t j = 0; j < active.size(); ++j) {
        const double phys = w_sub(j) / rms(active[j]);
        if (std::abs(phys) >= threshold) {
          w_phys(active[j]) = phys;
          next.push_back(active[j]);
        }
      }
      if (next == active) break;
      active = next;
      w_phys.setZero();  // re-fit on the reduced support next pass
    }
    // Final coefficients come from the last fit restricted to the stable
    // support; recompute once if the loop ended by shrinking.
    if (w_phys.isZero(0.0) && !active.empty()) {
      Eigen::MatrixXd sub(theta_s.rows(), active.size());
      for (std::size_t j = 0; j < active.size(); ++j) {
        sub.col(j) = theta_s.col(active[j]);
      }
      const Eigen::VectorXd w_sub =
          Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(sub).solve(y);
      for (std::size_t j = 0; j < active.size(); ++j) {
        const double phys = w_sub(j) / rms(active[j]);
        w_phys(active[j]) = std::abs(phys) >= threshold ? phys : 0.0;
      }
    }
    model.xi.col(axis) = w_phys;
    model.meta.iterations[axis] = iter;
  }

  model.validate();
  return model;
}

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* const kModelTag = "# asindy-model v1";

std::string expect_kv(std::istream& in, const std::string& key,
                      const std::string& path) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(key + ":", 0) != 0) {
    throw DataError("model: '" + path + "' missing field '" + key + "'");
  }
  std::string value = line.substr(key.size() + 1);
  const auto start = value.find_first_not_of(' ');
  return start == std::string::npos ? "" : value.substr(start);
}

}  // namespace

void save_model(const SindyModel& model, const std::string& path) {
  model.validate();
  std::ofstream out(path);
  if (!out) throw IoError("model: cannot open '" + path + "' for writing");
  out << kModelTag << '\n';
  out << "solver: " << model.meta.solver << '\n';
  out << "regularizer: " << model.meta.regularizer << '\n';
  out << "lambda: " << fmt17(model.meta.lambda) << '\n';
  out << "nu: " << fmt17(model.meta.nu) << '\n';
  out << "threshold: " << fmt17(model.meta.threshold) << '\n';
  out << "max_iter: " << model.meta.max_iter << '\n';
  out << "tol: " << fmt17(model.meta.tol) << '\n';
  out << "training_digest: " << model.meta.training_digest << '\n';
  out << "constrained_terms:";
  for (int idx : model.meta.constrained_terms) out << ' ' << idx;
  out << '\n';
  out << "units: N\n";
  out << "terms: " << model.library.size() << '\n';
  for (BasisTerm t : model.library.terms) out << term_name(t) << '\n';
  out << "xi: " << model.xi.rows() << ' ' << model.xi.cols() << '\n';
  for (Eigen::Index i = 0; i < model.xi.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.xi.cols(); ++j) {
      if (j) out << ' ';
      out << fmt17(model.xi(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("model: write failed for '" + path + "'");
}

SindyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("model: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kModelTag) {
    throw DataError("model: '" + path + "' has an unknown version tag");
  }

  SindyModel model;
  try {
    model.meta.solver = expect_kv(in, "solver", path);
    model.meta.regularizer = expect_kv(in, "regularizer", path);
    model.meta.lambda = std::stod(expect_kv(in, "lambda", path));
    model.meta.nu = std::stod(expect_kv(in, "nu", path));
    model.meta.threshold = std::stod(expect_kv(in, "threshold", path));
    model.meta.max_iter = std::stoi(expect_kv(in, "max_iter", path));
    model.meta.tol = std::stod(expect_kv(in, "tol", path));
    model.meta.training_digest = expect_kv(in, "training_digest", path);
  } catch (const std::invalid_argument&) {
    throw DataError("model: '" + path + "' has a malformed numeric field");
  } catch (const std::out_of_range&) {
    throw DataError("model: '" + path + "' has a malformed numeric field");
  }
  {
    std::istringstream ss(expect_kv(in, "constrained_terms", path));
    int idx;
    while (ss >> idx) model.meta.constrained_terms.push_back(idx);
  }
  if (expect_kv(in, "units", path) != "N") {
    throw DataError("model: '" + path + "' has unexpected units");
  }
  int n_terms = 0;
  try {
    n_terms = std::stoi(expect_kv(in, "terms", path));
  } catch (const std::invalid_argument&) {
    throw DataError("model: '" + path + "' has a malformed term count");
  } catch (const std::out_of_range&) {
    throw DataError("model: '" + path + "' has a malformed term count");
  }
  for (int i = 0; i < n_terms; ++i) {
    if (!std::getline(in, line)) {
      throw DataError("model: '" + path + "' truncated term list");
    }
    model.library.terms.push_back(term_from_name(line));
  }
  {
    std::istringstream ss(expect_kv(in, "xi", path));
    int rows = 0, cols = 0;
    ss >> rows >> cols;
    if (rows != n_terms || cols != 3) {
      throw DataError("model: '" + path +
                      "' coefficient matrix does not match term count");
    }
    model.xi.resize(rows, cols);
    for (int i = 0; i < rows; ++i) {
      if (!std::getline(in, line)) {
        throw DataError("model: '" + path + "' truncated coefficient matrix");
      }
      std::istringstream row(line);
      for (int j = 0; j < cols; ++j) {
        if (!(row >> model.xi(i, j))) {
          throw DataError("model: '" + path + "' malformed coefficient row");
        }
      }
    }
  }
  model.validate();
  return model;
}

}  // namespace asindy
