#include "library.hpp"

#include <cmath>
#include <set>

#include "errors.hpp"

namespace asindy {

std::string term_name(BasisTerm term) {
  switch (term) {
    case BasisTerm::One: return "1";
    case BasisTerm::Theta: return "theta";
    case BasisTerm::Phi: return "phi";
    case BasisTerm::ThrustSinTheta: return "T*sin(theta)";
    case BasisTerm::ThrustCosTheta: return "T*cos(theta)";
    case BasisTerm::ThrustSinPhi: return "T*sin(phi)";
    case BasisTerm::ThrustCosPhi: return "T*cos(phi)";
  }
  return "?";
}

BasisTerm term_from_name(const std::string& name) {
  for (BasisTerm t : {BasisTerm::One, BasisTerm::Theta, BasisTerm::Phi,
                      BasisTerm::ThrustSinTheta, BasisTerm::ThrustCosTheta,
                      BasisTerm::ThrustSinPhi, BasisTerm::ThrustCosPhi}) {
    if (term_name(t) == name) return t;
  }
  throw DataError("library: unknown term name '" + name + "'");
}

LibrarySpec LibrarySpec::default_library() {
  return {{BasisTerm::One, BasisTerm::Theta, BasisTerm::Phi,
           BasisTerm::ThrustSinTheta, BasisTerm::ThrustCosTheta,
           BasisTerm::ThrustSinPhi, BasisTerm::ThrustCosPhi}};
}

void LibrarySpec::validate() const {
  if (terms.empty()) throw ConfigError("library: no terms");
  std::set<BasisTerm> seen(terms.begin(), terms.end());
  if (seen.size() != terms.size()) {
    throw ConfigError("library: duplicate terms");
  }
}

Eigen::RowVectorXd eval_library(const VehicleState& state, double thrust,
                                const LibrarySpec& library) {
  if (!state.finite() || !std::isfinite(thrust)) {
    throw DomainError("eval_library: non-finite input");
  }
  const double roll = state.eta.x();   // phi
  const double pitch = state.eta.y();  // theta
  Eigen::RowVectorXd row(library.terms.size());
  for (std::size_t i = 0; i < library.terms.size(); ++i) {
    switch (library.terms[i]) {
      case BasisTerm::One: row(i) = 1.0; break;
      case BasisTerm::Theta: row(i) = pitch; break;
      case BasisTerm::Phi: row(i) = roll; break;
      case BasisTerm::ThrustSinTheta: row(i) = thrust * std::sin(pitch); break;
      case BasisTerm::ThrustCosTheta: row(i) = thrust * std::cos(pitch); break;
      case BasisTerm::ThrustSinPhi: row(i) = thrust * std::sin(roll); break;
      case BasisTerm::ThrustCosPhi: row(i) = thrust * std::cos(roll); break;
    }
  }
  return row;
}

}  // namespace asindy
