#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "types.hpp"

namespace asindy {

// Basis functions over (attitude, thrust). The default library is
//   [1, theta, phi, T sin(theta), T cos(theta), T sin(phi), T cos(phi)]
// where theta is pitch, phi is roll, T the collective thrust magnitude.
enum class BasisTerm {
  One,
  Theta,
  Phi,
  ThrustSinTheta,
  ThrustCosTheta,
  ThrustSinPhi,
  ThrustCosPhi,
};

std::string term_name(BasisTerm term);
BasisTerm term_from_name(const std::string& name);

// Ordered, unique list of library terms. Evaluation order is fixed and
// serialized with the model.
struct LibrarySpec {
  std::vector<BasisTerm> terms;

  static LibrarySpec default_library();
  std::size_t size() const { return terms.size(); }
  void validate() const;
};

// Feature row for one sample: features in library order.
Eigen::RowVectorXd eval_library(const VehicleState& state, double thrust,
                                const LibrarySpec& library);

}  // namespace asindy
