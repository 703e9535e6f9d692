#pragma once

#include <vector>

#include "rcfpi/blockspace.hpp"
#include "rcfpi/linalg.hpp"

namespace rcfpi {

/// Two subspaces given by bases, with U_1 intersect U_2 = {0} under the
/// supplied metric (checked through the combined Gram matrix).
struct SubspacePair {
  std::vector<BlockVector> basis_u1;
  std::vector<BlockVector> basis_u2;
  Metric metric;

  static SubspacePair checked(std::vector<BlockVector> basis_u1,
                              std::vector<BlockVector> basis_u2, Metric metric);
};

/// Cosine of the Friedrichs angle: the largest singular value of the
/// M-normalized cross-Gram operator between the subspaces, in [0, 1).
double friedrichs_cosine(const SubspacePair& pair);

/// sqrt((1 - theta) / (1 - alpha*theta)): the largest admissible cosine for
/// convergence of the split randomized update.
double convergence_threshold(double theta, double alpha);

/// At the threshold only L2 convergence survives, strictly below it almost
/// sure convergence holds too, so the verdict stays three-way.
enum class ThresholdVerdict { strict, boundary, fail };
ThresholdVerdict classify_friedrichs(double c_f, double theta, double alpha, double tol = 1e-9);

struct EigenvalueCondition {
  double lambda_min = 0.0;
  double threshold = 0.0;  // -alpha / (2 - alpha)
  double margin = 0.0;     // lambda_min - threshold
  bool pass = false;
};

/// lambda_min(W) > -alpha/(2-alpha), the mixing-matrix condition for the
/// randomized PG-EXTRA update.
EigenvalueCondition check_eigenvalue_condition(const Matrix& w, double alpha);

}  // namespace rcfpi
