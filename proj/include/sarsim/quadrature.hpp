#pragma once

#include <vector>

namespace sarsim {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule, computed by Newton iteration on P_n. Cached per n.
const GaussLegendre& gauss_legendre(int n);

}  // namespace sarsim
