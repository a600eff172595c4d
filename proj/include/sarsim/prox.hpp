#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sarsim/grid.hpp"

namespace sarsim {

enum class Regulariser { kCauchy, kL1, kTV };

Regulariser regulariser_by_name(const std::string& name);
std::string regulariser_name(Regulariser kind);

struct ProxParams {
  /// Cauchy scale. Unset: chosen per subband by despeckle() from a robust
  /// noise estimate times gamma_scale.
  std::optional<double> gamma;
  double gamma_scale = 1.0;
  /// FB step. Unset: min(1, 4 gamma^2) for Cauchy, 1 otherwise. A supplied
  /// value above 4 gamma^2 is clamped with a warning.
  std::optional<double> omega;
  /// L1 / TV weight.
  double lambda = 0.0;
  std::size_t max_iter = 1000;
  double tol = 1e-6;
  std::size_t tv_inner_iter = 200;
};

struct RegulariserSpec {
  Regulariser kind = Regulariser::kCauchy;
  ProxParams params;
};

/// -log(gamma / (gamma^2 + u^2)).
double cauchy_penalty(double u, double gamma);

/// The scalar objective minimised by prox_cauchy:
/// cauchy_penalty(u) + (u - x)^2 / (2 omega).
double cauchy_prox_objective(double u, double x, double gamma, double omega);

/// Cauchy proximal operator: the minimiser of cauchy_prox_objective, obtained
/// as a root of u^3 - x u^2 + (gamma^2 + 2 omega) u - x gamma^2 = 0.
///
/// With a non-negative discriminant the cubic has one real root, found by
/// Cardano's formula. Otherwise (only possible when omega > 4 gamma^2) the
/// three real roots come from the trigonometric form and the one with the
/// lowest objective is returned. Either way one Newton step polishes the root.
/// Throws ConfigError for gamma <= 0 or omega <= 0.
double prox_cauchy(double x, double gamma, double omega);

/// Soft threshold sign(x) max(|x| - threshold, 0).
double prox_l1(double x, double threshold);

/// Isotropic total variation with forward differences (Neumann boundary).
double tv_norm(const Grid& u);

struct TvProxResult {
  Grid value;
  /// Dual objective 0.5 ||g - weight div p||^2 after each inner iteration.
  std::vector<double> dual_objective;
};

/// argmin_u 0.5 ||u - g||^2 + weight TV(u), by projected gradient on the dual
/// with step 1/8. Throws ConfigError for inner_iter < 1 or weight < 0.
TvProxResult prox_tv(const Grid& g, double weight, std::size_t inner_iter);

struct FbReport {
  std::size_t iterations = 0;
  double final_change = 0.0;
  /// Objective 0.5 ||Gamma - Phi||^2 + penalty(Phi), starting at Phi = Gamma.
  std::vector<double> objective;
  /// ||Gamma - Phi||^2 for the same iterates.
  std::vector<double> fidelity;
  double gamma = 0.0;
  double omega = 0.0;
  bool omega_clamped = false;
  bool converged = false;
  bool divergence_warning = false;
};

struct FbResult {
  Grid estimate;
  FbReport report;
};

/// Penalty value of a whole plane for the given regulariser.
double regulariser_penalty(const Grid& phi, const RegulariserSpec& reg, double gamma);

/// Forward-backward splitting from Phi = Gamma:
///   u = Phi - omega (Phi - Gamma),  Phi <- prox(u).
/// Stops once ||Phi_next - Phi|| / ||Phi|| < tol, returning the iterate that
/// passed the test, or after max_iter steps. Throws NumericalError if the
/// objective stops being finite.
FbResult forward_backward(const Grid& noisy, const RegulariserSpec& reg);

}  // namespace sarsim
