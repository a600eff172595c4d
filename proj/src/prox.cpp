#include "sarsim/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sarsim/errors.hpp"

namespace sarsim {

Regulariser regulariser_by_name(const std::string& name) {
  if (name == "cauchy") return Regulariser::kCauchy;
  if (name == "l1") return Regulariser::kL1;
  if (name == "tv") return Regulariser::kTV;
  throw ConfigError("unknown regulariser '" + name + "' (cauchy, l1, tv)");
}

std::string regulariser_name(Regulariser kind) {
  switch (kind) {
    case Regulariser::kCauchy: return "cauchy";
    case Regulariser::kL1: return "l1";
    case Regulariser::kTV: return "tv";
  }
  return "unknown";
}

double cauchy_penalty(double u, double gamma) {
  return std::log(gamma * gamma + u * u) - std::log(gamma);
}

double cauchy_prox_objective(double u, double x, double gamma, double omega) {
  const double d = u - x;
  return cauchy_penalty(u, gamma) + d * d / (2.0 * omega);
}

double prox_cauchy(double x, double gamma, double omega) {
  if (!(gamma > 0.0) || !(omega > 0.0)) {
    throw ConfigError("prox_cauchy: gamma and omega must be positive");
  }
  if (x == 0.0) return 0.0;

  // Solve for |x| and restore the sign; the objective is odd-symmetric.
  const double ax = std::abs(x);
  const double g2 = gamma * gamma;
  const double b = g2 + 2.0 * omega;
  const double p = b - ax * ax / 3.0;
  const double q = -2.0 * ax * ax * ax / 27.0 + ax * b / 3.0 - ax * g2;
  const double disc = p * p * p / 27.0 + q * q / 4.0;

  double u;
  if (disc >= 0.0) {
    const double r = -0.5 * q;
    const double s = std::cbrt(r + std::copysign(std::sqrt(disc), r));
    const double t = s != 0.0 ? -p / (3.0 * s) : 0.0;
    u = ax / 3.0 + s + t;
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    u = ax;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      const double root = ax / 3.0 + m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
      const double f = cauchy_prox_objective(root, ax, gamma, omega);
      if (f < best) {
        best = f;
        u = root;
      }
    }
  }

  // Newton polish on the cubic; kept only if it lowers the residual.
  const auto residual = [&](double v) { return ((v - ax) * v + b) * v - ax * g2; };
  const double f0 = residual(u);
  const double df = (3.0 * u - 2.0 * ax) * u + b;
  if (df != 0.0) {
    const double polished = u - f0 / df;
    if (std::abs(residual(polished)) < std::abs(f0)) u = polished;
  }
  u = std::clamp(u, 0.0, ax);
  return std::copysign(u, x);
}

double prox_l1(double x, double threshold) {
  const double m = std::abs(x) - threshold;
  return m > 0.0 ? std::copysign(m, x) : 0.0;
}

namespace {

// Forward-difference gradient, zero across the last row/column.
void gradient(const Grid& u, Grid& gx, Grid& gy) {
  const std::size_t w = u.width(), h = u.height();
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      gx(i, j) = i + 1 < w ? u(i + 1, j) - u(i, j) : 0.0;
      gy(i, j) = j + 1 < h ? u(i, j + 1) - u(i, j) : 0.0;
    }
  }
}

// Negative adjoint of gradient.
void divergence(const Grid& px, const Grid& py, Grid& out) {
  const std::size_t w = px.width(), h = px.height();
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      double d = 0.0;
      if (i + 1 < w) d += px(i, j);
      if (i > 0) d -= px(i - 1, j);
      if (j + 1 < h) d += py(i, j);
      if (j > 0) d -= py(i, j - 1);
      out(i, j) = d;
    }
  }
}

double half_squared_distance(const Grid& a, const Grid& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double d = a[n] - b[n];
    s += d * d;
  }
  return 0.5 * s;
}

double norm2(const Grid& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double tv_norm(const Grid& u) {
  Grid gx(u.width(), u.height()), gy(u.width(), u.height());
  gradient(u, gx, gy);
  double s = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) s += std::hypot(gx[n], gy[n]);
  return s;
}

TvProxResult prox_tv(const Grid& g, double weight, std::size_t inner_iter) {
  if (inner_iter < 1) throw ConfigError("prox_tv: inner_iter must be >= 1");
  if (!(weight >= 0.0)) throw ConfigError("prox_tv: weight must be non-negative");
  TvProxResult out;
  if (weight == 0.0) {
    out.value = g;
    return out;
  }
  const std::size_t w = g.width(), h = g.height();
  Grid px(w, h), py(w, h), div(w, h), u(w, h), gx(w, h), gy(w, h);
  constexpr double kStep = 1.0 / 8.0;

  // Dual variable p, |p| <= 1 pointwise; primal u = g - weight div p.
  for (std::size_t it = 0; it < inner_iter; ++it) {
    divergence(px, py, div);
    for (std::size_t n = 0; n < u.size(); ++n) u[n] = div[n] - g[n] / weight;
    gradient(u, gx, gy);
    for (std::size_t n = 0; n < u.size(); ++n) {
      const double ax = px[n] + kStep * gx[n];
      const double ay = py[n] + kStep * gy[n];
      const double mag = std::max(1.0, std::hypot(ax, ay));
      px[n] = ax / mag;
      py[n] = ay / mag;
    }
    divergence(px, py, div);
    double dual = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
      const double r = g[n] - weight * div[n];
      dual += r * r;
    }
    out.dual_objective.push_back(0.5 * dual);
  }
  divergence(px, py, div);
  out.value = Grid(w, h);
  for (std::size_t n = 0; n < g.size(); ++n) out.value[n] = g[n] - weight * div[n];
  return out;
}

double regulariser_penalty(const Grid& phi, const RegulariserSpec& reg, double gamma) {
  switch (reg.kind) {
    case Regulariser::kCauchy: {
      double s = 0.0;
      for (double v : phi.values()) s += cauchy_penalty(v, gamma);
      return s;
    }
    case Regulariser::kL1: {
      double s = 0.0;
      for (double v : phi.values()) s += std::abs(v);
      return reg.params.lambda * s;
    }
    case Regulariser::kTV: return reg.params.lambda * tv_norm(phi);
  }
  return 0.0;
}

FbResult forward_backward(const Grid& noisy, const RegulariserSpec& reg) {
  const ProxParams& prm = reg.params;
  FbResult result;
  FbReport& rep = result.report;

  if (reg.kind == Regulariser::kCauchy) {
    if (!prm.gamma || !(*prm.gamma > 0.0)) {
      throw ConfigError("forward_backward: Cauchy regulariser needs gamma > 0");
    }
    rep.gamma = *prm.gamma;
    const double bound = 4.0 * rep.gamma * rep.gamma;
    if (prm.omega) {
      if (!(*prm.omega > 0.0)) throw ConfigError("forward_backward: omega must be positive");
      rep.omega = *prm.omega;
      if (rep.omega > bound) {
        std::ostringstream msg;
        msg << "forward_backward: omega " << rep.omega << " clamped to 4 gamma^2 = " << bound;
        log_warning(msg.str());
        rep.omega = bound;
        rep.omega_clamped = true;
      }
    } else {
      rep.omega = std::min(1.0, bound);
    }
  } else {
    if (!(prm.lambda >= 0.0)) throw ConfigError("forward_backward: lambda must be >= 0");
    rep.omega = prm.omega.value_or(1.0);
    if (!(rep.omega > 0.0)) throw ConfigError("forward_backward: omega must be positive");
  }
  if (rep.omega >= 2.0) throw ConfigError("forward_backward: omega must be < 2");
  if (reg.kind == Regulariser::kTV && prm.tv_inner_iter < 1) {
    throw ConfigError("forward_backward: tv_inner_iter must be >= 1");
  }

  const double omega = rep.omega;
  auto objective = [&](const Grid& phi) {
    return half_squared_distance(noisy, phi) + regulariser_penalty(phi, reg, rep.gamma);
  };

  Grid phi = noisy;
  Grid next(noisy.width(), noisy.height());
  rep.objective.push_back(objective(phi));
  rep.fidelity.push_back(0.0);
  if (!std::isfinite(rep.objective.back())) {
    throw NumericalError("forward_backward: non-finite input plane");
  }
  std::size_t rising = 0;

  for (std::size_t it = 0; it < prm.max_iter; ++it) {
    for (std::size_t n = 0; n < phi.size(); ++n) next[n] = phi[n] - omega * (phi[n] - noisy[n]);
    switch (reg.kind) {
      case Regulariser::kCauchy:
        for (double& v : next.values()) v = prox_cauchy(v, rep.gamma, omega);
        break;
      case Regulariser::kL1:
        for (double& v : next.values()) v = prox_l1(v, omega * prm.lambda);
        break;
      case Regulariser::kTV:
        next = prox_tv(next, omega * prm.lambda, prm.tv_inner_iter).value;
        break;
    }
    double diff = 0.0;
    for (std::size_t n = 0; n < phi.size(); ++n) {
      const double d = next[n] - phi[n];
      diff += d * d;
    }
    diff = std::sqrt(diff);
    const double ref = norm2(phi);
    rep.final_change = ref > 0.0 ? diff / ref : (diff > 0.0 ? 1.0 : 0.0);
    rep.iterations = it + 1;
    if (rep.final_change < prm.tol) {
      rep.converged = true;
      break;
    }
    std::swap(phi, next);
    rep.objective.push_back(objective(phi));
    rep.fidelity.push_back(2.0 * half_squared_distance(noisy, phi));
    if (!std::isfinite(rep.objective.back())) {
      throw NumericalError("forward_backward: objective became non-finite at iteration " +
                           std::to_string(it + 1));
    }
    const std::size_t m = rep.objective.size();
    rising = rep.objective[m - 1] > rep.objective[m - 2] ? rising + 1 : 0;
    if (rising >= 10) rep.divergence_warning = true;
  }
  if (rep.divergence_warning) {
    log_warning("forward_backward: objective increased for 10 consecutive iterations");
  }
  result.estimate = std::move(phi);
  return result;
}

}  // namespace sarsim
