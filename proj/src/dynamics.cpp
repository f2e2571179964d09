#include "soc/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "soc/errors.hpp"

namespace soc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

VehicleModel model_from_name(const std::string& name) {
  if (name == "integrator" || name == "integrator-test") return VehicleModel::integrator;
  if (name == "dubins") return VehicleModel::dubins;
  if (name == "bicycle") return VehicleModel::bicycle;
  throw validation_error("dynamics: unknown model '" + name + "'");
}

std::string model_name(VehicleModel m) {
  switch (m) {
    case VehicleModel::integrator: return "integrator";
    case VehicleModel::dubins: return "dubins";
    case VehicleModel::bicycle: return "bicycle";
  }
  return "?";
}

std::size_t model_state_dim(VehicleModel m, std::size_t integrator_dim) {
  switch (m) {
    case VehicleModel::integrator: return integrator_dim;
    case VehicleModel::dubins: return 3;
    case VehicleModel::bicycle: return 4;
  }
  return 0;
}

std::size_t model_input_dim(VehicleModel m, std::size_t integrator_dim) {
  switch (m) {
    case VehicleModel::integrator: return integrator_dim;
    case VehicleModel::dubins: return 2;
    case VehicleModel::bicycle: return 2;
  }
  return 0;
}

std::optional<std::size_t> model_angle_dim(VehicleModel m) {
  switch (m) {
    case VehicleModel::integrator: return std::nullopt;
    case VehicleModel::dubins: return 2;
    case VehicleModel::bicycle: return 2;
  }
  return std::nullopt;
}

void SampledDynamics::validate() const {
  if (!(tau > 0)) throw validation_error("dynamics: tau must be positive");
  if (state_dim == 0 || state_dim > kMaxDim) throw validation_error("dynamics: bad state_dim");
  if (state_dim != model_state_dim(model, state_dim))
    throw validation_error("dynamics: state_dim does not match model");
  input_bounds.validate("dynamics input_bounds");
  if (input_bounds.dim() != model_input_dim(model, state_dim))
    throw validation_error("dynamics: input_bounds dimension does not match model");
  disturbance.validate("dynamics disturbance", /*thin=*/true);
  if (disturbance.dim() != state_dim)
    throw validation_error("dynamics: disturbance dimension does not match state");
  Vec zero(state_dim, 0.0);
  if (!disturbance.contains(zero))
    throw validation_error("dynamics: disturbance box must contain the zero vector");
  if (jacobian_bound.size() != state_dim)
    throw validation_error("dynamics: jacobian_bound must be state_dim x state_dim");
  for (std::size_t i = 0; i < state_dim; ++i) {
    if (jacobian_bound[i].size() != state_dim)
      throw validation_error("dynamics: jacobian_bound must be state_dim x state_dim");
    for (std::size_t j = 0; j < state_dim; ++j)
      if (i != j && jacobian_bound[i][j] < 0)
        throw validation_error("dynamics: off-diagonal jacobian_bound entries must be >= 0");
  }
  if (substeps < 1) throw validation_error("dynamics: substeps must be >= 1");
}

void vector_field(VehicleModel model, std::span<const double> x, std::span<const double> u,
                  std::span<double> out) {
  switch (model) {
    case VehicleModel::integrator:
      for (std::size_t d = 0; d < x.size(); ++d) out[d] = u[d];
      return;
    case VehicleModel::dubins:
      out[0] = u[0] * std::cos(x[2]);
      out[1] = u[0] * std::sin(x[2]);
      out[2] = u[1];
      return;
    case VehicleModel::bicycle: {
      const double alpha = std::atan(std::tan(u[1]) / 2.0);
      const double beta = 1.0 / std::cos(alpha);
      out[0] = x[3] * std::cos(alpha + x[2]) * beta;
      out[1] = x[3] * std::sin(alpha + x[2]) * beta;
      out[2] = x[3] * std::tan(u[1]);
      out[3] = u[0];
      return;
    }
  }
}

void step(const SampledDynamics& dyn, std::span<const double> x, std::span<const double> u,
          std::span<const double> w, std::span<double> out) {
  const std::size_t n = dyn.state_dim;
  const int nsub = std::max(dyn.substeps, 10);
  const double h = dyn.tau / nsub;
  std::array<double, kMaxDim> y{}, k1{}, k2{}, k3{}, k4{}, tmp{};
  std::copy(x.begin(), x.end(), y.begin());
  auto rhs = [&](const std::array<double, kMaxDim>& in, std::array<double, kMaxDim>& k) {
    vector_field(dyn.model, std::span<const double>(in.data(), n), u,
                 std::span<double>(k.data(), n));
    for (std::size_t d = 0; d < n; ++d) k[d] += w[d];
  };
  for (int s = 0; s < nsub; ++s) {
    rhs(y, k1);
    for (std::size_t d = 0; d < n; ++d) tmp[d] = y[d] + 0.5 * h * k1[d];
    rhs(tmp, k2);
    for (std::size_t d = 0; d < n; ++d) tmp[d] = y[d] + 0.5 * h * k2[d];
    rhs(tmp, k3);
    for (std::size_t d = 0; d < n; ++d) tmp[d] = y[d] + h * k3[d];
    rhs(tmp, k4);
    for (std::size_t d = 0; d < n; ++d)
      y[d] += (h / 6.0) * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
  }
  if (auto ad = model_angle_dim(dyn.model)) {
    double a = y[*ad] - kTwoPi * std::floor(y[*ad] / kTwoPi);
    if (a >= kTwoPi) a -= kTwoPi;
    if (a < 0) a += kTwoPi;
    y[*ad] = a;
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (!std::isfinite(y[d])) throw numerical_error("step: non-finite state after integration");
    out[d] = y[d];
  }
}

Vec step(const SampledDynamics& dyn, const Vec& x, const Vec& u, const Vec& w) {
  Vec out(dyn.state_dim);
  step(dyn, x, u, w, out);
  return out;
}

namespace {

/* exp(L t) and int_0^t exp(L s) ds by truncated series on a scaled
 * interval, then squared up:  E(2t) = E(t)^2,  D(2t) = (I + E(t)) D(t). */
void exp_and_integral(const std::vector<Vec>& L, double t, std::vector<Vec>& E,
                      std::vector<Vec>& D) {
  const std::size_t n = L.size();
  double norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(L[i][j]) * t;
    norm = std::max(norm, row);
  }
  int squarings = 0;
  double ts = t;
  while (norm > 0.5) {
    norm /= 2;
    ts /= 2;
    ++squarings;
  }

  auto matmul = [n](const std::vector<Vec>& A, const std::vector<Vec>& B) {
    std::vector<Vec> C(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const double a = A[i][k];
        if (a == 0) continue;
        for (std::size_t j = 0; j < n; ++j) C[i][j] += a * B[k][j];
      }
    return C;
  };

  std::vector<Vec> ident(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) ident[i][i] = 1.0;

  // E = sum_k (L ts)^k / k!,  D = sum_k L^k ts^{k+1} / (k+1)!
  E = ident;
  D = ident;
  for (auto& row : D)
    for (auto& v : row) v *= ts;
  std::vector<Vec> term = ident;
  for (int k = 1; k <= 64; ++k) {
    term = matmul(term, L);
    double scale = ts / k;
    double mag = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        term[i][j] *= scale;
        mag = std::max(mag, std::abs(term[i][j]));
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        E[i][j] += term[i][j];
        D[i][j] += term[i][j] * ts / (k + 1);
      }
    if (mag < 1e-300 || mag < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) {
    std::vector<Vec> IE = E;
    for (std::size_t i = 0; i < n; ++i) IE[i][i] += 1.0;
    D = matmul(IE, D);
    E = matmul(E, E);
  }
}

}  // namespace

void growth_radius(const SampledDynamics& dyn, std::span<const double> r0, double tau,
                   std::span<double> out) {
  const std::size_t n = dyn.state_dim;
  std::vector<Vec> E, D;
  exp_and_integral(dyn.jacobian_bound, tau, E, D);
  Vec wbar(n);
  for (std::size_t d = 0; d < n; ++d)
    wbar[d] = std::max(std::abs(dyn.disturbance.lower[d]), std::abs(dyn.disturbance.upper[d]));
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0;
    for (std::size_t j = 0; j < n; ++j) v += E[i][j] * r0[j] + D[i][j] * wbar[j];
    out[i] = v;
  }
}

Vec growth_radius(const SampledDynamics& dyn, const Vec& r0, double tau) {
  Vec out(dyn.state_dim);
  growth_radius(dyn, r0, tau, out);
  return out;
}

Vec growth_radius_for_input(const SampledDynamics& dyn, const Vec& r0, double tau,
                            std::span<const double> u) {
  if (!dyn.per_input_growth || dyn.model == VehicleModel::integrator)
    return growth_radius(dyn, r0, tau);
  SampledDynamics tight = dyn;
  Box ub = dyn.input_bounds;
  switch (dyn.model) {
    case VehicleModel::dubins:
      ub.lower[0] = ub.upper[0] = u[0];  // coupling scales with |u1|
      break;
    case VehicleModel::bicycle:
      ub.lower[1] = ub.upper[1] = u[1];  // beta and tan scale with |u2|
      break;
    case VehicleModel::integrator:
      break;
  }
  // recover the speed range from the configured bound: L[0][2] = v*beta,
  // L[0][3] = beta
  double speed_max = 0;
  if (dyn.model == VehicleModel::bicycle && dyn.jacobian_bound[0][3] > 0)
    speed_max = dyn.jacobian_bound[0][2] / dyn.jacobian_bound[0][3];
  tight.jacobian_bound = default_jacobian_bound(dyn.model, ub, speed_max, dyn.state_dim);
  // never exceed the configured bound: the refinement only tightens
  for (std::size_t i = 0; i < dyn.state_dim; ++i)
    for (std::size_t j = 0; j < dyn.state_dim; ++j)
      tight.jacobian_bound[i][j] = std::min(tight.jacobian_bound[i][j], dyn.jacobian_bound[i][j]);
  return growth_radius(tight, r0, tau);
}

std::vector<Vec> default_jacobian_bound(VehicleModel model, const Box& input_bounds,
                                        double speed_max, std::size_t integrator_dim) {
  switch (model) {
    case VehicleModel::integrator:
      return std::vector<Vec>(integrator_dim, Vec(integrator_dim, 0.0));
    case VehicleModel::dubins: {
      // |df1/dx3| = |u1 sin x3| <= u1_max, likewise df2/dx3
      const double u1max = std::max(std::abs(input_bounds.lower[0]), std::abs(input_bounds.upper[0]));
      std::vector<Vec> L(3, Vec(3, 0.0));
      L[0][2] = u1max;
      L[1][2] = u1max;
      return L;
    }
    case VehicleModel::bicycle: {
      // alpha = arctan(tan(u2)/2), beta = 1/cos(alpha); extremal at |u2| max
      const double u2max = std::max(std::abs(input_bounds.lower[1]), std::abs(input_bounds.upper[1]));
      const double tmax = std::abs(std::tan(u2max));
      const double beta_max = 1.0 / std::cos(std::atan(tmax / 2.0));
      const double v = std::abs(speed_max);
      std::vector<Vec> L(4, Vec(4, 0.0));
      L[0][2] = v * beta_max;   // |df1/dx3| = |x4 sin(a+x3) beta|
      L[0][3] = beta_max;       // |df1/dx4| = |cos(a+x3) beta|
      L[1][2] = v * beta_max;
      L[1][3] = beta_max;
      L[2][3] = tmax;           // |df3/dx4| = |tan u2|
      return L;
    }
  }
  return {};
}

DisturbancePolicy::Mode disturbance_mode_from_name(const std::string& name) {
  if (name == "none") return DisturbancePolicy::Mode::none;
  if (name == "uniform-random" || name == "uniform") return DisturbancePolicy::Mode::uniform_random;
  if (name == "corner-adversarial" || name == "corner") return DisturbancePolicy::Mode::corner_adversarial;
  throw validation_error("disturbance: unknown mode '" + name + "'");
}

Vec DisturbanceSampler::next() {
  const std::size_t n = box_.dim();
  Vec w(n, 0.0);
  switch (mode_) {
    case DisturbancePolicy::Mode::none:
      break;
    case DisturbancePolicy::Mode::uniform_random:
      for (std::size_t d = 0; d < n; ++d) w[d] = rng_.next_in(box_.lower[d], box_.upper[d]);
      break;
    case DisturbancePolicy::Mode::corner_adversarial:
      for (std::size_t d = 0; d < n; ++d) w[d] = rng_.next_bool() ? box_.upper[d] : box_.lower[d];
      break;
  }
  return w;
}

}  // namespace soc
