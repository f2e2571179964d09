#pragma once

#include <optional>
#include <span>
#include <string>

#include "soc/grid.hpp"
#include "soc/rng.hpp"

namespace soc {

inline constexpr std::size_t kMaxDim = 8;

enum class VehicleModel { integrator, dubins, bicycle };

VehicleModel model_from_name(const std::string& name);
std::string model_name(VehicleModel m);
std::size_t model_state_dim(VehicleModel m, std::size_t integrator_dim = 1);
std::size_t model_input_dim(VehicleModel m, std::size_t integrator_dim = 1);
/* index of the heading coordinate, if the model has one */
std::optional<std::size_t> model_angle_dim(VehicleModel m);

/* Continuous-time plant sampled with period tau. The disturbance box W
 * enters additively; jacobian_bound is the componentwise bound matrix L
 * used by the growth bound (configuration, not ground truth). */
struct SampledDynamics {
  VehicleModel model = VehicleModel::integrator;
  std::size_t state_dim = 1;
  std::size_t input_dim = 1;
  double tau = 0.1;
  Box input_bounds;
  Box disturbance;  // must contain the zero vector
  std::vector<Vec> jacobian_bound;
  /* tighten L per input during abstraction (dubins/bicycle); cleared when
   * the user supplies an explicit jacobian_bound */
  bool per_input_growth = true;
  int substeps = 10;

  void validate() const;
};

/* right-hand side f(x,u) of the undisturbed plant */
void vector_field(VehicleModel model, std::span<const double> x, std::span<const double> u,
                  std::span<double> out);

/* State after integrating f(x,u)+w over [0,tau], classical RK4 with
 * dynamics.substeps substeps and w held constant (the simulator's
 * disturbance signal class is piecewise constant per sampling interval).
 * Heading is wrapped into [0,2pi). Throws numerical_error on a
 * non-finite result. */
void step(const SampledDynamics& dyn, std::span<const double> x, std::span<const double> u,
          std::span<const double> w, std::span<double> out);
Vec step(const SampledDynamics& dyn, const Vec& x, const Vec& u, const Vec& w);

/* Componentwise deviation bound after time tau:
 *   r(tau) = exp(L tau) r0 + int_0^tau exp(L s) ds * wbar,
 * wbar[d] = max(|W.lower[d]|, |W.upper[d]|). Series evaluation with
 * scaling and squaring. Monotone in r0 and in the disturbance widths. */
void growth_radius(const SampledDynamics& dyn, std::span<const double> r0, double tau,
                   std::span<double> out);
Vec growth_radius(const SampledDynamics& dyn, const Vec& r0, double tau);

/* Input-refined variant: when per_input_growth is set, the L matrix is
 * re-derived for the given input (a speed of |u1| couples far less than
 * the box-wide maximum); otherwise identical to the plain form. */
Vec growth_radius_for_input(const SampledDynamics& dyn, const Vec& r0, double tau,
                            std::span<const double> u);

/* Default L matrices, obtained by bounding |df_i/dx_j| over the input box
 * and, for the bicycle, the given speed range. */
std::vector<Vec> default_jacobian_bound(VehicleModel model, const Box& input_bounds,
                                        double speed_max = 0.0, std::size_t integrator_dim = 1);

/* Concrete disturbance signals for simulation: one draw per sampling
 * interval, held constant over the interval. */
struct DisturbancePolicy {
  enum class Mode { none, uniform_random, corner_adversarial };
  Mode mode = Mode::none;
  std::uint64_t seed = 0;
};

DisturbancePolicy::Mode disturbance_mode_from_name(const std::string& name);

class DisturbanceSampler {
 public:
  DisturbanceSampler(const DisturbancePolicy& policy, const Box& w_box)
      : mode_(policy.mode), rng_(policy.seed), box_(w_box) {}

  Vec next();

 private:
  DisturbancePolicy::Mode mode_;
  SplitMix64 rng_;
  Box box_;
};

}  // namespace soc
