#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace rsbounds {

// ---------------------------------------------------------------------------
// Output functionals h applied to the model state u.

struct IdentityOutput {};
struct SquareOutput {};

// 1{lower <= u <= upper}; either bound may be infinite. Both ends closed.
struct IndicatorOutput {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

using OutputFunctional = std::variant<IdentityOutput, SquareOutput, IndicatorOutput>;

double apply_output(const OutputFunctional& h, double u);
bool is_smooth(const OutputFunctional& h) noexcept;
std::string describe(const OutputFunctional& h);

// ---------------------------------------------------------------------------
// Example systems. All solution routines are pure functions of their inputs.

struct AffineMap {
  double scale = 1.0;
  double shift = 0.0;
  double operator()(double z) const noexcept { return scale * z + shift; }
};

// du/dt = -k(z1) u,  u(0) = g(z2).
struct DecayParams {
  double t = 1.0;
  AffineMap k;
  AffineMap g;
};

double decay_solution(double z1, double z2, double t, const AffineMap& k,
                      const AffineMap& g);

// u'' + (damping_scale z2) u' + (spring_scale z1) u
//     = amplitude cos(frequency t) + offset,
// u(0) = u0, u'(0) = v0, integrated with fixed-step classical RK4.
struct OscillatorParams {
  double spring_scale = 4.0;
  double damping_scale = 0.2;
  double amplitude = 10.0;
  double frequency = 10.0;
  double offset = 3.0;
  double u0 = 0.0;
  double v0 = 0.0;
  double t_critical = 4.0;
  double step = 1e-3;
};

double oscillator_solution(double z1, double z2, double t_critical,
                           const OscillatorParams& params);

// du/dt = k(u; z1) / m(z2) d2u/dx2 on (0, L), with
//   k(u; z1) = z1 + conductivity_slope * u,  m(z2) = capacity_scale * z2,
//   -k du/dx(t, 0) = q,  du/dx(t, L) = 0,  u(0, x) = initial(x).
// Method of lines on n_x uniform cells (n_x + 1 nodes), ghost nodes for both
// Neumann conditions, backward Euler with conductivity lagged one step.
struct HeatParams {
  double conductivity_slope = 1.5e-7;
  double capacity_scale = 1e-6;
  double q = 0.35;
  double length = 1.90;
  double u0 = 25.0;
  // Overrides the uniform u0 when set.
  std::function<double(double)> initial;
  double t_final = 1000.0;
  double x_star = 0.0;
  int n_x = 192;
  int n_t = 2000;
};

struct HeatQuery {
  double t_final;
  double x_star;
};

double heat1d_solution(double z1, double z2, const HeatQuery& query,
                       const HeatParams& params);

// Full nodal profile u(t_final, x_i), i = 0..n_x. Exposed for diagnostics
// and conservation checks.
std::vector<double> heat1d_profile(double z1, double z2, double t_final,
                                   const HeatParams& params);

// ---------------------------------------------------------------------------

struct AnalyticModel {
  std::function<double(double, double)> state;
  std::string name = "analytic";
};

using ModelKind = std::variant<DecayParams, OscillatorParams, HeatParams, AnalyticModel>;

// A deterministic map (z1, z2) -> u composed with an output functional h.
class Model {
 public:
  Model(ModelKind kind, OutputFunctional output);

  // u(z1, z2) before the output functional.
  double state(double z1, double z2) const;
  // F(z1, z2) = h(u(z1, z2)).
  double operator()(double z1, double z2) const { return apply_output(output_, state(z1, z2)); }

  const ModelKind& kind() const noexcept { return kind_; }
  const OutputFunctional& output() const noexcept { return output_; }
  Model with_output(OutputFunctional output) const { return Model(kind_, std::move(output)); }
  std::string name() const;

 private:
  ModelKind kind_;
  OutputFunctional output_;
};

}  // namespace rsbounds
