#include "rsbounds/models.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "rsbounds/error.hpp"

namespace rsbounds {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double apply_output(const OutputFunctional& h, double u) {
  return std::visit(Overloaded{
                        [&](const IdentityOutput&) { return u; },
                        [&](const SquareOutput&) { return u * u; },
                        [&](const IndicatorOutput& ind) { return (u >= ind.lower && u <= ind.upper) ? 1.0 : 0.0; },
                    },
                    h);
}

bool is_smooth(const OutputFunctional& h) noexcept { return !std::holds_alternative<IndicatorOutput>(h); }

std::string describe(const OutputFunctional& h) {
  return std::visit(Overloaded{
                        [](const IdentityOutput&) { return std::string("u"); },
                        [](const SquareOutput&) { return std::string("u^2"); },
                        [](const IndicatorOutput& ind) {
                          std::ostringstream os;
                          os << "1{" << ind.lower << " <= u <= " << ind.upper << "}";
                          return os.str();
                        },
                    },
                    h);
}

double decay_solution(double z1, double z2, double t, const AffineMap& k, const AffineMap& g) {
  if (t < 0.0) throw PreconditionError("decay_solution: t must be >= 0");
  return g(z2) * std::exp(-k(z1) * t);
}

double oscillator_solution(double z1, double z2, double t_critical, const OscillatorParams& p) {
  if (t_critical < 0.0) throw PreconditionError("oscillator_solution: t_critical must be >= 0");
  if (!(p.step > 0.0)) throw PreconditionError("oscillator_solution: step must be positive");
  const double k = p.spring_scale * z1;
  const double damping = p.damping_scale * z2;
  if (damping < 0.0) throw PreconditionError("oscillator_solution: damping must be >= 0");

  using State = std::array<double, 2>;
  auto rhs = [&](double t, const State& y) -> State {
    const double force = p.amplitude * std::cos(p.frequency * t) + p.offset;
    return {y[1], force - damping * y[1] - k * y[0]};
  };

  const auto n = static_cast<long>(std::ceil(t_critical / p.step - 1e-9));
  State y{p.u0, p.v0};
  if (n <= 0) return y[0];
  const double h = t_critical / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const State k3 = rhs(t + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const State k4 = rhs(t + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      std::ostringstream os;
      os << "oscillator_solution: non-finite state at (z1=" << z1 << ", z2=" << z2 << ", t=" << t + h << ")";
      throw NumericalError(os.str());
    }
  }
  return y[0];
}

Model::Model(ModelKind kind, OutputFunctional output) : kind_(std::move(kind)), output_(std::move(output)) {
  if (const auto* ind = std::get_if<IndicatorOutput>(&output_)) {
    if (!(ind->lower <= ind->upper)) throw ParameterDomainError("indicator output requires lower <= upper");
  }
  if (const auto* a = std::get_if<AnalyticModel>(&kind_)) {
    if (!a->state) throw PreconditionError("analytic model requires a state function");
  }
}

double Model::state(double z1, double z2) const {
  return std::visit(Overloaded{
                        [&](const DecayParams& p) { return decay_solution(z1, z2, p.t, p.k, p.g); },
                        [&](const OscillatorParams& p) { return oscillator_solution(z1, z2, p.t_critical, p); },
                        [&](const HeatParams& p) { return heat1d_solution(z1, z2, {p.t_final, p.x_star}, p); },
                        [&](const AnalyticModel& a) { return a.state(z1, z2); },
                    },
                    kind_);
}

std::string Model::name() const {
  const std::string base = std::visit(Overloaded{
                                          [](const DecayParams&) { return std::string("decay"); },
                                          [](const OscillatorParams&) { return std::string("oscillator"); },
                                          [](const HeatParams&) { return std::string("heat1d"); },
                                          [](const AnalyticModel& a) { return a.name; },
                                      },
                                      kind_);
  return base + " / h = " + describe(output_);
}

}  // namespace rsbounds
