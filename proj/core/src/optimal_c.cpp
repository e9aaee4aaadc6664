#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsbounds/error.hpp"
#include "rsbounds/numeric.hpp"
#include "rsbounds/riskbounds.hpp"

namespace rsbounds {

namespace {

constexpr int kMaxExtensions = 80;

struct Probe {
  double c;
  double lambda;
  double objective;
};

class Objective {
 public:
  Objective(const std::function<double(double)>& lambda, double B) : lambda_(lambda), B_(B) {}

  Probe operator()(double c) {
    const double l = lambda_(c);
    if (!std::isfinite(l)) {
      std::ostringstream os;
      os << "lambda is not finite at c=" << c << "; largest finite c probed is " << largest_finite_;
      throw ParameterDomainError(os.str());
    }
    largest_finite_ = std::max(largest_finite_, c);
    ++evaluations_;
    return {c, l, B_ / c + l};
  }

  int evaluations() const noexcept { return evaluations_; }

 private:
  const std::function<double(double)>& lambda_;
  double B_;
  double largest_finite_ = 0.0;
  int evaluations_ = 0;
};

}  // namespace

bool OptimalC::finite() const noexcept { return std::isfinite(c_star); }

OptimalC minimize_bound(const std::function<double(double)>& lambda, double B, const std::vector<double>& c_grid,
                        double tol) {
  if (!(B >= 0.0) || !std::isfinite(B)) throw PreconditionError("minimize_bound: B must be finite and >= 0");
  if (!(tol > 0.0)) throw PreconditionError("minimize_bound: tol must be positive");
  std::vector<double> grid = c_grid.empty() ? default_c_grid() : c_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double c : grid) {
    if (!(c > 0.0) || !std::isfinite(c)) throw PreconditionError("minimize_bound: c grid must be positive and finite");
  }

  Objective objective(lambda, B);
  std::vector<Probe> probes;
  probes.reserve(grid.size());
  for (double c : grid) probes.push_back(objective(c));

  OptimalC result;
  if (B == 0.0) {
    // The objective is lambda itself, nondecreasing in c: the infimum sits at
    // the smallest probed c.
    const auto best = std::min_element(probes.begin(), probes.end(),
                                       [](const Probe& a, const Probe& b) { return a.objective < b.objective; });
    result.c_star = best->c;
    result.bound_value = best->objective;
    result.iterations = objective.evaluations();
    result.converged = true;
    return result;
  }

  auto argmin = static_cast<std::size_t>(
      std::min_element(probes.begin(), probes.end(),
                       [](const Probe& a, const Probe& b) { return a.objective < b.objective; }) -
      probes.begin());

  // Extend below the grid by halving.
  if (argmin == 0) {
    for (int k = 0; k < kMaxExtensions; ++k) {
      const Probe p = objective(probes.front().c / 2.0);
      probes.insert(probes.begin(), p);
      if (p.objective >= probes[1].objective) break;
    }
    argmin = static_cast<std::size_t>(
        std::min_element(probes.begin(), probes.end(),
                         [](const Probe& a, const Probe& b) { return a.objective < b.objective; }) -
        probes.begin());
  }

  // Extend above the grid by doubling, watching for the c -> infinity plateau.
  if (argmin + 1 == probes.size()) {
    bool bracketed = false;
    for (int k = 0; k < kMaxExtensions; ++k) {
      const Probe& prev = probes.back();
      const Probe p = objective(prev.c * 2.0);
      if (p.objective >= prev.objective) {
        probes.push_back(p);
        bracketed = true;
        break;
      }
      const bool plateau = std::abs(p.objective - prev.objective) < tol && std::abs(p.lambda - prev.lambda) < tol;
      probes.push_back(p);
      if (plateau) {
        result.c_star = std::numeric_limits<double>::infinity();
        result.bound_value = p.lambda;
        result.iterations = objective.evaluations();
        result.converged = true;
        return result;
      }
    }
    if (!bracketed) {
      result.c_star = std::numeric_limits<double>::infinity();
      result.bound_value = probes.back().lambda;
      result.iterations = objective.evaluations();
      result.converged = false;
      return result;
    }
    argmin = probes.size() - 2;
  }

  const std::size_t lo_idx = argmin > 0 ? argmin - 1 : 0;
  const std::size_t hi_idx = std::min(argmin + 1, probes.size() - 1);
  const Probe best_probe = probes[argmin];
  const GoldenResult g = golden_section_minimize([&](double t) { return objective(std::exp(t)).objective; },
                                                 std::log(probes[lo_idx].c), std::log(probes[hi_idx].c), tol);
  if (g.fx <= best_probe.objective) {
    result.c_star = std::exp(g.x);
    result.bound_value = g.fx;
  } else {
    result.c_star = best_probe.c;
    result.bound_value = best_probe.objective;
  }
  result.iterations = objective.evaluations();
  result.converged = g.converged;
  return result;
}

OptimalC optimal_c(const RiskConfig& cfg, RiskForm which, double B, double tol) {
  return minimize_bound([&](double c) { return lambda_form(cfg, which, c); }, B, cfg.c_grid(), tol);
}

}  // namespace rsbounds
