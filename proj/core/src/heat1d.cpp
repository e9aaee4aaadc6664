#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rsbounds/error.hpp"
#include "rsbounds/models.hpp"

namespace rsbounds {

namespace {

// Thomas algorithm; lower[0] and upper[n-1] are ignored.
void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                       const std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("heat1d: zero pivot in tridiagonal solve");
  c[0] = upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("heat1d: zero pivot in tridiagonal solve");
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

}  // namespace

std::vector<double> heat1d_profile(double z1, double z2, double t_final, const HeatParams& p) {
  if (p.n_x < 2) throw PreconditionError("heat1d: n_x must be >= 2");
  if (p.n_t < 1) throw PreconditionError("heat1d: n_t must be >= 1");
  if (!(p.length > 0.0)) throw PreconditionError("heat1d: length must be positive");
  if (t_final < 0.0) throw PreconditionError("heat1d: t_final must be >= 0");
  const double capacity = p.capacity_scale * z2;
  if (!(capacity > 0.0)) {
    std::ostringstream os;
    os << "heat1d: heat capacity must be positive (z2=" << z2 << ")";
    throw PhysicalValidityError(os.str());
  }

  const auto n = static_cast<std::size_t>(p.n_x);
  const double dx = p.length / static_cast<double>(n);
  std::vector<double> u(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = dx * static_cast<double>(i);
    u[i] = p.initial ? p.initial(x) : p.u0;
  }
  if (t_final == 0.0) return u;

  const double dt = t_final / static_cast<double>(p.n_t);
  const double flux_source = 2.0 * dt * p.q / (capacity * dx);
  std::vector<double> lower(n + 1), diag(n + 1), upper(n + 1);

  for (int step = 0; step < p.n_t; ++step) {
    for (std::size_t i = 0; i <= n; ++i) {
      const double k = z1 + p.conductivity_slope * u[i];
      if (!(k > 0.0)) {
        std::ostringstream os;
        os << "heat1d: conductivity " << k << " is not positive at x=" << dx * static_cast<double>(i)
           << ", t=" << dt * step << " (z1=" << z1 << ", z2=" << z2 << ")";
        throw PhysicalValidityError(os.str());
      }
      const double r = dt * k / (capacity * dx * dx);
      diag[i] = 1.0 + 2.0 * r;
      if (i == 0) {
        // Ghost node u_{-1} = u_1 + 2 dx q / k(u_0).
        upper[i] = -2.0 * r;
        lower[i] = 0.0;
      } else if (i == n) {
        // Ghost node u_{n+1} = u_{n-1}.
        lower[i] = -2.0 * r;
        upper[i] = 0.0;
      } else {
        lower[i] = -r;
        upper[i] = -r;
      }
    }
    u[0] += flux_source;
    solve_tridiagonal(lower, diag, upper, u);
    for (double v : u) {
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "heat1d: non-finite temperature at t=" << dt * (step + 1) << " (z1=" << z1 << ", z2=" << z2 << ")";
        throw NumericalError(os.str());
      }
    }
  }
  return u;
}

double heat1d_solution(double z1, double z2, const HeatQuery& query, const HeatParams& p) {
  if (!(query.x_star >= 0.0 && query.x_star <= p.length))
    throw PreconditionError("heat1d: x_star outside [0, L]");
  const std::vector<double> u = heat1d_profile(z1, z2, query.t_final, p);
  const double dx = p.length / static_cast<double>(p.n_x);
  const double s = query.x_star / dx;
  const auto i = std::min(static_cast<std::size_t>(s), static_cast<std::size_t>(p.n_x - 1));
  const double frac = s - static_cast<double>(i);
  return (1.0 - frac) * u[i] + frac * u[i + 1];
}

}  // namespace rsbounds
