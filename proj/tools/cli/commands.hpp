#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "rsbounds/riskbounds.hpp"

namespace rsbounds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr const char* kVersion = "0.1.0";

struct GridOverrides {
  std::optional<double> c_min;
  std::optional<double> c_max;
  std::optional<std::size_t> c_points;
};

struct SurrogateFiles {
  std::optional<std::string> save;
  std::optional<std::string> load;
};

// The first line of every CSV the tool writes, without the leading "# ".
std::string provenance_comment(const ExperimentConfig& cfg);

std::vector<double> resolve_c_grid(const ExperimentConfig& cfg, const GridOverrides& overrides);

// F as seen by the risk integrals: the surrogate (or the exact model when the
// surrogate is disabled), with the dependent-case transform folded in.
RiskFunction build_risk_function(const ExperimentConfig& cfg, const SurrogateFiles& files = {});

RiskConfig build_risk_config(const ExperimentConfig& cfg, RiskFunction f, std::vector<double> c_grid);

// Explicit B, or R(alternative || epistemic nominal). Empty when the config
// gives neither.
std::optional<double> resolve_B(const ExperimentConfig& cfg);

// Parses argv and dispatches to a subcommand. Returns the process exit code;
// never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rsbounds::cli
