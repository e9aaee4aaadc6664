#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsbounds/distributions.hpp"
#include "rsbounds/models.hpp"
#include "rsbounds/riskbounds.hpp"
#include "rsbounds/surrogate.hpp"

namespace rsbounds::cli {

struct CGridSpec {
  double min = 0.01;
  double max = 1000.0;
  std::size_t points = 200;
};

struct SurrogateSpec {
  bool enabled = true;
  std::array<std::size_t, 2> orders{0, 0};  // 0: default for the output functional
  std::optional<SurrogateTarget> target;
};

// Z1 = Z + Z2 with Z drawn from `base`, independent of Z2.
struct ShiftTransform {
  Distribution base;
};

struct BSpec {
  std::optional<double> value;
  std::optional<Distribution> alternative;
};

struct SurrogateReportSpec {
  std::vector<std::size_t> orders{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  ActiveDimensions dimensions = ActiveDimensions::Both;
  std::optional<ReferenceMoments> reference;
  std::size_t reference_order = 64;
};

struct MonteCarloSpec {
  std::size_t n_outer = 10000;
  std::size_t n_inner = 100;
};

struct OutputPaths {
  std::optional<std::string> csv;
  std::optional<std::string> report;
};

struct ExperimentConfig {
  std::string source_path;
  std::uint64_t hash = 0;  // FNV-1a of the raw file bytes

  ModelKind model;
  OutputFunctional output;
  std::optional<Distribution> aleatoric;
  Distribution epistemic;
  std::optional<ShiftTransform> transform;
  SurrogateSpec surrogate;
  std::array<std::size_t, 2> risk_orders{kDefaultRiskOrder, kDefaultRiskOrder};
  CGridSpec c_grid;
  BSpec B;
  SurrogateReportSpec surrogate_report;
  std::optional<MonteCarloSpec> monte_carlo;
  OutputPaths outputs;

  // Law of the variable integrated by the aleatoric rule: the base law when a
  // transform is present, otherwise the Z1 law.
  const Distribution& aleatoric_rule_law() const;
};

std::uint64_t fnv1a64(const std::string& bytes) noexcept;
std::string hash_hex(std::uint64_t h);

// Throws ConfigError with `path:line: message`.
ExperimentConfig parse_config(const std::string& text, const std::string& source_path);
ExperimentConfig load_config(const std::string& path);

// Distribution from a JSON object ({"type": "beta", "alpha": 2, ...}) or a
// shorthand string such as "beta(1.5,1.5)" or "uniform(0,1)".
Distribution parse_distribution_spec(const std::string& spec);
nlohmann::json distribution_to_json(const Distribution& d);

}  // namespace rsbounds::cli
