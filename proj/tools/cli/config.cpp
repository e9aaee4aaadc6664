#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rsbounds/error.hpp"

namespace rsbounds::cli {

namespace {

using nlohmann::json;

class Source {
 public:
  Source(const std::string& text, std::string path) : text_(text), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

  // Line of the last key of `keys` found by walking the text forward key by
  // key. Falls back to the deepest key that was found.
  int line_of(const std::vector<std::string>& keys) const {
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    for (const auto& key : keys) {
      if (key.empty() || key.front() == '[') continue;
      const std::size_t at = find_key(key, pos);
      if (at == std::string::npos) break;
      found = at;
      pos = at + key.size() + 2;
    }
    if (found == std::string::npos) return 1;
    return line_at(found);
  }

  int line_at(std::size_t offset) const {
    int line = 1;
    for (std::size_t k = 0; k < offset && k < text_.size(); ++k) {
      if (text_[k] == '\n') ++line;
    }
    return line;
  }

 private:
  std::size_t find_key(const std::string& key, std::size_t from) const {
    const std::string quoted = "\"" + key + "\"";
    std::size_t at = text_.find(quoted, from);
    while (at != std::string::npos) {
      std::size_t k = at + quoted.size();
      while (k < text_.size() && std::isspace(static_cast<unsigned char>(text_[k]))) ++k;
      if (k < text_.size() && text_[k] == ':') return at;
      at = text_.find(quoted, at + 1);
    }
    return std::string::npos;
  }

  const std::string& text_;
  std::string path_;
};

std::string join_path(const std::vector<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) {
    if (!k.empty() && k.front() == '[') {
      out += k;
    } else {
      if (!out.empty()) out += '.';
      out += k;
    }
  }
  return out.empty() ? "<root>" : out;
}

// A JSON value together with its location, for error reporting.
class Node {
 public:
  Node(const json& value, std::vector<std::string> keys, const Source& src)
      : value_(value), keys_(std::move(keys)), src_(src) {}

  [[noreturn]] void fail(const std::string& message) const {
    std::ostringstream os;
    os << src_.path() << ":" << src_.line_of(keys_) << ": " << join_path(keys_) << ": " << message;
    throw ConfigError(os.str());
  }

  const json& value() const noexcept { return value_; }
  bool is_object() const { return value_.is_object(); }
  bool is_string() const { return value_.is_string(); }
  bool is_number() const { return value_.is_number(); }

  void expect_object() const {
    if (!value_.is_object()) fail("expected an object");
  }

  void allow_keys(std::initializer_list<const char*> allowed) const {
    expect_object();
    std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& item : value_.items()) {
      if (!names.count(item.key())) child(item.key()).fail("unknown field '" + item.key() + "'");
    }
  }

  bool has(const std::string& key) const { return value_.is_object() && value_.contains(key); }

  Node child(const std::string& key) const {
    auto keys = keys_;
    keys.push_back(key);
    return Node(value_.at(key), std::move(keys), src_);
  }

  Node required(const std::string& key) const {
    expect_object();
    if (!value_.contains(key)) fail("missing required field '" + key + "'");
    return child(key);
  }

  Node element(std::size_t i) const {
    auto keys = keys_;
    keys.push_back("[" + std::to_string(i) + "]");
    return Node(value_.at(i), std::move(keys), src_);
  }

  double number(double lo = -HUGE_VAL, double hi = HUGE_VAL) const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    if (v < lo || v > hi) {
      std::ostringstream os;
      os << "value " << v << " outside [" << lo << ", " << hi << "]";
      fail(os.str());
    }
    return v;
  }

  double number_or(const std::string& key, double fallback, double lo = -HUGE_VAL, double hi = HUGE_VAL) const {
    return has(key) ? child(key).number(lo, hi) : fallback;
  }

  std::size_t count(std::size_t lo, std::size_t hi) const {
    if (!value_.is_number_integer() && !value_.is_number_unsigned()) fail("expected an integer");
    const auto v = value_.get<long long>();
    if (v < static_cast<long long>(lo) || v > static_cast<long long>(hi)) {
      fail("value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<std::size_t>(v);
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::size_t array_size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

 private:
  const json& value_;
  std::vector<std::string> keys_;
  const Source& src_;
};

Distribution distribution_from_node(const Node& n) {
  if (n.is_string()) {
    // Shorthand such as "beta(2,3)".
    try {
      return parse_distribution_spec(n.string());
    } catch (const ConfigError& e) {
      n.fail(e.what());
    }
  }
  const std::string type = n.required("type").string();
  Distribution d;
  if (type == "gaussian" || type == "normal") {
    n.allow_keys({"type", "mu", "sigma"});
    d = Gaussian{n.required("mu").number(), n.required("sigma").number()};
  } else if (type == "uniform") {
    n.allow_keys({"type", "lo", "hi"});
    d = Uniform{n.required("lo").number(), n.required("hi").number()};
  } else if (type == "beta") {
    n.allow_keys({"type", "alpha", "beta", "lo", "hi"});
    d = Beta{n.required("alpha").number(), n.required("beta").number(), n.number_or("lo", 0.0),
             n.number_or("hi", 1.0)};
  } else if (type == "gamma") {
    n.allow_keys({"type", "shape", "rate"});
    d = Gamma{n.required("shape").number(), n.required("rate").number()};
  } else if (type == "binomial") {
    n.allow_keys({"type", "n", "p"});
    d = Binomial{static_cast<int>(n.required("n").count(1, 1000000)), n.required("p").number()};
  } else if (type == "poisson") {
    n.allow_keys({"type", "lambda"});
    d = Poisson{n.required("lambda").number()};
  } else {
    n.child("type").fail("unknown distribution type '" + type + "'");
  }
  try {
    validate(d);
  } catch (const Error& e) {
    n.fail(e.what());
  }
  return d;
}

AffineMap affine_from_node(const Node& n) {
  n.allow_keys({"scale", "shift"});
  return AffineMap{n.number_or("scale", 1.0), n.number_or("shift", 0.0)};
}

ModelKind model_from_node(const Node& n) {
  const std::string kind = n.required("kind").string();
  if (kind == "decay") {
    n.allow_keys({"kind", "t", "k", "g"});
    DecayParams p;
    p.t = n.number_or("t", 1.0, 0.0);
    if (n.has("k")) p.k = affine_from_node(n.child("k"));
    if (n.has("g")) p.g = affine_from_node(n.child("g"));
    return p;
  }
  if (kind == "oscillator") {
    n.allow_keys({"kind", "spring_scale", "damping_scale", "amplitude", "frequency", "offset", "u0", "v0",
                  "t_critical", "step"});
    OscillatorParams p;
    p.spring_scale = n.number_or("spring_scale", p.spring_scale);
    p.damping_scale = n.number_or("damping_scale", p.damping_scale);
    p.amplitude = n.number_or("amplitude", p.amplitude);
    p.frequency = n.number_or("frequency", p.frequency);
    p.offset = n.number_or("offset", p.offset);
    p.u0 = n.number_or("u0", p.u0);
    p.v0 = n.number_or("v0", p.v0);
    p.t_critical = n.number_or("t_critical", p.t_critical, 0.0, 1e6);
    p.step = n.number_or("step", p.step, 1e-7, 1.0);
    return p;
  }
  if (kind == "heat1d") {
    n.allow_keys({"kind", "conductivity_slope", "capacity_scale", "q", "length", "u0", "t_final", "x_star", "n_x",
                  "n_t"});
    HeatParams p;
    p.conductivity_slope = n.number_or("conductivity_slope", p.conductivity_slope);
    p.capacity_scale = n.number_or("capacity_scale", p.capacity_scale, 1e-300);
    p.q = n.number_or("q", p.q);
    p.length = n.number_or("length", p.length, 1e-12);
    p.u0 = n.number_or("u0", p.u0);
    p.t_final = n.number_or("t_final", p.t_final, 0.0);
    p.x_star = n.number_or("x_star", p.x_star, 0.0, p.length);
    if (n.has("n_x")) p.n_x = static_cast<int>(n.child("n_x").count(2, 100000));
    if (n.has("n_t")) p.n_t = static_cast<int>(n.child("n_t").count(1, 10000000));
    return p;
  }
  if (kind == "constant") {
    n.allow_keys({"kind", "value"});
    const double v = n.required("value").number();
    return AnalyticModel{[v](double, double) { return v; }, "constant"};
  }
  if (kind == "polynomial") {
    n.allow_keys({"kind", "coefficients"});
    const Node rows = n.required("coefficients");
    std::vector<std::vector<double>> a(rows.array_size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Node row = rows.element(i);
      a[i].resize(row.array_size());
      for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] = row.element(j).number();
    }
    auto state = [a](double z1, double z2) {
      // sum_i z1^i sum_j a[i][j] z2^j, both by Horner.
      double outer = 0.0;
      for (std::size_t i = a.size(); i-- > 0;) {
        double inner = 0.0;
        for (std::size_t j = a[i].size(); j-- > 0;) inner = inner * z2 + a[i][j];
        outer = outer * z1 + inner;
      }
      return outer;
    };
    return AnalyticModel{state, "polynomial"};
  }
  n.child("kind").fail("unknown model kind '" + kind + "' (expected decay, oscillator, heat1d, constant, polynomial)");
}

OutputFunctional output_from_node(const Node& n) {
  const std::string kind = n.required("kind").string();
  if (kind == "identity") {
    n.allow_keys({"kind"});
    return IdentityOutput{};
  }
  if (kind == "square") {
    n.allow_keys({"kind"});
    return SquareOutput{};
  }
  if (kind == "indicator") {
    n.allow_keys({"kind", "lower", "upper"});
    IndicatorOutput ind;
    ind.lower = n.number_or("lower", ind.lower);
    ind.upper = n.number_or("upper", ind.upper);
    if (!(ind.lower <= ind.upper)) n.fail("indicator requires lower <= upper");
    return ind;
  }
  n.child("kind").fail("unknown output kind '" + kind + "' (expected identity, square, indicator)");
}

std::array<std::size_t, 2> order_pair(const Node& n, std::size_t lo, std::size_t hi) {
  if (n.array_size() != 2) n.fail("expected two orders");
  return {n.element(0).count(lo, hi), n.element(1).count(lo, hi)};
}

ExperimentConfig build(const Node& root) {
  root.allow_keys({"model", "output", "aleatoric", "epistemic", "transform", "surrogate", "risk", "B",
                   "surrogate_report", "monte_carlo", "outputs", "description"});
  ExperimentConfig cfg;
  if (root.has("description")) (void)root.child("description").string();
  cfg.model = model_from_node(root.required("model"));
  cfg.output = root.has("output") ? output_from_node(root.child("output")) : OutputFunctional{IdentityOutput{}};
  cfg.epistemic = distribution_from_node(root.required("epistemic"));

  if (root.has("transform")) {
    const Node t = root.child("transform");
    t.allow_keys({"kind", "base"});
    const std::string kind = t.required("kind").string();
    if (kind != "shift_by_epistemic") t.child("kind").fail("unknown transform '" + kind + "'");
    if (root.has("aleatoric")) {
      root.child("aleatoric").fail("omit 'aleatoric' when a transform supplies the base law");
    }
    cfg.transform = ShiftTransform{distribution_from_node(t.required("base"))};
  } else {
    cfg.aleatoric = distribution_from_node(root.required("aleatoric"));
  }
  for (const Distribution* d : {cfg.aleatoric ? &*cfg.aleatoric : &cfg.transform->base, &cfg.epistemic}) {
    if (is_discrete(*d)) root.fail("discrete laws are not supported as model inputs: " + describe(*d));
  }

  if (root.has("surrogate")) {
    const Node s = root.child("surrogate");
    s.allow_keys({"enabled", "orders", "target"});
    if (s.has("enabled")) cfg.surrogate.enabled = s.child("enabled").boolean();
    if (s.has("orders")) cfg.surrogate.orders = order_pair(s.child("orders"), 1, 128);
    if (s.has("target")) {
      const std::string target = s.child("target").string();
      if (target == "state") {
        cfg.surrogate.target = SurrogateTarget::State;
      } else if (target == "output") {
        cfg.surrogate.target = SurrogateTarget::Output;
      } else {
        s.child("target").fail("expected 'state' or 'output'");
      }
    }
  }

  if (root.has("risk")) {
    const Node r = root.child("risk");
    r.allow_keys({"orders", "c_grid"});
    if (r.has("orders")) cfg.risk_orders = order_pair(r.child("orders"), 1, 4096);
    if (r.has("c_grid")) {
      const Node g = r.child("c_grid");
      g.allow_keys({"min", "max", "points"});
      cfg.c_grid.min = g.number_or("min", cfg.c_grid.min, 1e-300);
      cfg.c_grid.max = g.number_or("max", cfg.c_grid.max, 1e-300);
      if (g.has("points")) cfg.c_grid.points = g.child("points").count(1, 1000000);
      if (cfg.c_grid.max < cfg.c_grid.min) g.fail("c_grid.max must be >= c_grid.min");
    }
  }

  if (root.has("B")) {
    const Node b = root.child("B");
    if (b.is_number()) {
      cfg.B.value = b.number(0.0);
    } else {
      b.allow_keys({"value", "alternative"});
      if (b.has("value") == b.has("alternative")) b.fail("give exactly one of 'value' or 'alternative'");
      if (b.has("value")) cfg.B.value = b.child("value").number(0.0);
      if (b.has("alternative")) cfg.B.alternative = distribution_from_node(b.child("alternative"));
    }
  }

  if (root.has("surrogate_report")) {
    const Node s = root.child("surrogate_report");
    s.allow_keys({"orders", "dimensions", "reference", "reference_order"});
    if (s.has("orders")) {
      const Node o = s.child("orders");
      cfg.surrogate_report.orders.assign(o.array_size(), 0);
      for (std::size_t i = 0; i < cfg.surrogate_report.orders.size(); ++i) {
        cfg.surrogate_report.orders[i] = o.element(i).count(1, 128);
      }
      if (cfg.surrogate_report.orders.empty()) o.fail("expected at least one order");
    }
    if (s.has("dimensions")) {
      const std::string dims = s.child("dimensions").string();
      if (dims == "both") {
        cfg.surrogate_report.dimensions = ActiveDimensions::Both;
      } else if (dims == "first") {
        cfg.surrogate_report.dimensions = ActiveDimensions::FirstOnly;
      } else {
        s.child("dimensions").fail("expected 'both' or 'first'");
      }
    }
    if (s.has("reference")) {
      const Node r = s.child("reference");
      r.allow_keys({"mean", "second_moment"});
      cfg.surrogate_report.reference = ReferenceMoments{r.required("mean").number(), r.required("second_moment").number()};
    }
    if (s.has("reference_order")) cfg.surrogate_report.reference_order = s.child("reference_order").count(1, 1024);
  }

  if (root.has("monte_carlo")) {
    const Node m = root.child("monte_carlo");
    m.allow_keys({"n_outer", "n_inner"});
    MonteCarloSpec mc;
    if (m.has("n_outer")) mc.n_outer = m.child("n_outer").count(1, 100000000);
    if (m.has("n_inner")) mc.n_inner = m.child("n_inner").count(1, 100000000);
    cfg.monte_carlo = mc;
  }

  if (root.has("outputs")) {
    const Node o = root.child("outputs");
    o.allow_keys({"csv", "report"});
    if (o.has("csv")) cfg.outputs.csv = o.child("csv").string();
    if (o.has("report")) cfg.outputs.report = o.child("report").string();
  }
  return cfg;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const Distribution& ExperimentConfig::aleatoric_rule_law() const {
  return transform ? transform->base : *aleatoric;
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source_path) {
  Source src(text, source_path);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << source_path << ":" << src.line_at(e.byte > 0 ? e.byte - 1 : 0) << ": invalid JSON: " << e.what();
    throw ConfigError(os.str());
  }
  ExperimentConfig cfg = build(Node(root, {}, src));
  cfg.source_path = source_path;
  cfg.hash = fnv1a64(text);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

Distribution parse_distribution_spec(const std::string& raw) {
  const std::string spec = trim(raw);
  json j;
  if (!spec.empty() && spec.front() == '{') {
    try {
      j = json::parse(spec);
    } catch (const json::parse_error& e) {
      throw ConfigError("invalid distribution JSON '" + spec + "': " + e.what());
    }
  } else {
    const auto open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')') {
      throw ConfigError("invalid distribution '" + spec + "' (expected e.g. beta(1.5,1.5))");
    }
    const std::string name = trim(spec.substr(0, open));
    std::vector<double> args;
    std::stringstream ss(spec.substr(open + 1, spec.size() - open - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(t, &used);
      } catch (const std::exception&) {
        used = std::string::npos;
      }
      if (used != t.size()) throw ConfigError("invalid number '" + t + "' in '" + spec + "'");
      args.push_back(v);
    }
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) {
        throw ConfigError("wrong number of parameters for " + name + " in '" + spec + "'");
      }
    };
    if (name == "gaussian" || name == "normal") {
      need(2, 2);
      j = {{"type", "gaussian"}, {"mu", args[0]}, {"sigma", args[1]}};
    } else if (name == "uniform") {
      need(2, 2);
      j = {{"type", "uniform"}, {"lo", args[0]}, {"hi", args[1]}};
    } else if (name == "beta") {
      need(2, 4);
      if (args.size() == 3) throw ConfigError("beta takes (alpha,beta) or (alpha,beta,lo,hi)");
      j = {{"type", "beta"}, {"alpha", args[0]}, {"beta", args[1]}};
      if (args.size() == 4) {
        j["lo"] = args[2];
        j["hi"] = args[3];
      }
    } else if (name == "gamma") {
      need(2, 2);
      j = {{"type", "gamma"}, {"shape", args[0]}, {"rate", args[1]}};
    } else if (name == "binomial") {
      need(2, 2);
      if (args[0] != std::floor(args[0])) throw ConfigError("binomial n must be an integer");
      j = {{"type", "binomial"}, {"n", static_cast<long long>(args[0])}, {"p", args[1]}};
    } else if (name == "poisson") {
      need(1, 1);
      j = {{"type", "poisson"}, {"lambda", args[0]}};
    } else {
      throw ConfigError("unknown distribution '" + name + "'");
    }
  }
  const std::string text = j.dump();
  Source src(text, "<distribution>");
  return distribution_from_node(Node(j, {}, src));
}

json distribution_to_json(const Distribution& d) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return {{"type", "gaussian"}, {"mu", v.mu}, {"sigma", v.sigma}};
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return {{"type", "uniform"}, {"lo", v.lo}, {"hi", v.hi}};
        } else if constexpr (std::is_same_v<T, Beta>) {
          return {{"type", "beta"}, {"alpha", v.alpha}, {"beta", v.beta}, {"lo", v.lo}, {"hi", v.hi}};
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return {{"type", "gamma"}, {"shape", v.shape}, {"rate", v.rate}};
        } else if constexpr (std::is_same_v<T, Binomial>) {
          return {{"type", "binomial"}, {"n", v.n}, {"p", v.p}};
        } else {
          return {{"type", "poisson"}, {"lambda", v.lambda}};
        }
      },
      d);
}

}  // namespace rsbounds::cli
