#include "cli.hpp"

#include <fstream>
#include <sstream>

namespace knead::cli {

namespace {

std::string located(const std::string& field, const std::string& message, std::optional<int> line) {
  std::ostringstream s;
  if (line) s << "line " << *line << ": ";
  s << field << ": " << message;
  return s.str();
}

std::optional<int> line_of(const YAML::Node& n) {
  if (!n.IsDefined() || n.Mark().line < 0) return std::nullopt;
  return n.Mark().line + 1;
}

RawValue raw(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw ConfigError(field, "expected a number or parameter name", line_of(n));
  return {n.Scalar(), field, line_of(n)};
}

template <class U>
U knob(const YAML::Node& root, const char* key, U fallback) {
  const YAML::Node n = root[key];
  if (!n) return fallback;
  try {
    return n.as<U>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, "cannot read '" + (n.IsScalar() ? n.Scalar() : std::string("?")) + "'",
                      line_of(n));
  }
}

void apply_override(RunConfig& cfg, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("param", "override '" + item + "' is not NAME=VALUE");
  }
  cfg.params[item.substr(0, eq)] = item.substr(eq + 1);
}

void check_knobs(const RunConfig& cfg) {
  if (cfg.N == 0) throw ConfigError("N", "must be positive");
  if (cfg.N_id == 0) throw ConfigError("N_id", "must be positive");
  if (cfg.N_id > cfg.N) throw ConfigError("N_id", "must not exceed N");
  if (cfg.caps.max_depth == 0) throw ConfigError("depth_cap", "must be positive");
  if (cfg.caps.max_cylinders == 0) throw ConfigError("cylinder_cap", "must be positive");
  if (!(cfg.tol > 0)) throw ConfigError("tolerance", "must be positive");
  if (!(cfg.identity_tol > 0)) throw ConfigError("identity_tolerance", "must be positive");
}

RunConfig from_node(const YAML::Node& root, const std::vector<std::string>& overrides) {
  if (!root.IsMap()) throw ConfigError("<root>", "expected a mapping");
  RunConfig cfg;
  cfg.name = knob<std::string>(root, "name", "");
  cfg.N = knob<std::size_t>(root, "N", cfg.N);
  cfg.N_id = knob<std::size_t>(root, "N_id", cfg.N_id);
  cfg.caps.max_depth = knob<std::size_t>(root, "depth_cap", cfg.caps.max_depth);
  cfg.caps.max_cylinders = knob<std::uint64_t>(root, "cylinder_cap", cfg.caps.max_cylinders);
  cfg.tol = knob<double>(root, "tolerance", cfg.tol);
  cfg.identity_tol = knob<double>(root, "identity_tolerance", cfg.identity_tol);
  cfg.output_dir = knob<std::string>(root, "output", "");

  const std::string mode = knob<std::string>(root, "arithmetic", "float64");
  if (mode == "float64") {
    cfg.arithmetic = Arithmetic::float64;
  } else if (mode == "exact" || mode == "rational") {
    cfg.arithmetic = Arithmetic::exact;
  } else {
    throw ConfigError("arithmetic", "expected float64 or exact, got '" + mode + "'",
                      line_of(root["arithmetic"]));
  }

  if (const YAML::Node p = root["params"]) {
    if (!p.IsMap()) throw ConfigError("params", "expected a mapping", line_of(p));
    for (const auto& kv : p) {
      cfg.params[kv.first.as<std::string>()] = raw(kv.second, "params." + kv.first.as<std::string>()).text;
    }
  }
  for (const auto& o : overrides) apply_override(cfg, o);

  const YAML::Node iv = root["interval"];
  if (!iv) throw ConfigError("interval", "missing");
  if (!iv.IsSequence() || iv.size() != 2) {
    throw ConfigError("interval", "expected [a, b]", line_of(iv));
  }
  cfg.a = raw(iv[0], "interval[0]");
  cfg.b = raw(iv[1], "interval[1]");

  const YAML::Node cuts = root["cuts"];
  if (!cuts) throw ConfigError("cuts", "missing");
  if (!cuts.IsSequence() || cuts.size() == 0) {
    throw ConfigError("cuts", "expected a nonempty list of interior cutting points", line_of(cuts));
  }
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    cfg.cuts.push_back(raw(cuts[k], "cuts[" + std::to_string(k) + "]"));
  }

  const YAML::Node br = root["branches"];
  if (!br) throw ConfigError("branches", "missing");
  if (!br.IsSequence()) throw ConfigError("branches", "expected a list", line_of(br));
  if (br.size() != cuts.size() + 1) {
    throw ConfigError("branches",
                      "expected " + std::to_string(cuts.size() + 1) + " branches for " +
                          std::to_string(cuts.size()) + " cuts, got " + std::to_string(br.size()),
                      line_of(br));
  }
  for (std::size_t i = 0; i < br.size(); ++i) {
    const std::string f = "branches[" + std::to_string(i) + "]";
    const YAML::Node n = br[i];
    if (!n.IsMap()) throw ConfigError(f, "expected a mapping", line_of(n));
    RawBranch b;
    if (n["slope"]) b.slope = raw(n["slope"], f + ".slope");
    if (n["intercept"]) b.intercept = raw(n["intercept"], f + ".intercept");
    if (const YAML::Node img = n["image"]) {
      if (!img.IsSequence() || img.size() != 2) {
        throw ConfigError(f + ".image", "expected [f(c_i+), f(c_{i+1}-)]", line_of(img));
      }
      b.image_lo = raw(img[0], f + ".image[0]");
      b.image_hi = raw(img[1], f + ".image[1]");
    }
    if (n["weight"]) b.weight = raw(n["weight"], f + ".weight");
    const bool affine = b.slope && b.intercept;
    const bool chord = b.image_lo.has_value();
    if (affine == chord) {
      throw ConfigError(f, "give either slope and intercept or image", line_of(n));
    }
    cfg.branches.push_back(std::move(b));
  }
  if (root["snap_tolerance"]) cfg.snap_tolerance = raw(root["snap_tolerance"], "snap_tolerance");
  check_knobs(cfg);
  return cfg;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message, std::optional<int> line)
    : Error(located(field, message, line)), field_(std::move(field)) {}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                            const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("<syntax>", origin + ": " + e.msg, e.mark.line + 1);
  }
  RunConfig cfg = from_node(root, overrides);
  cfg.path = origin;
  return cfg;
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides, path);
}

namespace {

template <class T>
T resolve(const RunConfig& cfg, const RawValue& v) {
  std::string text = v.text;
  bool negate = false;
  if (!text.empty() && text[0] == '-' && cfg.params.count(text.substr(1))) {
    negate = true;
    text = text.substr(1);
  }
  if (const auto it = cfg.params.find(text); it != cfg.params.end()) text = it->second;
  try {
    const T x = ScalarTraits<T>::parse(text);
    return negate ? -x : x;
  } catch (const Error& e) {
    throw ConfigError(v.field, "cannot read '" + v.text + "' (" + e.what() + ")", v.line);
  }
}

}  // namespace

template <class T>
WeightedSystem<T> make_system(const RunConfig& cfg) {
  SystemSpec<T> spec;
  spec.a = resolve<T>(cfg, cfg.a);
  spec.b = resolve<T>(cfg, cfg.b);
  if (!(spec.a < spec.b)) throw ConfigError("interval", "need a < b", cfg.a.line);
  for (const auto& c : cfg.cuts) {
    T x = resolve<T>(cfg, c);
    const T& prev = spec.cuts.empty() ? spec.a : spec.cuts.back();
    if (!(prev < x)) {
      throw ConfigError("cuts", "must be strictly increasing inside the interval; " + c.field +
                                    " = " + c.text + " is out of order", c.line);
    }
    spec.cuts.push_back(std::move(x));
  }
  if (!(spec.cuts.back() < spec.b)) {
    throw ConfigError("cuts", "the last cut must lie below b", cfg.cuts.back().line);
  }
  for (const auto& br : cfg.branches) {
    const T w = br.weight ? resolve<T>(cfg, *br.weight) : T(1);
    if (br.slope) {
      spec.branches.push_back(
          Branch<T>::linear(resolve<T>(cfg, *br.slope), resolve<T>(cfg, *br.intercept), w));
    } else {
      spec.branches.push_back(
          Branch<T>::chord(resolve<T>(cfg, *br.image_lo), resolve<T>(cfg, *br.image_hi), w));
    }
  }
  if (cfg.snap_tolerance) spec.snap_tolerance = to_double(resolve<Rational>(cfg, *cfg.snap_tolerance));
  return validate_system(std::move(spec));
}

template WeightedSystem<double> make_system(const RunConfig&);
template WeightedSystem<Rational> make_system(const RunConfig&);

}  // namespace knead::cli
