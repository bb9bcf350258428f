#pragma once
// Configuration files and the command-line front end.

#include "knead/cylinders.hpp"
#include "knead/system.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace knead::cli {

/// A configuration problem tied to one field of the file.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message, std::optional<int> line = {});
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A scalar entry as written in the file: a number, "p/q", or a parameter name.
struct RawValue {
  std::string text;
  std::string field;
  std::optional<int> line;
};

struct RawBranch {
  std::optional<RawValue> slope;
  std::optional<RawValue> intercept;
  std::optional<RawValue> image_lo;  // chord form
  std::optional<RawValue> image_hi;
  std::optional<RawValue> weight;
};

struct RunConfig {
  std::string path;
  std::string name;
  std::size_t N = 64;
  std::size_t N_id = 12;
  CylinderCaps caps;
  Arithmetic arithmetic = Arithmetic::float64;
  double tol = 1e-12;           // zero search
  double identity_tol = 1e-9;   // coefficientwise identities in float64
  std::string output_dir;
  std::map<std::string, std::string> params;

  RawValue a, b;
  std::vector<RawValue> cuts;
  std::vector<RawBranch> branches;
  std::optional<RawValue> snap_tolerance;
};

/// Reads a YAML system file; `overrides` are NAME=VALUE parameter settings.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                            const std::string& origin = "<string>");

/// Resolves parameters and builds the validated system.
template <class T>
WeightedSystem<T> make_system(const RunConfig& cfg);

/// Runs the command line; returns the process exit status.
/// 0: every requested check passed, 1: a check failed, 2: usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace knead::cli
