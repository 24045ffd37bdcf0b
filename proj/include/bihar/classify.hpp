#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bihar/geometry.hpp"
#include "bihar/submersion.hpp"

namespace bihar {

using Json = nlohmann::ordered_json;

inline constexpr double kZeroThreshold = 1e-10;
inline constexpr double kConsistentThreshold = 1e-8;
inline constexpr double kViolatedThreshold = 1e-6;

/// Data on the sample grid of a space-form model, with k2 rotated away.
struct SpaceFormInput {
  double c = 0.0;
  std::vector<Point> points;
  std::vector<IntegrabilityData> samples;
  bool rotated = false;
  bool rotation_degenerate = false;  // k1 = k2 = 0 somewhere, frame kept there
  VerticalConstancyReport vertical;
};

/// Samples the model, rotates the frame whenever some |k2| exceeds 1e-12 and
/// attaches the vertical-constancy report. The curvature c comes from the
/// argument when given, otherwise from the model's space_form_c.
SpaceFormInput prepare_space_form_input(const FrameModel& model, std::optional<double> c = std::nullopt);

struct Eq13Residuals {
  std::array<double, 7> a{};
  static constexpr std::array<const char*, 7> names{"a1", "a2", "a3", "a4", "a5", "a6", "a7"};
};

/// Space-form constraints in the rotated frame. Throws PreconditionViolation
/// when |k2| >= 1e-12.
Eq13Residuals eq13_residuals(const IntegrabilityData& d, double c);

enum class VerdictKind { Harmonic, NoBiharmonicPossible, InconsistentData };

std::string to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::InconsistentData;
  std::string reason;
  std::string case_taken;  // "harmonic", "positive-c", "case-I", "case-II", "inconsistent"
  std::vector<std::pair<std::string, double>> evidence;
  std::vector<std::string> notes;
  bool indeterminate = false;
  bool fibers_totally_geodesic = false;
  bool horizontal_integrable = false;
  std::string base_identification = "none";
  bool consistent = false;  // all space-form residuals below 1e-8

  double evidence_value(const std::string& name) const;  // NaN when absent
};

Verdict classify(const SpaceFormInput& input);

Json to_json(const Verdict& v);

/// Conditions forced when k1 = k2 = 0:
///   b1: e1(sigma) = 0, b2: sigma^2 = -c, b3: e2(f1) - e1(f2) + f1^2 + f2^2 + 4c = 0, b4: e2(sigma) = 0.
struct Eq19Report {
  bool precondition_met = false;  // k vanishes on all samples
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;  // max abs residuals
  bool c_nonpositive = false;                     // sigma^2 = -c is solvable over the reals
  bool sigma_forced_zero = false;                 // c = 0
  bool satisfied = false;
};

Eq19Report eq19_check(const SpaceFormInput& input);

Json to_json(const Eq19Report& r);

/// A one-parameter family of data-mode models, indexed by (c, parameter).
struct DataFamily {
  std::string name;
  std::vector<double> parameters;
  std::function<FrameModel(double c, double parameter)> make;
};

/// Known families: "constant", "riccati", "zero", "random".
DataFamily make_family(const std::string& name);
std::vector<std::string> family_names();

/// A data-mode model from expression strings over (x, y, z).
FrameModel data_model(const std::string& name, const std::array<Interval, 3>& domain, std::array<int, 3> grid,
                      const std::array<std::string, 5>& data, double c);

struct ScanRow {
  double c = 0.0;
  double parameter = 0.0;
  double eq13_max = 0.0;
  double tension_max = 0.0;
  double bitension_max = 0.0;
  std::optional<VerdictKind> verdict;
  std::string error;

  /// A cell that looks like a proper biharmonic submersion of a space form.
  bool proper_biharmonic_witness() const;
};

struct ScanTable {
  std::string family;
  std::vector<ScanRow> rows;
  std::size_t witnesses() const;
};

/// Evaluates every (c, parameter) cell in grid order; cell failures are
/// recorded in the row and the scan continues.
ScanTable scan(const std::vector<double>& c_grid, const DataFamily& family);

Json to_json(const ScanTable& t);

}  // namespace bihar
