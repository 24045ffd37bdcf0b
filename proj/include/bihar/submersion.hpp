#pragma once

#include <array>
#include <string>
#include <vector>

#include "bihar/geometry.hpp"

namespace bihar {

enum class Provenance { Declared, Extracted };

/// The five structure functions of an adapted frame at one point:
///   [e1,e3] = k1 e3,  [e2,e3] = k2 e3,  [e1,e2] = f1 e1 + f2 e2 - 2 sigma e3.
/// Each carries its frame derivatives.
struct IntegrabilityData {
  FrameScalar f1, f2, k1, k2, sigma;
  Provenance provenance = Provenance::Declared;

  /// Horizontal components of [e1,e3] and [e2,e3] (which vanish for an
  /// adapted frame), followed by the orthonormality defect. Zero when declared.
  std::array<double, 5> residuals{};

  bool has_second() const;
  double max_residual() const;
};

inline constexpr double kAdaptedTolerance = 1e-6;

/// Reads the integrability data off the brackets of a chart frame. Second
/// frame derivatives of the data are included.
/// Throws ModeUnsupported for data-mode models and NotAdaptedFrame when a
/// residual exceeds kAdaptedTolerance.
IntegrabilityData extract_data(const FrameModel& model, const Point& p);

/// Declared data (data mode, derivatives are coordinate derivatives) or
/// extracted data (chart mode).
IntegrabilityData data_at(const FrameModel& model, const Point& p);

/// Coordinate components of [e1,e2], [e1,e3], [e2,e3] rebuilt from the data
/// and the frame of a chart model.
std::array<Vec3, 3> reassembled_brackets(const FrameModel& model, const Point& p, const IntegrabilityData& d);

struct VerticalConstancyReport {
  static constexpr std::array<const char*, 5> names{"e3(f1)", "e3(f2)", "e3(k1)", "e3(k2)", "e3(sigma)"};
  std::vector<Point> points;
  std::vector<std::array<double, 5>> values;
  double max_abs = 0.0;
  bool constant = true;
};

inline constexpr double kVerticalTolerance = 1e-8;

VerticalConstancyReport check_vertical_constancy(const FrameModel& model);

/// 2 e3(sigma) + k1 f1 + k2 f2 + e2(k1) - e1(k2); vanishes for a genuine frame.
double jacobi_residual(const IntegrabilityData& d);

struct Rotation {
  IntegrabilityData data;
  double theta = 0.0;
  bool degenerate = false;
};

inline constexpr double kDegenerateRotation = 1e-14;

/// Rotates e1, e2 by theta = atan2(k2, k1) so that k2 vanishes. The new data
/// and their derivatives are expressed along the rotated frame. When
/// k1^2 + k2^2 < kDegenerateRotation the input is returned with the flag set.
Rotation rotate_frame(const IntegrabilityData& d);

/// The same rotation carried out on the frame fields of a chart model, with
/// the rotated frame's data extracted from its brackets (first derivatives
/// only).
Rotation rotate_frame_chart(const FrameModel& model, const Point& p);

}  // namespace bihar
