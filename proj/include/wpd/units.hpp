#pragma once

#include <numbers>

namespace wpd {

/// Plane angle. The public surface speaks degrees; arithmetic inside the
/// library uses radians() only.
class Angle {
 public:
  constexpr Angle() = default;
  static constexpr Angle deg(double d) { return Angle(d * std::numbers::pi / 180.0); }
  static constexpr Angle rad(double r) { return Angle(r); }

  constexpr double radians() const { return rad_; }
  constexpr double degrees() const { return rad_ * 180.0 / std::numbers::pi; }
  constexpr Angle operator-() const { return Angle(-rad_); }

 private:
  constexpr explicit Angle(double r) : rad_(r) {}
  double rad_ = 0.0;
};

}  // namespace wpd
