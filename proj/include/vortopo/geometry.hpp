#ifndef VORTOPO_GEOMETRY_HPP
#define VORTOPO_GEOMETRY_HPP

#include <cmath>

// Angle convention used throughout: x = r*sin(phi), y = r*cos(phi).
// phi is measured from the +y axis toward +x and wrapped into [0, 2*pi).

namespace vortopo {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;

  static Point3 from_cylindrical(double r, double phi, double z) {
    return {r * std::sin(phi), r * std::cos(phi), z};
  }
  double r() const { return std::hypot(x, y); }
  double phi() const {
    double a = std::atan2(x, y);
    if (a < 0.0) a += kTwoPi;
    return a;
  }
  Vec3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Point3 operator+(const Vec3& v) const { return {x + v.x, y + v.y, z + v.z}; }
};

// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

// Signed angular difference a-b wrapped into (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d <= -kTwoPi / 2) d += kTwoPi;
  if (d > kTwoPi / 2) d -= kTwoPi;
  return d;
}

}  // namespace vortopo

#endif
