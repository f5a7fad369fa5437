#ifndef MEMBRANE_TENSOR_HPP
#define MEMBRANE_TENSOR_HPP

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

// Small fixed-size linear algebra for 3x2 and 3x3 matrices plus the
// extended-real energy value type used by every density in the project.

namespace membrane {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2 &o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  // counterclockwise quarter turn
  Vec2 perp() const { return {-y, x}; }
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
};

inline Vec3 cross(const Vec3 &u, const Vec3 &v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

// 3 rows x 2 columns, stored as the two column vectors.
struct Mat32 {
  Vec3 col1, col2;

  Mat32() = default;
  Mat32(const Vec3 &c1, const Vec3 &c2) : col1(c1), col2(c2) {}

  Mat32 operator+(const Mat32 &o) const { return {col1 + o.col1, col2 + o.col2}; }
  Mat32 operator-(const Mat32 &o) const { return {col1 - o.col1, col2 - o.col2}; }
  Mat32 operator*(double s) const { return {col1 * s, col2 * s}; }

  Vec3 apply(const Vec2 &a) const { return col1 * a.x + col2 * a.y; }
  Vec3 column_normal() const { return cross(col1, col2); }
  double frobenius_sq() const { return col1.norm_sq() + col2.norm_sq(); }
  double frobenius() const { return std::sqrt(frobenius_sq()); }
};

// 3x3, row-major.
struct Mat33 {
  std::array<double, 9> a{};

  double &operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }

  static Mat33 identity() {
    Mat33 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
  static Mat33 diagonal(double d0, double d1, double d2) {
    Mat33 m;
    m(0, 0) = d0;
    m(1, 1) = d1;
    m(2, 2) = d2;
    return m;
  }

  double det() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }
  double frobenius_sq() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
  }
};

// (xi | zeta): first two columns from xi, third column zeta.
inline Mat33 adjoin_column(const Mat32 &xi, const Vec3 &zeta) {
  Mat33 m;
  m(0, 0) = xi.col1.x;
  m(1, 0) = xi.col1.y;
  m(2, 0) = xi.col1.z;
  m(0, 1) = xi.col2.x;
  m(1, 1) = xi.col2.y;
  m(2, 1) = xi.col2.z;
  m(0, 2) = zeta.x;
  m(1, 2) = zeta.y;
  m(2, 2) = zeta.z;
  return m;
}

// Rank-one 3x2 matrix with entry (i,j) = b_i a_j, so xi + t*outer_32(b,a)
// realizes the perturbation xi + t a (x) b acting on columns.
inline Mat32 outer_32(const Vec3 &b, const Vec2 &a) {
  return {b * a.x, b * a.y};
}

// Nonnegative finite value or +infinity.  Addition and positive scaling
// saturate; 0 * infinity is rejected.
class ExtendedEnergy {
 public:
  ExtendedEnergy() = default;
  ExtendedEnergy(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0)
      throw std::invalid_argument("ExtendedEnergy: value must be >= 0");
  }

  static ExtendedEnergy infinity() {
    ExtendedEnergy e;
    e.v_ = std::numeric_limits<double>::infinity();
    return e;
  }

  bool is_finite() const { return std::isfinite(v_); }

  double value() const {
    if (!is_finite()) throw std::logic_error("ExtendedEnergy: value() on +inf");
    return v_;
  }
  // finite value, or +inf; safe for comparisons and printing
  double value_or_inf() const { return v_; }

  ExtendedEnergy operator+(const ExtendedEnergy &o) const {
    ExtendedEnergy e;
    e.v_ = v_ + o.v_;
    return e;
  }

  ExtendedEnergy scaled(double lambda) const {
    if (lambda < 0.0) throw std::invalid_argument("ExtendedEnergy: negative scale");
    if (lambda == 0.0) {
      if (!is_finite())
        throw std::domain_error("ExtendedEnergy: 0 * infinity is undefined");
      return ExtendedEnergy(0.0);
    }
    ExtendedEnergy e;
    e.v_ = lambda * v_;
    return e;
  }

  bool operator<(const ExtendedEnergy &o) const { return v_ < o.v_; }
  bool operator<=(const ExtendedEnergy &o) const { return v_ <= o.v_; }
  bool operator==(const ExtendedEnergy &o) const { return v_ == o.v_; }

 private:
  double v_ = 0.0;
};

}  // namespace membrane

#endif  // MEMBRANE_TENSOR_HPP
