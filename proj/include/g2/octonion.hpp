#pragma once

#include <array>
#include <utility>

#include <Eigen/Core>

#include "g2/calibration.hpp"
#include "g2/quaternion.hpp"

namespace g2 {

struct Octonion {
  double re = 0.0;
  Vec7 im = Vec7::Zero();

  static Octonion real(double r) { return {r, Vec7::Zero()}; }
  static Octonion imaginary(const Vec7& v) { return {0.0, v}; }
  // Basis element: 0 is the unit, 1..7 are e_1..e_7.
  static Octonion unit(int index);

  Octonion conj() const { return {re, -im}; }
  double norm2() const { return re * re + im.squaredNorm(); }
  double norm() const { return std::sqrt(norm2()); }
  Eigen::Matrix<double, 8, 1> vec() const;

  Octonion operator+(const Octonion& o) const { return {re + o.re, im + o.im}; }
  Octonion operator-(const Octonion& o) const { return {re - o.re, im - o.im}; }
  Octonion operator*(double s) const { return {re * s, im * s}; }
};

// (a0,u)(b0,v) = (a0 b0 - <u,v>, a0 v + b0 u + u x v), cross product from s.
Octonion oct_mul(const Octonion& a, const Octonion& b, const G2Structure& s);
double oct_dot(const Octonion& a, const Octonion& b, const G2Structure& s);

// Identification R^7 = im(H) + H, e_m <-> sign[m-1] times the quaternion unit
// (e1,e2,e3 <-> i,j,k on the first summand; e4..e7 <-> 1,i,j,k on the second),
// under which the octonion product is the Cayley-Dickson product
// (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)).
struct Splitting {
  std::array<int, 3> assoc_basis{1, 2, 3};
  std::array<int, 4> quat_basis{4, 5, 6, 7};
  std::array<int, 7> sign{1, 1, 1, 1, 1, 1, 1};

  Octonion from_pair(const Quaternion& a, const Quaternion& b) const;
  std::pair<Quaternion, Quaternion> to_pair(const Octonion& o) const;

  Vec7 from_imag(const Eigen::Vector3d& a) const;
  Vec7 from_normal(const Quaternion& b) const;
  Eigen::Vector3d imag_coords(const Vec7& v) const;
  Quaternion normal_coords(const Vec7& v) const;

  // Orthonormal frame whose columns are the images of i, j, k, 1', i', j', k'.
  Mat7 frame() const;
};

// Cayley-Dickson product of pairs of quaternions.
std::pair<Quaternion, Quaternion> cayley_dickson(const std::pair<Quaternion, Quaternion>& x,
                                                 const std::pair<Quaternion, Quaternion>& y);

// Largest deviation from the Cayley-Dickson law over all pairs of basis octonions.
double cayley_dickson_defect(const Splitting& split, const G2Structure& s);

// Searches the 2^7 sign tables, fewest flips first, then by increasing bitmask.
// Throws if none satisfies the Cayley-Dickson law.
Splitting build_splitting(const G2Structure& s);
const Splitting& standard_splitting();

}  // namespace g2
