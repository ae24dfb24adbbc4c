#include "g2/octonion.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <vector>

#include "g2/error.hpp"

namespace g2 {

Octonion Octonion::unit(int index) {
  if (index < 0 || index > 7) throw Error("octonion basis index out of range");
  if (index == 0) return real(1.0);
  return imaginary(Vec7::Unit(index - 1));
}

Eigen::Matrix<double, 8, 1> Octonion::vec() const {
  Eigen::Matrix<double, 8, 1> v;
  v[0] = re;
  v.tail<7>() = im;
  return v;
}

Octonion oct_mul(const Octonion& a, const Octonion& b, const G2Structure& s) {
  return {a.re * b.re - a.im.dot(s.metric() * b.im),
          a.re * b.im + b.re * a.im + cross(a.im, b.im, s)};
}

double oct_dot(const Octonion& a, const Octonion& b, const G2Structure& s) {
  return a.re * b.re + a.im.dot(s.metric() * b.im);
}

Octonion Splitting::from_pair(const Quaternion& a, const Quaternion& b) const {
  Octonion o;
  o.re = a.w;
  o.im = from_imag(a.imag()) + from_normal(b);
  return o;
}

std::pair<Quaternion, Quaternion> Splitting::to_pair(const Octonion& o) const {
  Eigen::Vector3d a = imag_coords(o.im);
  return {Quaternion(o.re, a[0], a[1], a[2]), normal_coords(o.im)};
}

Vec7 Splitting::from_imag(const Eigen::Vector3d& a) const {
  Vec7 v = Vec7::Zero();
  for (int t = 0; t < 3; ++t) v[assoc_basis[t] - 1] += sign[assoc_basis[t] - 1] * a[t];
  return v;
}

Vec7 Splitting::from_normal(const Quaternion& b) const {
  Vec7 v = Vec7::Zero();
  Eigen::Vector4d c = b.vec();
  for (int t = 0; t < 4; ++t) v[quat_basis[t] - 1] += sign[quat_basis[t] - 1] * c[t];
  return v;
}

Eigen::Vector3d Splitting::imag_coords(const Vec7& v) const {
  Eigen::Vector3d a;
  for (int t = 0; t < 3; ++t) a[t] = sign[assoc_basis[t] - 1] * v[assoc_basis[t] - 1];
  return a;
}

Quaternion Splitting::normal_coords(const Vec7& v) const {
  Eigen::Vector4d c;
  for (int t = 0; t < 4; ++t) c[t] = sign[quat_basis[t] - 1] * v[quat_basis[t] - 1];
  return Quaternion::from_vec(c);
}

Mat7 Splitting::frame() const {
  Mat7 f;
  for (int t = 0; t < 3; ++t) f.col(t) = from_imag(Eigen::Vector3d::Unit(t));
  for (int t = 0; t < 4; ++t) f.col(3 + t) = from_normal(Quaternion::from_vec(Eigen::Vector4d::Unit(t)));
  return f;
}

std::pair<Quaternion, Quaternion> cayley_dickson(const std::pair<Quaternion, Quaternion>& x,
                                                 const std::pair<Quaternion, Quaternion>& y) {
  const auto& [a, b] = x;
  const auto& [c, d] = y;
  return {a * c - d.conj() * b, d * a + b * c.conj()};
}

double cayley_dickson_defect(const Splitting& split, const G2Structure& s) {
  double worst = 0.0;
  for (int p = 0; p < 8; ++p) {
    auto x = split.to_pair(Octonion::unit(p));
    for (int q = 0; q < 8; ++q) {
      auto y = split.to_pair(Octonion::unit(q));
      Octonion prod = oct_mul(split.from_pair(x.first, x.second), split.from_pair(y.first, y.second), s);
      auto cd = cayley_dickson(x, y);
      Octonion expect = split.from_pair(cd.first, cd.second);
      worst = std::max(worst, (prod - expect).vec().cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

Splitting build_splitting(const G2Structure& s) {
  std::vector<unsigned> masks(128);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    return std::popcount(a) < std::popcount(b);
  });
  for (unsigned mask : masks) {
    Splitting split;
    for (int m = 0; m < 7; ++m) split.sign[m] = (mask >> m & 1u) ? -1 : 1;
    if (cayley_dickson_defect(split, s) < 1e-12) return split;
  }
  throw Error("no sign table identifies the octonion product with the Cayley-Dickson product");
}

const Splitting& standard_splitting() {
  static const Splitting split = build_splitting(G2Structure::standard());
  return split;
}

}  // namespace g2
