#include "g2/quaternion.hpp"

#include "g2/error.hpp"

namespace g2 {

Quaternion& Quaternion::operator+=(const Quaternion& o) {
  w += o.w;
  x += o.x;
  y += o.y;
  z += o.z;
  return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& o) {
  w -= o.w;
  x -= o.x;
  y -= o.y;
  z -= o.z;
  return *this;
}

Quaternion& Quaternion::operator*=(double s) {
  w *= s;
  x *= s;
  y *= s;
  z *= s;
  return *this;
}

Quaternion Quaternion::inverse() const {
  double n2 = norm2();
  if (n2 == 0.0) throw Error("inverse of the zero quaternion");
  return conj() * (1.0 / n2);
}

Quaternion Quaternion::normalized() const {
  double n = norm();
  if (n == 0.0) throw Error("cannot normalize the zero quaternion");
  return *this * (1.0 / n);
}

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

Quaternion quat_exp(const Quaternion& a) {
  double t = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
  double ew = std::exp(a.w);
  double s = (t < 1e-8) ? 1.0 - t * t / 6.0 : std::sin(t) / t;
  return {ew * std::cos(t), ew * s * a.x, ew * s * a.y, ew * s * a.z};
}

Eigen::Matrix4d left_matrix(const Quaternion& p) {
  Eigen::Matrix4d m;
  m << p.w, -p.x, -p.y, -p.z,
       p.x, p.w, -p.z, p.y,
       p.y, p.z, p.w, -p.x,
       p.z, -p.y, p.x, p.w;
  return m;
}

Eigen::Matrix4d right_matrix(const Quaternion& p) {
  Eigen::Matrix4d m;
  m << p.w, -p.x, -p.y, -p.z,
       p.x, p.w, p.z, -p.y,
       p.y, -p.z, p.w, p.x,
       p.z, p.y, -p.x, p.w;
  return m;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << "(" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ")";
}

}  // namespace g2
