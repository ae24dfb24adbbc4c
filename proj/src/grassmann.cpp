#include "g2/grassmann.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace g2 {

namespace {

Mat73 qr_positive(const Mat73& m) {
  Eigen::HouseholderQR<Mat73> qr(m);
  Mat73 q = qr.householderQ() * Mat73::Identity();
  Eigen::Matrix3d r = qr.matrixQR().topRows<3>().triangularView<Eigen::Upper>();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(r(i, i)) < 1e-14 * std::max(1.0, m.norm()))
      throw Error("frame is rank deficient");
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

void require_associative(const OrientedPlane3& L, const G2Structure& s, const char* who) {
  double d = chi_defect(L, s);
  if (!(d < 1e-8) || calibration_value(L, s) < 0)
    throw Error(std::string(who) + ": plane is not associative (chi defect " + std::to_string(d) + ")");
}

}  // namespace

OrientedPlane3::OrientedPlane3(const Mat73& frame, double tol) : frame_(frame) {
  if (!frame.allFinite()) throw Error("frame has non-finite entries");
  double err = (frame.transpose() * frame - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (err > tol) throw Error("frame is not orthonormal (deviation " + std::to_string(err) + ")");
}

OrientedPlane3 OrientedPlane3::orthonormalize(const Mat73& m) { return OrientedPlane3(qr_positive(m)); }

OrientedPlane3 OrientedPlane3::coordinate(int a, int b, int c) {
  Mat73 f = Mat73::Zero();
  int idx[3] = {a, b, c};
  for (int t = 0; t < 3; ++t) {
    if (idx[t] < 1 || idx[t] > 7) throw Error("coordinate plane index out of range");
    f(idx[t] - 1, t) = 1.0;
  }
  return OrientedPlane3(f);
}

OrientedPlane3 OrientedPlane3::flipped() const {
  Mat73 f = frame_;
  f.col(0).swap(f.col(1));
  return OrientedPlane3(f);
}

Mat74 OrientedPlane3::complement() const {
  Eigen::HouseholderQR<Mat73> qr(frame_);
  Mat7 q = qr.householderQ() * Mat7::Identity();
  return q.rightCols<4>();
}

double OrientedPlane3::distance(const OrientedPlane3& o) const {
  return (projector() - o.projector()).norm();
}

Eigen::Matrix<double, 12, 1> GrassTangent::vec() const {
  Eigen::Matrix<double, 12, 1> t;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 4; ++a) t[4 * i + a] = B(i, a);
  return t;
}

GrassTangent GrassTangent::from_vec(const Eigen::Matrix<double, 12, 1>& t) {
  GrassTangent g;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 4; ++a) g.B(i, a) = t[4 * i + a];
  return g;
}

double calibration_value(const OrientedPlane3& L, const G2Structure& s) {
  return s.phi_value(L.column(0), L.column(1), L.column(2));
}

Vec7 chi_vector(const OrientedPlane3& L, const G2Structure& s) {
  return chi(L.column(0), L.column(1), L.column(2), s);
}

double chi_defect(const OrientedPlane3& L, const G2Structure& s) {
  Vec7 c = chi_vector(L, s);
  return std::sqrt(c.dot(s.metric() * c));
}

OrientedPlane3 random_plane(Rng& rng) {
  return OrientedPlane3::orthonormalize(rng.normal_matrix(7, 3));
}

OrientedPlane3 random_plane(std::uint64_t seed) {
  Rng rng(seed);
  return random_plane(rng);
}

OrientedPlane3 random_associative_plane(Rng& rng, const G2Structure& s) {
  Mat73 m;
  Vec7 a = rng.normal_vector(7);
  Vec7 b = rng.normal_vector(7);
  a.normalize();
  b -= a.dot(b) * a;
  b.normalize();
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = cross(a, b, s);
  return OrientedPlane3::orthonormalize(m);
}

OrientedPlane3 plane_at_defect(const OrientedPlane3& base, const Mat73& direction, double target,
                               const G2Structure& s) {
  const Mat73& F = base.frame();
  Mat73 Z = direction - F * (F.transpose() * direction);
  double zn = Z.norm();
  // roundoff left over from a vertical direction is not a direction
  if (zn <= 1e-12 * direction.norm() || zn == 0.0)
    throw Error("plane_at_defect: direction has no horizontal part");
  Z /= zn;
  auto defect_at = [&](double t) {
    return chi_defect(OrientedPlane3::orthonormalize(F + t * Z), s) - target;
  };
  double f0 = defect_at(0.0);
  if (f0 >= 0.0) throw Error("plane_at_defect: base plane already exceeds the target defect");
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int i = 1; i <= 1000; ++i) {
    double t = 0.02 * i;
    if (defect_at(t) >= 0.0) {
      hi = t;
      lo = 0.02 * (i - 1);
      found = true;
      break;
    }
  }
  if (!found) throw Error("plane_at_defect: target defect not reached along this direction");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (defect_at(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return OrientedPlane3::orthonormalize(F + hi * Z);
}

Mat73 defect_gradient(const OrientedPlane3& L, const G2Structure& s) {
  const Vec7 f1 = L.column(0), f2 = L.column(1), f3 = L.column(2);
  // f = |chi|^2_g = 4 T^T G^{-1} T with T = *phi(f1, f2, f3, .)
  Vec7 y = s.metric_inverse() * s.star_phi_contract(f1, f2, f3);
  Mat73 g;
  g.col(0) = -8.0 * s.star_phi_contract(f2, f3, y);
  g.col(1) = 8.0 * s.star_phi_contract(f1, f3, y);
  g.col(2) = -8.0 * s.star_phi_contract(f1, f2, y);
  return g;
}

ProjectionResult project_to_associative(const OrientedPlane3& start, const ProjectionOptions& opts,
                                        const G2Structure& s) {
  if (!(opts.tol > 0.0) || !(opts.step > 0.0) || opts.max_iter < 0)
    throw Error("project_to_associative: invalid options");
  ProjectionResult res{start, 0, chi_defect(start, s), {}};
  res.trace.push_back({0, res.defect, 0.0});
  if (res.defect > opts.basin_threshold)
    throw ProjectionError(ProjectionError::Reason::OutsideBasin, res,
                          "start plane defect " + std::to_string(res.defect) +
                              " exceeds the basin threshold " + std::to_string(opts.basin_threshold));
  double t = opts.step;
  while (res.defect >= opts.tol) {
    if (res.iterations >= opts.max_iter)
      throw ProjectionError(ProjectionError::Reason::MaxIterations, res,
                            "projection did not converge in " + std::to_string(opts.max_iter) +
                                " iterations (defect " + std::to_string(res.defect) + ")");
    const Mat73& F = res.plane.frame();
    Mat73 g = defect_gradient(res.plane, s);
    Mat73 xi = g - F * (F.transpose() * g);
    double xi2 = xi.squaredNorm();
    double f = res.defect * res.defect;
    bool accepted = false;
    t = std::min(2.0 * t, opts.step);
    for (int bt = 0; bt < 60 && xi2 > 0.0; ++bt, t *= 0.5) {
      OrientedPlane3 trial = OrientedPlane3::orthonormalize(F - t * xi);
      double d = chi_defect(trial, s);
      if (d * d <= f - opts.armijo * t * xi2 && d <= res.defect) {
        res.plane = trial;
        res.defect = d;
        accepted = true;
        break;
      }
    }
    ++res.iterations;
    if (!accepted)
      throw ProjectionError(ProjectionError::Reason::MaxIterations, res,
                            "line search stalled at defect " + std::to_string(res.defect));
    res.trace.push_back({res.iterations, res.defect, t});
  }
  return res;
}

Eigen::Matrix<double, 4, 12> chi_jacobian(const OrientedPlane3& L, const Mat74& N,
                                          const G2Structure& s) {
  Eigen::Matrix<double, 4, 12> J;
  Vec7 f[3] = {L.column(0), L.column(1), L.column(2)};
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 4; ++a) {
      Vec7 g[3] = {f[0], f[1], f[2]};
      g[i] = N.col(a);
      Vec7 d = chi(g[0], g[1], g[2], s);
      J.col(4 * i + a) = N.transpose() * (s.metric() * d);
    }
  }
  return J;
}

int dchi_rank(const OrientedPlane3& L, const G2Structure& s, double tol) {
  require_associative(L, s, "dchi_rank");
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 12>> svd(chi_jacobian(L, L.complement(), s));
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  return rank;
}

AdaptedFrame AdaptedFrame::complete(const OrientedPlane3& L, const Splitting& split) {
  const G2Structure& s = G2Structure::standard();
  require_associative(L, s, "AdaptedFrame");
  // A G2 element is fixed by the images of e1, e2 and a unit e4 orthogonal to both
  // and to e1 x e2; the remaining basis vectors are cross products of these.
  Mat7 std_frame = split.frame();
  Vec7 n = L.complement().col(0);
  Vec7 img[7];
  img[0] = L.column(0) * split.sign[0];
  img[1] = L.column(1) * split.sign[1];
  img[3] = n * split.sign[3];
  auto product_image = [&](int p, int q, int m) {
    double c = cross(Vec7::Unit(p), Vec7::Unit(q), s)[m];
    return Vec7(c * cross(img[p], img[q], s));
  };
  img[2] = product_image(0, 1, 2);
  img[4] = product_image(0, 3, 4);
  img[5] = product_image(1, 3, 5);
  img[6] = product_image(2, 3, 6);
  Mat7 g;
  for (int m = 0; m < 7; ++m) g.col(m) = img[m];
  return from_columns(g * std_frame, split);
}

AdaptedFrame AdaptedFrame::from_columns(const Mat7& columns, const Splitting& split) {
  if ((columns.transpose() * columns - Mat7::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("adapted frame is not orthonormal");
  Mat7 g = columns * split.frame().transpose();
  KForm p = phi0();
  double defect = (pullback(p, g) - p).max_abs();
  if (defect > 1e-10)
    throw Error("frame is not adapted: G2 pullback defect " + std::to_string(defect));
  return AdaptedFrame(columns, split);
}

OrientedPlane3 AdaptedFrame::plane() const { return OrientedPlane3(cols_.leftCols<3>(), 1e-10); }

Mat73 AdaptedFrame::variation(const GrassTangent& t) const {
  return normal() * t.B.transpose();
}

GrassTangent AdaptedFrame::tangent(const Mat73& variation) const {
  GrassTangent t;
  t.B = (normal().transpose() * variation).transpose();
  return t;
}

Quaternion tangent_beta(const AdaptedFrame&, const GrassTangent& t) {
  const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
  Quaternion out;
  for (int i = 0; i < 3; ++i) out += Quaternion::from_vec(t.B.row(i).transpose()) * units[i];
  return out;
}

Quaternion tangent_beta(const OrientedPlane3& L, const GrassTangent& t, const Splitting& split) {
  return tangent_beta(AdaptedFrame::complete(L, split), t);
}

Eigen::Matrix<double, 4, 12> beta_matrix() {
  Eigen::Matrix<double, 4, 12> m;
  const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
  for (int i = 0; i < 3; ++i) m.block<4, 4>(0, 4 * i) = right_matrix(units[i]);
  return m;
}

Quaternion clifford_c(const Eigen::Vector3d& a, const Quaternion& v, CliffordSide side) {
  Quaternion q = Quaternion::pure(a);
  return side == CliffordSide::Plus ? -(q.conj() * v) : q * v;
}

CliffordTensor clifford_tensor(const std::vector<std::pair<Eigen::Vector3d, Quaternion>>& terms) {
  CliffordTensor t{};
  for (const auto& [a, v] : terms)
    for (int j = 0; j < 3; ++j) t[j] += a[j] * v;
  return t;
}

Quaternion clifford_c(const CliffordTensor& t, CliffordSide side) {
  Quaternion out;
  for (int j = 0; j < 3; ++j) out += clifford_c(Eigen::Vector3d::Unit(j), t[j], side);
  return out;
}

CliffordTensor pi_phi(const CliffordTensor& t) {
  Quaternion cv = clifford_c(t, CliffordSide::Minus);
  CliffordTensor out = t;
  for (int j = 0; j < 3; ++j)
    out[j] += (1.0 / 3.0) * clifford_c(Eigen::Vector3d::Unit(j), cv, CliffordSide::Minus);
  return out;
}

Eigen::Matrix<double, 12, 1> tensor_vec(const CliffordTensor& t) {
  Eigen::Matrix<double, 12, 1> v;
  for (int j = 0; j < 3; ++j) v.segment<4>(4 * j) = t[j].vec();
  return v;
}

CliffordTensor tensor_from_vec(const Eigen::Matrix<double, 12, 1>& v) {
  CliffordTensor t;
  for (int j = 0; j < 3; ++j) t[j] = Quaternion::from_vec(v.segment<4>(4 * j));
  return t;
}

Eigen::Matrix<double, 12, 12> pi_phi_matrix() {
  Eigen::Matrix<double, 12, 12> m;
  for (int c = 0; c < 12; ++c)
    m.col(c) = tensor_vec(pi_phi(tensor_from_vec(Eigen::Matrix<double, 12, 1>::Unit(c))));
  return m;
}

Eigen::Matrix<double, 4, 12> clifford_matrix(CliffordSide side) {
  Eigen::Matrix<double, 4, 12> m;
  for (int c = 0; c < 12; ++c)
    m.col(c) = clifford_c(tensor_from_vec(Eigen::Matrix<double, 12, 1>::Unit(c)), side).vec();
  return m;
}

CliffordTensor to_clifford_tensor(const GrassTangent& t) {
  CliffordTensor out;
  for (int i = 0; i < 3; ++i) out[i] = Quaternion::from_vec(t.B.row(i).transpose()).conj();
  return out;
}

GrassTangent from_clifford_tensor(const CliffordTensor& t) {
  GrassTangent g;
  for (int i = 0; i < 3; ++i) g.B.row(i) = t[i].conj().vec().transpose();
  return g;
}

}  // namespace g2
