#include "g2/calibration.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "g2/error.hpp"

namespace g2 {

namespace {

double det3(const Vec7& a, const Vec7& b, const Vec7& c, int i, int j, int k) {
  return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
         a[k] * (b[i] * c[j] - b[j] * c[i]);
}

// Scale so that the bilinear form of phi0 (a multiple of the identity) maps to it.
double normalization() {
  static const double kappa = [] {
    Mat7 b = phi_bilinear(phi0());
    return std::pow(std::abs(b.determinant()), 1.0 / 9.0) / b(0, 0);
  }();
  return kappa;
}

}  // namespace

KForm phi0() {
  KForm f(7, 3);
  f.set({1, 2, 3}, 1.0);
  f.set({1, 4, 5}, 1.0);
  f.set({1, 6, 7}, 1.0);
  f.set({2, 4, 6}, 1.0);
  f.set({2, 5, 7}, -1.0);
  f.set({3, 4, 7}, -1.0);
  f.set({3, 5, 6}, -1.0);
  return f;
}

Mat7 phi_bilinear(const KForm& phi) {
  if (phi.dimension() != 7 || phi.degree() != 3) throw Error("expected a 3-form on R^7");
  std::vector<KForm> contractions;
  for (int i = 0; i < 7; ++i) contractions.push_back(interior(Vec7::Unit(i), phi));
  Mat7 b;
  for (int i = 0; i < 7; ++i) {
    KForm left = wedge(contractions[i], phi);
    for (int j = i; j < 7; ++j) {
      double v = wedge(contractions[j], left).coeff_by_mask(0x7f);
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  return b;
}

Mat7 metric_from_phi(const KForm& phi) {
  Mat7 b = phi_bilinear(phi);
  Eigen::SelfAdjointEigenSolver<Mat7> es(b);
  const auto& ev = es.eigenvalues();
  double scale = ev.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error("phi not of G2 type");
  int sign = ev[0] > 0 ? 1 : -1;
  for (int i = 0; i < 7; ++i)
    if (sign * ev[i] <= 1e-12 * scale) throw Error("phi not of G2 type");
  double det = std::abs(b.determinant());
  return (normalization() * sign * std::pow(det, -1.0 / 9.0)) * b;
}

G2Structure::G2Structure(KForm phi, Mat7 metric, int orientation)
    : phi_(std::move(phi)), metric_(metric), orientation_(orientation) {
  metric_inv_ = metric_.inverse();
  volume_ = KForm::volume(7) * (orientation_ * std::sqrt(metric_.determinant()));
  star_phi_ = hodge(phi_, metric_, orientation_);
  for (const auto& t : phi_.terms())
    phi_terms_.push_back({t.indices[0] - 1, t.indices[1] - 1, t.indices[2] - 1, t.value});
  for (const auto& t : star_phi_.terms())
    star_terms_.push_back(
        {t.indices[0] - 1, t.indices[1] - 1, t.indices[2] - 1, t.indices[3] - 1, t.value});
}

const G2Structure& G2Structure::standard() {
  static const G2Structure s = from_phi(phi0());
  return s;
}

G2Structure G2Structure::from_phi(const KForm& phi) {
  Mat7 b = phi_bilinear(phi);
  Mat7 g = metric_from_phi(phi);
  // A negative-definite bilinear form means phi induces the opposite orientation.
  int orientation = b.trace() > 0 ? 1 : -1;
  return G2Structure(phi, g, orientation);
}

G2Structure G2Structure::from_parts(const KForm& phi, const Mat7& metric, int orientation) {
  if (orientation != 1 && orientation != -1) throw Error("orientation must be +1 or -1");
  Mat7 derived = metric_from_phi(phi);
  if ((derived - metric).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("metric is inconsistent with phi");
  int expected = phi_bilinear(phi).trace() > 0 ? 1 : -1;
  if (expected != orientation) throw Error("orientation is inconsistent with phi");
  return G2Structure(phi, metric, orientation);
}

double G2Structure::phi_value(const Vec7& u, const Vec7& v, const Vec7& w) const {
  double total = 0.0;
  for (const auto& t : phi_terms_) total += t.c * det3(u, v, w, t.i, t.j, t.k);
  return total;
}

Vec7 G2Structure::phi_contract(const Vec7& u, const Vec7& v) const {
  Vec7 out = Vec7::Zero();
  for (const auto& t : phi_terms_) {
    // phi(u, v, e_m) for m in {i,j,k}, by cofactor expansion along the last column
    out[t.k] += t.c * (u[t.i] * v[t.j] - u[t.j] * v[t.i]);
    out[t.j] -= t.c * (u[t.i] * v[t.k] - u[t.k] * v[t.i]);
    out[t.i] += t.c * (u[t.j] * v[t.k] - u[t.k] * v[t.j]);
  }
  return out;
}

Vec7 G2Structure::star_phi_contract(const Vec7& u, const Vec7& v, const Vec7& w) const {
  Vec7 out = Vec7::Zero();
  for (const auto& t : star_terms_) {
    out[t.l] += t.c * det3(u, v, w, t.i, t.j, t.k);
    out[t.k] -= t.c * det3(u, v, w, t.i, t.j, t.l);
    out[t.j] += t.c * det3(u, v, w, t.i, t.k, t.l);
    out[t.i] -= t.c * det3(u, v, w, t.j, t.k, t.l);
  }
  return out;
}

Vec7 cross(const Vec7& u, const Vec7& v, const G2Structure& s) {
  return s.metric_inverse() * s.phi_contract(u, v);
}

Vec7 chi(const Vec7& u, const Vec7& v, const Vec7& w, const G2Structure& s) {
  return 2.0 * (s.metric_inverse() * s.star_phi_contract(u, v, w));
}

double associator_defect(const Vec7& u, const Vec7& v, const Vec7& w, const G2Structure& s) {
  const Mat7& g = s.metric();
  Eigen::Matrix3d gram;
  const Vec7* f[3] = {&u, &v, &w};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) gram(a, b) = f[a]->dot(g * *f[b]);
  double p = s.phi_value(u, v, w);
  Vec7 c = chi(u, v, w, s);
  return p * p + 0.25 * c.dot(g * c) - gram.determinant();
}

}  // namespace g2
