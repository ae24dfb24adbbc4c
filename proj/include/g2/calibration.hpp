#pragma once

#include <vector>

#include <Eigen/Core>

#include "g2/exterior.hpp"

namespace g2 {

using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;

// The standard 3-form e123 + e145 + e167 + e246 - e257 - e347 - e356.
KForm phi0();

// Symmetric form B(u,v) = (i_u phi ^ i_v phi ^ phi) / e^{1..7}.
Mat7 phi_bilinear(const KForm& phi);

// Metric determined by a 3-form in the open orbit, normalized by a fixed power
// of |det B| so that phi0 gives the identity. Throws if B is not definite.
Mat7 metric_from_phi(const KForm& phi);

// A 3-form of G2 type together with everything derived from it.
class G2Structure {
 public:
  static const G2Structure& standard();
  // Derives metric and orientation from phi.
  static G2Structure from_phi(const KForm& phi);
  // Uses the supplied metric verbatim after checking it agrees with phi.
  static G2Structure from_parts(const KForm& phi, const Mat7& metric, int orientation);

  const KForm& phi() const { return phi_; }
  const Mat7& metric() const { return metric_; }
  const Mat7& metric_inverse() const { return metric_inv_; }
  const KForm& volume() const { return volume_; }
  const KForm& star_phi() const { return star_phi_; }
  // Sign of the volume form relative to e^{1..7}.
  int orientation() const { return orientation_; }

  // phi(u, v, w)
  double phi_value(const Vec7& u, const Vec7& v, const Vec7& w) const;
  // *phi(u, v, w, .) as coefficients of a 1-form
  Vec7 star_phi_contract(const Vec7& u, const Vec7& v, const Vec7& w) const;
  // phi(u, v, .)
  Vec7 phi_contract(const Vec7& u, const Vec7& v) const;

 private:
  G2Structure(KForm phi, Mat7 metric, int orientation);

  struct Term3 {
    int i, j, k;
    double c;
  };
  struct Term4 {
    int i, j, k, l;
    double c;
  };

  KForm phi_;
  Mat7 metric_;
  Mat7 metric_inv_;
  KForm volume_;
  KForm star_phi_;
  int orientation_ = 1;
  std::vector<Term3> phi_terms_;
  std::vector<Term4> star_terms_;
};

// Metric dual of phi(u, v, .): g(u x v, w) = phi(u, v, w).
Vec7 cross(const Vec7& u, const Vec7& v, const G2Structure& s);

// <chi(u,v,w), z> = 2 *phi(u,v,w,z). The factor 2 makes chi the octonion
// associator and gives phi^2 + |chi|^2/4 = |u^v^w|^2.
Vec7 chi(const Vec7& u, const Vec7& v, const Vec7& w, const G2Structure& s);

// phi(u,v,w)^2 + |chi(u,v,w)|^2/4 - |u^v^w|^2 (all norms from the metric).
double associator_defect(const Vec7& u, const Vec7& v, const Vec7& w, const G2Structure& s);

}  // namespace g2
