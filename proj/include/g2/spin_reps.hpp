#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "g2/calibration.hpp"
#include "g2/octonion.hpp"
#include "g2/quaternion.hpp"
#include "g2/random.hpp"

namespace g2 {

// [q, lambda] in (SU(2) x SU(2)) / Z2.
struct Spin4Element {
  Quaternion q = Quaternion::one();
  Quaternion lambda = Quaternion::one();

  Spin4Element() = default;
  Spin4Element(const Quaternion& q_, const Quaternion& lambda_);
  static Spin4Element random(Rng& rng);
  Spin4Element operator*(const Spin4Element& o) const { return {q * o.q, lambda * o.lambda}; }
};

// [q, lambda, t] in (SU(2) x SU(2) x S^1) / Z2.
struct SpinC4Element {
  Quaternion q = Quaternion::one();
  Quaternion lambda = Quaternion::one();
  std::complex<double> t = 1.0;

  SpinC4Element() = default;
  SpinC4Element(const Quaternion& q_, const Quaternion& lambda_, std::complex<double> t_);
  static SpinC4Element random(Rng& rng);
  SpinC4Element operator*(const SpinC4Element& o) const {
    return {q * o.q, lambda * o.lambda, t * o.t};
  }
};

enum class RepName { V, LambdaPlus, LambdaMinus, S, E, VPlus, VMinus, AdVPlus, AdVMinus, L };

RepName parse_rep_name(std::string_view name);
std::string_view rep_name_string(RepName name);

// Real matrices in the bases (1,i,j,k) of H, (i,j,k) of im(H) and (1,i) of C.
struct RepMatrix {
  RepName name;
  Eigen::MatrixXd matrix;
};

// V: x -> q x lambda^-1; lambda+/adV+: x -> q x q^-1 on im(H); lambda-/adV-:
// x -> lambda x lambda^-1; S: y -> q y; E: y -> y lambda^-1;
// V+: y -> q y t^-1; V-: y -> lambda y t^-1; L: y -> y t^2.
RepMatrix rep(RepName name, const Spin4Element& g);
RepMatrix rep(RepName name, const SpinC4Element& g);
RepMatrix rep(std::string_view name, const Spin4Element& g);
RepMatrix rep(std::string_view name, const SpinC4Element& g);

// SO(4) inside G2 acting as lambda+(q) on im(H) and V(q, lambda) on H.
// Which coordinate on H carries V is decided once, by testing which placement
// preserves phi0.
class So4Embedding {
 public:
  enum class Placement { ImagPlusConj, ImagPlusDirect, ImagMinusConj, ImagMinusDirect };

  static const So4Embedding& standard();
  static So4Embedding resolve(const Splitting& split);

  Mat7 group(const Spin4Element& g) const;
  Mat7 algebra(const Quaternion& aq, const Quaternion& al) const;
  Placement placement() const { return placement_; }
  std::string placement_description() const;

 private:
  So4Embedding(const Splitting& split, Placement p) : split_(split), placement_(p) {}
  Mat7 in_frame(const Eigen::Matrix3d& im_block, const Eigen::Matrix4d& h_block) const;

  Splitting split_;
  Placement placement_;
};

Mat7 embed_so4_g2(const Spin4Element& g, const Splitting& split = standard_splitting());
Mat7 so4_in_g2_algebra(const Quaternion& aq, const Quaternion& al,
                       const Splitting& split = standard_splitting());

// Largest coefficient of A^* phi - phi.
double pullback_defect(const Mat7& A, const G2Structure& s = G2Structure::standard());

struct G2Algebra {
  // Antisymmetric matrices sum_{a<b} c_ab (E_ab - E_ba) with orthonormal c.
  std::vector<Mat7> basis;
  // Singular values of the so(7) -> Lambda^3 map, descending.
  Eigen::VectorXd singular_values;
  // Ratio between the smallest nonzero and largest "zero" singular value.
  double gap = 0.0;
};

// Matrix of A -> (d/dt) exp(tA)^* phi over the basis E_ab - E_ba (a<b).
Eigen::MatrixXd stabilizer_map(const G2Structure& s = G2Structure::standard());
G2Algebra g2_lie_algebra(const G2Structure& s = G2Structure::standard());
Eigen::Matrix<double, 21, 1> so7_coords(const Mat7& A);
Mat7 so7_from_coords(const Eigen::Matrix<double, 21, 1>& c);
// Norm of the component of A orthogonal to span(basis), in so7 coordinates.
double g2_complement_norm(const Mat7& A, const G2Algebra& g2);
// 14 rows of 21 upper-triangular entries, with header a12,a13,...,a67.
std::string g2_basis_csv(const G2Algebra& g2);

// (1/2)(-x1 conj(x2) + x2 conj(x1)) y.
Quaternion lambda2_action(const Quaternion& x1, const Quaternion& x2, const Quaternion& y);
// Im(x2 conj(x1)) z y.
Quaternion q_form_action(const Quaternion& x1, const Quaternion& x2, const Quaternion& y,
                         const Quaternion& z);

// -(1/2) (x i conj(y)) i.
Quaternion sigma(const Quaternion& x, const Quaternion& y);

// Imaginary part of sigma(v, v) read as the 2-form s_i e23 + s_j e31 + s_k e12,
// Hodge-dualized to a 1-form in the coframe of `frame` and returned in
// ambient coordinates. The real part of sigma is dropped.
Eigen::Vector3d mu(const Quaternion& v, const Eigen::Matrix3d& frame = Eigen::Matrix3d::Identity());
// Polarization: mu_pair(x, x) = mu(x).
Eigen::Vector3d mu_pair(const Quaternion& x, const Quaternion& y);

// Element w = (a (x) v, x, y) of the tangent space used by the Dirac action.
struct RhoVector {
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Quaternion v;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Quaternion y;
};

using SpinorPair = std::pair<Quaternion, Quaternion>;

// w.(z1, z2) = (conj(a) v z2 + conj(x) v0 z2 + y z2,
//               -conj(v) a z1 - conj(v0) x z1 - conj(y) z1),  v0 = a(xi0) v.
SpinorPair dirac_action_rho(const RhoVector& w, const SpinorPair& z,
                            const Eigen::Vector3d& xi0 = Eigen::Vector3d::Unit(0));
// The action factors through P = conj(a) v + conj(x) v0 + y and squares to -|P|^2;
// this is the quadratic form |w|^2 for which rho(w)^2 = -|w|^2.
double rho_norm2(const RhoVector& w, const Eigen::Vector3d& xi0 = Eigen::Vector3d::Unit(0));

Quaternion random_quaternion(Rng& rng);
Quaternion random_unit_quaternion(Rng& rng);
Quaternion random_imaginary(Rng& rng);

}  // namespace g2
