#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "g2/quaternion.hpp"
#include "g2/torus/fourier.hpp"

namespace g2::torus {

// Fiber dimensions used on T^3.
inline constexpr int kFunction = 1;
inline constexpr int kWSpinor = 2;   // (z, w) with x = z + j w
inline constexpr int kOneForm = 3;
inline constexpr int kNuSpinor = 4;  // quaternion components (1, i, j, k)
inline constexpr int kTwistForm = 9; // component 3 a + c: direction a, im(H) component c

enum class Twist { Abelian, So4 };

// Connection data on T^3. The abelian part is A = i alpha with alpha a real
// 1-form: a constant holonomy plus a zero-mean fluctuation. The so4 part is a
// pair of im(H)-valued 1-forms (a, b) acting on nu-spinors by v -> a v - v b,
// split the same way into constants and fluctuations.
struct Connection {
  Eigen::Vector3d holonomy = Eigen::Vector3d::Zero();
  FourierSection fluctuation;  // fiber kOneForm, real, zero mean; may be empty
  std::array<Eigen::Vector3d, 3> s_constant{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                            Eigen::Vector3d::Zero()};
  std::array<Eigen::Vector3d, 3> e_constant{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                            Eigen::Vector3d::Zero()};
  FourierSection s_fluctuation;  // fiber kTwistForm, real, zero mean; may be empty
  FourierSection e_fluctuation;  // fiber kTwistForm, real, zero mean; may be empty

  static Connection flat(const Eigen::Vector3d& holonomy);
  bool is_flat() const;
  // Largest cutoff among the fluctuations (0 when flat).
  int cutoff() const;
  // Throws if a fluctuation has a constant mode or is not real.
  void validate() const;

  // alpha as a single real 1-form with the holonomy in the constant mode.
  FourierSection abelian_form(int cutoff) const;
  // (a, b) as fiber-9 real sections with constants in mode 0.
  FourierSection s_form(int cutoff) const;
  FourierSection e_form(int cutoff) const;
};

// Clifford multiplication by e_a on W = C^2, i.e. left multiplication by
// i, j, k written in (z, w).
const Eigen::Matrix2cd& w_clifford(int axis);
// Real 4x4 matrices on nu: left multiplication by e_a, and left/right
// multiplication by a quaternion with complex coefficients.
Eigen::Matrix4cd nu_left(const Eigen::Vector4cd& q);
Eigen::Matrix4cd nu_right(const Eigen::Vector4cd& q);

// Quaternion <-> (z, w) with x = z + j w.
Quaternion quaternion_from_w(const cplx& z, const cplx& w);
std::pair<cplx, cplx> w_from_quaternion(const Quaternion& q);

// Linear operator between Fourier sections with equal cutoffs, stored per
// mode when it commutes with translations and densely otherwise.
class SpectralOperator {
 public:
  static SpectralOperator block_diagonal(int cutoff, int in_fiber, int out_fiber,
                                         std::vector<Eigen::MatrixXcd> blocks);
  static SpectralOperator dense(int cutoff, int in_fiber, int out_fiber, Eigen::MatrixXcd m);

  int cutoff() const { return K_; }
  int in_fiber() const { return in_f_; }
  int out_fiber() const { return out_f_; }
  int rows() const;
  int cols() const;
  bool is_block_diagonal() const { return !blocks_.empty(); }
  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }

  Eigen::MatrixXcd to_dense() const;
  FourierSection apply(const FourierSection& s) const;

  // max |M - M^*|
  double hermitian_defect() const;
  // Ascending; throws unless Hermitian to 1e-10.
  Eigen::VectorXd eigenvalues() const;
  // (mode index, eigenvalue) pairs, per mode ascending; block-diagonal only.
  std::vector<std::pair<int, double>> mode_eigenvalues() const;
  // Ascending.
  Eigen::VectorXd singular_values() const;
  int kernel_dim(double tol) const;
  // Kernel dimension of the adjoint.
  int cokernel_dim(double tol) const;

 private:
  int K_ = 0, in_f_ = 0, out_f_ = 0;
  std::vector<Eigen::MatrixXcd> blocks_;
  Eigen::MatrixXcd dense_;
};

// Galerkin truncation of sum_a c(e_a)(d_a + A_a) to modes |k| <= K. With the
// abelian twist it acts on W-spinors, with the so4 twist on nu-spinors where
// the holonomy acts through right multiplication by i.
SpectralOperator build_dirac(int K, const Connection& A, Twist twist = Twist::Abelian);

// Exact D_A v; the output cutoff is v.cutoff() + A.cutoff().
FourierSection apply_dirac(const FourierSection& v, const Connection& A, Twist twist);

int kernel_dim(const Connection& A, double tol = 1e-8, int K = 4, Twist twist = Twist::Abelian);

// An im(H) + im(H) valued 1-form perturbing the so4 connection.
struct TwistField {
  FourierSection s;  // fiber kTwistForm, real, constants allowed
  FourierSection e;  // fiber kTwistForm, real, constants allowed
  int cutoff() const;
};

// D_{A0} v + alpha.v, with alpha.v = sum_a e_a (s_a v - v e_a). Exact.
FourierSection perturbed_dirac(const FourierSection& v, const Connection& A0, const TwistField& alpha);

// (f, a) -> (d^* a, df + *da) on fiber (f, a1, a2, a3).
SpectralOperator div_curl_op(int K);

// sqrt(sum_a ||d_a j + [b_a, j]||^2) for a unit im(H)-valued j (fiber 3, real)
// and the b-part of B. Throws if |j| deviates from 1 on a collocation grid.
double integrability_defect(const FourierSection& j, const Connection& B);

// Gauge transformation by a unit quaternion field g (fiber 4, real):
// j -> g j g^-1, b -> g b g^-1 - (dg) g^-1.
std::pair<FourierSection, Connection> integrability_gauge(const FourierSection& g,
                                                          const FourierSection& j,
                                                          const Connection& B);

// p x v for real p and complex v, computed componentwise (Eigen's complex
// cross product conjugates its result).
Eigen::Vector3cd cross_real(const Eigen::Vector3d& p, const Eigen::Vector3cd& v);

// Spectral derivatives.
FourierSection curl(const FourierSection& a);
FourierSection grad(const FourierSection& f);
FourierSection divergence(const FourierSection& a);

}  // namespace g2::torus
