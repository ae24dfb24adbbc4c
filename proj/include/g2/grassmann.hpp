#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "g2/calibration.hpp"
#include "g2/error.hpp"
#include "g2/octonion.hpp"
#include "g2/quaternion.hpp"
#include "g2/random.hpp"

namespace g2 {

using Mat73 = Eigen::Matrix<double, 7, 3>;
using Mat74 = Eigen::Matrix<double, 7, 4>;

// Oriented 3-plane in R^7 given by a Euclidean-orthonormal frame; the column
// order fixes the orientation.
class OrientedPlane3 {
 public:
  explicit OrientedPlane3(const Mat73& frame, double tol = 1e-12);

  // Thin QR with positive diagonal; orientation follows the column order of m.
  static OrientedPlane3 orthonormalize(const Mat73& m);
  // span(e_a, e_b, e_c) for 1-based indices.
  static OrientedPlane3 coordinate(int a, int b, int c);

  const Mat73& frame() const { return frame_; }
  Vec7 column(int i) const { return frame_.col(i); }
  OrientedPlane3 flipped() const;
  Mat7 projector() const { return frame_ * frame_.transpose(); }
  // Orthonormal basis of the orthogonal complement (deterministic).
  Mat74 complement() const;
  // Frobenius distance between orthogonal projectors.
  double distance(const OrientedPlane3& o) const;

 private:
  Mat73 frame_;
};

// Tangent vector of G(3,7) in an adapted frame: B(i, a) is the component of the
// variation of the i-th plane vector along the a-th complement vector.
struct GrassTangent {
  Eigen::Matrix<double, 3, 4> B = Eigen::Matrix<double, 3, 4>::Zero();

  // Coordinates t = 4 i + a.
  Eigen::Matrix<double, 12, 1> vec() const;
  static GrassTangent from_vec(const Eigen::Matrix<double, 12, 1>& t);
};

double calibration_value(const OrientedPlane3& L, const G2Structure& s = G2Structure::standard());
Vec7 chi_vector(const OrientedPlane3& L, const G2Structure& s = G2Structure::standard());
double chi_defect(const OrientedPlane3& L, const G2Structure& s = G2Structure::standard());

OrientedPlane3 random_plane(Rng& rng);
OrientedPlane3 random_plane(std::uint64_t seed);
// span(f1, f2, f1 x f2) for a random orthonormal pair.
OrientedPlane3 random_associative_plane(Rng& rng, const G2Structure& s = G2Structure::standard());

// Moves from `base` along the horizontal part of `direction` until chi_defect
// equals `target` (bisection). Throws if the target is never reached.
OrientedPlane3 plane_at_defect(const OrientedPlane3& base, const Mat73& direction, double target,
                               const G2Structure& s = G2Structure::standard());

// Euclidean gradient of chi_defect^2 with respect to the frame.
Mat73 defect_gradient(const OrientedPlane3& L, const G2Structure& s = G2Structure::standard());

struct ProjectionOptions {
  double step = 0.5;     // initial trial step of the line search
  double tol = 1e-8;     // target chi_defect
  int max_iter = 500;
  double basin_threshold = 0.5;  // set to infinity to disable
  double armijo = 1e-4;
};

struct ProjectionStep {
  int iteration;
  double defect;
  double step;
};

struct ProjectionResult {
  OrientedPlane3 plane;
  int iterations = 0;
  double defect = 0.0;
  std::vector<ProjectionStep> trace;
};

class ProjectionError : public Error {
 public:
  enum class Reason { OutsideBasin, MaxIterations };
  ProjectionError(Reason reason, ProjectionResult best, const std::string& what)
      : Error(what), reason_(reason), best_(std::move(best)) {}
  Reason reason() const { return reason_; }
  const ProjectionResult& best() const { return best_; }
  double defect() const { return best_.defect; }

 private:
  Reason reason_;
  ProjectionResult best_;
};

// Riemannian gradient descent of chi_defect^2 with QR retraction and Armijo
// backtracking.
ProjectionResult project_to_associative(const OrientedPlane3& start,
                                        const ProjectionOptions& opts = {},
                                        const G2Structure& s = G2Structure::standard());

// Jacobian of chi at L over tangent directions N_a e_i^T (column 4 i + a),
// with rows the components along N. N defaults to L.complement().
Eigen::Matrix<double, 4, 12> chi_jacobian(const OrientedPlane3& L, const Mat74& N,
                                          const G2Structure& s = G2Structure::standard());
int dchi_rank(const OrientedPlane3& L, const G2Structure& s = G2Structure::standard(),
              double tol = 1e-8);

// Orthonormal frame (c1..c7) = g(standard split frame) for some g in G2: the
// first three columns span an associative plane and map to i, j, k; the last
// four span its complement and map to 1, i, j, k.
class AdaptedFrame {
 public:
  static AdaptedFrame complete(const OrientedPlane3& L,
                               const Splitting& split = standard_splitting());
  static AdaptedFrame from_columns(const Mat7& columns,
                                   const Splitting& split = standard_splitting());

  const Mat7& columns() const { return cols_; }
  const Splitting& splitting() const { return split_; }
  OrientedPlane3 plane() const;
  Mat74 normal() const { return cols_.rightCols<4>(); }

  Mat73 variation(const GrassTangent& t) const;
  GrassTangent tangent(const Mat73& variation) const;

 private:
  AdaptedFrame(const Mat7& cols, const Splitting& split) : cols_(cols), split_(split) {}
  Mat7 cols_;
  Splitting split_;
};

// beta_1 i + beta_2 j + beta_3 k with beta_i the i-th row of B as a quaternion.
Quaternion tangent_beta(const AdaptedFrame& frame, const GrassTangent& t);
Quaternion tangent_beta(const OrientedPlane3& L, const GrassTangent& t,
                        const Splitting& split = standard_splitting());
Eigen::Matrix<double, 4, 12> beta_matrix();

enum class CliffordSide { Plus, Minus };

// -conj(a) v on the plus side, a v on the minus side, a an imaginary quaternion.
Quaternion clifford_c(const Eigen::Vector3d& a, const Quaternion& v, CliffordSide side);

// Element of Hom(plane, H): component j pairs with the j-th coframe vector.
using CliffordTensor = std::array<Quaternion, 3>;

CliffordTensor clifford_tensor(const std::vector<std::pair<Eigen::Vector3d, Quaternion>>& terms);
Quaternion clifford_c(const CliffordTensor& t, CliffordSide side = CliffordSide::Minus);
CliffordTensor pi_phi(const CliffordTensor& t);
Eigen::Matrix<double, 12, 1> tensor_vec(const CliffordTensor& t);
CliffordTensor tensor_from_vec(const Eigen::Matrix<double, 12, 1>& v);
Eigen::Matrix<double, 12, 12> pi_phi_matrix();
Eigen::Matrix<double, 4, 12> clifford_matrix(CliffordSide side = CliffordSide::Minus);

// Adapted identification of tangent vectors with tensors: row i of B goes to
// the conjugate quaternion on the i-th coframe vector.
CliffordTensor to_clifford_tensor(const GrassTangent& t);
GrassTangent from_clifford_tensor(const CliffordTensor& t);

}  // namespace g2
