#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace g2 {

// Constant-coefficient k-form on R^n. Coefficients are stored densely by
// index bitmask (bit i-1 <-> e^i); only strictly increasing index tuples
// exist, so evaluation on repeated vectors is zero by construction.
class KForm {
 public:
  static constexpr int kMaxDimension = 12;

  struct Term {
    std::vector<int> indices;  // 1-based, strictly increasing
    double value;
  };

  KForm() = default;
  KForm(int dimension, int degree);

  // Monomial c * e^{i1...ik}. Indices are 1-based and may come in any order;
  // the sign of the sorting permutation is absorbed, repeats give zero.
  static KForm monomial(int dimension, std::initializer_list<int> indices, double c = 1.0);
  static KForm monomial(int dimension, std::span<const int> indices, double c = 1.0);
  static KForm one_form(const Eigen::VectorXd& coeffs);
  static KForm scalar(int dimension, double c);
  static KForm volume(int dimension);

  int dimension() const { return n_; }
  int degree() const { return k_; }

  double coeff(std::initializer_list<int> indices) const;
  double coeff(std::span<const int> indices) const;
  void set(std::initializer_list<int> indices, double value);
  void set(std::span<const int> indices, double value);

  double coeff_by_mask(unsigned mask) const { return c_[mask]; }
  double& coeff_by_mask(unsigned mask) { return c_[mask]; }
  std::size_t mask_count() const { return c_.size(); }

  // Nonzero coefficients in increasing lexicographic order of index tuples.
  std::vector<Term> terms() const;

  double max_abs() const;
  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

  KForm& operator+=(const KForm& o);
  KForm& operator-=(const KForm& o);
  KForm& operator*=(double s);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(double s, KForm a) { return a *= s; }
  friend KForm operator*(KForm a, double s) { return a *= s; }
  KForm operator-() const { return (-1.0) * (*this); }
  bool operator==(const KForm& o) const = default;

  // Coefficient vector over all k-subsets in lexicographic order.
  Eigen::VectorXd to_vector() const;

 private:
  unsigned mask_of(std::span<const int> indices, int* sign) const;
  void check_same_shape(const KForm& o) const;

  int n_ = 0;
  int k_ = 0;
  std::vector<double> c_;
};

// Increasing k-subsets of {1..n} as bitmasks, in lexicographic order.
const std::vector<unsigned>& subsets(int n, int k);
std::vector<int> mask_indices(unsigned mask);

// When deg a + deg b exceeds n the product is returned as the zero 0-form.
KForm wedge(const KForm& a, const KForm& b);
KForm interior(const Eigen::Ref<const Eigen::VectorXd>& u, const KForm& a);

// Hodge star for a symmetric positive-definite metric; orientation picks the
// sign of the volume form relative to e^{1..n}.
KForm hodge(const KForm& a, const Eigen::Ref<const Eigen::MatrixXd>& metric, int orientation = 1);
KForm hodge(const KForm& a);

double eval(const KForm& a, std::span<const Eigen::VectorXd> vectors);
double eval(const KForm& a, std::initializer_list<Eigen::VectorXd> vectors);

// Pullback A^* a, (A^*a)(v1..vk) = a(Av1, ..., Avk).
KForm pullback(const KForm& a, const Eigen::Ref<const Eigen::MatrixXd>& A);

}  // namespace g2
