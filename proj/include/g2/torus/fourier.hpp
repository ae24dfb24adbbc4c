#pragma once

#include <complex>

#include <Eigen/Core>

#include "g2/random.hpp"

namespace g2::torus {

using cplx = std::complex<double>;

struct Mode {
  int k1, k2, k3;
};

// Truncated Fourier series on T^3 = R^3 / Z^3: sum over |k|_inf <= K of
// c_k e^{2 pi i k.x}, each coefficient a vector of `fiber` complex numbers.
// Mode index is ((k1+K) n + k2+K) n + k3+K with n = 2K+1; storage is
// [mode][component].
class FourierSection {
 public:
  FourierSection() = default;
  FourierSection(int cutoff, int fiber, bool real_valued = false);

  static FourierSection random(Rng& rng, int cutoff, int fiber, double amplitude, bool real_valued,
                               bool zero_mean = false);

  bool empty() const { return fiber_ == 0; }
  int cutoff() const { return K_; }
  int fiber() const { return fiber_; }
  int side() const { return 2 * K_ + 1; }
  int mode_count() const { return side() * side() * side(); }
  // Real-valued fields keep c_{-k} = conj(c_k).
  bool real_valued() const { return real_; }
  void set_real_valued(bool r) { real_ = r; }

  bool contains(int k1, int k2, int k3) const;
  int index(int k1, int k2, int k3) const;
  Mode mode(int index) const;

  cplx& operator()(int mode_index, int comp) { return c_[mode_index * fiber_ + comp]; }
  const cplx& operator()(int mode_index, int comp) const { return c_[mode_index * fiber_ + comp]; }
  cplx& at(int k1, int k2, int k3, int comp) { return (*this)(index(k1, k2, k3), comp); }
  // Zero outside the cutoff.
  cplx get(int k1, int k2, int k3, int comp) const;

  Eigen::VectorXcd& data() { return c_; }
  const Eigen::VectorXcd& data() const { return c_; }

  double squared_norm() const { return c_.squaredNorm(); }
  double norm() const { return c_.norm(); }
  // Re sum conj(a) b: the real L^2 inner product.
  double real_dot(const FourierSection& o) const;

  // Zero-padded or truncated copy.
  FourierSection resized(int cutoff) const;
  // Components [first, first + count).
  FourierSection components(int first, int count) const;
  void set_components(int first, const FourierSection& part);

  double conjugate_symmetry_defect() const;
  void symmetrize();

  FourierSection& operator+=(const FourierSection& o);
  FourierSection& operator-=(const FourierSection& o);
  FourierSection& operator*=(double s);
  friend FourierSection operator+(FourierSection a, const FourierSection& b) { return a += b; }
  friend FourierSection operator-(FourierSection a, const FourierSection& b) { return a -= b; }
  friend FourierSection operator*(double s, FourierSection a) { return a *= s; }

 private:
  void check_shape(const FourierSection& o) const;

  int K_ = 0;
  int fiber_ = 0;
  bool real_ = false;
  Eigen::VectorXcd c_;
};

// Samples on the uniform grid x = n / N, storage [n1][n2][n3][component].
struct GridField {
  int N = 0;
  int fiber = 0;
  Eigen::VectorXcd values;

  GridField() = default;
  GridField(int n, int f) : N(n), fiber(f), values(Eigen::VectorXcd::Zero(n * n * n * f)) {}
  int points() const { return N * N * N; }
  cplx& at(int point, int comp) { return values[point * fiber + comp]; }
  const cplx& at(int point, int comp) const { return values[point * fiber + comp]; }
};

// Exact evaluation on the grid; requires N >= 2K + 1.
GridField to_grid(const FourierSection& s, int N);
// Coefficients for |k| <= K of the trigonometric interpolant; exact for
// band-limited data whose modes do not alias into the cutoff (N > band + K).
FourierSection from_grid(const GridField& g, int cutoff, bool real_valued = false);

// Smallest grid that computes the cutoff-`out` part of a product of total
// bandwidth `band` without aliasing.
inline int product_grid_size(int band, int out) { return band + out + 1; }

// Multiplication by 2 pi i k_axis.
FourierSection partial(const FourierSection& s, int axis);

}  // namespace g2::torus
