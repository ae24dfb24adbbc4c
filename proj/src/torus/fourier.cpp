#include "g2/torus/fourier.hpp"

#include <cmath>
#include <string>

#include "g2/error.hpp"

namespace g2::torus {

namespace {

// W(x, k) = e^{sign 2 pi i (k - K) x / N} for x < N, k < 2K+1.
Eigen::MatrixXcd dft_matrix(int N, int K, double sign) {
  const int n = 2 * K + 1;
  Eigen::MatrixXcd w(N, n);
  for (int x = 0; x < N; ++x)
    for (int k = 0; k < n; ++k) {
      // reduce the phase exactly before scaling
      long long r = (static_cast<long long>(k - K) * x) % N;
      double ang = sign * 2.0 * M_PI * static_cast<double>(r) / N;
      w(x, k) = cplx(std::cos(ang), std::sin(ang));
    }
  return w;
}

// Applies M (out x in) along each of the three spatial axes of
// data laid out as [a][b][c][fiber] with every axis of length `in`.
Eigen::VectorXcd separable(const Eigen::VectorXcd& in, int in_len, int out_len, int fiber,
                           const Eigen::MatrixXcd& M) {
  const Eigen::MatrixXcd Mt = M.transpose();
  Eigen::VectorXcd a(static_cast<Eigen::Index>(in_len) * in_len * out_len * fiber);
  for (int o = 0; o < in_len * in_len; ++o) {
    Eigen::Map<const Eigen::MatrixXcd> X(in.data() + static_cast<Eigen::Index>(o) * in_len * fiber,
                                         fiber, in_len);
    Eigen::Map<Eigen::MatrixXcd> Y(a.data() + static_cast<Eigen::Index>(o) * out_len * fiber, fiber,
                                   out_len);
    Y.noalias() = X * Mt;
  }
  Eigen::VectorXcd b(static_cast<Eigen::Index>(in_len) * out_len * out_len * fiber);
  int rows = out_len * fiber;
  for (int o = 0; o < in_len; ++o) {
    Eigen::Map<const Eigen::MatrixXcd> X(a.data() + static_cast<Eigen::Index>(o) * in_len * rows,
                                         rows, in_len);
    Eigen::Map<Eigen::MatrixXcd> Y(b.data() + static_cast<Eigen::Index>(o) * out_len * rows, rows,
                                   out_len);
    Y.noalias() = X * Mt;
  }
  Eigen::VectorXcd c(static_cast<Eigen::Index>(out_len) * out_len * out_len * fiber);
  rows = out_len * out_len * fiber;
  Eigen::Map<const Eigen::MatrixXcd> X(b.data(), rows, in_len);
  Eigen::Map<Eigen::MatrixXcd> Y(c.data(), rows, out_len);
  Y.noalias() = X * Mt;
  return c;
}

}  // namespace

FourierSection::FourierSection(int cutoff, int fiber, bool real_valued)
    : K_(cutoff), fiber_(fiber), real_(real_valued) {
  if (cutoff < 0) throw Error("negative Fourier cutoff");
  if (fiber < 0) throw Error("negative fiber dimension");
  c_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(mode_count()) * fiber);
}

FourierSection FourierSection::random(Rng& rng, int cutoff, int fiber, double amplitude,
                                      bool real_valued, bool zero_mean) {
  FourierSection s(cutoff, fiber, real_valued);
  for (int m = 0; m < s.mode_count(); ++m) {
    Mode k = s.mode(m);
    double decay = amplitude / (1.0 + k.k1 * k.k1 + k.k2 * k.k2 + k.k3 * k.k3);
    for (int c = 0; c < fiber; ++c) {
      double re = rng.normal();
      double im = rng.normal();
      s(m, c) = decay * cplx(re, im);
    }
  }
  if (zero_mean)
    for (int c = 0; c < fiber; ++c) s.at(0, 0, 0, c) = 0.0;
  if (real_valued) s.symmetrize();
  return s;
}

bool FourierSection::contains(int k1, int k2, int k3) const {
  return std::abs(k1) <= K_ && std::abs(k2) <= K_ && std::abs(k3) <= K_;
}

int FourierSection::index(int k1, int k2, int k3) const {
  if (!contains(k1, k2, k3)) throw Error("Fourier mode outside the cutoff");
  const int n = side();
  return ((k1 + K_) * n + (k2 + K_)) * n + (k3 + K_);
}

Mode FourierSection::mode(int index) const {
  const int n = side();
  return {index / (n * n) - K_, (index / n) % n - K_, index % n - K_};
}

cplx FourierSection::get(int k1, int k2, int k3, int comp) const {
  if (!contains(k1, k2, k3)) return 0.0;
  return (*this)(index(k1, k2, k3), comp);
}

double FourierSection::real_dot(const FourierSection& o) const {
  check_shape(o);
  return c_.dot(o.c_).real();
}

FourierSection FourierSection::resized(int cutoff) const {
  FourierSection out(cutoff, fiber_, real_);
  for (int m = 0; m < out.mode_count(); ++m) {
    Mode k = out.mode(m);
    if (!contains(k.k1, k.k2, k.k3)) continue;
    int src = index(k.k1, k.k2, k.k3);
    for (int c = 0; c < fiber_; ++c) out(m, c) = (*this)(src, c);
  }
  return out;
}

FourierSection FourierSection::components(int first, int count) const {
  if (first < 0 || first + count > fiber_) throw Error("component range out of bounds");
  FourierSection out(K_, count, real_);
  for (int m = 0; m < mode_count(); ++m)
    for (int c = 0; c < count; ++c) out(m, c) = (*this)(m, first + c);
  return out;
}

void FourierSection::set_components(int first, const FourierSection& part) {
  if (part.cutoff() != K_) throw Error("cutoff mismatch");
  if (first < 0 || first + part.fiber() > fiber_) throw Error("component range out of bounds");
  for (int m = 0; m < mode_count(); ++m)
    for (int c = 0; c < part.fiber(); ++c) (*this)(m, first + c) = part(m, c);
}

double FourierSection::conjugate_symmetry_defect() const {
  double worst = 0.0;
  for (int m = 0; m < mode_count(); ++m) {
    Mode k = mode(m);
    int mm = index(-k.k1, -k.k2, -k.k3);
    for (int c = 0; c < fiber_; ++c)
      worst = std::max(worst, std::abs((*this)(m, c) - std::conj((*this)(mm, c))));
  }
  return worst;
}

void FourierSection::symmetrize() {
  Eigen::VectorXcd out = c_;
  for (int m = 0; m < mode_count(); ++m) {
    Mode k = mode(m);
    int mm = index(-k.k1, -k.k2, -k.k3);
    for (int c = 0; c < fiber_; ++c)
      out[m * fiber_ + c] = 0.5 * ((*this)(m, c) + std::conj((*this)(mm, c)));
  }
  c_ = out;
  real_ = true;
}

void FourierSection::check_shape(const FourierSection& o) const {
  if (K_ != o.K_) throw Error("Fourier cutoff mismatch");
  if (fiber_ != o.fiber_) throw Error("fiber dimension mismatch");
}

FourierSection& FourierSection::operator+=(const FourierSection& o) {
  check_shape(o);
  c_ += o.c_;
  real_ = real_ && o.real_;
  return *this;
}

FourierSection& FourierSection::operator-=(const FourierSection& o) {
  check_shape(o);
  c_ -= o.c_;
  real_ = real_ && o.real_;
  return *this;
}

FourierSection& FourierSection::operator*=(double s) {
  c_ *= s;
  return *this;
}

GridField to_grid(const FourierSection& s, int N) {
  if (N < s.side()) throw Error("grid too coarse for the cutoff: N = " + std::to_string(N));
  GridField g;
  g.N = N;
  g.fiber = s.fiber();
  g.values = separable(s.data(), s.side(), N, s.fiber(), dft_matrix(N, s.cutoff(), 1.0));
  return g;
}

FourierSection from_grid(const GridField& g, int cutoff, bool real_valued) {
  FourierSection out(cutoff, g.fiber, real_valued);
  if (g.N < out.side()) throw Error("grid too coarse for the cutoff: N = " + std::to_string(g.N));
  Eigen::MatrixXcd m = dft_matrix(g.N, cutoff, -1.0).transpose() / static_cast<double>(g.N);
  out.data() = separable(g.values, g.N, out.side(), g.fiber, m);
  return out;
}

FourierSection partial(const FourierSection& s, int axis) {
  if (axis < 0 || axis > 2) throw Error("axis out of range");
  FourierSection out(s.cutoff(), s.fiber(), s.real_valued());
  for (int m = 0; m < s.mode_count(); ++m) {
    Mode k = s.mode(m);
    int ka = axis == 0 ? k.k1 : (axis == 1 ? k.k2 : k.k3);
    cplx f(0.0, 2.0 * M_PI * ka);
    for (int c = 0; c < s.fiber(); ++c) out(m, c) = f * s(m, c);
  }
  return out;
}

}  // namespace g2::torus
