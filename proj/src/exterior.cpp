#include "g2/exterior.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "g2/error.hpp"

namespace g2 {

namespace {

int parity_sign(int swaps) { return (swaps & 1) ? -1 : 1; }

// Sign of e^A ^ e^B for disjoint masks: parity of pairs (i in A, j in B, i > j).
int wedge_sign(unsigned a, unsigned b) {
  int inv = 0;
  while (b) {
    int j = std::countr_zero(b);
    b &= b - 1;
    inv += std::popcount(a >> (j + 1));
  }
  return parity_sign(inv);
}

// Determinant of a k x k row-major matrix, k <= kMaxDimension.
double small_det(std::array<double, 144>& m, int k) {
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(m[r * k + c]) > std::abs(m[piv * k + c])) piv = r;
    if (m[piv * k + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < k; ++j) std::swap(m[c * k + j], m[piv * k + j]);
      det = -det;
    }
    double p = m[c * k + c];
    det *= p;
    for (int r = c + 1; r < k; ++r) {
      double f = m[r * k + c] / p;
      if (f == 0.0) continue;
      for (int j = c + 1; j < k; ++j) m[r * k + j] -= f * m[c * k + j];
    }
  }
  return det;
}

void check_dimension(int n) {
  if (n < 0 || n > KForm::kMaxDimension)
    throw Error("KForm dimension out of range: " + std::to_string(n));
}

}  // namespace

const std::vector<unsigned>& subsets(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<unsigned>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> tuples;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      tuples.push_back(cur);
      return;
    }
    for (int i = start; i <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  if (k >= 0 && k <= n) rec(rec, 1);
  std::vector<unsigned> masks;
  masks.reserve(tuples.size());
  for (const auto& t : tuples) {
    unsigned m = 0;
    for (int i : t) m |= 1u << (i - 1);
    masks.push_back(m);
  }
  return cache.emplace(key, std::move(masks)).first->second;
}

std::vector<int> mask_indices(unsigned mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return out;
}

KForm::KForm(int dimension, int degree) : n_(dimension), k_(degree) {
  check_dimension(dimension);
  if (degree < 0 || degree > dimension)
    throw Error("KForm degree " + std::to_string(degree) + " invalid in dimension " +
                std::to_string(dimension));
  c_.assign(std::size_t{1} << dimension, 0.0);
}

unsigned KForm::mask_of(std::span<const int> indices, int* sign) const {
  if (static_cast<int>(indices.size()) != k_)
    throw Error("index tuple length " + std::to_string(indices.size()) + " != degree " +
                std::to_string(k_));
  unsigned mask = 0;
  int swaps = 0;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    int i = indices[a];
    if (i < 1 || i > n_) throw Error("index " + std::to_string(i) + " out of range");
    unsigned bit = 1u << (i - 1);
    if (mask & bit) {
      *sign = 0;
      return 0;
    }
    swaps += std::popcount(mask >> i);  // earlier indices larger than i
    mask |= bit;
  }
  *sign = parity_sign(swaps);
  return mask;
}

KForm KForm::monomial(int dimension, std::initializer_list<int> indices, double c) {
  return monomial(dimension, std::span<const int>(indices.begin(), indices.size()), c);
}

KForm KForm::monomial(int dimension, std::span<const int> indices, double c) {
  KForm f(dimension, static_cast<int>(indices.size()));
  int sign = 0;
  unsigned m = f.mask_of(indices, &sign);
  if (sign != 0) f.c_[m] = sign * c;
  return f;
}

KForm KForm::one_form(const Eigen::VectorXd& coeffs) {
  KForm f(static_cast<int>(coeffs.size()), 1);
  for (int i = 0; i < coeffs.size(); ++i) f.c_[1u << i] = coeffs[i];
  return f;
}

KForm KForm::scalar(int dimension, double c) {
  KForm f(dimension, 0);
  f.c_[0] = c;
  return f;
}

KForm KForm::volume(int dimension) {
  KForm f(dimension, dimension);
  f.c_[(std::size_t{1} << dimension) - 1] = 1.0;
  return f;
}

double KForm::coeff(std::initializer_list<int> indices) const {
  return coeff(std::span<const int>(indices.begin(), indices.size()));
}

double KForm::coeff(std::span<const int> indices) const {
  int sign = 0;
  unsigned m = mask_of(indices, &sign);
  return sign == 0 ? 0.0 : sign * c_[m];
}

void KForm::set(std::initializer_list<int> indices, double value) {
  set(std::span<const int>(indices.begin(), indices.size()), value);
}

void KForm::set(std::span<const int> indices, double value) {
  int sign = 0;
  unsigned m = mask_of(indices, &sign);
  if (sign == 0) {
    if (value != 0.0) throw Error("cannot set a coefficient on a repeated index");
    return;
  }
  c_[m] = sign * value;
}

std::vector<KForm::Term> KForm::terms() const {
  std::vector<Term> out;
  for (unsigned m : subsets(n_, k_))
    if (c_[m] != 0.0) out.push_back({mask_indices(m), c_[m]});
  return out;
}

double KForm::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

void KForm::check_same_shape(const KForm& o) const {
  if (n_ != o.n_) throw Error("KForm dimension mismatch");
  if (k_ != o.k_) throw Error("KForm degree mismatch");
}

KForm& KForm::operator+=(const KForm& o) {
  check_same_shape(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

KForm& KForm::operator-=(const KForm& o) {
  check_same_shape(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

KForm& KForm::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Eigen::VectorXd KForm::to_vector() const {
  const auto& subs = subsets(n_, k_);
  Eigen::VectorXd v(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) v[i] = c_[subs[i]];
  return v;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.dimension() != b.dimension()) throw Error("wedge: dimension mismatch");
  const int n = a.dimension();
  if (a.degree() + b.degree() > n) return KForm(n, 0);
  KForm out(n, a.degree() + b.degree());
  for (unsigned ma : subsets(n, a.degree())) {
    double ca = a.coeff_by_mask(ma);
    if (ca == 0.0) continue;
    for (unsigned mb : subsets(n, b.degree())) {
      if (ma & mb) continue;
      double cb = b.coeff_by_mask(mb);
      if (cb == 0.0) continue;
      out.coeff_by_mask(ma | mb) += wedge_sign(ma, mb) * ca * cb;
    }
  }
  return out;
}

KForm interior(const Eigen::Ref<const Eigen::VectorXd>& u, const KForm& a) {
  if (u.size() != a.dimension()) throw Error("interior: dimension mismatch");
  if (a.degree() == 0) throw Error("interior: cannot contract a 0-form");
  const int n = a.dimension();
  KForm out(n, a.degree() - 1);
  for (unsigned m : subsets(n, a.degree())) {
    double c = a.coeff_by_mask(m);
    if (c == 0.0) continue;
    unsigned rest = m;
    int pos = 0;
    while (rest) {
      int b = std::countr_zero(rest);
      rest &= rest - 1;
      out.coeff_by_mask(m & ~(1u << b)) += parity_sign(pos) * u[b] * c;
      ++pos;
    }
  }
  return out;
}

KForm hodge(const KForm& a, const Eigen::Ref<const Eigen::MatrixXd>& metric, int orientation) {
  const int n = a.dimension();
  const int k = a.degree();
  if (metric.rows() != n || metric.cols() != n) throw Error("hodge: metric has wrong size");
  if (orientation != 1 && orientation != -1) throw Error("hodge: orientation must be +1 or -1");
  double scale = std::max(1.0, metric.cwiseAbs().maxCoeff());
  if ((metric - metric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error("hodge: metric is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(metric);
  if (llt.info() != Eigen::Success) throw Error("hodge: metric is not positive definite");
  Eigen::MatrixXd ginv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  double sqrt_det = 1.0;
  for (int i = 0; i < n; ++i) sqrt_det *= llt.matrixL()(i, i);

  const unsigned full = (n == 0) ? 0u : ((1u << n) - 1);
  KForm out(n, n - k);
  const auto& subs = subsets(n, k);
  std::array<double, 144> buf{};
  for (unsigned mi : subs) {
    auto ii = mask_indices(mi);
    double raised = 0.0;
    for (unsigned mj : subs) {
      double cj = a.coeff_by_mask(mj);
      if (cj == 0.0) continue;
      auto jj = mask_indices(mj);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) buf[r * k + c] = ginv(ii[r] - 1, jj[c] - 1);
      raised += (k == 0 ? 1.0 : small_det(buf, k)) * cj;
    }
    if (raised == 0.0) continue;
    unsigned comp = full & ~mi;
    out.coeff_by_mask(comp) += orientation * sqrt_det * wedge_sign(mi, comp) * raised;
  }
  return out;
}

KForm hodge(const KForm& a) {
  return hodge(a, Eigen::MatrixXd::Identity(a.dimension(), a.dimension()), 1);
}

double eval(const KForm& a, std::span<const Eigen::VectorXd> vectors) {
  const int k = a.degree();
  if (static_cast<int>(vectors.size()) != k)
    throw Error("eval: expected " + std::to_string(k) + " vectors, got " +
                std::to_string(vectors.size()));
  for (const auto& v : vectors)
    if (v.size() != a.dimension()) throw Error("eval: vector dimension mismatch");
  if (k == 0) return a.coeff_by_mask(0);
  std::array<double, 144> buf{};
  double total = 0.0;
  for (unsigned m : subsets(a.dimension(), k)) {
    double c = a.coeff_by_mask(m);
    if (c == 0.0) continue;
    auto idx = mask_indices(m);
    for (int r = 0; r < k; ++r)
      for (int col = 0; col < k; ++col) buf[r * k + col] = vectors[col][idx[r] - 1];
    total += c * small_det(buf, k);
  }
  return total;
}

double eval(const KForm& a, std::initializer_list<Eigen::VectorXd> vectors) {
  return eval(a, std::span<const Eigen::VectorXd>(vectors.begin(), vectors.size()));
}

KForm pullback(const KForm& a, const Eigen::Ref<const Eigen::MatrixXd>& A) {
  const int n = a.dimension();
  const int k = a.degree();
  if (A.rows() != n || A.cols() != n) throw Error("pullback: matrix has wrong size");
  KForm out(n, k);
  const auto& subs = subsets(n, k);
  std::array<double, 144> buf{};
  for (unsigned mi : subs) {
    auto ii = mask_indices(mi);
    double acc = 0.0;
    for (unsigned mj : subs) {
      double cj = a.coeff_by_mask(mj);
      if (cj == 0.0) continue;
      auto jj = mask_indices(mj);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) buf[r * k + c] = A(jj[r] - 1, ii[c] - 1);
      acc += cj * (k == 0 ? 1.0 : small_det(buf, k));
    }
    out.coeff_by_mask(mi) = acc;
  }
  return out;
}

}  // namespace g2
