#include "g2/torus/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "g2/error.hpp"

namespace g2::torus {

namespace {

const cplx I(0.0, 1.0);

Eigen::Vector3d mode_momentum(const Mode& k) {
  return 2.0 * M_PI * Eigen::Vector3d(k.k1, k.k2, k.k3);
}

Eigen::Matrix4cd real4(const Eigen::Matrix4d& m) { return m.cast<cplx>(); }

const Eigen::Matrix4cd& nu_clifford(int axis) {
  static const std::array<Eigen::Matrix4cd, 3> m{real4(left_matrix(Quaternion::i())),
                                                 real4(left_matrix(Quaternion::j())),
                                                 real4(left_matrix(Quaternion::k()))};
  return m[axis];
}

Eigen::Vector4cd pure4(cplx x, cplx y, cplx z) { return Eigen::Vector4cd(0.0, x, y, z); }

void check_fluctuation(const FourierSection& f, int fiber, const char* what) {
  if (f.empty()) return;
  if (f.fiber() != fiber) throw Error(std::string(what) + ": wrong fiber dimension");
  for (int c = 0; c < fiber; ++c)
    if (std::abs(f.get(0, 0, 0, c)) > 1e-12)
      throw Error(std::string(what) + ": fluctuation has a constant mode");
  if (f.conjugate_symmetry_defect() > 1e-12) throw Error(std::string(what) + ": field is not real");
}

FourierSection with_constant(const FourierSection& fluct, int fiber, int cutoff,
                             const Eigen::VectorXd& constant) {
  if (!fluct.empty() && fluct.cutoff() > cutoff)
    throw Error("connection fluctuation exceeds the requested cutoff");
  FourierSection out = fluct.empty() ? FourierSection(cutoff, fiber, true) : fluct.resized(cutoff);
  out.set_real_valued(true);
  for (int c = 0; c < fiber; ++c) out.at(0, 0, 0, c) = constant[c];
  return out;
}

// Constant (mode-independent) zeroth-order part of the Dirac operator.
Eigen::MatrixXcd constant_block(const Connection& A, Twist twist) {
  if (twist == Twist::Abelian) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 3; ++a) m += I * A.holonomy[a] * w_clifford(a);
    return m;
  }
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  Eigen::Matrix4cd ri = real4(right_matrix(Quaternion::i()));
  for (int a = 0; a < 3; ++a) {
    Eigen::Vector4cd s = pure4(A.s_constant[a][0], A.s_constant[a][1], A.s_constant[a][2]);
    Eigen::Vector4cd e = pure4(A.e_constant[a][0], A.e_constant[a][1], A.e_constant[a][2]);
    m += nu_clifford(a) * (A.holonomy[a] * ri + nu_left(s) - nu_right(e));
  }
  return m;
}

Eigen::MatrixXcd derivative_block(const Mode& k, Twist twist) {
  Eigen::Vector3d p = mode_momentum(k);
  if (twist == Twist::Abelian) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 3; ++a) m += I * p[a] * w_clifford(a);
    return m;
  }
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 3; ++a) m += I * p[a] * nu_clifford(a);
  return m;
}

// Fluctuation block coupling mode k' to mode k' + d.
Eigen::MatrixXcd fluctuation_block(const Connection& A, Twist twist, int d1, int d2, int d3) {
  if (twist == Twist::Abelian) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    if (A.fluctuation.empty()) return m;
    for (int a = 0; a < 3; ++a) m += I * A.fluctuation.get(d1, d2, d3, a) * w_clifford(a);
    return m;
  }
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 3; ++a) {
    Eigen::Matrix4cd inner = Eigen::Matrix4cd::Zero();
    if (!A.s_fluctuation.empty())
      inner += nu_left(pure4(A.s_fluctuation.get(d1, d2, d3, 3 * a), A.s_fluctuation.get(d1, d2, d3, 3 * a + 1),
                             A.s_fluctuation.get(d1, d2, d3, 3 * a + 2)));
    if (!A.e_fluctuation.empty())
      inner -= nu_right(pure4(A.e_fluctuation.get(d1, d2, d3, 3 * a), A.e_fluctuation.get(d1, d2, d3, 3 * a + 1),
                              A.e_fluctuation.get(d1, d2, d3, 3 * a + 2)));
    m += nu_clifford(a) * inner;
  }
  return m;
}

int twist_fiber(Twist t) { return t == Twist::Abelian ? kWSpinor : kNuSpinor; }

Quaternion quat_at(const GridField& g, int point, int first) {
  return {g.at(point, first).real(), g.at(point, first + 1).real(), g.at(point, first + 2).real(),
          g.at(point, first + 3).real()};
}

Quaternion pure_at(const GridField& g, int point, int first) {
  return {0.0, g.at(point, first).real(), g.at(point, first + 1).real(), g.at(point, first + 2).real()};
}

void check_unit_field(const FourierSection& f, int first, int count, const char* what) {
  int N = 4 * f.cutoff() + 2;
  GridField g = to_grid(f, N);
  for (int p = 0; p < g.points(); ++p) {
    double n2 = 0.0;
    for (int c = 0; c < count; ++c) n2 += std::norm(g.at(p, first + c));
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-8)
      throw Error(std::string(what) + " is not of unit length (|x| = " + std::to_string(std::sqrt(n2)) + ")");
  }
}

}  // namespace

Connection Connection::flat(const Eigen::Vector3d& holonomy) {
  Connection c;
  c.holonomy = holonomy;
  return c;
}

bool Connection::is_flat() const {
  auto zero = [](const FourierSection& f) { return f.empty() || f.norm() == 0.0; };
  return zero(fluctuation) && zero(s_fluctuation) && zero(e_fluctuation);
}

int Connection::cutoff() const {
  int k = 0;
  for (const auto* f : {&fluctuation, &s_fluctuation, &e_fluctuation})
    if (!f->empty()) k = std::max(k, f->cutoff());
  return k;
}

void Connection::validate() const {
  check_fluctuation(fluctuation, kOneForm, "abelian fluctuation");
  check_fluctuation(s_fluctuation, kTwistForm, "s fluctuation");
  check_fluctuation(e_fluctuation, kTwistForm, "e fluctuation");
}

FourierSection Connection::abelian_form(int cutoff) const {
  return with_constant(fluctuation, kOneForm, cutoff, holonomy);
}

FourierSection Connection::s_form(int cutoff) const {
  Eigen::VectorXd c(9);
  for (int a = 0; a < 3; ++a) c.segment<3>(3 * a) = s_constant[a];
  return with_constant(s_fluctuation, kTwistForm, cutoff, c);
}

FourierSection Connection::e_form(int cutoff) const {
  Eigen::VectorXd c(9);
  for (int a = 0; a < 3; ++a) c.segment<3>(3 * a) = e_constant[a];
  return with_constant(e_fluctuation, kTwistForm, cutoff, c);
}

const Eigen::Matrix2cd& w_clifford(int axis) {
  static const std::array<Eigen::Matrix2cd, 3> m = [] {
    std::array<Eigen::Matrix2cd, 3> out;
    out[0] << I, 0.0, 0.0, -I;
    out[1] << 0.0, -1.0, 1.0, 0.0;
    out[2] << 0.0, -I, -I, 0.0;
    return out;
  }();
  if (axis < 0 || axis > 2) throw Error("Clifford axis out of range");
  return m[axis];
}

Eigen::Matrix4cd nu_left(const Eigen::Vector4cd& q) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  const Quaternion units[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()};
  for (int c = 0; c < 4; ++c)
    if (q[c] != 0.0) m += q[c] * real4(left_matrix(units[c]));
  return m;
}

Eigen::Matrix4cd nu_right(const Eigen::Vector4cd& q) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  const Quaternion units[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()};
  for (int c = 0; c < 4; ++c)
    if (q[c] != 0.0) m += q[c] * real4(right_matrix(units[c]));
  return m;
}

Quaternion quaternion_from_w(const cplx& z, const cplx& w) {
  return {z.real(), z.imag(), w.real(), -w.imag()};
}

std::pair<cplx, cplx> w_from_quaternion(const Quaternion& q) {
  return {cplx(q.w, q.x), cplx(q.y, -q.z)};
}

SpectralOperator SpectralOperator::block_diagonal(int cutoff, int in_fiber, int out_fiber,
                                                  std::vector<Eigen::MatrixXcd> blocks) {
  SpectralOperator op;
  op.K_ = cutoff;
  op.in_f_ = in_fiber;
  op.out_f_ = out_fiber;
  int n = 2 * cutoff + 1;
  if (static_cast<int>(blocks.size()) != n * n * n) throw Error("wrong number of mode blocks");
  for (const auto& b : blocks)
    if (b.rows() != out_fiber || b.cols() != in_fiber) throw Error("mode block has the wrong shape");
  op.blocks_ = std::move(blocks);
  return op;
}

SpectralOperator SpectralOperator::dense(int cutoff, int in_fiber, int out_fiber, Eigen::MatrixXcd m) {
  SpectralOperator op;
  op.K_ = cutoff;
  op.in_f_ = in_fiber;
  op.out_f_ = out_fiber;
  int n = 2 * cutoff + 1;
  if (m.rows() != n * n * n * out_fiber || m.cols() != n * n * n * in_fiber)
    throw Error("dense operator has the wrong shape");
  op.dense_ = std::move(m);
  return op;
}

int SpectralOperator::rows() const {
  int n = 2 * K_ + 1;
  return n * n * n * out_f_;
}

int SpectralOperator::cols() const {
  int n = 2 * K_ + 1;
  return n * n * n * in_f_;
}

Eigen::MatrixXcd SpectralOperator::to_dense() const {
  if (!is_block_diagonal()) return dense_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows(), cols());
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    m.block(k * out_f_, k * in_f_, out_f_, in_f_) = blocks_[k];
  return m;
}

FourierSection SpectralOperator::apply(const FourierSection& s) const {
  if (s.cutoff() != K_) throw Error("cutoff mismatch: operator " + std::to_string(K_) + ", section " +
                                    std::to_string(s.cutoff()));
  if (s.fiber() != in_f_) throw Error("fiber mismatch");
  FourierSection out(K_, out_f_);
  if (is_block_diagonal()) {
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      out.data().segment(k * out_f_, out_f_) = blocks_[k] * s.data().segment(k * in_f_, in_f_);
  } else {
    out.data() = dense_ * s.data();
  }
  return out;
}

double SpectralOperator::hermitian_defect() const {
  if (in_f_ != out_f_) throw Error("hermitian_defect: operator is not square");
  if (is_block_diagonal()) {
    double worst = 0.0;
    for (const auto& b : blocks_) worst = std::max(worst, (b - b.adjoint()).cwiseAbs().maxCoeff());
    return worst;
  }
  return (dense_ - dense_.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd SpectralOperator::eigenvalues() const {
  if (hermitian_defect() > 1e-10) throw Error("eigenvalues: operator is not Hermitian");
  Eigen::VectorXd ev(rows());
  if (is_block_diagonal()) {
    int pos = 0;
    for (const auto& b : blocks_) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
      ev.segment(pos, b.rows()) = es.eigenvalues();
      pos += b.rows();
    }
    std::sort(ev.data(), ev.data() + ev.size());
    return ev;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<std::pair<int, double>> SpectralOperator::mode_eigenvalues() const {
  if (!is_block_diagonal()) throw Error("mode_eigenvalues: operator is not block diagonal");
  if (hermitian_defect() > 1e-10) throw Error("mode_eigenvalues: operator is not Hermitian");
  std::vector<std::pair<int, double>> out;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blocks_[k], Eigen::EigenvaluesOnly);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      out.emplace_back(static_cast<int>(k), es.eigenvalues()[i]);
  }
  return out;
}

Eigen::VectorXd SpectralOperator::singular_values() const {
  Eigen::VectorXd sv;
  if (is_block_diagonal()) {
    std::vector<double> all;
    for (const auto& b : blocks_) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      for (int i = 0; i < svd.singularValues().size(); ++i) all.push_back(svd.singularValues()[i]);
    }
    sv = Eigen::Map<Eigen::VectorXd>(all.data(), all.size());
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense_);
    sv = svd.singularValues();
  }
  std::sort(sv.data(), sv.data() + sv.size());
  return sv;
}

int SpectralOperator::kernel_dim(double tol) const {
  Eigen::VectorXd sv = singular_values();
  int n = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] < tol) ++n;
  // a wide matrix has at least cols - rows kernel vectors
  return n + std::max(0, cols() - rows());
}

int SpectralOperator::cokernel_dim(double tol) const {
  SpectralOperator adj;
  adj.K_ = K_;
  adj.in_f_ = out_f_;
  adj.out_f_ = in_f_;
  if (is_block_diagonal()) {
    for (const auto& b : blocks_) adj.blocks_.push_back(b.adjoint());
  } else {
    adj.dense_ = dense_.adjoint();
  }
  return adj.kernel_dim(tol);
}

SpectralOperator build_dirac(int K, const Connection& A, Twist twist) {
  if (K < 1) throw Error("build_dirac: cutoff must be at least 1");
  A.validate();
  const int f = twist_fiber(twist);
  const int n = 2 * K + 1;
  const int modes = n * n * n;
  Eigen::MatrixXcd c0 = constant_block(A, twist);
  FourierSection shape(K, 0);
  if (A.is_flat()) {
    std::vector<Eigen::MatrixXcd> blocks(modes);
    for (int m = 0; m < modes; ++m) blocks[m] = derivative_block(shape.mode(m), twist) + c0;
    return SpectralOperator::block_diagonal(K, f, f, std::move(blocks));
  }
  const int KA = A.cutoff();
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(modes * f, modes * f);
  for (int m = 0; m < modes; ++m) {
    Mode k = shape.mode(m);
    dense.block(m * f, m * f, f, f) = derivative_block(k, twist) + c0;
    for (int mm = 0; mm < modes; ++mm) {
      Mode kk = shape.mode(mm);
      int d1 = k.k1 - kk.k1, d2 = k.k2 - kk.k2, d3 = k.k3 - kk.k3;
      if (std::max({std::abs(d1), std::abs(d2), std::abs(d3)}) > KA) continue;
      if (d1 == 0 && d2 == 0 && d3 == 0) continue;
      dense.block(m * f, mm * f, f, f) += fluctuation_block(A, twist, d1, d2, d3);
    }
  }
  return SpectralOperator::dense(K, f, f, std::move(dense));
}

FourierSection apply_dirac(const FourierSection& v, const Connection& A, Twist twist) {
  const int f = twist_fiber(twist);
  if (v.fiber() != f) throw Error("apply_dirac: spinor has the wrong fiber dimension");
  A.validate();
  const int KA = A.is_flat() ? 0 : A.cutoff();
  const int Ko = v.cutoff() + KA;
  FourierSection out(Ko, f, twist == Twist::So4 && v.real_valued());
  Eigen::MatrixXcd c0 = constant_block(A, twist);
  for (int m = 0; m < v.mode_count(); ++m) {
    Mode k = v.mode(m);
    Eigen::VectorXcd x = v.data().segment(m * f, f);
    out.data().segment(out.index(k.k1, k.k2, k.k3) * f, f) = (derivative_block(k, twist) + c0) * x;
  }
  if (KA == 0) return out;

  const int N = 2 * Ko + 1;
  GridField gv = to_grid(v, N);
  GridField prod(N, f);
  if (twist == Twist::Abelian) {
    GridField ga = to_grid(A.fluctuation.resized(KA), N);
    for (int p = 0; p < gv.points(); ++p) {
      Eigen::Vector2cd x(gv.at(p, 0), gv.at(p, 1));
      Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
      for (int a = 0; a < 3; ++a) m += I * ga.at(p, a) * w_clifford(a);
      Eigen::Vector2cd y = m * x;
      prod.at(p, 0) = y[0];
      prod.at(p, 1) = y[1];
    }
  } else {
    GridField gs = to_grid(A.s_fluctuation.empty() ? FourierSection(KA, kTwistForm, true)
                                                   : A.s_fluctuation.resized(KA), N);
    GridField ge = to_grid(A.e_fluctuation.empty() ? FourierSection(KA, kTwistForm, true)
                                                   : A.e_fluctuation.resized(KA), N);
    for (int p = 0; p < gv.points(); ++p) {
      Eigen::Vector4cd x(gv.at(p, 0), gv.at(p, 1), gv.at(p, 2), gv.at(p, 3));
      Eigen::Vector4cd y = Eigen::Vector4cd::Zero();
      for (int a = 0; a < 3; ++a) {
        Eigen::Vector4cd s = pure4(gs.at(p, 3 * a), gs.at(p, 3 * a + 1), gs.at(p, 3 * a + 2));
        Eigen::Vector4cd e = pure4(ge.at(p, 3 * a), ge.at(p, 3 * a + 1), ge.at(p, 3 * a + 2));
        y += nu_clifford(a) * (nu_left(s) * x - nu_right(e) * x);
      }
      for (int c = 0; c < 4; ++c) prod.at(p, c) = y[c];
    }
  }
  out += from_grid(prod, Ko, out.real_valued());
  return out;
}

int kernel_dim(const Connection& A, double tol, int K, Twist twist) {
  return build_dirac(K, A, twist).kernel_dim(tol);
}

int TwistField::cutoff() const {
  int k = 0;
  if (!s.empty()) k = std::max(k, s.cutoff());
  if (!e.empty()) k = std::max(k, e.cutoff());
  return k;
}

FourierSection perturbed_dirac(const FourierSection& v, const Connection& A0, const TwistField& alpha) {
  if (v.fiber() != kNuSpinor) throw Error("perturbed_dirac: expected a nu-spinor");
  if ((!alpha.s.empty() && alpha.s.fiber() != kTwistForm) ||
      (!alpha.e.empty() && alpha.e.fiber() != kTwistForm))
    throw Error("perturbed_dirac: twist field has the wrong fiber dimension");
  const int KA = A0.is_flat() ? 0 : A0.cutoff();
  const int Kt = alpha.cutoff();
  const int Ko = v.cutoff() + std::max(KA, Kt);
  FourierSection base = apply_dirac(v, A0, Twist::So4);
  FourierSection out = base.resized(Ko);
  const int N = 2 * Ko + 1;
  GridField gv = to_grid(v, N);
  GridField gs = to_grid(alpha.s.empty() ? FourierSection(Kt, kTwistForm, true) : alpha.s, N);
  GridField ge = to_grid(alpha.e.empty() ? FourierSection(Kt, kTwistForm, true) : alpha.e, N);
  GridField prod(N, kNuSpinor);
  for (int p = 0; p < gv.points(); ++p) {
    Eigen::Vector4cd x(gv.at(p, 0), gv.at(p, 1), gv.at(p, 2), gv.at(p, 3));
    Eigen::Vector4cd y = Eigen::Vector4cd::Zero();
    for (int a = 0; a < 3; ++a) {
      Eigen::Vector4cd s = pure4(gs.at(p, 3 * a), gs.at(p, 3 * a + 1), gs.at(p, 3 * a + 2));
      Eigen::Vector4cd e = pure4(ge.at(p, 3 * a), ge.at(p, 3 * a + 1), ge.at(p, 3 * a + 2));
      y += nu_clifford(a) * (nu_left(s) * x - nu_right(e) * x);
    }
    for (int c = 0; c < 4; ++c) prod.at(p, c) = y[c];
  }
  out += from_grid(prod, Ko, out.real_valued());
  return out;
}

SpectralOperator div_curl_op(int K) {
  if (K < 1) throw Error("div_curl_op: cutoff must be at least 1");
  FourierSection shape(K, 0);
  std::vector<Eigen::MatrixXcd> blocks(shape.mode_count());
  for (int m = 0; m < shape.mode_count(); ++m) {
    Eigen::Vector3d p = mode_momentum(shape.mode(m));
    Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
    r.block<1, 3>(0, 1) = -p.transpose();
    r.block<3, 1>(1, 0) = p;
    r(1, 2) = -p[2];
    r(1, 3) = p[1];
    r(2, 1) = p[2];
    r(2, 3) = -p[0];
    r(3, 1) = -p[1];
    r(3, 2) = p[0];
    blocks[m] = I * r.cast<cplx>();
  }
  return SpectralOperator::block_diagonal(K, 4, 4, std::move(blocks));
}

Eigen::Vector3cd cross_real(const Eigen::Vector3d& p, const Eigen::Vector3cd& v) {
  return {p[1] * v[2] - p[2] * v[1], p[2] * v[0] - p[0] * v[2], p[0] * v[1] - p[1] * v[0]};
}

FourierSection curl(const FourierSection& a) {
  if (a.fiber() != kOneForm) throw Error("curl: expected a 1-form");
  FourierSection out(a.cutoff(), kOneForm, a.real_valued());
  for (int m = 0; m < a.mode_count(); ++m) {
    Eigen::Vector3d p = mode_momentum(a.mode(m));
    Eigen::Vector3cd v(a(m, 0), a(m, 1), a(m, 2));
    Eigen::Vector3cd c = I * cross_real(p, v);
    for (int i = 0; i < 3; ++i) out(m, i) = c[i];
  }
  return out;
}

FourierSection grad(const FourierSection& f) {
  if (f.fiber() != kFunction) throw Error("grad: expected a function");
  FourierSection out(f.cutoff(), kOneForm, f.real_valued());
  for (int m = 0; m < f.mode_count(); ++m) {
    Eigen::Vector3d p = mode_momentum(f.mode(m));
    for (int i = 0; i < 3; ++i) out(m, i) = I * p[i] * f(m, 0);
  }
  return out;
}

FourierSection divergence(const FourierSection& a) {
  if (a.fiber() != kOneForm) throw Error("divergence: expected a 1-form");
  FourierSection out(a.cutoff(), kFunction, a.real_valued());
  for (int m = 0; m < a.mode_count(); ++m) {
    Eigen::Vector3d p = mode_momentum(a.mode(m));
    cplx s = 0.0;
    for (int i = 0; i < 3; ++i) s += I * p[i] * a(m, i);
    out(m, 0) = s;
  }
  return out;
}

double integrability_defect(const FourierSection& j, const Connection& B) {
  if (j.fiber() != 3) throw Error("integrability_defect: j must be im(H)-valued");
  check_unit_field(j, 0, 3, "j");
  B.validate();
  const int Kb = B.e_fluctuation.empty() ? 0 : B.e_fluctuation.cutoff();
  const int Ko = j.cutoff() + Kb;
  FourierSection b = B.e_form(Kb);
  const int N = 2 * Ko + 1;
  GridField gj = to_grid(j, N);
  GridField gb = to_grid(b, N);
  GridField bracket(N, 9);
  for (int p = 0; p < gj.points(); ++p) {
    Eigen::Vector3d jv(gj.at(p, 0).real(), gj.at(p, 1).real(), gj.at(p, 2).real());
    for (int a = 0; a < 3; ++a) {
      Eigen::Vector3d ba(gb.at(p, 3 * a).real(), gb.at(p, 3 * a + 1).real(), gb.at(p, 3 * a + 2).real());
      Eigen::Vector3d c = 2.0 * ba.cross(jv);
      for (int i = 0; i < 3; ++i) bracket.at(p, 3 * a + i) = c[i];
    }
  }
  FourierSection cov = from_grid(bracket, Ko, true);
  FourierSection jo = j.resized(Ko);
  for (int a = 0; a < 3; ++a) {
    FourierSection d = partial(jo, a);
    for (int m = 0; m < cov.mode_count(); ++m)
      for (int i = 0; i < 3; ++i) cov(m, 3 * a + i) += d(m, i);
  }
  return cov.norm();
}

std::pair<FourierSection, Connection> integrability_gauge(const FourierSection& g, const FourierSection& j,
                                                          const Connection& B) {
  if (g.fiber() != 4) throw Error("integrability_gauge: gauge field must be quaternion-valued");
  if (j.fiber() != 3) throw Error("integrability_gauge: j must be im(H)-valued");
  check_unit_field(g, 0, 4, "gauge field");
  B.validate();
  const int Kg = g.cutoff();
  const int Kb = B.e_fluctuation.empty() ? 0 : B.e_fluctuation.cutoff();

  // j' = g j g^-1 has bandwidth K_j + 2 K_g
  const int Kj2 = j.cutoff() + 2 * Kg;
  const int Nj = 2 * Kj2 + 1;
  GridField gg = to_grid(g, Nj);
  GridField gj = to_grid(j, Nj);
  GridField jn(Nj, 3);
  for (int p = 0; p < gg.points(); ++p) {
    Quaternion q = quat_at(gg, p, 0);
    Quaternion r = q * pure_at(gj, p, 0) * q.conj();
    jn.at(p, 0) = r.x;
    jn.at(p, 1) = r.y;
    jn.at(p, 2) = r.z;
  }
  FourierSection j_new = from_grid(jn, Kj2, true);

  const int Kb2 = Kb + 2 * Kg;
  const int Nb = 2 * Kb2 + 1;
  FourierSection b = B.e_form(Kb);
  GridField gb = to_grid(b, Nb);
  GridField gq = to_grid(g, Nb);
  std::array<GridField, 3> dg;
  for (int a = 0; a < 3; ++a) dg[a] = to_grid(partial(g, a), Nb);
  GridField bn(Nb, 9);
  for (int p = 0; p < gq.points(); ++p) {
    Quaternion q = quat_at(gq, p, 0);
    for (int a = 0; a < 3; ++a) {
      Quaternion r = q * pure_at(gb, p, 3 * a) * q.conj() - quat_at(dg[a], p, 0) * q.conj();
      bn.at(p, 3 * a) = r.x;
      bn.at(p, 3 * a + 1) = r.y;
      bn.at(p, 3 * a + 2) = r.z;
    }
  }
  FourierSection b_new = from_grid(bn, Kb2, true);
  Connection out = B;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      out.e_constant[a][c] = b_new.at(0, 0, 0, 3 * a + c).real();
      b_new.at(0, 0, 0, 3 * a + c) = 0.0;
    }
  out.e_fluctuation = b_new;
  return {j_new, out};
}

}  // namespace g2::torus
