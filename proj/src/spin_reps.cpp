#include "g2/spin_reps.hpp"

#include <array>
#include <limits>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "g2/error.hpp"

namespace g2 {

namespace {

constexpr double kUnitTol = 1e-12;

void require_unit(const Quaternion& q, const char* what) {
  if (std::abs(q.norm() - 1.0) > kUnitTol) throw Error(std::string(what) + " is not a unit quaternion");
}

Quaternion complex_as_quaternion(std::complex<double> t) { return {t.real(), t.imag(), 0, 0}; }

Eigen::Matrix4d v_matrix(const Quaternion& q, const Quaternion& l) {
  return left_matrix(q) * right_matrix(l.conj());
}

Eigen::Matrix3d conjugation_matrix(const Quaternion& q) {
  return (left_matrix(q) * right_matrix(q.conj())).bottomRightCorner<3, 3>();
}

Eigen::Matrix3d ad_matrix(const Quaternion& a) {
  return (left_matrix(a) - right_matrix(a)).bottomRightCorner<3, 3>();
}

const Eigen::Matrix4d& conj_flip() {
  static const Eigen::Matrix4d c = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
  return c;
}

struct RepEntry {
  RepName name;
  std::string_view text;
};

constexpr std::array<RepEntry, 10> kRepNames{{{RepName::V, "V"},
                                              {RepName::LambdaPlus, "lambda+"},
                                              {RepName::LambdaMinus, "lambda-"},
                                              {RepName::S, "S"},
                                              {RepName::E, "E"},
                                              {RepName::VPlus, "V+"},
                                              {RepName::VMinus, "V-"},
                                              {RepName::AdVPlus, "adV+"},
                                              {RepName::AdVMinus, "adV-"},
                                              {RepName::L, "L"}}};

}  // namespace

Spin4Element::Spin4Element(const Quaternion& q_, const Quaternion& lambda_) : q(q_), lambda(lambda_) {
  require_unit(q, "q");
  require_unit(lambda, "lambda");
}

Spin4Element Spin4Element::random(Rng& rng) {
  return {random_unit_quaternion(rng), random_unit_quaternion(rng)};
}

SpinC4Element::SpinC4Element(const Quaternion& q_, const Quaternion& lambda_, std::complex<double> t_)
    : q(q_), lambda(lambda_), t(t_) {
  require_unit(q, "q");
  require_unit(lambda, "lambda");
  if (std::abs(std::abs(t) - 1.0) > kUnitTol) throw Error("t is not unit modulus");
}

SpinC4Element SpinC4Element::random(Rng& rng) {
  double theta = rng.uniform(0.0, 2.0 * M_PI);
  return {random_unit_quaternion(rng), random_unit_quaternion(rng), std::polar(1.0, theta)};
}

RepName parse_rep_name(std::string_view name) {
  for (const auto& e : kRepNames)
    if (e.text == name) return e.name;
  throw Error("unknown representation name '" + std::string(name) + "'");
}

std::string_view rep_name_string(RepName name) {
  for (const auto& e : kRepNames)
    if (e.name == name) return e.text;
  throw Error("unknown representation");
}

RepMatrix rep(RepName name, const Spin4Element& g) {
  switch (name) {
    case RepName::V:
      return {name, v_matrix(g.q, g.lambda)};
    case RepName::LambdaPlus:
    case RepName::AdVPlus:
      return {name, conjugation_matrix(g.q)};
    case RepName::LambdaMinus:
    case RepName::AdVMinus:
      return {name, conjugation_matrix(g.lambda)};
    case RepName::S:
      return {name, left_matrix(g.q)};
    case RepName::E:
      return {name, right_matrix(g.lambda.conj())};
    default:
      throw Error("representation " + std::string(rep_name_string(name)) +
                  " needs a Spin^c(4) element");
  }
}

RepMatrix rep(RepName name, const SpinC4Element& g) {
  Quaternion tinv = complex_as_quaternion(std::conj(g.t));
  switch (name) {
    case RepName::V:
      return {name, v_matrix(g.q, g.lambda)};
    case RepName::LambdaPlus:
    case RepName::AdVPlus:
      return {name, conjugation_matrix(g.q)};
    case RepName::LambdaMinus:
    case RepName::AdVMinus:
      return {name, conjugation_matrix(g.lambda)};
    case RepName::VPlus:
      return {name, left_matrix(g.q) * right_matrix(tinv)};
    case RepName::VMinus:
      return {name, left_matrix(g.lambda) * right_matrix(tinv)};
    case RepName::L: {
      std::complex<double> t2 = g.t * g.t;
      Eigen::Matrix2d m;
      m << t2.real(), -t2.imag(), t2.imag(), t2.real();
      return {name, m};
    }
    default:
      throw Error("representation " + std::string(rep_name_string(name)) +
                  " is not defined on Spin^c(4)");
  }
}

RepMatrix rep(std::string_view name, const Spin4Element& g) { return rep(parse_rep_name(name), g); }
RepMatrix rep(std::string_view name, const SpinC4Element& g) { return rep(parse_rep_name(name), g); }

Mat7 So4Embedding::in_frame(const Eigen::Matrix3d& im_block, const Eigen::Matrix4d& h_block) const {
  Mat7 m = Mat7::Zero();
  m.topLeftCorner<3, 3>() = im_block;
  m.bottomRightCorner<4, 4>() = h_block;
  Mat7 f = split_.frame();
  return f * m * f.transpose();
}

Mat7 So4Embedding::group(const Spin4Element& g) const {
  Eigen::Matrix4d v = v_matrix(g.q, g.lambda);
  switch (placement_) {
    case Placement::ImagPlusConj:
      return in_frame(conjugation_matrix(g.q), conj_flip() * v * conj_flip());
    case Placement::ImagPlusDirect:
      return in_frame(conjugation_matrix(g.q), v);
    case Placement::ImagMinusConj:
      return in_frame(conjugation_matrix(g.lambda), conj_flip() * v * conj_flip());
    case Placement::ImagMinusDirect:
      return in_frame(conjugation_matrix(g.lambda), v);
  }
  throw Error("invalid placement");
}

Mat7 So4Embedding::algebra(const Quaternion& aq, const Quaternion& al) const {
  Eigen::Matrix4d v = left_matrix(aq) - right_matrix(al);
  switch (placement_) {
    case Placement::ImagPlusConj:
      return in_frame(ad_matrix(aq), conj_flip() * v * conj_flip());
    case Placement::ImagPlusDirect:
      return in_frame(ad_matrix(aq), v);
    case Placement::ImagMinusConj:
      return in_frame(ad_matrix(al), conj_flip() * v * conj_flip());
    case Placement::ImagMinusDirect:
      return in_frame(ad_matrix(al), v);
  }
  throw Error("invalid placement");
}

std::string So4Embedding::placement_description() const {
  switch (placement_) {
    case Placement::ImagPlusConj:
      return "lambda+(q) on im(H), V(q,lambda) on the conjugate coordinate of H";
    case Placement::ImagPlusDirect:
      return "lambda+(q) on im(H), V(q,lambda) on H";
    case Placement::ImagMinusConj:
      return "lambda-(lambda) on im(H), V(q,lambda) on the conjugate coordinate of H";
    case Placement::ImagMinusDirect:
      return "lambda-(lambda) on im(H), V(q,lambda) on H";
  }
  return "";
}

So4Embedding So4Embedding::resolve(const Splitting& split) {
  const std::array<Spin4Element, 3> probes{
      Spin4Element(Quaternion(1, 2, 3, 4).normalized(), Quaternion(-2, 1, 0.5, 3).normalized()),
      Spin4Element(Quaternion(0.3, -1, 0.7, 0.2).normalized(), Quaternion(1, 1, -1, 2).normalized()),
      Spin4Element(Quaternion(2, 0, -1, 1).normalized(), Quaternion(0.1, 3, 1, -1).normalized())};
  for (Placement p : {Placement::ImagPlusDirect, Placement::ImagPlusConj, Placement::ImagMinusDirect,
                      Placement::ImagMinusConj}) {
    So4Embedding e(split, p);
    bool ok = true;
    for (const auto& g : probes) ok = ok && pullback_defect(e.group(g)) < 1e-12;
    if (ok) return e;
  }
  throw Error("no block placement of SO(4) preserves phi0");
}

const So4Embedding& So4Embedding::standard() {
  static const So4Embedding e = resolve(standard_splitting());
  return e;
}

Mat7 embed_so4_g2(const Spin4Element& g, const Splitting& split) {
  if (split.sign == standard_splitting().sign && split.assoc_basis == standard_splitting().assoc_basis &&
      split.quat_basis == standard_splitting().quat_basis)
    return So4Embedding::standard().group(g);
  return So4Embedding::resolve(split).group(g);
}

Mat7 so4_in_g2_algebra(const Quaternion& aq, const Quaternion& al, const Splitting& split) {
  if (split.sign == standard_splitting().sign && split.assoc_basis == standard_splitting().assoc_basis &&
      split.quat_basis == standard_splitting().quat_basis)
    return So4Embedding::standard().algebra(aq.im_part(), al.im_part());
  return So4Embedding::resolve(split).algebra(aq.im_part(), al.im_part());
}

double pullback_defect(const Mat7& A, const G2Structure& s) {
  return (pullback(s.phi(), A) - s.phi()).max_abs();
}

Eigen::Matrix<double, 21, 1> so7_coords(const Mat7& A) {
  Eigen::Matrix<double, 21, 1> c;
  int idx = 0;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) c[idx++] = A(a, b);
  return c;
}

Mat7 so7_from_coords(const Eigen::Matrix<double, 21, 1>& c) {
  Mat7 A = Mat7::Zero();
  int idx = 0;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) {
      A(a, b) = c[idx];
      A(b, a) = -c[idx];
      ++idx;
    }
  return A;
}

Eigen::MatrixXd stabilizer_map(const G2Structure& s) {
  const auto& triples = subsets(7, 3);
  Eigen::MatrixXd m(triples.size(), 21);
  for (int col = 0; col < 21; ++col) {
    Mat7 A = so7_from_coords(Eigen::Matrix<double, 21, 1>::Unit(col));
    for (std::size_t r = 0; r < triples.size(); ++r) {
      auto idx = mask_indices(triples[r]);
      Vec7 e[3] = {Vec7::Unit(idx[0] - 1), Vec7::Unit(idx[1] - 1), Vec7::Unit(idx[2] - 1)};
      m(r, col) = s.phi_value(A * e[0], e[1], e[2]) + s.phi_value(e[0], A * e[1], e[2]) +
                  s.phi_value(e[0], e[1], A * e[2]);
    }
  }
  return m;
}

G2Algebra g2_lie_algebra(const G2Structure& s) {
  Eigen::MatrixXd m = stabilizer_map(s);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  G2Algebra out;
  out.singular_values = svd.singularValues();
  const auto& sv = out.singular_values;
  double top = sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-9 * top) ++rank;
  int nullity = 21 - rank;
  if (nullity != 14)
    throw Error("stabilizer algebra has dimension " + std::to_string(nullity) + ", expected 14");
  double zero_level = sv.size() > rank ? sv[rank] : 0.0;
  out.gap = zero_level > 0.0 ? sv[rank - 1] / zero_level : std::numeric_limits<double>::infinity();
  for (int i = rank; i < 21; ++i)
    out.basis.push_back(so7_from_coords(svd.matrixV().col(i)));
  return out;
}

double g2_complement_norm(const Mat7& A, const G2Algebra& g2) {
  Eigen::Matrix<double, 21, 1> c = so7_coords(A);
  Eigen::Matrix<double, 21, 1> r = c;
  for (const auto& b : g2.basis) {
    Eigen::Matrix<double, 21, 1> bc = so7_coords(b);
    r -= bc.dot(c) * bc;
  }
  return r.norm();
}

std::string g2_basis_csv(const G2Algebra& g2) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (int a = 1; a <= 7; ++a)
    for (int b = a + 1; b <= 7; ++b) {
      os << (first ? "" : ",") << "a" << a << b;
      first = false;
    }
  os << "\n";
  for (const auto& m : g2.basis) {
    auto c = so7_coords(m);
    for (int i = 0; i < 21; ++i) os << (i ? "," : "") << c[i];
    os << "\n";
  }
  return os.str();
}

Quaternion lambda2_action(const Quaternion& x1, const Quaternion& x2, const Quaternion& y) {
  return 0.5 * ((-(x1 * x2.conj())) + x2 * x1.conj()) * y;
}

Quaternion q_form_action(const Quaternion& x1, const Quaternion& x2, const Quaternion& y,
                         const Quaternion& z) {
  return (x2 * x1.conj()).im_part() * z * y;
}

Quaternion sigma(const Quaternion& x, const Quaternion& y) {
  return -0.5 * ((x * Quaternion::i() * y.conj()) * Quaternion::i());
}

Eigen::Vector3d mu(const Quaternion& v, const Eigen::Matrix3d& frame) {
  if ((frame.transpose() * frame - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("mu: frame is not orthonormal");
  Quaternion s = sigma(v, v);
  KForm two(3, 2);
  two.set({2, 3}, s.x);
  two.set({3, 1}, s.y);
  two.set({1, 2}, s.z);
  KForm one = hodge(two);
  Eigen::Vector3d coframe(one.coeff({1}), one.coeff({2}), one.coeff({3}));
  return frame * coframe;
}

Eigen::Vector3d mu_pair(const Quaternion& x, const Quaternion& y) {
  Quaternion s = 0.5 * (sigma(x, y) + sigma(y, x));
  return {s.x, s.y, s.z};
}

namespace {

Quaternion rho_p(const RhoVector& w, const Eigen::Vector3d& xi0) {
  Quaternion a = Quaternion::pure(w.a);
  Quaternion x = Quaternion::pure(w.x);
  Quaternion v0 = w.a.dot(xi0) * w.v;
  return a.conj() * w.v + x.conj() * v0 + w.y;
}

}  // namespace

SpinorPair dirac_action_rho(const RhoVector& w, const SpinorPair& z, const Eigen::Vector3d& xi0) {
  Quaternion a = Quaternion::pure(w.a);
  Quaternion x = Quaternion::pure(w.x);
  Quaternion v0 = w.a.dot(xi0) * w.v;
  const auto& [z1, z2] = z;
  Quaternion first = a.conj() * w.v * z2 + x.conj() * v0 * z2 + w.y * z2;
  Quaternion second = -(w.v.conj() * a * z1) - v0.conj() * x * z1 - w.y.conj() * z1;
  return {first, second};
}

double rho_norm2(const RhoVector& w, const Eigen::Vector3d& xi0) { return rho_p(w, xi0).norm2(); }

Quaternion random_quaternion(Rng& rng) {
  return {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
}

Quaternion random_unit_quaternion(Rng& rng) { return random_quaternion(rng).normalized(); }

Quaternion random_imaginary(Rng& rng) { return {0.0, rng.normal(), rng.normal(), rng.normal()}; }

}  // namespace g2
