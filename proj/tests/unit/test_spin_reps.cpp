#include <gtest/gtest.h>

#include <complex>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "g2/error.hpp"
#include "g2/spin_reps.hpp"
#include "oracles.hpp"

using namespace g2;

namespace {

const std::vector<RepName> kSpin4Reps{RepName::V, RepName::LambdaPlus, RepName::LambdaMinus,
                                      RepName::S, RepName::E, RepName::AdVPlus, RepName::AdVMinus};
const std::vector<RepName> kSpinC4Reps{RepName::V,     RepName::LambdaPlus, RepName::LambdaMinus,
                                       RepName::VPlus, RepName::VMinus,     RepName::AdVPlus,
                                       RepName::AdVMinus, RepName::L};

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

SpinC4Element random_c(Rng& rng) { return SpinC4Element::random(rng); }

oracle::Q to_q(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }
Quaternion from_q(const oracle::Q& q) { return {q[0], q[1], q[2], q[3]}; }

}  // namespace

TEST(Rep, IdentityElement) {
  Spin4Element one;
  EXPECT_EQ(rep(RepName::V, one).matrix, Eigen::MatrixXd::Identity(4, 4));
  for (RepName n : kSpin4Reps) {
    const auto m = rep(n, one).matrix;
    EXPECT_EQ(m, Eigen::MatrixXd::Identity(m.rows(), m.cols())) << rep_name_string(n);
  }
}

TEST(Rep, NamesAndErrors) {
  for (RepName n : kSpinC4Reps) EXPECT_EQ(parse_rep_name(rep_name_string(n)), n);
  EXPECT_THROW(parse_rep_name("W"), Error);
  EXPECT_THROW(rep("L", Spin4Element()), Error);
  EXPECT_THROW(rep(RepName::S, SpinC4Element()), Error);
  EXPECT_THROW(Spin4Element(Quaternion(2, 0, 0, 0), Quaternion::one()), Error);
  EXPECT_THROW(SpinC4Element(Quaternion::one(), Quaternion::one(), 2.0), Error);
}

TEST(Rep, HomomorphismsAndOrthogonality) {
  Rng rng(61);
  for (int n = 0; n < 200; ++n) {
    Spin4Element g = Spin4Element::random(rng), h = Spin4Element::random(rng);
    for (RepName r : kSpin4Reps) {
      Eigen::MatrixXd gh = rep(r, g * h).matrix, prod = rep(r, g).matrix * rep(r, h).matrix;
      ASSERT_LE(max_abs(gh - prod), 1e-12) << rep_name_string(r);
      Eigen::MatrixXd m = rep(r, g).matrix;
      ASSERT_LE(max_abs(m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())), 1e-12);
    }
    SpinC4Element a = random_c(rng), b = random_c(rng);
    for (RepName r : kSpinC4Reps) {
      Eigen::MatrixXd ab = rep(r, a * b).matrix, prod = rep(r, a).matrix * rep(r, b).matrix;
      ASSERT_LE(max_abs(ab - prod), 1e-12) << rep_name_string(r);
      Eigen::MatrixXd m = rep(r, a).matrix;
      ASSERT_LE(max_abs(m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())), 1e-12);
    }
  }
}

TEST(Rep, Z2WellDefined) {
  Rng rng(62);
  for (int n = 0; n < 100; ++n) {
    Spin4Element g = Spin4Element::random(rng);
    Spin4Element mg(-g.q, -g.lambda);
    for (RepName r : {RepName::V, RepName::LambdaPlus, RepName::LambdaMinus, RepName::AdVPlus,
                      RepName::AdVMinus})
      ASSERT_LE(max_abs(rep(r, g).matrix - rep(r, mg).matrix), 1e-15);
    // the spin representations see the sign
    ASSERT_LE(max_abs(rep(RepName::S, g).matrix + rep(RepName::S, mg).matrix), 1e-15);
    SpinC4Element c = random_c(rng);
    SpinC4Element mc(-c.q, -c.lambda, -c.t);
    for (RepName r : kSpinC4Reps) ASSERT_LE(max_abs(rep(r, c).matrix - rep(r, mc).matrix), 1e-15);
  }
}

TEST(Rep, LambdaPlusRotatesByTwiceTheAngle) {
  Quaternion q = quat_exp(Quaternion(0, M_PI / 4, 0, 0));
  Eigen::Matrix3d m = rep(RepName::LambdaPlus, Spin4Element(q, Quaternion::one())).matrix;
  Eigen::Matrix3d expected;
  expected << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  EXPECT_LE(max_abs(m - expected), 1e-15);
  // against direct conjugation x -> q x q^-1
  Rng rng(63);
  for (int n = 0; n < 50; ++n) {
    Quaternion g = random_unit_quaternion(rng);
    Eigen::Vector3d x = rng.normal_vector(3);
    Quaternion y = g * Quaternion::pure(x) * g.conj();
    Eigen::Matrix3d r = rep(RepName::LambdaPlus, Spin4Element(g, Quaternion::one())).matrix;
    EXPECT_LE((r * x - y.imag()).norm(), 1e-13);
  }
}

TEST(Rep, ActionsMatchFormulas) {
  Rng rng(64);
  SpinC4Element g = random_c(rng);
  Quaternion x = random_quaternion(rng);
  Quaternion t(g.t.real(), g.t.imag(), 0, 0);
  auto apply = [&](RepName r) { return Quaternion::from_vec(rep(r, g).matrix * x.vec()); };
  EXPECT_LE(distance(apply(RepName::V), g.q * x * g.lambda.conj()), 1e-13);
  EXPECT_LE(distance(apply(RepName::VPlus), g.q * x * t.conj()), 1e-13);
  EXPECT_LE(distance(apply(RepName::VMinus), g.lambda * x * t.conj()), 1e-13);
  Spin4Element h(g.q, g.lambda);
  EXPECT_LE(distance(Quaternion::from_vec(rep(RepName::S, h).matrix * x.vec()), g.q * x), 1e-13);
  EXPECT_LE(distance(Quaternion::from_vec(rep(RepName::E, h).matrix * x.vec()), x * g.lambda.conj()), 1e-13);
  // L: y -> y t^2 on C
  std::complex<double> y(0.3, -1.1), out = y * g.t * g.t;
  Eigen::Vector2d yl = rep(RepName::L, g).matrix * Eigen::Vector2d(y.real(), y.imag());
  EXPECT_NEAR(yl[0], out.real(), 1e-14);
  EXPECT_NEAR(yl[1], out.imag(), 1e-14);
}

TEST(Rep, AdVPlusRestrictsToLambdaPlus) {
  Rng rng(65);
  for (int n = 0; n < 100; ++n) {
    Spin4Element g = Spin4Element::random(rng);
    SpinC4Element c(g.q, g.lambda, 1.0);
    EXPECT_LE(max_abs(rep(RepName::AdVPlus, c).matrix - rep(RepName::LambdaPlus, g).matrix), 1e-12);
    EXPECT_LE(max_abs(rep(RepName::AdVMinus, c).matrix - rep(RepName::LambdaMinus, g).matrix), 1e-12);
  }
}

TEST(Embedding, IdentityAndStabilizer) {
  EXPECT_LE(max_abs(embed_so4_g2(Spin4Element()) - Mat7::Identity()), 1e-15);
  Rng rng(66);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    Mat7 A = embed_so4_g2(Spin4Element::random(rng));
    worst = std::max(worst, pullback_defect(A));
    ASSERT_LE(max_abs(A.transpose() * A - Mat7::Identity()), 1e-12);
  }
  EXPECT_LT(worst, 1e-12);
  EXPECT_EQ(So4Embedding::standard().placement(), So4Embedding::Placement::ImagPlusConj);
}

TEST(Embedding, PreservesAssociativeSubspace) {
  Rng rng(67);
  Mat7 A = embed_so4_g2(Spin4Element::random(rng));
  // span(e1, e2, e3) is mapped to itself
  EXPECT_LE(max_abs(A.block<4, 3>(3, 0)), 1e-14);
}

TEST(Embedding, GenericRotationIsNotInG2) {
  Rng rng(68);
  for (int n = 0; n < 20; ++n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.normal_matrix(7, 7));
    Mat7 Q = qr.householderQ();
    EXPECT_GT(pullback_defect(Q), 1e-2);
  }
}

TEST(Embedding, AlgebraExponentiates) {
  Rng rng(69);
  for (int n = 0; n < 20; ++n) {
    Quaternion aq = random_imaginary(rng), al = random_imaginary(rng);
    Mat7 X = so4_in_g2_algebra(aq, al);
    Mat7 E = X.exp();
    Mat7 G = embed_so4_g2(Spin4Element(quat_exp(aq), quat_exp(al)));
    EXPECT_LE(max_abs(E - G), 1e-8);
  }
  EXPECT_EQ(so4_in_g2_algebra(Quaternion(), Quaternion()), Mat7::Zero());
}

TEST(G2Algebra, DimensionAndGap) {
  G2Algebra g2 = g2_lie_algebra();
  EXPECT_EQ(g2.basis.size(), 14u);
  EXPECT_EQ(stabilizer_map().cols(), 21);
  EXPECT_EQ(stabilizer_map().rows(), 35);
  EXPECT_GE(g2.gap, 1e6);
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(g2.singular_values[i], std::sqrt(12.0), 1e-12);
  // orthonormal in so7 coordinates and antisymmetric
  for (std::size_t a = 0; a < g2.basis.size(); ++a) {
    EXPECT_LE(max_abs(g2.basis[a] + g2.basis[a].transpose()), 0.0);
    for (std::size_t b = 0; b < g2.basis.size(); ++b)
      EXPECT_NEAR(so7_coords(g2.basis[a]).dot(so7_coords(g2.basis[b])), a == b ? 1.0 : 0.0, 1e-12);
  }
}

TEST(G2Algebra, ElementsStabilizePhi) {
  G2Algebra g2 = g2_lie_algebra();
  for (const Mat7& b : g2.basis) EXPECT_LE(pullback_defect(Mat7(b.exp())), 1e-12);
}

TEST(G2Algebra, BracketClosure) {
  G2Algebra g2 = g2_lie_algebra();
  double worst = 0.0;
  for (const Mat7& a : g2.basis)
    for (const Mat7& b : g2.basis) worst = std::max(worst, g2_complement_norm(a * b - b * a, g2));
  EXPECT_LT(worst, 1e-10);
}

TEST(G2Algebra, ContainsSo4) {
  G2Algebra g2 = g2_lie_algebra();
  EXPECT_LT(g2_complement_norm(so4_in_g2_algebra(Quaternion::i(), Quaternion()), g2), 1e-10);
  Rng rng(70);
  for (int n = 0; n < 20; ++n)
    EXPECT_LT(g2_complement_norm(so4_in_g2_algebra(random_imaginary(rng), random_imaginary(rng)), g2), 1e-10);
  // a generic so7 element has a component outside
  Mat7 A = so7_from_coords(rng.normal_vector(21));
  EXPECT_GT(g2_complement_norm(A, g2), 0.1);
}

TEST(G2Algebra, CsvExport) {
  std::istringstream in(g2_basis_csv(g2_lie_algebra()));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("a12,a13,", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 20);
  }
  EXPECT_EQ(rows, 14);
}

TEST(FormActions, Fixtures) {
  EXPECT_EQ(lambda2_action(Quaternion::i(), Quaternion::j(), Quaternion::one()), Quaternion::k());
  EXPECT_EQ(q_form_action(Quaternion::i(), Quaternion::j(), Quaternion::k(), Quaternion::one()),
            -Quaternion::one());
  Rng rng(71);
  for (int n = 0; n < 100; ++n) {
    Quaternion x = random_imaginary(rng), x2 = random_imaginary(rng), y = random_quaternion(rng),
               y2 = random_quaternion(rng), z = random_quaternion(rng);
    EXPECT_LE(lambda2_action(x, x, y).norm(), 1e-14);
    EXPECT_LE(distance(lambda2_action(x, x2, y), -lambda2_action(x2, x, y)), 1e-13);
    EXPECT_LE(distance(lambda2_action(x, x2, 2.0 * y + y2),
                       2.0 * lambda2_action(x, x2, y) + lambda2_action(x, x2, y2)), 1e-12);
    EXPECT_LE(distance(q_form_action(x, x2, Quaternion::one(), z), lambda2_action(x, x2, z)), 1e-13);
    EXPECT_LE(q_form_action(x, x, y, z).norm(), 1e-13);
    // oracle: Im(x2 conj(x1)) z y
    oracle::Q im = to_q((x2 * x.conj()).im_part());
    Quaternion expected = from_q(oracle::qmul(oracle::qmul(im, to_q(z)), to_q(y)));
    EXPECT_LE(distance(q_form_action(x, x2, y, z), expected), 1e-12);
  }
}

TEST(Sigma, Examples) {
  EXPECT_EQ(sigma(Quaternion::one(), Quaternion::one()), Quaternion(0.5, 0, 0, 0));
  EXPECT_EQ(sigma(Quaternion::j(), Quaternion::j()), Quaternion(-0.5, 0, 0, 0));
}

TEST(Sigma, ClosedForm) {
  Rng rng(72);
  for (int n = 0; n < 10000; ++n) {
    Quaternion x = random_quaternion(rng);
    // x = z + j w with z, w along (1, i)
    std::complex<double> z(x.w, x.x), w(x.y, -x.z);
    std::complex<double> c = std::conj(z) * w;
    // j c = Re(c) j - Im(c) k
    Quaternion expected(0.5 * (std::norm(z) - std::norm(w)), 0, c.real(), -c.imag());
    ASSERT_LE(distance(sigma(x, x), expected), 1e-12 * (1.0 + x.norm2()));
    // oracle expansion of -(1/2)(x i conj(x)) i
    oracle::Q I{0, 1, 0, 0};
    oracle::Q o = oracle::qscale(-0.5, oracle::qmul(oracle::qmul(oracle::qmul(to_q(x), I), oracle::qconj(to_q(x))), I));
    ASSERT_LE(distance(sigma(x, x), from_q(o)), 1e-12 * (1.0 + x.norm2()));
  }
}

TEST(Mu, Examples) {
  EXPECT_EQ(mu(Quaternion()), Eigen::Vector3d::Zero());
  EXPECT_EQ(mu(Quaternion::one()), Eigen::Vector3d::Zero());
  EXPECT_EQ(mu(Quaternion::j()), Eigen::Vector3d::Zero());
  Rng rng(73);
  for (int n = 0; n < 100; ++n) {
    Quaternion v = random_quaternion(rng), u = random_quaternion(rng);
    double c = rng.normal();
    EXPECT_LE((mu(c * v) - c * c * mu(v)).norm(), 1e-12 * (1.0 + c * c * v.norm2()));
    EXPECT_LE((mu(v) - mu_pair(v, v)).norm(), 1e-13 * (1.0 + v.norm2()));
    EXPECT_LE((mu_pair(u, v) - mu_pair(v, u)).norm(), 1e-13 * (1.0 + u.norm() * v.norm()));
    // polarization: mu(u + v) = mu(u) + 2 mu(u, v) + mu(v)
    EXPECT_LE((mu(u + v) - mu(u) - 2.0 * mu_pair(u, v) - mu(v)).norm(), 1e-12 * (1.0 + (u + v).norm2()));
    // the imaginary part of sigma read through i <-> e23, j <-> e31, k <-> e12 and Hodge-dualized
    Quaternion s = sigma(v, v);
    EXPECT_LE((mu(v) - Eigen::Vector3d(s.x, s.y, s.z)).norm(), 1e-13 * (1.0 + v.norm2()));
  }
  EXPECT_THROW(mu(Quaternion::one(), 2.0 * Eigen::Matrix3d::Identity()), Error);
}

TEST(Mu, FrameRotation) {
  Rng rng(74);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.normal_matrix(3, 3));
  Eigen::Matrix3d R = qr.householderQ();
  Quaternion v = random_quaternion(rng);
  EXPECT_LE((mu(v, R) - R * mu(v)).norm(), 1e-13);
}

TEST(Rho, Examples) {
  RhoVector w;
  w.y = Quaternion::one();
  SpinorPair r = dirac_action_rho(w, {Quaternion::one(), Quaternion()});
  EXPECT_EQ(r.first, Quaternion());
  EXPECT_EQ(r.second, -Quaternion::one());
  RhoVector zero;
  Rng rng(75);
  SpinorPair z{random_quaternion(rng), random_quaternion(rng)};
  SpinorPair r0 = dirac_action_rho(zero, z);
  EXPECT_EQ(r0.first.norm(), 0.0);
  EXPECT_EQ(r0.second.norm(), 0.0);
}

TEST(Rho, SquaresToMinusNorm) {
  Rng rng(76);
  for (int n = 0; n < 10000; ++n) {
    RhoVector w{rng.normal_vector(3), random_quaternion(rng), rng.normal_vector(3), random_quaternion(rng)};
    SpinorPair z{random_quaternion(rng), random_quaternion(rng)};
    // P = conj(a) v + conj(x) v0 + y with v0 = a(e1) v, by the quaternion oracle
    oracle::Q a{0, w.a[0], w.a[1], w.a[2]}, x{0, w.x[0], w.x[1], w.x[2]};
    oracle::Q v0 = oracle::qscale(w.a[0], to_q(w.v));
    oracle::Q P = oracle::qadd(oracle::qadd(oracle::qmul(oracle::qconj(a), to_q(w.v)),
                                            oracle::qmul(oracle::qconj(x), v0)),
                               to_q(w.y));
    double n2 = oracle::qnorm2(P);
    ASSERT_NEAR(rho_norm2(w), n2, 1e-12 * (1.0 + n2));
    SpinorPair once = dirac_action_rho(w, z);
    SpinorPair twice = dirac_action_rho(w, once);
    double scale = 1.0 + n2 * (z.first.norm() + z.second.norm());
    ASSERT_LE(distance(twice.first, -n2 * z.first), 1e-12 * scale);
    ASSERT_LE(distance(twice.second, -n2 * z.second), 1e-12 * scale);
  }
}

TEST(Rho, BasicSectionChoice) {
  Rng rng(77);
  RhoVector w{rng.normal_vector(3), random_quaternion(rng), rng.normal_vector(3), random_quaternion(rng)};
  Eigen::Vector3d xi = Eigen::Vector3d::Unit(2);
  SpinorPair z{random_quaternion(rng), random_quaternion(rng)};
  SpinorPair twice = dirac_action_rho(w, dirac_action_rho(w, z, xi), xi);
  double n2 = rho_norm2(w, xi);
  EXPECT_LE(distance(twice.first, -n2 * z.first), 1e-11 * (1.0 + n2));
  EXPECT_NE(rho_norm2(w, xi), rho_norm2(w));
}
