#include <gtest/gtest.h>

#include <algorithm>

#include "g2/error.hpp"
#include "g2/torus/dirac.hpp"
#include "oracles.hpp"

using namespace g2;
using namespace g2::torus;

namespace {

Connection random_abelian(Rng& rng, int K, double amp, const Eigen::Vector3d& h) {
  Connection A = Connection::flat(h);
  A.fluctuation = FourierSection::random(rng, K, kOneForm, amp, true, true);
  return A;
}

FourierSection constant_nu(const Quaternion& q) {
  FourierSection v(0, kNuSpinor, true);
  for (int c = 0; c < 4; ++c) v.at(0, 0, 0, c) = q.vec()[c];
  return v;
}

Quaternion nu_value(const FourierSection& v) {
  return {v.get(0, 0, 0, 0).real(), v.get(0, 0, 0, 1).real(), v.get(0, 0, 0, 2).real(),
          v.get(0, 0, 0, 3).real()};
}

FourierSection constant_twist(const std::array<Eigen::Vector3d, 3>& c) {
  FourierSection t(0, kTwistForm, true);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) t.at(0, 0, 0, 3 * a + i) = c[a][i];
  return t;
}

// Unit field g = e^{2 pi i x1} e^{2 pi j x2} sampled and read back exactly.
FourierSection unit_gauge_field() {
  const int N = 5;
  GridField g(N, 4);
  for (int p = 0; p < g.points(); ++p) {
    int n2 = (p / N) % N, n1 = p / (N * N);
    double a = 2 * M_PI * n1 / N, b = 2 * M_PI * n2 / N;
    Quaternion q = Quaternion(std::cos(a), std::sin(a), 0, 0) * Quaternion(std::cos(b), 0, std::sin(b), 0);
    for (int c = 0; c < 4; ++c) g.at(p, c) = q.vec()[c];
  }
  return from_grid(g, 1, true);
}

}  // namespace

TEST(WClifford, QuaternionRelations) {
  const Eigen::Matrix2cd Id = Eigen::Matrix2cd::Identity();
  for (int a = 0; a < 3; ++a) {
    EXPECT_LE((w_clifford(a) * w_clifford(a) + Id).norm(), 1e-15);
    EXPECT_LE((w_clifford(a).adjoint() + w_clifford(a)).norm(), 1e-15);
  }
  EXPECT_LE((w_clifford(0) * w_clifford(1) - w_clifford(2)).norm(), 1e-15);
  EXPECT_THROW(w_clifford(3), Error);
  // left multiplication by i, j, k in the (z, w) coordinates
  Rng rng(91);
  Quaternion x(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  auto [z, w] = w_from_quaternion(x);
  const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
  for (int a = 0; a < 3; ++a) {
    Eigen::Vector2cd y = w_clifford(a) * Eigen::Vector2cd(z, w);
    EXPECT_LE(distance(quaternion_from_w(y[0], y[1]), units[a] * x), 1e-14);
  }
  EXPECT_LE(distance(quaternion_from_w(z, w), x), 0.0);
}

TEST(FlatDirac, TrivialSpectrumMatchesOracle) {
  for (int K : {1, 2}) {
    SpectralOperator D = build_dirac(K, Connection::flat(Eigen::Vector3d::Zero()));
    EXPECT_TRUE(D.is_block_diagonal());
    EXPECT_LE(D.hermitian_defect(), 1e-12);
    Eigen::VectorXd ev = D.eigenvalues();
    Eigen::VectorXd oracle_ev = oracle::flat_dirac_spectrum(K, Eigen::Vector3d::Zero());
    ASSERT_EQ(ev.size(), oracle_ev.size());
    EXPECT_LE((ev - oracle_ev).cwiseAbs().maxCoeff(), 1e-10);
    int zeros = 0;
    for (int i = 0; i < ev.size(); ++i) zeros += std::abs(ev[i]) < 1e-10;
    EXPECT_EQ(zeros, 2);
  }
}

TEST(FlatDirac, HolonomyShiftsSpectrum) {
  Rng rng(92);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Vector3d h = rng.uniform_vector(3, 0.0, 2 * M_PI);
    SpectralOperator D = build_dirac(2, Connection::flat(h));
    Eigen::VectorXd ev = D.eigenvalues();
    EXPECT_LE((ev - oracle::flat_dirac_spectrum(2, h)).cwiseAbs().maxCoeff(), 1e-10);
    // symmetric about zero
    EXPECT_LE((ev + ev.reverse()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(FlatDirac, HalfPeriodHolonomy) {
  SpectralOperator D = build_dirac(2, Connection::flat({M_PI, 0, 0}));
  EXPECT_NEAR(D.eigenvalues().cwiseAbs().minCoeff(), M_PI, 1e-12);
  EXPECT_EQ(kernel_dim(Connection::flat({M_PI, 0, 0}), 1e-8, 2), 0);
}

TEST(FlatDirac, KernelJumps) {
  EXPECT_EQ(kernel_dim(Connection::flat(Eigen::Vector3d::Zero()), 1e-8, 2), 2);
  Eigen::Vector3d small = Eigen::Vector3d(1, 1, 1).normalized() * 1e-3;
  EXPECT_EQ(kernel_dim(Connection::flat(small), 1e-8, 2), 0);
  SpectralOperator D = build_dirac(2, Connection::flat(small));
  EXPECT_NEAR(D.singular_values()[0], 1e-3, 1e-12);
  Rng rng(93);
  for (int n = 0; n < 5; ++n)
    EXPECT_EQ(kernel_dim(Connection::flat(rng.uniform_vector(3, 0.1, 2 * M_PI - 0.1)), 1e-8, 2), 0);
}

TEST(FlatDirac, IndexZero) {
  SpectralOperator D = build_dirac(2, Connection::flat({0.3, 0, 0}));
  EXPECT_EQ(D.rows(), D.cols());
  EXPECT_EQ(D.kernel_dim(1e-8), D.cokernel_dim(1e-8));
  SpectralOperator D0 = build_dirac(2, Connection::flat(Eigen::Vector3d::Zero()));
  EXPECT_EQ(D0.kernel_dim(1e-8), 2);
  EXPECT_EQ(D0.cokernel_dim(1e-8), 2);
}

TEST(FlatDirac, ModeEigenvalues) {
  SpectralOperator D = build_dirac(1, Connection::flat(Eigen::Vector3d::Zero()));
  auto me = D.mode_eigenvalues();
  EXPECT_EQ(me.size(), 54u);
  for (const auto& [m, ev] : me) {
    FourierSection shape(1, 0);
    Mode k = shape.mode(m);
    EXPECT_NEAR(std::abs(ev), 2 * M_PI * Eigen::Vector3d(k.k1, k.k2, k.k3).norm(), 1e-12);
  }
}

TEST(Dirac, CutoffErrors) {
  EXPECT_THROW(build_dirac(0, Connection::flat(Eigen::Vector3d::Zero())), Error);
  SpectralOperator D = build_dirac(1, Connection::flat(Eigen::Vector3d::Zero()));
  EXPECT_THROW(D.apply(FourierSection(2, kWSpinor)), Error);
  Connection bad = Connection::flat(Eigen::Vector3d::Zero());
  bad.fluctuation = FourierSection(1, kOneForm, true);
  bad.fluctuation.at(0, 0, 0, 0) = 1.0;
  EXPECT_THROW(build_dirac(1, bad), Error);
}

TEST(Dirac, TwistedAssemblyMatchesExactApplication) {
  Rng rng(94);
  Connection A = random_abelian(rng, 1, 0.3, {0.2, -0.4, 1.0});
  SpectralOperator D = build_dirac(2, A);
  EXPECT_FALSE(D.is_block_diagonal());
  EXPECT_LE(D.hermitian_defect(), 1e-12);
  FourierSection v = FourierSection::random(rng, 2, kWSpinor, 1.0, false);
  FourierSection exact = apply_dirac(v, A, Twist::Abelian);
  EXPECT_EQ(exact.cutoff(), 3);
  EXPECT_LE((D.apply(v) - exact.resized(2)).norm(), 1e-12 * (1.0 + exact.norm()));
  EXPECT_EQ(D.kernel_dim(1e-8), D.cokernel_dim(1e-8));
}

TEST(Dirac, So4TwistFlat) {
  // constant nu-spinors span the kernel of the untwisted operator
  SpectralOperator D = build_dirac(1, Connection::flat(Eigen::Vector3d::Zero()), Twist::So4);
  EXPECT_LE(D.hermitian_defect(), 1e-12);
  EXPECT_EQ(D.kernel_dim(1e-8), 4);
  SpectralOperator Dh = build_dirac(1, Connection::flat({0.5, 0.1, -0.2}), Twist::So4);
  EXPECT_LE(Dh.hermitian_defect(), 1e-12);
  EXPECT_EQ(Dh.kernel_dim(1e-8), 0);
}

TEST(Dirac, So4TwistHermitianWhenBalanced) {
  // sum_a e_a x s_a = 0 holds for s_a parallel to e_a
  Connection A = Connection::flat(Eigen::Vector3d::Zero());
  for (int a = 0; a < 3; ++a) A.s_constant[a] = 0.7 * Eigen::Vector3d::Unit(a);
  EXPECT_LE(build_dirac(1, A, Twist::So4).hermitian_defect(), 1e-12);
}

TEST(PerturbedDirac, ZeroTwistIsPlainOperator) {
  Rng rng(95);
  FourierSection v = FourierSection::random(rng, 2, kNuSpinor, 1.0, true);
  Connection A0 = Connection::flat({0.1, 0.2, 0.3});
  FourierSection out = perturbed_dirac(v, A0, TwistField{});
  EXPECT_LE((out - apply_dirac(v, A0, Twist::So4)).norm(), 1e-12);
}

TEST(PerturbedDirac, ConstantTwistOnConstantSpinor) {
  Rng rng(96);
  Quaternion q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  std::array<Eigen::Vector3d, 3> s{rng.normal_vector(3), rng.normal_vector(3), rng.normal_vector(3)};
  std::array<Eigen::Vector3d, 3> e{rng.normal_vector(3), rng.normal_vector(3), rng.normal_vector(3)};
  TwistField alpha{constant_twist(s), constant_twist(e)};
  FourierSection out = perturbed_dirac(constant_nu(q), Connection::flat(Eigen::Vector3d::Zero()), alpha);
  // sum_a e_a (s_a q - q e_a) by the quaternion oracle
  oracle::Q acc{0, 0, 0, 0};
  const oracle::Q units[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  oracle::Q qq{q.w, q.x, q.y, q.z};
  for (int a = 0; a < 3; ++a) {
    oracle::Q sa{0, s[a][0], s[a][1], s[a][2]}, ea{0, e[a][0], e[a][1], e[a][2]};
    oracle::Q inner = oracle::qadd(oracle::qmul(sa, qq), oracle::qscale(-1.0, oracle::qmul(qq, ea)));
    acc = oracle::qadd(acc, oracle::qmul(units[a], inner));
  }
  Quaternion got = nu_value(out);
  EXPECT_LE(distance(got, Quaternion(acc[0], acc[1], acc[2], acc[3])), 1e-13);
  EXPECT_LE(out.norm() - got.norm(), 1e-13);
}

TEST(PerturbedDirac, Linearity) {
  Rng rng(97);
  FourierSection v = FourierSection::random(rng, 1, kNuSpinor, 1.0, true);
  Connection A0 = Connection::flat({0.3, 0.0, -0.1});
  auto rand_twist = [&]() {
    return TwistField{FourierSection::random(rng, 1, kTwistForm, 1.0, true),
                      FourierSection::random(rng, 1, kTwistForm, 1.0, true)};
  };
  TwistField a = rand_twist(), b = rand_twist();
  TwistField ab{2.0 * a.s + b.s, 2.0 * a.e + b.e};
  FourierSection base = apply_dirac(v, A0, Twist::So4).resized(2);
  FourierSection lhs = perturbed_dirac(v, A0, ab) - base;
  FourierSection rhs = 2.0 * (perturbed_dirac(v, A0, a) - base) + (perturbed_dirac(v, A0, b) - base);
  EXPECT_LE((lhs - rhs).norm(), 1e-12 * (1.0 + lhs.norm()));
  FourierSection w = FourierSection::random(rng, 1, kNuSpinor, 1.0, true);
  FourierSection sum = perturbed_dirac(v + w, A0, a);
  FourierSection parts = perturbed_dirac(v, A0, a) + perturbed_dirac(w, A0, a);
  EXPECT_LE((sum - parts).norm(), 1e-12 * (1.0 + sum.norm()));
  EXPECT_THROW(perturbed_dirac(FourierSection(1, kWSpinor), A0, a), Error);
}

TEST(DivCurl, KernelAndCokernel) {
  for (int K = 1; K <= 3; ++K) {
    SpectralOperator op = div_curl_op(K);
    EXPECT_EQ(op.rows(), op.cols());
    EXPECT_EQ(op.kernel_dim(1e-8), 4) << K;
    EXPECT_EQ(op.cokernel_dim(1e-8), 4) << K;
    EXPECT_LE(op.hermitian_defect(), 1e-12);
  }
}

TEST(DivCurl, ActsAsDivergenceGradientCurl) {
  Rng rng(98);
  FourierSection fa = FourierSection::random(rng, 2, 4, 1.0, true);
  FourierSection out = div_curl_op(2).apply(fa);
  FourierSection f = fa.components(0, 1), a = fa.components(1, 3);
  EXPECT_LE((out.components(0, 1) + divergence(a)).norm(), 1e-12);
  EXPECT_LE((out.components(1, 3) - grad(f) - curl(a)).norm(), 1e-12);
  FourierSection c(2, 4, true);
  c.at(0, 0, 0, 0) = 3.0;
  EXPECT_LE(div_curl_op(2).apply(c).norm(), 0.0);
  // curl grad = 0, div curl = 0
  EXPECT_LE(curl(grad(f)).norm(), 1e-12);
  EXPECT_LE(divergence(curl(a)).norm(), 1e-12);
}

TEST(Integrability, ConstantJFlatB) {
  FourierSection j(1, 3, true);
  j.at(0, 0, 0, 0) = 1.0;
  EXPECT_EQ(integrability_defect(j, Connection::flat(Eigen::Vector3d::Zero())), 0.0);
}

TEST(Integrability, ConstantBracketOracle) {
  FourierSection j(1, 3, true);
  Eigen::Vector3d jv = Eigen::Vector3d(1, 2, 2) / 3.0;
  for (int i = 0; i < 3; ++i) j.at(0, 0, 0, i) = jv[i];
  Connection B = Connection::flat(Eigen::Vector3d::Zero());
  Rng rng(99);
  double expected2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    B.e_constant[a] = rng.normal_vector(3);
    // [b_a, j] = b_a j - j b_a
    oracle::Q b{0, B.e_constant[a][0], B.e_constant[a][1], B.e_constant[a][2]}, jq{0, jv[0], jv[1], jv[2]};
    oracle::Q c = oracle::qadd(oracle::qmul(b, jq), oracle::qscale(-1.0, oracle::qmul(jq, b)));
    expected2 += oracle::qnorm2(c);
  }
  EXPECT_NEAR(integrability_defect(j, B), std::sqrt(expected2), 1e-12);
  // the single-axis example: b = j-axis, j = i gives |[j, i]| = 2
  FourierSection ji(0, 3, true);
  ji.at(0, 0, 0, 0) = 1.0;
  Connection Bj = Connection::flat(Eigen::Vector3d::Zero());
  Bj.e_constant[0] = Eigen::Vector3d::Unit(1);
  EXPECT_NEAR(integrability_defect(ji, Bj), 2.0, 1e-14);
}

TEST(Integrability, RejectsNonUnitField) {
  FourierSection j(1, 3, true);
  j.at(0, 0, 0, 0) = 0.9;
  EXPECT_THROW(integrability_defect(j, Connection::flat(Eigen::Vector3d::Zero())), Error);
  EXPECT_THROW(integrability_defect(FourierSection(1, 4, true), Connection::flat(Eigen::Vector3d::Zero())), Error);
}

TEST(Integrability, GaugeEquivariance) {
  FourierSection g = unit_gauge_field();
  // constant j with flat B is integrable, and so is its gauge transform
  FourierSection j(0, 3, true);
  j.at(0, 0, 0, 2) = 1.0;
  Connection B = Connection::flat(Eigen::Vector3d::Zero());
  auto [j1, B1] = integrability_gauge(g, j, B);
  EXPECT_GT(j1.cutoff(), 0);
  EXPECT_LE(integrability_defect(j1, B1), 1e-10);
  // a non-integrable pair keeps its defect
  Connection C = Connection::flat(Eigen::Vector3d::Zero());
  C.e_constant[0] = {0.0, 0.4, -0.3};
  C.e_constant[2] = {0.2, 0.0, 0.1};
  double before = integrability_defect(j, C);
  auto [j2, C2] = integrability_gauge(g, j, C);
  EXPECT_GT(before, 0.1);
  EXPECT_NEAR(integrability_defect(j2, C2), before, 1e-10);
}
