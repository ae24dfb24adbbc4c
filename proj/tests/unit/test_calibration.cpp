#include <gtest/gtest.h>

#include <Eigen/QR>

#include "g2/calibration.hpp"
#include "g2/error.hpp"
#include "g2/random.hpp"
#include "oracles.hpp"

using namespace g2;

namespace {

Vec7 e(int i) { return Vec7::Unit(i - 1); }

Mat7 random_rotation(Rng& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.normal_matrix(7, 7));
  Mat7 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace

TEST(Phi0, DisplayCoefficients) {
  KForm p = phi0();
  EXPECT_EQ(p.coeff({1, 2, 3}), 1.0);
  EXPECT_EQ(p.coeff({2, 5, 7}), -1.0);
  EXPECT_EQ(p.coeff({1, 2, 4}), 0.0);
  int nonzero = 0;
  for (const auto& t : p.terms()) {
    ++nonzero;
    EXPECT_EQ(std::abs(t.value), 1.0);
  }
  EXPECT_EQ(nonzero, 7);
  for (const auto& t : oracle::phi0_terms()) EXPECT_EQ(p.coeff({t.i, t.j, t.k}), t.c);
}

TEST(Metric, Phi0GivesIdentity) {
  EXPECT_LE((metric_from_phi(phi0()) - Mat7::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((G2Structure::standard().metric() - Mat7::Identity()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(G2Structure::standard().orientation(), 1);
}

TEST(Metric, BilinearFormOfPhi0IsMultipleOfIdentity) {
  // B(e_i, e_j) from the wedge definition: each e_i lies in three phi0 terms.
  Mat7 B = phi_bilinear(phi0());
  EXPECT_LE((B - B(0, 0) * Mat7::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(std::abs(B(0, 0)), 6.0, 1e-12);
}

TEST(Metric, RotationEquivariance) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Mat7 A = random_rotation(rng);
    Mat7 g = metric_from_phi(pullback(phi0(), A));
    EXPECT_LE((g - A.transpose() * A).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Metric, GeneralLinearPullback) {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    Mat7 A = Mat7::Identity() + 0.3 * Mat7(rng.normal_matrix(7, 7));
    if (A.determinant() <= 0) continue;
    Mat7 g = metric_from_phi(pullback(phi0(), A));
    EXPECT_LE((g - A.transpose() * A).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Metric, OrientationReversingPullback) {
  Mat7 R = Mat7::Identity();
  R(0, 0) = -1.0;
  G2Structure s = G2Structure::from_phi(pullback(phi0(), R));
  EXPECT_LE((s.metric() - Mat7::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(s.orientation(), -1);
  EXPECT_EQ(G2Structure::from_phi(-phi0()).orientation(), -1);
}

TEST(Metric, DegenerateFormsThrow) {
  EXPECT_THROW(metric_from_phi(KForm(7, 3)), Error);
  EXPECT_THROW(metric_from_phi(KForm::monomial(7, {1, 2, 3})), Error);
  EXPECT_THROW(metric_from_phi(KForm(7, 2)), Error);
}

TEST(Structure, StarPhiConsistent) {
  const G2Structure& s = G2Structure::standard();
  EXPECT_EQ(s.star_phi(), hodge(s.phi()));
  EXPECT_EQ(s.volume(), KForm::volume(7));
}

TEST(Structure, FromPartsRejectsInconsistentMetric) {
  Mat7 g = 2.0 * Mat7::Identity();
  EXPECT_THROW(G2Structure::from_parts(phi0(), g, 1), Error);
  EXPECT_NO_THROW(G2Structure::from_parts(phi0(), Mat7::Identity(), 1));
}

TEST(Cross, Examples) {
  const G2Structure& s = G2Structure::standard();
  EXPECT_EQ(cross(e(1), e(2), s), e(3));
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    Vec7 u = rng.normal_vector(7), v = rng.normal_vector(7);
    ASSERT_LE(cross(u, u, s).norm(), 1e-12);
    ASSERT_NEAR(cross(u, v, s).dot(u), 0.0, 1e-12);
    ASSERT_LE((cross(u, v, s) + cross(v, u, s)).norm(), 1e-12);
    ASSERT_LE((cross(u, v, s) - oracle::cross(u, v)).norm(), 1e-12);
  }
}

TEST(Cross, NormIdentity) {
  // |u x v|^2 = |u|^2 |v|^2 - <u,v>^2 in seven dimensions
  const G2Structure& s = G2Structure::standard();
  Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    Vec7 u = rng.normal_vector(7), v = rng.normal_vector(7);
    double rhs = u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
    EXPECT_NEAR(cross(u, v, s).squaredNorm(), rhs, 1e-10 * (1.0 + rhs));
  }
}

TEST(Chi, Examples) {
  const G2Structure& s = G2Structure::standard();
  EXPECT_LE(chi(e(1), e(2), e(3), s).norm(), 1e-15);
  // regression fixture
  Vec7 c = chi(e(1), e(2), e(4), s);
  EXPECT_LE((c - (-2.0) * e(7)).norm(), 1e-14);
}

TEST(Chi, AgreesWithOctonionAssociator) {
  const G2Structure& s = G2Structure::standard();
  Rng rng(25);
  for (int i = 0; i < 200; ++i) {
    Vec7 u = rng.normal_vector(7), v = rng.normal_vector(7), w = rng.normal_vector(7);
    EXPECT_LE((chi(u, v, w, s) - oracle::associator(u, v, w)).norm(), 1e-11);
  }
}

TEST(Chi, StarPhiContraction) {
  // <chi(u,v,w), z> = 2 *phi(u,v,w,z), evaluated independently
  const G2Structure& s = G2Structure::standard();
  KForm sp = hodge(phi0());
  Rng rng(26);
  for (int i = 0; i < 50; ++i) {
    Vec7 u = rng.normal_vector(7), v = rng.normal_vector(7), w = rng.normal_vector(7),
         z = rng.normal_vector(7);
    Eigen::VectorXd U = u, V = v, W = w, Z = z;
    EXPECT_NEAR(chi(u, v, w, s).dot(z), 2.0 * eval(sp, {U, V, W, Z}), 1e-10);
  }
}

TEST(Chi, OrthogonalToArgumentsAndAntisymmetric) {
  const G2Structure& s = G2Structure::standard();
  Rng rng(27);
  for (int i = 0; i < 1000; ++i) {
    Vec7 u = rng.uniform_vector(7), v = rng.uniform_vector(7), w = rng.uniform_vector(7);
    Vec7 c = chi(u, v, w, s);
    ASSERT_NEAR(c.dot(u), 0.0, 1e-12);
    ASSERT_NEAR(c.dot(v), 0.0, 1e-12);
    ASSERT_NEAR(c.dot(w), 0.0, 1e-12);
    ASSERT_LE((chi(v, u, w, s) + c).norm(), 1e-12);
    ASSERT_LE((chi(u, w, v, s) + c).norm(), 1e-12);
  }
}

TEST(AssociatorDefect, Examples) {
  const G2Structure& s = G2Structure::standard();
  EXPECT_NEAR(associator_defect(e(1), e(2), e(3), s), 0.0, 1e-15);
  EXPECT_NEAR(associator_defect(e(1), e(2), e(4), s), 0.0, 1e-14);
}

TEST(AssociatorDefect, RandomTriples) {
  const G2Structure& s = G2Structure::standard();
  Rng rng(28);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    Vec7 u = rng.uniform_vector(7), v = rng.uniform_vector(7), w = rng.uniform_vector(7);
    worst = std::max(worst, std::abs(associator_defect(u, v, w, s)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(AssociatorDefect, OrthonormalTriplesSumToOne) {
  const G2Structure& s = G2Structure::standard();
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    Mat7 Q = random_rotation(rng);
    Vec7 f1 = Q.col(0), f2 = Q.col(1), f3 = Q.col(2);
    double p = s.phi_value(f1, f2, f3);
    EXPECT_NEAR(p * p + chi(f1, f2, f3, s).squaredNorm() / 4.0, 1.0, 1e-12);
  }
}

TEST(AssociatorDefect, HoldsForTransformedStructure) {
  Rng rng(30);
  Mat7 A = Mat7::Identity() + 0.2 * Mat7(rng.normal_matrix(7, 7));
  G2Structure s = G2Structure::from_phi(pullback(phi0(), A));
  for (int i = 0; i < 200; ++i) {
    Vec7 u = rng.uniform_vector(7), v = rng.uniform_vector(7), w = rng.uniform_vector(7);
    EXPECT_NEAR(associator_defect(u, v, w, s), 0.0, 1e-9);
  }
}
