#include "g2/torus/seiberg_witten.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "g2/error.hpp"
#include "g2/spin_reps.hpp"

namespace g2::torus {

namespace {

const cplx I(0.0, 1.0);

Quaternion spinor_at(const GridField& g, int p) { return quaternion_from_w(g.at(p, 0), g.at(p, 1)); }

FourierSection or_zero(const FourierSection& s, int K, int fiber, bool real) {
  if (s.empty()) return FourierSection(K, fiber, real);
  return s.resized(K);
}

// Derivatives of mu_pair(v, .) in the quaternion basis: column m is mu_pair(v, e_m).
Eigen::Matrix<double, 3, 4> moment_jacobian(const Quaternion& v) {
  const Quaternion units[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()};
  Eigen::Matrix<double, 3, 4> J;
  for (int m = 0; m < 4; ++m) J.col(m) = mu_pair(v, units[m]);
  return J;
}

SWState shifted(const SWState& s, double h, const SWTangent& t) {
  FourierSection v = s.v + h * t.v.resized(s.cutoff());
  FourierSection a = s.alpha() + h * t.alpha.resized(s.cutoff());
  return SWState::from_alpha(std::move(v), a);
}

void check_coclosed(const Perturbation& p) {
  if (p.delta.empty()) return;
  if (p.delta.fiber() != kOneForm) throw Error("perturbation must be a 1-form");
  if (p.coclosed_defect() > 1e-12) throw Error("perturbation is not coclosed");
}

}  // namespace

void SWState::validate() const {
  if (v.fiber() != kWSpinor) throw Error("SW state: spinor must have fiber 2");
  if (!a.fluctuation.empty() && a.fluctuation.cutoff() > v.cutoff())
    throw Error("SW state: connection cutoff exceeds spinor cutoff");
  if (!a.s_fluctuation.empty() || !a.e_fluctuation.empty())
    throw Error("SW state: connection must be abelian");
  a.validate();
}

FourierSection SWState::alpha() const { return a.abelian_form(cutoff()); }

SWState SWState::from_alpha(FourierSection v, const FourierSection& alpha) {
  if (alpha.fiber() != kOneForm) throw Error("alpha must be a 1-form");
  SWState s;
  s.a.holonomy = Eigen::Vector3d(alpha.get(0, 0, 0, 0).real(), alpha.get(0, 0, 0, 1).real(),
                                 alpha.get(0, 0, 0, 2).real());
  s.a.fluctuation = alpha.resized(v.cutoff());
  s.a.fluctuation.set_real_valued(true);
  for (int c = 0; c < 3; ++c) s.a.fluctuation.at(0, 0, 0, c) = 0.0;
  s.v = std::move(v);
  return s;
}

SWState SWState::zero(int K, const Eigen::Vector3d& holonomy) {
  SWState s;
  s.v = FourierSection(K, kWSpinor);
  s.a = Connection::flat(holonomy);
  return s;
}

SWState SWState::random(Rng& rng, int K, double amplitude, const Eigen::Vector3d& holonomy) {
  SWState s;
  s.v = FourierSection::random(rng, K, kWSpinor, amplitude, false);
  s.a.holonomy = holonomy;
  s.a.fluctuation = FourierSection::random(rng, K, kOneForm, amplitude, true, true);
  return s;
}

Perturbation Perturbation::zero(int K) { return {FourierSection(K, kOneForm, true)}; }

Perturbation Perturbation::random_coclosed(Rng& rng, int K, double amplitude) {
  FourierSection d = FourierSection::random(rng, K, kOneForm, amplitude, true, true);
  for (int m = 0; m < d.mode_count(); ++m) {
    Mode k = d.mode(m);
    Eigen::Vector3d p(k.k1, k.k2, k.k3);
    double p2 = p.squaredNorm();
    if (p2 == 0.0) continue;
    Eigen::Vector3cd x(d(m, 0), d(m, 1), d(m, 2));
    x -= p.cast<cplx>() * (p.cast<cplx>().dot(x) / p2);
    for (int c = 0; c < 3; ++c) d(m, c) = x[c];
  }
  return {d};
}

double Perturbation::coclosed_defect() const {
  if (delta.empty()) return 0.0;
  FourierSection dv = divergence(delta);
  return dv.data().cwiseAbs().maxCoeff();
}

double SWResidual::norm() const { return std::sqrt(energy()); }

FourierSection spinor_moment(const FourierSection& v) {
  if (v.fiber() != kWSpinor) throw Error("spinor_moment: expected a W-spinor");
  const int Ko = 2 * v.cutoff();
  const int N = product_grid_size(Ko, Ko);
  GridField gv = to_grid(v, N);
  GridField m(N, kOneForm);
  for (int p = 0; p < gv.points(); ++p) {
    Quaternion x = spinor_at(gv, p);
    Eigen::Vector3d mu_p = mu_pair(x, x);
    for (int c = 0; c < 3; ++c) m.at(p, c) = mu_p[c];
  }
  return from_grid(m, Ko, true);
}

SWResidual sw_residual(const SWState& s, const Perturbation& p) {
  s.validate();
  const int K = s.cutoff();
  const int K1 = 2 * K;
  const int K2 = std::max(K1, p.delta.empty() ? 0 : p.delta.cutoff());
  if (!p.delta.empty() && p.delta.fiber() != kOneForm) throw Error("perturbation must be a 1-form");
  SWResidual r;
  r.r1 = apply_dirac(s.v, s.a, Twist::Abelian).resized(K1);
  r.r2 = curl(s.alpha()).resized(K2) + or_zero(p.delta, K2, kOneForm, true) - spinor_moment(s.v).resized(K2);
  return r;
}

SWState solve_reducible(const Perturbation& p, const Eigen::Vector3d& holonomy) {
  check_coclosed(p);
  if (p.delta.empty()) throw Error("solve_reducible: empty perturbation");
  const FourierSection& d = p.delta;
  for (int c = 0; c < 3; ++c)
    if (std::abs(d.get(0, 0, 0, c)) > 1e-12)
      throw Error("solve_reducible: perturbation has a harmonic part");
  FourierSection alpha(d.cutoff(), kOneForm, true);
  for (int m = 0; m < d.mode_count(); ++m) {
    Mode k = d.mode(m);
    Eigen::Vector3d q = 2.0 * M_PI * Eigen::Vector3d(k.k1, k.k2, k.k3);
    double q2 = q.squaredNorm();
    if (q2 == 0.0) continue;
    Eigen::Vector3cd x(d(m, 0), d(m, 1), d(m, 2));
    Eigen::Vector3cd y = -I * cross_real(q, x) / q2;
    for (int c = 0; c < 3; ++c) alpha(m, c) = y[c];
  }
  for (int c = 0; c < 3; ++c) alpha.at(0, 0, 0, c) = holonomy[c];
  return SWState::from_alpha(FourierSection(d.cutoff(), kWSpinor), alpha);
}

int gauge_band(const FourierSection& f) {
  if (f.fiber() != kFunction) throw Error("gauge function must be scalar");
  double rho = 0.0;
  for (int m = 0; m < f.mode_count(); ++m) {
    Mode k = f.mode(m);
    if (k.k1 == 0 && k.k2 == 0 && k.k3 == 0) continue;
    rho += std::abs(f(m, 0));
  }
  if (rho == 0.0) return 0;
  // Taylor tail of e^{ig}: terms beyond order n sit outside band n K_f.
  double fact = 1.0;
  int n = 1;
  while (true) {
    fact *= (n + 1);
    double tail = std::pow(rho, n + 1) / fact * std::exp(rho);
    if (tail < 1e-16) break;
    ++n;
    if (n * f.cutoff() > 64) throw Error("gauge function too large for exact exponentiation");
  }
  return n * f.cutoff();
}

SWState gauge_act(const FourierSection& f, const SWState& s) {
  s.validate();
  if (f.fiber() != kFunction) throw Error("gauge function must be scalar");
  if (f.conjugate_symmetry_defect() > 1e-12) throw Error("gauge function must be real");
  const int K = s.cutoff();
  const int m = gauge_band(f);
  const double f0 = f.get(0, 0, 0, 0).real();
  const cplx phase = std::exp(I * f0);

  FourierSection e(m, kFunction);
  if (m == 0) {
    e.at(0, 0, 0, 0) = phase;
  } else {
    const int Ne = 4 * m + 1;
    GridField gf = to_grid(f, Ne);
    for (int p = 0; p < gf.points(); ++p) gf.at(p, 0) = std::exp(I * (gf.at(p, 0).real() - f0)) * phase;
    e = from_grid(gf, m, false);
  }

  const int Ko = K + m;
  const int N = 2 * Ko + 1;
  GridField ge = to_grid(e, N);
  GridField gv = to_grid(s.v, N);
  for (int p = 0; p < gv.points(); ++p)
    for (int c = 0; c < kWSpinor; ++c) gv.at(p, c) *= ge.at(p, 0);
  FourierSection v = from_grid(gv, Ko, false);

  const int Ka = std::max(Ko, f.cutoff());
  FourierSection alpha = s.alpha().resized(Ka) - grad(f).resized(Ka);
  FourierSection vv = v.resized(Ka);
  return SWState::from_alpha(std::move(vv), alpha);
}

SWTangent SWTangent::random(Rng& rng, int K, double amplitude) {
  SWTangent t;
  t.v = FourierSection::random(rng, K, kWSpinor, amplitude, false);
  t.alpha = FourierSection::random(rng, K, kOneForm, amplitude, true);
  t.delta = Perturbation::random_coclosed(rng, K, amplitude).delta;
  return t;
}

SWLinearization::SWLinearization(SWState base) : base_(std::move(base)) { base_.validate(); }

SWResidual SWLinearization::apply(const SWTangent& t) const {
  const int K = base_.cutoff();
  if (t.v.cutoff() > K || t.alpha.cutoff() > K) throw Error("linearization: direction exceeds base cutoff");
  const int K1 = 2 * K;
  const int K2 = std::max(K1, t.delta.empty() ? 0 : t.delta.cutoff());
  FourierSection v = t.v.resized(K);
  FourierSection a = t.alpha.resized(K);

  const int N = product_grid_size(K1, K1);
  GridField gv0 = to_grid(base_.v, N);
  GridField gv = to_grid(v, N);
  GridField ga = to_grid(a, N);
  GridField coupling(N, kWSpinor);
  GridField moment(N, kOneForm);
  for (int p = 0; p < gv0.points(); ++p) {
    Eigen::Vector2cd x0(gv0.at(p, 0), gv0.at(p, 1));
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    for (int c = 0; c < 3; ++c) m += I * ga.at(p, c).real() * w_clifford(c);
    Eigen::Vector2cd y = m * x0;
    coupling.at(p, 0) = y[0];
    coupling.at(p, 1) = y[1];
    Eigen::Vector3d mu_p = 2.0 * mu_pair(spinor_at(gv0, p), spinor_at(gv, p));
    for (int c = 0; c < 3; ++c) moment.at(p, c) = mu_p[c];
  }

  SWResidual r;
  r.r1 = apply_dirac(v, base_.a, Twist::Abelian).resized(K1) + from_grid(coupling, K1, false);
  r.r2 = curl(a).resized(K2) + or_zero(t.delta, K2, kOneForm, true) - from_grid(moment, K1, true).resized(K2);
  return r;
}

SWTangent sw_gradient(const SWState& s, const Perturbation& p) {
  const SWResidual r = sw_residual(s, p);
  const int K = s.cutoff();
  const int K2 = r.r2.cutoff();

  SWTangent g;
  g.v = 2.0 * apply_dirac(r.r1, s.a, Twist::Abelian).resized(K);
  g.alpha = 2.0 * curl(r.r2).resized(K);

  const int N = std::max(product_grid_size(std::max(K2, 2 * K) + K, K), 2 * K2 + 1);
  GridField gv = to_grid(s.v, N);
  GridField g1 = to_grid(r.r1, N);
  GridField g2f = to_grid(r.r2, N);
  GridField gvs(N, kWSpinor);
  GridField gas(N, kOneForm);
  for (int q = 0; q < gv.points(); ++q) {
    Eigen::Vector2cd x(gv.at(q, 0), gv.at(q, 1));
    Eigen::Vector2cd r1(g1.at(q, 0), g1.at(q, 1));
    for (int c = 0; c < 3; ++c) gas.at(q, c) = 2.0 * r1.dot(I * (w_clifford(c) * x)).real();
    Eigen::Vector3d r2(g2f.at(q, 0).real(), g2f.at(q, 1).real(), g2f.at(q, 2).real());
    Eigen::Vector4d gq = -4.0 * moment_jacobian(spinor_at(gv, q)).transpose() * r2;
    auto zw = w_from_quaternion(Quaternion{gq[0], gq[1], gq[2], gq[3]});
    gvs.at(q, 0) = zw.first;
    gvs.at(q, 1) = zw.second;
  }
  g.v += from_grid(gvs, K, false);
  g.alpha += from_grid(gas, K, true);
  return g;
}

SWDescentResult sw_descent(const SWState& init, const Perturbation& p, const SWDescentOptions& opt) {
  check_coclosed(p);
  if (opt.rate <= 0.0) throw Error("descent rate must be positive");
  SWDescentResult out;
  out.state = init;
  double E = sw_residual(init, p).energy();
  out.trace.push_back({0, E, 0.0});
  double t = opt.rate;
  for (int it = 1; it <= opt.steps && E >= opt.energy_tol; ++it) {
    SWTangent g = sw_gradient(out.state, p);
    const double gn2 = g.v.squared_norm() + g.alpha.squared_norm();
    if (gn2 == 0.0) break;
    bool accepted = false;
    while (t >= opt.min_step) {
      SWState trial = shifted(out.state, -t, g);
      double Et = sw_residual(trial, p).energy();
      if (Et <= E - opt.armijo * t * gn2) {
        out.state = std::move(trial);
        E = Et;
        out.trace.push_back({it, E, t});
        accepted = true;
        t = std::min(2.0 * t, opt.rate);
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  out.converged = E < opt.energy_tol;
  return out;
}

}  // namespace g2::torus
