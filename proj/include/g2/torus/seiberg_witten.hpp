#pragma once

#include <vector>

#include "g2/random.hpp"
#include "g2/torus/dirac.hpp"

namespace g2::torus {

// Abelian monopole data: a W-spinor and a connection A = i alpha.
struct SWState {
  FourierSection v;  // fiber kWSpinor
  Connection a;      // abelian part only

  int cutoff() const { return v.cutoff(); }
  // Throws unless v is a W-spinor and the fluctuation fits inside v's cutoff.
  void validate() const;
  // alpha as one real 1-form (holonomy in mode 0) at v's cutoff.
  FourierSection alpha() const;
  static SWState from_alpha(FourierSection v, const FourierSection& alpha);

  static SWState zero(int K, const Eigen::Vector3d& holonomy = Eigen::Vector3d::Zero());
  // Small random spinor and zero-mean connection fluctuation around `holonomy`.
  static SWState random(Rng& rng, int K, double amplitude,
                        const Eigen::Vector3d& holonomy = Eigen::Vector3d::Zero());
};

// A real 1-form delta; the equations need it coclosed.
struct Perturbation {
  FourierSection delta;  // fiber kOneForm, real

  static Perturbation zero(int K);
  // Random coclosed, zero-mean 1-form.
  static Perturbation random_coclosed(Rng& rng, int K, double amplitude);
  // max |d^* delta| over modes.
  double coclosed_defect() const;
};

struct SWResidual {
  FourierSection r1;  // D_A v, fiber kWSpinor
  FourierSection r2;  // curl alpha + delta - mu(v, v), fiber kOneForm
  double norm() const;
  double energy() const { return r1.squared_norm() + r2.squared_norm(); }
};

// Residuals computed exactly (no truncation): r1 has cutoff 2K and r2 has
// cutoff max(2K, K_delta).
SWResidual sw_residual(const SWState& s, const Perturbation& p);

// The pointwise quadratic term mu(v, v) of a W-spinor, exact.
FourierSection spinor_moment(const FourierSection& v);

// Reducible solution v = 0 with curl alpha = -delta, at the given holonomy.
// Throws if delta has a harmonic (constant) part or is not coclosed.
SWState solve_reducible(const Perturbation& p, const Eigen::Vector3d& holonomy = Eigen::Vector3d::Zero());

// v -> e^{if} v, alpha -> alpha - df for a real function f. e^{if} is
// expanded to a band wide enough that the neglected tail is below 1e-15
// relative; the output cutoff grows by that band.
SWState gauge_act(const FourierSection& f, const SWState& s);
// Band used by gauge_act for the non-constant part of f.
int gauge_band(const FourierSection& f);

// Direction in (v, alpha, delta); alpha includes its constant mode.
struct SWTangent {
  FourierSection v;      // fiber kWSpinor
  FourierSection alpha;  // fiber kOneForm, real
  FourierSection delta;  // fiber kOneForm, real

  static SWTangent random(Rng& rng, int K, double amplitude);
};

// Derivative of sw_residual at a base state:
// (v, alpha, delta) -> (D_{A0} v + i alpha.v0, curl alpha + delta - 2 mu(v0, v)).
class SWLinearization {
 public:
  explicit SWLinearization(SWState base);
  SWResidual apply(const SWTangent& t) const;
  const SWState& base() const { return base_; }

 private:
  SWState base_;
};

struct SWTraceRow {
  int iteration;
  double energy;
  double step;
};

struct SWDescentOptions {
  int steps = 2000;
  double rate = 0.01;          // largest step tried
  double energy_tol = 1e-14;   // stop once E falls below
  double armijo = 1e-4;
  double min_step = 1e-14;
};

struct SWDescentResult {
  SWState state;
  std::vector<SWTraceRow> trace;  // row 0 is the initial energy
  bool converged = false;
  double energy() const { return trace.back().energy; }
};

// Gradient of E = ||r1||^2 + ||r2||^2 in the real Parseval inner product,
// restricted to the state's cutoff. Returned with delta left empty.
SWTangent sw_gradient(const SWState& s, const Perturbation& p);

// Backtracking gradient descent on E. Only accepted steps are recorded, so
// the trace is non-increasing. Throws if delta is not coclosed.
SWDescentResult sw_descent(const SWState& init, const Perturbation& p,
                           const SWDescentOptions& opt = {});

}  // namespace g2::torus
