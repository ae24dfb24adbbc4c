#include "cli_harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/SVD>

#include "g2/calibration.hpp"
#include "g2/error.hpp"
#include "g2/exterior.hpp"
#include "g2/grassmann.hpp"
#include "g2/spin_reps.hpp"
#include "g2/torus/dirac.hpp"
#include "g2/torus/seiberg_witten.hpp"

namespace g2::cli {

namespace {

using Clock = std::chrono::steady_clock;
using namespace g2::torus;

CheckResult named(std::string name, std::string anchor) {
  CheckResult r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  return r;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Rungs of the tolerance ladder that do not follow --tol.
constexpr double kFiniteDifferenceTol = 1e-6;
constexpr double kOptimizationTol = 1e-8;
constexpr double kDescentEnergyTol = 1e-10;

const Eigen::Vector3d kDescentHolonomy(M_PI, M_PI, M_PI);

CheckResult make(const RunConfig& c, double value, double tol, bool extra_ok = true, std::string detail = {}) {
  (void)c;
  CheckResult r;
  r.value = value;
  r.tolerance = tol;
  r.passed = extra_ok && std::isfinite(value) && value <= tol;
  r.detail = std::move(detail);
  return r;
}

Vec7 rand7(Rng& rng) { return rng.normal_vector(7); }

KForm random_form(Rng& rng, int n, int k) {
  KForm f(n, k);
  for (unsigned m : subsets(n, k)) f.coeff_by_mask(m) = rng.normal();
  return f;
}

// ---- exterior / calibration ------------------------------------------------

CheckResult check_hodge(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(1);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep)
    for (int k = 0; k <= 7; ++k) {
      KForm a = random_form(rng, 7, k);
      worst = std::max(worst, (hodge(hodge(a)) - a).max_abs());
    }
  return make(c, worst, c.tol);
}

CheckResult check_metric(const RunConfig& c) {
  const auto& s = G2Structure::standard();
  double e = (s.metric() - Mat7::Identity()).cwiseAbs().maxCoeff();
  e = std::max(e, (s.star_phi() - hodge(phi0())).max_abs());
  return make(c, e, c.tol, s.orientation() == 1);
}

CheckResult check_associator(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(2);
  const auto& s = G2Structure::standard();
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i)
    worst = std::max(worst, std::abs(associator_defect(rand7(rng), rand7(rng), rand7(rng), s)));
  return make(c, worst, c.tol);
}

CheckResult check_g2_dimension(const RunConfig& c) {
  G2Algebra g = g2_lie_algebra();
  int nullity = static_cast<int>(g.basis.size());
  return make(c, std::abs(nullity - 14), 0.0, g.gap >= 1e6,
              "nullity " + std::to_string(nullity) + ", gap " + format_double(g.gap));
}

CheckResult check_so4(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) worst = std::max(worst, pullback_defect(embed_so4_g2(Spin4Element::random(rng))));
  return make(c, worst, c.tol);
}

// ---- Grassmannian -----------------------------------------------------------

CheckResult check_flow(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(4);
  int fails = 0, rank_fail = 0;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    Rng child = rng.split(i);
    OrientedPlane3 base = random_associative_plane(child);
    Mat73 dir = child.normal_matrix(7, 3);
    try {
      OrientedPlane3 start = plane_at_defect(base, dir, 0.3);
      ProjectionResult r = project_to_associative(start);
      if (dchi_rank(r.plane) != 4) ++rank_fail;
    } catch (const Error&) {
      ++fails;
    }
  }
  double rate = 1.0 - static_cast<double>(fails) / n;
  return make(c, fails, 0.05 * n, rank_fail == 0,
              "success " + format_double(rate) + ", rank failures " + std::to_string(rank_fail));
}

CheckResult check_pi_phi(const RunConfig& c) {
  Eigen::Matrix<double, 12, 12> P = pi_phi_matrix();
  Eigen::Matrix<double, 4, 12> C = clifford_matrix();
  double e = std::max((P * P - P).cwiseAbs().maxCoeff(), (C * P).cwiseAbs().maxCoeff());
  e = std::max(e, std::abs(P.trace() - 8.0));
  return make(c, e, c.tol);
}

CheckResult check_beta(const RunConfig& c) {
  Eigen::Matrix<double, 4, 12> B = beta_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10) ++rank;
  Eigen::MatrixXd ker = svd.matrixV().rightCols(12 - rank);
  Eigen::Matrix<double, 12, 12> T;
  for (int t = 0; t < 12; ++t)
    T.col(t) = tensor_vec(to_clifford_tensor(GrassTangent::from_vec(Eigen::Matrix<double, 12, 1>::Unit(t))));
  Eigen::MatrixXd img = T * ker;
  Eigen::MatrixXd Q = img.householderQr().householderQ() * Eigen::MatrixXd::Identity(12, img.cols());
  double dist = (Q * Q.transpose() - pi_phi_matrix()).norm();
  return make(c, dist, kOptimizationTol, 12 - rank == 8, "kernel dimension " + std::to_string(12 - rank));
}

// ---- spin representations ---------------------------------------------------

CheckResult check_rho(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    RhoVector w{rng.normal_vector(3), random_quaternion(rng), rng.normal_vector(3), random_quaternion(rng)};
    SpinorPair z{random_quaternion(rng), random_quaternion(rng)};
    SpinorPair once = dirac_action_rho(w, z);
    SpinorPair twice = dirac_action_rho(w, once);
    double n2 = rho_norm2(w);
    worst = std::max(worst, (twice.first + n2 * z.first).norm() + (twice.second + n2 * z.second).norm());
  }
  return make(c, worst, c.tol);
}

CheckResult check_sigma(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(6);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Quaternion x = random_quaternion(rng);
    auto [z, w] = w_from_quaternion(x);
    cplx zw = std::conj(z) * w;
    Quaternion closed = Quaternion{(std::norm(z) - std::norm(w)) / 2.0, 0.0, 0.0, 0.0} +
                        Quaternion::j() * Quaternion{zw.real(), zw.imag(), 0.0, 0.0};
    worst = std::max(worst, (sigma(x, x) - closed).norm());
  }
  return make(c, worst, c.tol);
}

// ---- torus ------------------------------------------------------------------

Eigen::VectorXd flat_oracle(int K, const Eigen::Vector3d& h) {
  std::vector<double> ev;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int d = -K; d <= K; ++d) {
        double r = (2.0 * M_PI * Eigen::Vector3d(a, b, d) + h).norm();
        ev.push_back(r);
        ev.push_back(-r);
      }
  std::sort(ev.begin(), ev.end());
  return Eigen::Map<Eigen::VectorXd>(ev.data(), ev.size());
}

CheckResult check_flat_dirac(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(7);
  const int K = c.cutoff();
  double worst = 0.0;
  bool kernel_ok = kernel_dim(Connection::flat(Eigen::Vector3d::Zero()), 1e-8, K) == 2;
  for (int i = 0; i < 5; ++i) {
    Eigen::Vector3d h = rng.uniform_vector(3, 0.0, 2.0 * M_PI);
    SpectralOperator D = build_dirac(K, Connection::flat(h));
    worst = std::max(worst, D.hermitian_defect());
    worst = std::max(worst, (D.eigenvalues() - flat_oracle(K, h)).cwiseAbs().maxCoeff());
    kernel_ok = kernel_ok && D.kernel_dim(1e-8) == 0;
  }
  return make(c, worst, c.tol, kernel_ok, kernel_ok ? "" : "kernel dimension does not jump 2 -> 0");
}

double fd_error(const SWState& s, const Perturbation& d, const SWTangent& t, double h) {
  SWLinearization L(s);
  auto at = [&](double e) {
    SWState x = SWState::from_alpha(s.v + e * t.v, s.alpha() + e * t.alpha);
    return sw_residual(x, Perturbation{d.delta + e * t.delta});
  };
  SWResidual p = at(h), m = at(-h), lin = L.apply(t);
  FourierSection e1 = (0.5 / h) * (p.r1 - m.r1) - lin.r1;
  FourierSection e2 = (0.5 / h) * (p.r2 - m.r2) - lin.r2;
  return std::sqrt(e1.squared_norm() + e2.squared_norm()) / lin.norm();
}

CheckResult check_linearization(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(8);
  const int K = 2;
  double worst = 0.0;
  for (int b = 0; b < 2; ++b) {
    SWState s = SWState::random(rng, K, 0.5, rng.uniform_vector(3, 0.0, 2.0 * M_PI));
    Perturbation d = Perturbation::random_coclosed(rng, K, 0.3);
    for (int i = 0; i < 10; ++i) worst = std::max(worst, fd_error(s, d, SWTangent::random(rng, K, 1.0), 1e-4));
  }
  return make(c, worst, kFiniteDifferenceTol);
}

CheckResult check_gauge(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(9);
  const int K = 2;
  Perturbation d = Perturbation::random_coclosed(rng, K, 0.3);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    SWState s = SWState::random(rng, K, 0.5, rng.uniform_vector(3, 0.0, 2.0 * M_PI));
    FourierSection f = FourierSection::random(rng, 1, kFunction, 0.03, true);
    worst = std::max(worst, std::abs(sw_residual(gauge_act(f, s), d).norm() - sw_residual(s, d).norm()));
  }
  return make(c, worst, c.tol);
}

CheckResult check_div_curl(const RunConfig& c) {
  int worst = 0;
  for (int K = 1; K <= 4; ++K) {
    SpectralOperator op = div_curl_op(K);
    worst = std::max({worst, std::abs(op.kernel_dim(1e-8) - 4), std::abs(op.cokernel_dim(1e-8) - 4)});
  }
  return make(c, worst, 0.0);
}

CheckResult check_descent(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(10);
  double worst = 0.0;
  bool monotone = true;
  for (int i = 0; i < 2; ++i) {
    SWState s = SWState::random(rng, 2, 0.05, kDescentHolonomy);
    SWDescentResult r = sw_descent(s, Perturbation::zero(2));
    for (std::size_t j = 1; j < r.trace.size(); ++j) monotone = monotone && r.trace[j].energy <= r.trace[j - 1].energy;
    worst = std::max(worst, r.energy());
  }
  return make(c, worst, kDescentEnergyTol, monotone, monotone ? "" : "energy increased");
}

CheckResult check_roundtrip(const RunConfig& c) {
  Rng rng = Rng(c.seed).split(11);
  // a G2 structure in general position: phi0 pulled back by a random matrix
  Mat7 A = Mat7::Identity() + 0.2 * rng.normal_matrix(7, 7);
  G2Structure s = G2Structure::from_phi(pullback(phi0(), A));
  G2Structure t = structure_from_json(json::parse(structure_to_json(s).dump()));
  bool same = s.phi() == t.phi() && s.metric() == t.metric() && s.orientation() == t.orientation();
  return make(c, same ? 0.0 : 1.0, 0.0);
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> reg = {
      {"hodge_involution", "Hodge star squares to the identity on R^7", check_hodge},
      {"phi0_metric", "metric and dual 4-form induced by phi0", check_metric},
      {"associator_identity", "associator equality phi^2 + |chi|^2/4 = |u^v^w|^2", check_associator},
      {"g2_dimension", "G2 as the 14-dimensional stabilizer of phi0", check_g2_dimension},
      {"so4_in_g2", "SO(4) subgroup of G2 preserving phi0", check_so4},
      {"associative_flow", "dimension of the associative Grassmannian", check_flow},
      {"pi_phi_projection", "projection onto the kernel of Clifford multiplication", check_pi_phi},
      {"beta_kernel", "beta condition on associative tangent vectors", check_beta},
      {"dirac_action_square", "Clifford relation of the spinor action", check_rho},
      {"sigma_closed_form", "quadratic map sigma in (z, w) coordinates", check_sigma},
      {"flat_dirac_spectrum", "twisted Dirac operator on the flat 3-torus", check_flat_dirac},
      {"sw_linearization", "linearized monopole map", check_linearization},
      {"sw_gauge_invariance", "gauge invariance of the monopole map", check_gauge},
      {"div_curl_index", "div-curl complex has index zero", check_div_curl},
      {"sw_descent", "gradient descent to a reducible monopole", check_descent},
      {"structure_roundtrip", "G2 structure serialization", check_roundtrip},
  };
  return reg;
}

void RunConfig::validate() const {
  if (!(tol > 0.0)) throw Error("--tol must be positive");
  if (K && *K < 1) throw Error("--K must be at least 1");
  if (steps < 0) throw Error("--steps must be non-negative");
  if (!(rate > 0.0)) throw Error("--rate must be positive");
  if (count < 0) throw Error("sample count must be non-negative");
  if (holonomy && !holonomy->allFinite()) throw Error("--holonomy must be finite");
}

int RunConfig::cutoff() const {
  if (K) return *K;
  return command == Command::Sw ? 2 : 4;
}

Format RunConfig::output_format() const {
  if (format) return *format;
  return command == Command::Verify ? Format::Json : Format::Csv;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Verify: return "verify";
    case Command::Sample: return "sample";
    case Command::Flow: return "flow";
    case Command::Dirac: return "dirac";
    case Command::Sw: return "sw";
  }
  return "?";
}

namespace {

CheckResult timed(const CheckSpec& spec, const RunConfig& c) {
  auto t0 = Clock::now();
  CheckResult r;
  try {
    r = spec.run(c);
  } catch (const std::exception& e) {
    r.passed = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.detail = std::string("exception: ") + e.what();
  }
  r.name = spec.name;
  r.anchor = spec.anchor;
  r.seconds = since(t0);
  return r;
}

void run_sample(const RunConfig& c, Report& rep) {
  rep.table.header = {"seed", "phi_value", "chi_defect", "iterations"};
  Rng rng(c.seed);
  for (int i = 0; i < c.count; ++i) {
    Rng child = rng.split(i);
    std::uint64_t seed = child.seed();
    OrientedPlane3 L = random_plane(child);
    json iterations;
    try {
      iterations = project_to_associative(L).iterations;
    } catch (const ProjectionError& e) {
      iterations = e.reason() == ProjectionError::Reason::OutsideBasin ? -1 : -2;
    }
    rep.table.rows.push_back({seed, calibration_value(L), chi_defect(L), iterations});
  }
}

void run_flow(const RunConfig& c, Report& rep) {
  rep.table.header = {"iteration", "defect", "step"};
  Rng rng(c.seed);
  OrientedPlane3 base = random_associative_plane(rng);
  OrientedPlane3 start = plane_at_defect(base, rng.normal_matrix(7, 3), 0.3);
  CheckResult conv = named("flow_converged", "projection flow onto associative planes");
  CheckResult rank = named("dchi_rank", "dimension of the associative Grassmannian");
  auto t0 = Clock::now();
  try {
    ProjectionResult r = project_to_associative(start);
    for (const auto& s : r.trace) rep.table.rows.push_back({s.iteration, s.defect, s.step});
    conv.value = r.defect;
    conv.passed = r.defect < kOptimizationTol;
    int k = dchi_rank(r.plane);
    rank.value = k;
    rank.passed = k == 4;
  } catch (const ProjectionError& e) {
    for (const auto& s : e.best().trace) rep.table.rows.push_back({s.iteration, s.defect, s.step});
    conv.value = e.defect();
    conv.detail = e.what();
    rank.value = std::numeric_limits<double>::quiet_NaN();
    rank.detail = "no associative plane reached";
  }
  conv.tolerance = kOptimizationTol;
  rank.tolerance = 0.0;
  conv.seconds = rank.seconds = since(t0);
  rep.checks = {conv, rank};
}

void run_dirac(const RunConfig& c, Report& rep) {
  rep.table.header = {"mode", "eigenvalue"};
  auto t0 = Clock::now();
  Eigen::Vector3d h = c.holonomy.value_or(Eigen::Vector3d::Zero());
  SpectralOperator D = build_dirac(c.cutoff(), Connection::flat(h));
  for (const auto& [m, ev] : D.mode_eigenvalues()) rep.table.rows.push_back({m, ev});
  CheckResult herm = named("hermitian", "twisted Dirac operator on the flat 3-torus");
  herm.value = D.hermitian_defect();
  herm.tolerance = c.tol;
  herm.passed = herm.value <= c.tol;
  CheckResult sym = named("spectral_symmetry", "spectrum of a flat Dirac operator is symmetric");
  Eigen::VectorXd ev = D.eigenvalues();
  sym.value = (ev + ev.reverse()).cwiseAbs().maxCoeff();
  sym.tolerance = c.tol;
  sym.passed = sym.value <= c.tol;
  herm.seconds = sym.seconds = since(t0);
  rep.checks = {herm, sym};
}

void run_sw(const RunConfig& c, Report& rep) {
  rep.table.header = {"iteration", "energy", "step"};
  auto t0 = Clock::now();
  Rng rng(c.seed);
  const int K = c.cutoff();
  SWState init = SWState::random(rng, K, 0.05, c.holonomy.value_or(kDescentHolonomy));
  SWDescentOptions opt;
  opt.steps = c.steps;
  opt.rate = c.rate;
  SWDescentResult r = sw_descent(init, Perturbation::zero(K), opt);
  bool monotone = true;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    rep.table.rows.push_back({r.trace[i].iteration, r.trace[i].energy, r.trace[i].step});
    if (i > 0) monotone = monotone && r.trace[i].energy <= r.trace[i - 1].energy;
  }
  CheckResult mono = named("energy_monotone", "gradient descent to a reducible monopole");
  mono.value = monotone ? 0.0 : 1.0;
  mono.passed = monotone;
  CheckResult fin = named("final_energy", "gradient descent to a reducible monopole");
  fin.value = r.energy();
  fin.tolerance = kDescentEnergyTol;
  fin.passed = fin.value < kDescentEnergyTol;
  mono.seconds = fin.seconds = since(t0);
  rep.checks = {mono, fin};
}

std::string cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

Report run(const RunConfig& config) {
  config.validate();
  Report rep;
  rep.command = command_name(config.command);
  rep.config = config;
  auto t0 = Clock::now();
  switch (config.command) {
    case Command::Verify:
      for (const auto& spec : check_registry()) rep.checks.push_back(timed(spec, config));
      break;
    case Command::Sample: run_sample(config, rep); break;
    case Command::Flow: run_flow(config, rep); break;
    case Command::Dirac: run_dirac(config, rep); break;
    case Command::Sw: run_sw(config, rep); break;
  }
  rep.seconds = since(t0);
  return rep;
}

std::string render_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"status", c.passed ? "pass" : "fail"},
                      {"value", number_or_string(c.value)},
                      {"tolerance", c.tolerance},
                      {"seconds", c.seconds},
                      {"detail", c.detail}});
  json cfg = {{"seed", r.config.seed}, {"K", r.config.cutoff()}, {"tol", r.config.tol}};
  if (r.config.command == Command::Sample) cfg["count"] = r.config.count;
  if (r.config.command == Command::Sw) {
    cfg["steps"] = r.config.steps;
    cfg["rate"] = r.config.rate;
  }
  if (r.config.holonomy) cfg["holonomy"] = {(*r.config.holonomy)[0], (*r.config.holonomy)[1], (*r.config.holonomy)[2]};
  json out = {{"schema", 1},
              {"command", r.command},
              {"config", cfg},
              {"status", r.passed() ? "pass" : "fail"},
              {"checks", checks},
              {"seconds", r.seconds}};
  if (!r.table.header.empty()) out["table"] = {{"header", r.table.header}, {"rows", r.table.rows}};
  return out.dump(2) + "\n";
}

std::string render_csv(const Report& r) {
  if (r.config.command == Command::Verify) {
    CsvWriter w({"name", "anchor", "status", "value", "tolerance"});
    for (const auto& c : r.checks) {
      std::string anchor = c.anchor;
      std::replace(anchor.begin(), anchor.end(), ',', ';');
      w.row({c.name, anchor, c.passed ? "pass" : "fail", format_double(c.value), format_double(c.tolerance)});
    }
    return w.str();
  }
  CsvWriter w(r.table.header);
  for (const auto& row : r.table.rows) {
    std::vector<std::string> cells;
    for (const auto& v : row) cells.push_back(cell(v));
    w.row(cells);
  }
  return w.str();
}

namespace {

Eigen::Vector3d parse_triple(const std::string& s) {
  Eigen::Vector3d v;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t end = s.find(',', pos);
    if ((i < 2) != (end != std::string::npos)) throw Error("--holonomy expects x,y,z");
    std::string part = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    auto res = std::from_chars(part.data(), part.data() + part.size(), v[i]);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size())
      throw Error("--holonomy: cannot parse '" + part + "'");
    pos = end + 1;
  }
  return v;
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"G2 calibrated geometry toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string holonomy, format;
  int K = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--K", K, "Fourier cutoff")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "tolerance of identity checks")->check(CLI::PositiveNumber);
    sub->add_option("--holonomy", holonomy, "flat connection holonomy x,y,z");
    sub->add_option("--steps", cfg.steps, "descent steps")->check(CLI::NonNegativeNumber);
    sub->add_option("--rate", cfg.rate, "largest descent step")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto* verify = app.add_subcommand("verify", "run every identity check");
  auto* sample = app.add_subcommand("sample", "random planes with calibration data");
  sample->add_option("N", cfg.count, "number of rows")->required()->check(CLI::NonNegativeNumber);
  auto* flow = app.add_subcommand("flow", "projection flow from a seeded plane");
  auto* dirac = app.add_subcommand("dirac", "flat Dirac spectrum");
  auto* sw = app.add_subcommand("sw", "monopole gradient descent");
  for (auto* s : {verify, sample, flow, dirac, sw}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) cfg.command = Command::Verify;
    if (sample->parsed()) cfg.command = Command::Sample;
    if (flow->parsed()) cfg.command = Command::Flow;
    if (dirac->parsed()) cfg.command = Command::Dirac;
    if (sw->parsed()) cfg.command = Command::Sw;
    if (K > 0) cfg.K = K;
    if (!holonomy.empty()) cfg.holonomy = parse_triple(holonomy);
    if (!format.empty()) cfg.format = format == "json" ? Format::Json : Format::Csv;
    cfg.validate();
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  Report rep;
  try {
    rep = run(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::string text = cfg.output_format() == Format::Json ? render_json(rep) : render_csv(rep);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
      err << "error: cannot write " << cfg.out << "\n";
      return 2;
    }
  }
  for (const auto& c : rep.checks)
    if (!c.passed) err << "FAILED " << c.name << " (" << c.anchor << "): value " << format_double(c.value)
                       << ", tolerance " << format_double(c.tolerance)
                       << (c.detail.empty() ? "" : ", " + c.detail) << "\n";
  return rep.exit_code();
}

}  // namespace g2::cli
