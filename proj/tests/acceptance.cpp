// Acceptance suite: one line per criterion with the measured numbers,
// exit status = number of failed criteria.  Tolerances are pinned here,
// not read from anywhere.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/control.hpp"
#include "core/dynamics.hpp"
#include "core/experiments.hpp"
#include "core/grid.hpp"
#include "core/kernels.hpp"
#include "core/spectral.hpp"

using namespace vplate;
namespace fs = std::filesystem;

namespace {

const double kPi = M_PI;
int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", idx, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_x(const ModalState& got, const ModalState& want, const ModalBasis& basis) {
  const std::vector<double> xa = x_coordinates(got, basis);
  const std::vector<double> xb = x_coordinates(want, basis);
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < xa.size(); ++k) {
    diff += (xa[k] - xb[k]) * (xa[k] - xb[k]);
    scale += xb[k] * xb[k];
  }
  return std::sqrt(diff) / std::sqrt(scale);
}

ModalState unit_x_target(const ModalBasis& basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModalState s;
  s.control_case = ControlCase::B;
  s.space = StateSpace::X;
  s.position.resize(basis.mode_count());
  s.velocity.resize(basis.mode_count());
  for (auto& v : s.position) v = u(rng);
  for (auto& v : s.velocity) v = u(rng);
  const double nx = norm_X(s, basis);
  for (auto& v : s.position) v /= nx;
  for (auto& v : s.velocity) v /= nx;
  return s;
}

MacCamyData bare_data(const TimeGrid& grid) {
  MacCamyData d;
  d.K.assign(grid.size(), 0.0);
  d.damping_removed = true;
  return d;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

// Criteria 1 and 2 share one resolvent computation.
void criteria_1_2() {
  const MemoryKernel M = make_kernel({{0.5, 1.0}});
  const TimeGrid grid(2.0, 2000);
  const auto t0 = std::chrono::steady_clock::now();
  const ResolventKernel R = resolvent(M, grid);
  const double secs = seconds_since(t0);

  double kerr = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    kerr = std::max(kerr, std::abs(R.r[i] - 0.5 * std::exp(-1.5 * grid.node(i))));

  const KernelSamples ks = eval_kernel(M, grid);
  const Samples mr = conv(grid, ks.m, R.r);
  double res = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    res = std::max(res, std::abs(R.r[i] + mr[i] - ks.m[i]));

  report(1, kerr <= 1e-6 && res <= 1e-8 && secs < 1.0,
         "max|R - 0.5 e^{-1.5t}| = " + fmt(kerr) + " (tol 1e-6), identity residual " +
             fmt(res) + " (tol 1e-8), runtime " + fmt(secs) + " s (< 1 s)");

  const MacCamyData mc = maccamy_data(R);
  const double ea = std::abs(mc.a - 0.5);
  const double eb = std::abs(mc.b + 0.75);
  const double ek = std::abs(mc.K[0] - 1.125);
  report(2, ea <= 1e-9 && eb <= 1e-6 && ek <= 1e-5,
         "a = 0.5 +/- " + fmt(ea) + " (tol 1e-9), b = -0.75 +/- " + fmt(eb) +
             " (tol 1e-6), K(0) = 1.125 +/- " + fmt(ek) + " (tol 1e-5)");
}

void criterion_3() {
  const TimeGrid g1(1.0, 10000), g2(1.0, 20000);
  double e1 = 0.0, e2 = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const double lam = static_cast<double>(n * n) * kPi * kPi;
    const ZnSolution z1 = solve_zn(bare_data(g1), lam, g1);
    for (std::size_t i = 0; i < g1.size(); ++i)
      e1 = std::max(e1, std::abs(z1.z[i] - std::cos(lam * g1.node(i))));
    const ZnSolution z2 = solve_zn(bare_data(g2), lam, g2);
    for (std::size_t i = 0; i < g2.size(); ++i)
      e2 = std::max(e2, std::abs(z2.z[i] - std::cos(lam * g2.node(i))));
  }

  // The rotation step is exact for the pure cosine, so halving the step
  // only moves roundoff.  The convergence order is measured on the
  // nearest loaded problem, z'' = -lambda^2 z + b z, whose solution
  // cos(sqrt(lambda^2 - b) t) exercises the load path.
  const double b = -0.75, lam = 2.0 * kPi;
  const double om = std::sqrt(lam * lam - b);
  double o1 = 0.0, o2 = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const TimeGrid& g = pass == 0 ? g1 : g2;
    OscillatorProblem p;
    p.lambda = lam;
    p.zero_order = b;
    p.y0 = 1.0;
    const OscillatorSolution s = integrate_oscillator(p, g);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      e = std::max(e, std::abs(s.y[i] - std::cos(om * g.node(i))));
    (pass == 0 ? o1 : o2) = e;
  }
  const double order = std::log2(o1 / o2);

  // Roundoff over 2e4 steps can sit a shade above 1e-12; anything below
  // 1e-11 is still five decades under the tolerance and means the direct
  // error ratio measures noise, not order.
  const bool exact_floor = e1 <= 1e-11 && e2 <= 1e-11;
  const bool pass =
      e1 <= 1e-5 && (exact_floor ? order >= 1.9 : std::log2(e1 / e2) >= 1.9);
  std::string detail = "max|z - cos(lambda t)| = " + fmt(e1) + " (tol 1e-5), halved " +
                       fmt(e2) + "; loaded-problem order " + fmt(order) + " (>= 1.9)";
  if (!exact_floor) detail += ", direct order " + fmt(std::log2(e1 / e2));
  report(3, pass, detail);
}

void criterion_4() {
  const MemoryKernel M = make_kernel({{0.5, 1.0}});
  const TimeGrid grid(1.0, 1000);
  const MacCamyData sh = shifted_form(maccamy_data(resolvent(M, grid)), grid);
  double worst = 0.0, printed_min = 1e300;
  for (int n = 1; n <= 3; ++n) {
    const double lam = static_cast<double>(n * n) * kPi * kPi;
    const ZnSolution z = solve_zn(sh, lam, grid);
    const VolterraResiduals r = zn_volterra_residual(z, sh, grid);
    worst = std::max({worst, r.z_line, r.zint_corrected});
    printed_min = std::min(printed_min, r.zint_printed);
  }
  report(4, worst <= 1e-4 && printed_min >= 1e-2,
         "resolved-sign residual " + fmt(worst) +
             " (tol 1e-4); printed-sign residual " + fmt(printed_min) +
             ", O(1) as documented");
}

void criterion_5() {
  const ModalBasis basis = beam_hinged_basis(8);
  const TimeGrid grid(1.0, 1000);
  const MemoryKernel M = make_kernel({{0.5, 1.0}});
  const ResolventKernel R = resolvent(M, grid);
  const MacCamyData mc = maccamy_data(R);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModalState init;
  init.position.resize(8);
  init.velocity.resize(8);
  for (auto& v : init.position) v = u(rng);
  for (auto& v : init.velocity) v = u(rng);

  const SigmaField g(grid.size(), basis.boundary.size());
  const ModalTrajectory raw =
      forward_simulate(basis, M, ControlCase::B, g, init, grid, basis.boundary);

  double worst = 0.0;
  for (std::size_t n = 0; n < 8; ++n) {
    const auto [w, wp] = maccamy_modal_solution(basis.lambda[n], mc, R,
                                                init.position[n], init.velocity[n], grid);
    double dw = 0.0, sw = 0.0, dv = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      dw = std::max(dw, std::abs(raw.w[n][i] - w[i]));
      sw = std::max(sw, std::abs(raw.w[n][i]));
      dv = std::max(dv, std::abs(raw.wp[n][i] - wp[i]));
      sv = std::max(sv, std::abs(raw.wp[n][i]));
    }
    worst = std::max({worst, dw / sw, dv / sv});
  }
  report(5, worst <= 1e-3,
         "worst per-mode relative deviation, raw vs transformed: " + fmt(worst) +
             " (tol 1e-3)");
}

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  double res[2];
  int idx = 0;
  for (double T : {1.0, 0.5}) {
    const ModalBasis basis = beam_hinged_basis(8);
    const TimeGrid grid(T, static_cast<std::size_t>(T * 1000));
    const PsiSequence psi = psi_sequence(basis, ControlCase::B);
    const MomentSystem ms =
        elastic_moment_functions(basis, ControlCase::B, psi, grid, basis.boundary);
    const ModalState target = unit_x_target(basis, 101 + static_cast<std::uint64_t>(idx));
    const ControlFunction ctrl =
        synthesize_control(ms, target_moments(basis, ControlCase::B, target));
    const ModalState got =
        reach_elastic(basis, ControlCase::B, ctrl.g, grid, basis.boundary);
    res[idx++] = rel_x(got, target, basis);
  }
  const double secs = seconds_since(t0);
  report(6, res[0] <= 1e-3 && res[1] <= 1e-3 && secs < 30.0,
         "relative X residual " + fmt(res[0]) + " (T=1), " + fmt(res[1]) +
             " (T=0.5) (tol 1e-3), runtime " + fmt(secs) + " s (< 30 s)");
}

struct ViscoRun {
  ModalState target;
  SigmaField g;  // unshifted control fed to the raw simulator
  ModalState achieved;
  double residual = 0.0;
};

ViscoRun run_visco(std::size_t N, double T, std::size_t steps, std::uint64_t seed) {
  const ModalBasis basis = beam_hinged_basis(N);
  const TimeGrid grid(T, steps);
  const MemoryKernel M = make_kernel({{0.5, 1.0}});
  const PsiSequence psi = psi_sequence(basis, ControlCase::B);
  const ResolventKernel R = resolvent(M, grid);
  const MacCamyData mc = maccamy_data(R);
  const MacCamyData sh = shifted_form(mc, grid);
  const MomentSystem ms = visco_moment_functions(
      basis, ControlCase::B, psi, solve_zn_modes(sh, basis, grid), grid, basis.boundary);

  const ModalState target = unit_x_target(basis, seed);

  // The moment problem lives in the shifted variable; map the target
  // there, synthesize, then grow the control back.
  const double alpha = 0.5 * mc.a;
  const double et = std::exp(-alpha * T);
  ModalState shifted = target;
  for (std::size_t n = 0; n < N; ++n) {
    shifted.position[n] = et * target.position[n];
    shifted.velocity[n] = et * (target.velocity[n] - alpha * target.position[n]);
  }
  const ControlFunction ctrl =
      synthesize_control(ms, target_moments(basis, ControlCase::B, shifted));
  SigmaField g(grid.size(), basis.boundary.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double grow = std::exp(alpha * grid.node(i));
    for (std::size_t b = 0; b < basis.boundary.size(); ++b)
      g.at(i, b) = grow * ctrl.g.at(i, b);
  }
  const ModalState achieved = reach_visco(basis, M, ControlCase::B, g, grid, basis.boundary);
  const double residual = rel_x(achieved, target, basis);
  return ViscoRun{target, std::move(g), achieved, residual};
}

void criterion_7() {
  const double r_full = run_visco(8, 1.0, 1000, 201).residual;
  const double r_half = run_visco(8, 1.0, 2000, 201).residual;
  const double r_short = run_visco(8, 0.5, 500, 202).residual;
  report(7, r_full <= 1e-2 && r_short <= 1e-2 && r_half < r_full,
         "relative X residual " + fmt(r_full) + " (T=1), " + fmt(r_short) +
             " (T=0.5) (tol 1e-2); dt/2 gives " + fmt(r_half) + " < " + fmt(r_full));
}

void criterion_8() {
  const ModalBasis beam = beam_hinged_basis(20);
  const PsiSequence psi = psi_sequence(beam, ControlCase::B);
  double berr = 0.0;
  for (std::size_t n = 0; n < 20; ++n)
    berr = std::max(berr, std::abs(psi.norms[n] - std::sqrt(2.0)));

  auto ratio_at = [](std::size_t nodes) {
    const ModalBasis rect =
        rectangle_hinged_basis(1.0, 1.0, 20, BoundaryGrid::edge(1.0, nodes));
    const PsiSequence p = psi_sequence(rect, ControlCase::A);
    double lo = 1e300, hi = 0.0;
    for (double v : p.norms) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi / lo;
  };
  const double r64 = ratio_at(64), r128 = ratio_at(128);
  const double drift = std::abs(r64 - r128) / r64;
  report(8, berr <= 1e-12 && std::isfinite(r64) && drift <= 1e-3,
         "beam max|norm(Psi_n) - sqrt(2)| = " + fmt(berr) +
             " (tol 1e-12); rectangle max/min ratio " + fmt(r64) +
             ", relative drift under boundary doubling " + fmt(drift) + " (tol 1e-3)");
}

void criterion_9() {
  const ModalBasis basis = beam_hinged_basis(12);
  const TimeGrid grid(1.0, 1000);

  const std::vector<double> se = compactness_diagnostic(
      basis, MemoryKernel{}, ControlCase::B, grid, basis.boundary, 24, 42);
  double emax = 0.0;
  for (double v : se) emax = std::max(emax, v);

  const std::vector<double> sv = compactness_diagnostic(
      basis, make_kernel({{0.5, 1.0}}), ControlCase::B, grid, basis.boundary, 24, 42);
  bool mono = sv.size() >= 24;
  for (std::size_t k = 1; k < sv.size(); ++k)
    if (sv[k] > sv[k - 1]) mono = false;
  const double tail = sv[23] / sv[0];

  report(9, emax <= 1e-10 && mono && tail <= 0.1,
         "elastic max sigma " + fmt(emax) + " (tol 1e-10); visco sigma_1 " + fmt(sv[0]) +
             ", sigma_24/sigma_1 " + fmt(tail) + " (tol 0.1), nonincreasing");
}

void criterion_10() {
  const MemoryKernel M = make_kernel({{0.5, 1.0}});
  bool positive = true;
  double worst_margin = 1e300;
  for (std::size_t N : {4ul, 8ul, 16ul}) {
    for (double T : {0.5, 1.0}) {
      // N = 16 needs dt = 5e-4 to keep lambda_max * dt below the
      // integrator's resolution bound; the smaller sizes run at 1e-3.
      const std::size_t steps =
          static_cast<std::size_t>(T * (N == 16 ? 2000 : 1000));
      const ModalBasis basis = beam_hinged_basis(N);
      const TimeGrid grid(T, steps);
      const PsiSequence psi = psi_sequence(basis, ControlCase::B);
      const MacCamyData sh = shifted_form(maccamy_data(resolvent(M, grid)), grid);
      const MomentSystem ms = visco_moment_functions(
          basis, ControlCase::B, psi, solve_zn_modes(sh, basis, grid), grid,
          basis.boundary);
      const double floor_ = 100.0 * gram_threshold(ms);  // 1e-8 trace/dim
      const double min_eig = gram_spectrum(ms).min_eig;
      positive = positive && min_eig > floor_;
      worst_margin = std::min(worst_margin, min_eig / floor_);
    }
  }

  // Synthetic basis with an invisible third mode: the diagnostic must
  // find the annihilator and support it on that mode alone.
  std::vector<double> lam(4), psn(4, 1.0);
  for (std::size_t n = 0; n < 4; ++n)
    lam[n] = static_cast<double>((n + 1) * (n + 1)) * kPi * kPi;
  psn[2] = 0.0;
  const ModalBasis synth = synthetic_basis(lam, psn);
  const TimeGrid grid(1.0, 1000);
  const PsiSequence ps = psi_sequence(synth, ControlCase::A);
  const MacCamyData sh = shifted_form(maccamy_data(resolvent(M, grid)), grid);
  const MomentSystem msys = visco_moment_functions(
      synth, ControlCase::A, ps, solve_zn_modes(sh, synth, grid), grid, synth.boundary);
  const AnnihilatorReport rep = annihilator_diagnostic(msys);
  bool witness_ok = rep.found;
  if (witness_ok) {
    const double support =
        std::abs(rep.witness.position[2]) + std::abs(rep.witness.velocity[2]);
    witness_ok = support > 0.0;
    for (std::size_t n = 0; n < 4 && witness_ok; ++n) {
      if (n == 2) continue;
      witness_ok = std::abs(rep.witness.position[n]) <= 1e-8 * support &&
                   std::abs(rep.witness.velocity[n]) <= 1e-8 * support;
    }
  }
  report(10, positive && witness_ok,
         "beam min eig exceeds 1e-8 trace/2N by " + fmt(worst_margin) +
             "x at worst (N in {4,8,16}, T in {0.5,1}); zeroed-Psi_3 witness " +
             (witness_ok ? "isolated on mode 3" : "NOT isolated"));
}

void criterion_11() {
  // Route A: the criterion-7 pipeline itself (synthesize in the shifted
  // variable, unshift the control, drive the raw damped equation).
  const std::size_t N = 8, steps = 1000;
  const double T = 1.0;
  const ViscoRun run = run_visco(N, T, steps, 203);

  // Route B: keep the same physical control but assemble the solution
  // through the transformed equation, mode by mode: raw load -> F1 ->
  // attenuate -> integrate with the shifted coefficients -> unshift.
  const ModalBasis basis = beam_hinged_basis(N);
  const TimeGrid grid(T, steps);
  const MemoryKernel M = make_kernel({{0.5, 1.0}});
  const ResolventKernel R = resolvent(M, grid);
  const MacCamyData mc = maccamy_data(R);
  const MacCamyData sh = shifted_form(mc, grid);
  const KernelSamples ks = eval_kernel(M, grid);
  const double alpha = 0.5 * mc.a;

  ModalState route_b;
  route_b.control_case = ControlCase::B;
  route_b.space = StateSpace::X;
  route_b.position.resize(N);
  route_b.velocity.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    Samples bn(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double acc = 0.0;
      for (std::size_t b = 0; b < basis.boundary.size(); ++b)
        acc += basis.boundary.weights[b] * basis.trace[n][b] * run.g.at(i, b);
      bn[i] = acc;
    }
    const Samples mb = conv(grid, ks.m, bn);
    Samples f_raw(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f_raw[i] = -bn[i] - mb[i];
    Samples f1 = forcing_f1(mc, R, 0.0, 0.0, f_raw, grid);

    OscillatorProblem p;
    p.lambda = basis.lambda[n];
    p.zero_order = sh.b;
    p.memory = sh.K;
    p.forcing.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      p.forcing[i] = std::exp(-alpha * grid.node(i)) * f1[i];
    const OscillatorSolution v = integrate_oscillator(p, grid);

    const double eT = std::exp(alpha * T);
    route_b.position[n] = eT * v.y.back();
    route_b.velocity[n] = eT * (v.v.back() + alpha * v.y.back());
  }

  const double agree = rel_x(route_b, run.achieved, basis);
  report(11, run.residual <= 2e-2 && agree <= 1e-3,
         "unshifted control hits the target within " + fmt(run.residual) +
             " (tol 2e-2 = 2x criterion 7); raw vs shifted-route final states agree to " +
             fmt(agree) + " (tol 1e-3)");
}

void criterion_12() {
  ExperimentConfig cfg;
  apply_key(cfg, "modes", "4");
  apply_key(cfg, "n_steps", "500");
  apply_key(cfg, "kernel", "[[0.5, 1]]");
  apply_key(cfg, "target_position", "[1, 0, 0, 0]");
  apply_key(cfg, "seed", "7");

  const fs::path base = fs::temp_directory_path() / "vplate_acceptance_det";
  std::error_code ec;
  fs::remove_all(base, ec);
  const fs::path d1 = base / "run1", d2 = base / "run2";
  cmd_control(cfg, d1.string(), true);
  cmd_control(cfg, d2.string(), true);

  std::size_t compared = 0;
  bool same = true;
  for (const auto& entry : fs::directory_iterator(d1)) {
    const std::string name = entry.path().filename().string();
    const std::string a = slurp(entry.path());
    const std::string b = slurp(d2 / name);
    same = same && !a.empty() && a == b;
    ++compared;
  }
  const bool artifacts = fs::exists(d1 / "control.csv") && fs::exists(d1 / "report.csv") &&
                         fs::exists(d1 / "manifest.txt");
  report(12, same && artifacts && compared >= 3,
         std::string(same ? "bit-identical" : "DIFFERING") + " rerun, " +
             std::to_string(compared) + " artifacts compared");
}

}  // namespace

int main() {
  criteria_1_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  if (g_failures == 0)
    std::printf("all 12 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
