#include "core/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "core/control.hpp"
#include "core/csv.hpp"
#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/version.hpp"

namespace vplate {

namespace {

ModalBasis make_basis_from(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.basis == "beam") return beam_hinged_basis(cfg.modes);
  if (cfg.basis == "rectangle")
    return rectangle_hinged_basis(cfg.rect_a, cfg.rect_b, cfg.modes,
                                  BoundaryGrid::edge(cfg.rect_a, cfg.boundary_nodes));
  return synthetic_basis(cfg.lambda, cfg.psi_norms);
}

std::vector<double> pad(const std::vector<double>& v, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < v.size() && i < n; ++i) out[i] = v[i];
  return out;
}

std::string prep_dir(const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir +
                                   ": " + ec.message());
  return out_dir + "/";
}

void write_manifest(const ExperimentConfig& cfg, const std::string& dir) {
  const std::string path = dir + "manifest.txt";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "vplate " << kVersion << "\n" << canonical_echo(cfg);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void warn_stability(const ModalBasis& basis, const TimeGrid& grid) {
  if (basis.mode_count() == 0) return;
  const double r = stability_ratio(basis.lambda.back(), grid);
  if (r > 1.0 && r <= 2.0)
    std::fprintf(stderr,
                 "warning: lambda_max*dt = %.3g lies in (1, 2]; the top modes "
                 "are marginally resolved\n",
                 r);
}

}  // namespace

void cmd_resolvent(const ExperimentConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  const std::string dir = prep_dir(out_dir);
  const TimeGrid grid(cfg.horizon, cfg.n_steps);
  const MemoryKernel M = make_kernel(cfg.kernel);
  const KernelSamples ks = eval_kernel(M, grid);
  const ResolventKernel R = resolvent(M, grid);
  const Samples mr = conv(grid, ks.m, R.r);

  std::vector<std::vector<double>> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    rows.push_back({grid.node(i), ks.m[i], R.r[i], R.r1[i], R.r2[i],
                    std::abs(R.r[i] + mr[i] - ks.m[i])});
  write_manifest(cfg, dir);
  write_csv(dir + "resolvent.csv", {"t", "M", "R", "R'", "R''", "residual"}, rows);
}

void cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  const ModalBasis basis = make_basis_from(cfg);
  const std::string dir = prep_dir(out_dir);
  const TimeGrid grid(cfg.horizon, cfg.n_steps);
  const BoundaryGrid& bg = basis.boundary;
  const MemoryKernel M = make_kernel(cfg.kernel);
  warn_stability(basis, grid);

  ModalState init;
  init.control_case = cfg.control_case;
  init.space = StateSpace::Y;
  init.position = pad(cfg.initial_position, cfg.modes);
  init.velocity = pad(cfg.initial_velocity, cfg.modes);

  const SigmaField g(grid.size(), bg.size());  // free evolution
  const ModalTrajectory traj =
      forward_simulate(basis, M, cfg.control_case, g, init, grid, bg);

  std::vector<std::string> header{"t"};
  for (std::size_t n = 1; n <= cfg.modes; ++n) {
    header.push_back("w_" + std::to_string(n));
    header.push_back("w_" + std::to_string(n) + "'");
  }
  header.push_back("energy");

  std::vector<std::vector<double>> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid.node(i)};
    double energy = 0.0;
    for (std::size_t n = 0; n < cfg.modes; ++n) {
      const double w = traj.w[n][i];
      const double wp = traj.wp[n][i];
      row.push_back(w);
      row.push_back(wp);
      energy += wp * wp + basis.lambda[n] * basis.lambda[n] * w * w;
    }
    row.push_back(energy);
    rows.push_back(std::move(row));
  }
  write_manifest(cfg, dir);
  write_csv(dir + "trajectory.csv", header, rows);
}

void cmd_control(const ExperimentConfig& cfg, const std::string& out_dir, bool visco) {
  const ModalBasis basis = make_basis_from(cfg);
  const std::string dir = prep_dir(out_dir);
  const TimeGrid grid(cfg.horizon, cfg.n_steps);
  const BoundaryGrid& bg = basis.boundary;
  const ControlCase cc = cfg.control_case;
  const MemoryKernel M = make_kernel(cfg.kernel);
  const PsiSequence psi = psi_sequence(basis, cc);
  warn_stability(basis, grid);

  ModalState target;
  target.control_case = cc;
  target.space = StateSpace::Y;
  target.position = pad(cfg.target_position, cfg.modes);
  target.velocity = pad(cfg.target_velocity, cfg.modes);

  MomentSystem ms;
  SigmaField g(grid.size(), bg.size());
  ModalState achieved;
  double control_norm = 0.0;

  if (!visco) {
    ms = elastic_moment_functions(basis, cc, psi, grid, bg);
    const std::vector<double> m = target_moments(basis, cc, target);
    ControlFunction ctrl = synthesize_control(ms, m);
    control_norm = ctrl.norm;
    g = std::move(ctrl.g);
    achieved = reach_elastic(basis, cc, g, grid, bg);
  } else {
    // Moment problem posed for the damping-shifted variable, control
    // unshifted afterward, verification against the raw simulator.
    const ResolventKernel R = resolvent(M, grid);
    const MacCamyData mc = maccamy_data(R);
    const MacCamyData sh = shifted_form(mc, grid);
    const std::vector<ZnSolution> zset = solve_zn_modes(sh, basis, grid);
    ms = visco_moment_functions(basis, cc, psi, zset, grid, bg);

    const double alpha = 0.5 * mc.a;
    const double et = std::exp(-alpha * grid.horizon);
    ModalState shifted_target = target;
    for (std::size_t n = 0; n < cfg.modes; ++n) {
      shifted_target.position[n] = et * target.position[n];
      shifted_target.velocity[n] = et * (target.velocity[n] - alpha * target.position[n]);
    }
    const std::vector<double> m = target_moments(basis, cc, shifted_target);
    const ControlFunction ctrl = synthesize_control(ms, m);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double grow = std::exp(alpha * grid.node(i));
      for (std::size_t b = 0; b < bg.size(); ++b)
        g.at(i, b) = grow * ctrl.g.at(i, b);
    }
    control_norm = std::sqrt(std::max(0.0, inner_sigma(grid, bg, g, g)));
    achieved = reach_visco(basis, M, cc, g, grid, bg);
  }

  const GramSpectrum spec = gram_spectrum(ms);
  const ReachReport rep =
      assemble_report(basis, target, achieved, control_norm, spec.condition());

  write_manifest(cfg, dir);

  std::vector<std::string> cheader{"t"};
  for (std::size_t b = 0; b < bg.size(); ++b)
    cheader.push_back("g_" + std::to_string(b + 1));
  std::vector<std::vector<double>> crows;
  crows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid.node(i)};
    for (std::size_t b = 0; b < bg.size(); ++b) row.push_back(g.at(i, b));
    crows.push_back(std::move(row));
  }
  write_csv(dir + "control.csv", cheader, crows);

  write_kv_csv(dir + "report.csv",
               {{"residual_abs", rep.residual_abs},
                {"residual_rel", rep.residual_rel},
                {"control_norm", rep.control_norm},
                {"gram_condition", rep.gram_condition},
                {"gram_min_eig", spec.min_eig},
                {"gram_max_eig", spec.max_eig}});

  std::vector<std::string> gheader;
  for (std::size_t k = 1; k <= ms.dim(); ++k)
    gheader.push_back("c_" + std::to_string(k));
  std::vector<std::vector<double>> grows;
  grows.reserve(ms.dim());
  for (std::size_t k = 0; k < ms.dim(); ++k) {
    std::vector<double> row(ms.dim());
    for (std::size_t l = 0; l < ms.dim(); ++l) row[l] = ms.gram_at(k, l);
    grows.push_back(std::move(row));
  }
  write_csv(dir + "gram.csv", gheader, grows);
}

void cmd_diagnostics(const ExperimentConfig& cfg, const std::string& out_dir) {
  const ModalBasis basis = make_basis_from(cfg);
  const std::string dir = prep_dir(out_dir);
  const TimeGrid grid(cfg.horizon, cfg.n_steps);
  const BoundaryGrid& bg = basis.boundary;
  const ControlCase cc = cfg.control_case;
  const MemoryKernel M = make_kernel(cfg.kernel);
  const PsiSequence psi = psi_sequence(basis, cc);
  warn_stability(basis, grid);

  write_manifest(cfg, dir);

  std::vector<std::vector<double>> prows;
  for (std::size_t n = 0; n < basis.mode_count(); ++n)
    prows.push_back({static_cast<double>(n + 1), basis.lambda[n], psi.norms[n]});
  write_csv(dir + "psi_norms.csv", {"n", "lambda", "psi_norm"}, prows);

  MomentSystem ms;
  if (M.elastic()) {
    ms = elastic_moment_functions(basis, cc, psi, grid, bg);
  } else {
    const ResolventKernel R = resolvent(M, grid);
    const MacCamyData sh = shifted_form(maccamy_data(R), grid);
    ms = visco_moment_functions(basis, cc, psi, solve_zn_modes(sh, basis, grid), grid, bg);
  }

  const std::vector<double> eigs = gram_eigenvalues(ms);
  std::vector<std::vector<double>> erows;
  for (std::size_t k = 0; k < eigs.size(); ++k)
    erows.push_back({static_cast<double>(k + 1), eigs[k]});
  write_csv(dir + "gram_eigs.csv", {"k", "eig"}, erows);

  const std::size_t probes = cfg.probes ? cfg.probes : 2 * cfg.modes;
  const std::vector<double> sigmas =
      compactness_diagnostic(basis, M, cc, grid, bg, probes, cfg.seed);
  std::vector<std::vector<double>> srows;
  for (std::size_t k = 0; k < sigmas.size(); ++k)
    srows.push_back({static_cast<double>(k + 1), sigmas[k]});
  write_csv(dir + "svd.csv", {"k", "sigma"}, srows);

  const AnnihilatorReport ann = annihilator_diagnostic(ms);
  std::vector<std::pair<std::string, double>> arows{
      {"min_eig", ann.min_eig},
      {"threshold", ann.threshold},
      {"found", ann.found ? 1.0 : 0.0}};
  if (ann.found) {
    for (std::size_t n = 0; n < ann.witness.position.size(); ++n)
      arows.emplace_back("witness_xi_" + std::to_string(n + 1), ann.witness.position[n]);
    for (std::size_t n = 0; n < ann.witness.velocity.size(); ++n)
      arows.emplace_back("witness_eta_" + std::to_string(n + 1), ann.witness.velocity[n]);
  }
  write_kv_csv(dir + "annihilator.csv", arows);
}

}  // namespace vplate
