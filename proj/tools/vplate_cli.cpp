// Batch front end: one experiment per invocation, CSV artifacts in the
// output directory, exit code = vplate_status.
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "vplate.h"

namespace {

int finish(vplate_status st) {
  if (st != VPLATE_OK)
    std::fprintf(stderr, "vplate: %s\n", vplate_last_error());
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-control toolkit for viscoelastic plates"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--out", out_dir, "output directory (created if missing)");

  CLI::App* c_res = app.add_subcommand("resolvent", "resolvent kernel of the memory kernel");
  CLI::App* c_sim = app.add_subcommand("simulate", "modal trajectory of the free system");
  CLI::App* c_ctl = app.add_subcommand("control", "moment-method synthesis and verification");
  bool visco = false;
  c_ctl->add_flag("--visco", visco, "use the viscoelastic (memory cosine) pipeline");
  CLI::App* c_diag = app.add_subcommand(
      "diagnostics", "psi norms, Gram spectrum, compactness SVD, annihilator check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(VPLATE_ERR_CONFIG);
  }

  vplate_config* cfg = nullptr;
  vplate_status st = vplate_config_load(config_path.c_str(), &cfg);
  if (st != VPLATE_OK) return finish(st);

  if (c_res->parsed())
    st = vplate_run_resolvent(cfg, out_dir.c_str());
  else if (c_sim->parsed())
    st = vplate_run_simulate(cfg, out_dir.c_str());
  else if (c_ctl->parsed())
    st = vplate_run_control(cfg, out_dir.c_str(), visco ? 1 : 0);
  else if (c_diag->parsed())
    st = vplate_run_diagnostics(cfg, out_dir.c_str());

  vplate_config_free(cfg);
  return finish(st);
}
