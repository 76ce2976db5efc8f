#include "vplate.h"

#include <cstring>
#include <exception>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/experiments.hpp"
#include "core/grid.hpp"
#include "core/kernels.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

vplate_status fail(vplate_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Exceptions -> status codes.  Order matters: the typed errors derive
// from runtime_error, which is the io fallback.
template <typename Fn>
vplate_status guarded(Fn&& body) {
  try {
    body();
    clear_error();
    return VPLATE_OK;
  } catch (const vplate::ConfigError& e) {
    return fail(VPLATE_ERR_CONFIG, e.what());
  } catch (const vplate::StabilityError& e) {
    return fail(VPLATE_ERR_STABILITY, e.what());
  } catch (const vplate::GramDegenerateError& e) {
    return fail(VPLATE_ERR_GRAM_DEGENERATE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(VPLATE_ERR_INVALID, e.what());
  } catch (const std::runtime_error& e) {
    return fail(VPLATE_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(VPLATE_ERR_INVALID, e.what());
  }
}

}  // namespace

struct vplate_config {
  vplate::ExperimentConfig cfg;
};

struct vplate_resolvent {
  vplate::ResolventKernel r;
};

extern "C" {

const char* vplate_version(void) { return vplate::kVersion; }

const char* vplate_last_error(void) { return g_last_error.c_str(); }

vplate_status vplate_config_load(const char* path, vplate_config** out) {
  if (!path || !out) return fail(VPLATE_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new vplate_config{vplate::load_config(path)}; });
}

vplate_status vplate_config_parse(const char* text, vplate_config** out) {
  if (!text || !out) return fail(VPLATE_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new vplate_config{vplate::parse_config(text)}; });
}

void vplate_config_free(vplate_config* cfg) { delete cfg; }

vplate_status vplate_config_set(vplate_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(VPLATE_ERR_INVALID, "null argument");
  return guarded([&] { vplate::apply_key(cfg->cfg, key, value); });
}

vplate_status vplate_config_get(const vplate_config* cfg, const char* key,
                                char* buf, size_t buflen) {
  if (!cfg || !key || !buf) return fail(VPLATE_ERR_INVALID, "null argument");
  std::string v;
  const vplate_status st = guarded([&] { v = vplate::config_get(cfg->cfg, key); });
  if (st != VPLATE_OK) return st;
  if (v.size() + 1 > buflen)
    return fail(VPLATE_ERR_INVALID,
                "buffer too small: need " + std::to_string(v.size() + 1) + " bytes");
  std::memcpy(buf, v.c_str(), v.size() + 1);
  return VPLATE_OK;
}

vplate_status vplate_run_resolvent(const vplate_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return fail(VPLATE_ERR_INVALID, "null argument");
  return guarded([&] { vplate::cmd_resolvent(cfg->cfg, out_dir); });
}

vplate_status vplate_run_simulate(const vplate_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return fail(VPLATE_ERR_INVALID, "null argument");
  return guarded([&] { vplate::cmd_simulate(cfg->cfg, out_dir); });
}

vplate_status vplate_run_control(const vplate_config* cfg, const char* out_dir,
                                 int visco) {
  if (!cfg || !out_dir) return fail(VPLATE_ERR_INVALID, "null argument");
  return guarded([&] { vplate::cmd_control(cfg->cfg, out_dir, visco != 0); });
}

vplate_status vplate_run_diagnostics(const vplate_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return fail(VPLATE_ERR_INVALID, "null argument");
  return guarded([&] { vplate::cmd_diagnostics(cfg->cfg, out_dir); });
}

vplate_status vplate_resolvent_compute(const double* prony, size_t n_terms,
                                       double horizon, size_t n_steps,
                                       vplate_resolvent** out) {
  if (!out || (n_terms > 0 && !prony)) return fail(VPLATE_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<vplate::PronyTerm> terms;
    terms.reserve(n_terms);
    for (size_t j = 0; j < n_terms; ++j)
      terms.push_back({prony[2 * j], prony[2 * j + 1]});
    const vplate::MemoryKernel M = vplate::make_kernel(std::move(terms));
    const vplate::TimeGrid grid(horizon, n_steps);
    *out = new vplate_resolvent{vplate::resolvent(M, grid)};
  });
}

vplate_status vplate_resolvent_constants(const vplate_resolvent* r, double* a,
                                         double* b, double* k0) {
  if (!r || !a || !b || !k0) return fail(VPLATE_ERR_INVALID, "null argument");
  const vplate::MacCamyData mc = vplate::maccamy_data(r->r);
  *a = mc.a;
  *b = mc.b;
  *k0 = mc.K.empty() ? 0.0 : mc.K.front();
  clear_error();
  return VPLATE_OK;
}

vplate_status vplate_resolvent_samples(const vplate_resolvent* r, int which,
                                       double* buf, size_t buflen) {
  if (!r || !buf) return fail(VPLATE_ERR_INVALID, "null argument");
  const vplate::Samples* src = nullptr;
  switch (which) {
    case 0: src = &r->r.r; break;
    case 1: src = &r->r.r1; break;
    case 2: src = &r->r.r2; break;
    default: return fail(VPLATE_ERR_INVALID, "which must be 0, 1 or 2");
  }
  if (buflen < src->size())
    return fail(VPLATE_ERR_INVALID,
                "buffer too small: need " + std::to_string(src->size()) + " doubles");
  std::memcpy(buf, src->data(), src->size() * sizeof(double));
  clear_error();
  return VPLATE_OK;
}

void vplate_resolvent_free(vplate_resolvent* r) { delete r; }

}  // extern "C"
