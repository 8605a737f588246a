#include "stokes_spectra/stokes_spectra.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "stokes_spectra/config.hpp"
#include "stokes_spectra/error.hpp"
#include "stokes_spectra/pipeline.hpp"
#include "stokes_spectra/stokes.hpp"

struct ssp_config {
  stokes_spectra::RunConfig config;
};

struct ssp_wave {
  stokes_spectra::StokesWave wave;
};

namespace {

thread_local std::string last_error;

ssp_status fail(ssp_status s, const std::string& message) {
  last_error = message;
  return s;
}

template <class F>
ssp_status guarded(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const stokes_spectra::InvalidArgument& e) {
    return fail(SSP_INVALID_ARGUMENT, e.what());
  } catch (const stokes_spectra::NumericalFailure& e) {
    std::string msg = e.what();
    for (const auto& [k, v] : e.context()) msg += " " + k + "=" + stokes_spectra::format_shortest(v);
    return fail(SSP_NUMERICAL_FAILURE, msg);
  } catch (const std::bad_alloc&) {
    return fail(SSP_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(SSP_IO_ERROR, e.what());
  } catch (...) {
    return fail(SSP_INTERNAL_ERROR, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

#define SSP_REQUIRE(cond, what) \
  if (!(cond)) return fail(SSP_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* ssp_version(void) { return "1.0.0"; }

const char* ssp_last_error(void) { return last_error.c_str(); }

void ssp_string_free(char* s) { std::free(s); }

ssp_status ssp_config_create(ssp_config** out) {
  return guarded([&] {
    SSP_REQUIRE(out, "null output pointer");
    *out = new ssp_config{};
    return SSP_OK;
  });
}

void ssp_config_destroy(ssp_config* config) { delete config; }

ssp_status ssp_config_load_file(ssp_config* config, const char* path) {
  return guarded([&] {
    SSP_REQUIRE(config && path, "null argument");
    config->config = stokes_spectra::RunConfig::load(path);
    return SSP_OK;
  });
}

ssp_status ssp_config_set(ssp_config* config, const char* key, const char* value) {
  return guarded([&] {
    SSP_REQUIRE(config && key && value, "null argument");
    config->config.set(key, value);
    return SSP_OK;
  });
}

ssp_status ssp_config_get(const ssp_config* config, const char* key, char** value) {
  return guarded([&] {
    SSP_REQUIRE(config && key && value, "null argument");
    *value = dup(config->config.get(key));
    return SSP_OK;
  });
}

ssp_status ssp_config_serialize(const ssp_config* config, char** text) {
  return guarded([&] {
    SSP_REQUIRE(config && text, "null argument");
    *text = dup(config->config.serialize());
    return SSP_OK;
  });
}

ssp_status ssp_commands(char** names) {
  return guarded([&] {
    SSP_REQUIRE(names, "null argument");
    std::string s;
    for (const auto& c : stokes_spectra::commands()) s += c + "\n";
    *names = dup(s);
    return SSP_OK;
  });
}

ssp_status ssp_config_describe(char** text) {
  return guarded([&] {
    SSP_REQUIRE(text, "null argument");
    stokes_spectra::RunConfig d;
    std::string s;
    for (const auto& k : stokes_spectra::RunConfig::keys())
      s += k + "\t" + d.get(k) + "\t" + stokes_spectra::RunConfig::doc(k) + "\n";
    *text = dup(s);
    return SSP_OK;
  });
}

ssp_status ssp_run(const char* command, const ssp_config* config, const char* out_dir, int jobs) {
  return guarded([&] {
    SSP_REQUIRE(command && config && out_dir, "null argument");
    SSP_REQUIRE(jobs >= 1, "jobs must be >= 1");
    auto out = stokes_spectra::run_command(command, config->config, jobs);
    stokes_spectra::write_outputs(out, out_dir);
    if (out.exit_code == stokes_spectra::exit_ok) return SSP_OK;
    last_error = out.status + ": " + out.message;
    return out.exit_code == stokes_spectra::exit_usage ? SSP_INVALID_ARGUMENT : SSP_NUMERICAL_FAILURE;
  });
}

ssp_status ssp_wave_solve(const ssp_config* config, double epsilon, ssp_wave** out) {
  return guarded([&] {
    SSP_REQUIRE(config && out, "null argument");
    *out = nullptr;
    const auto& c = config->config;
    stokes_spectra::StokesOptions o;
    o.N = static_cast<int>(c.integer("stokes_N"));
    o.order = static_cast<int>(c.integer("dno_order"));
    o.tol = c.real("newton_tol");
    o.max_iter = static_cast<int>(c.integer("newton_max_iter"));
    auto w = stokes_spectra::solve_stokes(epsilon, c.params(), o);
    if (!w.converged) {
      return fail(SSP_NUMERICAL_FAILURE, "Stokes solve did not converge: " + w.status);
    }
    *out = new ssp_wave{std::move(w)};
    return SSP_OK;
  });
}

void ssp_wave_destroy(ssp_wave* wave) { delete wave; }

double ssp_wave_speed(const ssp_wave* wave) { return wave ? wave->wave.speed : 0.0; }

double ssp_wave_residual(const ssp_wave* wave) { return wave ? wave->wave.residual_norm : 0.0; }

int ssp_wave_iterations(const ssp_wave* wave) { return wave ? wave->wave.iterations : 0; }

int ssp_wave_truncation(const ssp_wave* wave) { return wave ? wave->wave.N : 0; }

ssp_status ssp_wave_eta_cos(const ssp_wave* wave, int k, double* value) {
  return guarded([&] {
    SSP_REQUIRE(wave && value, "null argument");
    SSP_REQUIRE(k >= 0 && k <= wave->wave.eta.truncation(), "mode out of range");
    *value = wave->wave.eta.cos_coeff(k);
    return SSP_OK;
  });
}

ssp_status ssp_wave_psi_sin(const ssp_wave* wave, int k, double* value) {
  return guarded([&] {
    SSP_REQUIRE(wave && value, "null argument");
    SSP_REQUIRE(k >= 0 && k <= wave->wave.psi.truncation(), "mode out of range");
    *value = wave->wave.psi.sin_coeff(k);
    return SSP_OK;
  });
}

}  // extern "C"
