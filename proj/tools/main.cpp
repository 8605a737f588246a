// stokes-spectra: command-line front end over the C API.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stokes_spectra/stokes_spectra.h"

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { ssp_string_free(p); }
};

std::vector<std::string> lines(const char* text) {
  std::vector<std::string> out;
  std::istringstream in(text ? text : "");
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

int code_of(ssp_status s) {
  switch (s) {
    case SSP_OK: return 0;
    case SSP_NUMERICAL_FAILURE: return 2;
    default: return 1;
  }
}

int report(ssp_status s, const std::string& what) {
  if (s != SSP_OK) std::cerr << "stokes-spectra: " << what << ": " << ssp_last_error() << "\n";
  return code_of(s);
}

}  // namespace

int main(int argc, char** argv) {
  Owned names;
  if (ssp_commands(&names.p) != SSP_OK) return report(SSP_INTERNAL_ERROR, "startup");

  CLI::App app{"Spectral stability of Stokes waves"};
  app.set_version_flag("--version", std::string(ssp_version()));
  app.require_subcommand(0, 1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  int jobs = 1;
  bool print_config = false;
  bool list_keys = false;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "override one key, key=value (repeatable)")->type_size(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  auto* out_flag = app.add_option("--out", out_dir, "output directory, default: the config key out (STOKES_SPECTRA_OUT overrides)");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");
  app.add_flag("--list-keys", list_keys, "print every key with its default and exit");

  std::vector<CLI::App*> subs;
  for (const auto& n : lines(names.p)) {
    subs.push_back(app.add_subcommand(n, "run the " + n + " pipeline"));
    subs.back()->fallthrough();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string command;
  for (auto* s : subs)
    if (s->parsed()) command = s->get_name();

  ssp_config* raw = nullptr;
  if (ssp_config_create(&raw) != SSP_OK) return report(SSP_INTERNAL_ERROR, "config");
  std::unique_ptr<ssp_config, void (*)(ssp_config*)> config(raw, ssp_config_destroy);

  if (command.empty() && !print_config && !list_keys) {
    std::cerr << app.help();
    return 1;
  }

  if (!config_path.empty()) {
    ssp_status st = ssp_config_load_file(config.get(), config_path.c_str());
    if (st != SSP_OK) return report(st, config_path);
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "stokes-spectra: --set expects key=value, got '" << kv << "'\n";
      return 1;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(kv.substr(0, eq)), value = trim(kv.substr(eq + 1));
    ssp_status st = ssp_config_set(config.get(), key.c_str(), value.c_str());
    if (st != SSP_OK) return report(st, "--set " + kv);
  }

  if (print_config) {
    Owned text;
    ssp_status st = ssp_config_serialize(config.get(), &text.p);
    if (st == SSP_OK) std::fputs(text.p, stdout);
    return report(st, "print-config");
  }
  if (list_keys) {
    Owned text;
    ssp_status st = ssp_config_describe(&text.p);
    if (st == SSP_OK) std::fputs(text.p, stdout);
    return report(st, "list-keys");
  }

  if (out_flag->count() == 0) {
    Owned v;
    ssp_status st = ssp_config_get(config.get(), "out", &v.p);
    if (st != SSP_OK) return report(st, "out");
    out_dir = v.p;
  }
  if (const char* env = std::getenv("STOKES_SPECTRA_OUT"); env && *env) out_dir = env;

  ssp_status st = ssp_run(command.c_str(), config.get(), out_dir.c_str(), jobs);
  if (st == SSP_OK) std::cout << command << ": ok, wrote " << out_dir << "\n";
  return report(st, command);
}
