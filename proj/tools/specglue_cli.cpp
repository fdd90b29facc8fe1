// Command-line front end of the specglue shared library. Builds model
// spectra and runs the determinant, gluing, adiabatic, spectral-flow and
// torsion computations, emitting CSV/JSON tables.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specglue/specglue.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitResidual = 1;
constexpr int kExitConfig = 2;

struct SpectrumOptions {
  std::string torus;  // "L1,L2,alpha,beta"
  std::string file;
  double cutoff = 2000.0;
  bool acyclic = false;
};

void add_spectrum_options(CLI::App* cmd, SpectrumOptions& opt) {
  auto* t = cmd->add_option("--torus", opt.torus,
                            "torus model parameters L1,L2,alpha,beta");
  auto* f = cmd->add_option("--spectrum-file", opt.file, "spectrum file to load");
  t->excludes(f);
  cmd->add_option("--cutoff", opt.cutoff, "eigenvalue cutoff for the torus model");
  cmd->add_flag("--acyclic", opt.acyclic, "require an acyclic (twisted) model");
}

// Plain `key = value` configuration files, expanded into flags placed right
// after the subcommand so explicit command-line flags keep precedence.
bool expand_config(std::vector<std::string>& args, std::string& error) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size()) {
      error = "--config wants a file path";
      return false;
    }
    std::string path = args[i + 1];
    std::ifstream in(path);
    if (!in) {
      error = "cannot open config file '" + path + "'";
      return false;
    }
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
      };
      std::string row = trim(line);
      if (row.empty()) continue;
      std::size_t eq = row.find('=');
      if (eq == std::string::npos) {
        error = path + ":" + std::to_string(lineno) + ": expected key = value";
        return false;
      }
      std::string key = trim(row.substr(0, eq));
      std::string value = trim(row.substr(eq + 1));
      if (key.empty()) {
        error = path + ":" + std::to_string(lineno) + ": empty key";
        return false;
      }
      if (value == "true") {
        extra.push_back("--" + key);
      } else if (value == "false") {
        continue;
      } else {
        extra.push_back("--" + key);
        extra.push_back(value);
      }
    }
    args.erase(args.begin() + i, args.begin() + i + 2);
    // explicit command-line flags win: drop config keys that already appear
    std::vector<std::string> filtered;
    for (std::size_t j = 0; j < extra.size();) {
      const std::string& key = extra[j];
      bool has_value = (j + 1 < extra.size() && !extra[j + 1].empty() &&
                        extra[j + 1].rfind("--", 0) != 0);
      bool present = false;
      for (const auto& a : args)
        if (a == key || a.rfind(key + "=", 0) == 0) present = true;
      if (!present) {
        filtered.push_back(key);
        if (has_value) filtered.push_back(extra[j + 1]);
      }
      j += has_value ? 2 : 1;
    }
    // insert after the subcommand token (the first non-flag argument)
    std::size_t at = args.size();
    for (std::size_t j = 0; j < args.size(); ++j) {
      if (!args[j].empty() && args[j][0] != '-') {
        at = j + 1;
        break;
      }
    }
    args.insert(args.begin() + at, filtered.begin(), filtered.end());
    return expand_config(args, error);  // allow a config in a config's place
  }
  return true;
}

class SpectrumHandle {
 public:
  ~SpectrumHandle() { sg_spectrum_free(s_); }
  sg_spectrum* get() const { return s_; }
  sg_spectrum** out() { return &s_; }

 private:
  sg_spectrum* s_ = nullptr;
};

int make_spectrum(const SpectrumOptions& opt, SpectrumHandle& handle) {
  if (!opt.torus.empty()) {
    double L1, L2, alpha, beta;
    if (std::sscanf(opt.torus.c_str(), "%lf,%lf,%lf,%lf", &L1, &L2, &alpha, &beta) !=
        4) {
      std::fprintf(stderr, "error: --torus wants L1,L2,alpha,beta\n");
      return kExitConfig;
    }
    if (sg_spectrum_torus(L1, L2, alpha, beta, opt.cutoff, opt.acyclic ? 1 : 0,
                          handle.out()) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    return kExitPass;
  }
  if (!opt.file.empty()) {
    if (sg_spectrum_load(opt.file.c_str(), handle.out()) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    return kExitPass;
  }
  std::fprintf(stderr, "error: exactly one of --torus / --spectrum-file is needed\n");
  return kExitConfig;
}

bool parse_grid(const std::string& text, std::vector<double>& out) {
  out.clear();
  if (text.find(':') != std::string::npos) {
    double a, b, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0.0)
      return false;
    for (double x = a; x <= b + 1e-12; x += step) out.push_back(x);
    return !out.empty();
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    try {
      out.push_back(std::stod(text.substr(pos, next - pos)));
    } catch (...) {
      return false;
    }
    pos = next + 1;
  }
  return !out.empty();
}

int finish_report(sg_report* rep, const std::string& out_path,
                  const std::string& format) {
  std::unique_ptr<sg_report, decltype(&sg_report_free)> guard(rep, sg_report_free);
  if (!out_path.empty()) {
    if (sg_report_write(rep, out_path.c_str(), format.c_str()) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    std::printf("wrote %s (%zu rows)\n", out_path.c_str(), sg_report_rows(rep));
  } else {
    size_t rows = sg_report_rows(rep), cols = sg_report_cols(rep);
    for (size_t j = 0; j < cols; ++j)
      std::printf("%s%s", sg_report_column(rep, j), j + 1 < cols ? "," : "\n");
    char buf[256];
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols; ++j) {
        if (sg_report_cell(rep, i, j, buf, sizeof buf) != SG_OK) buf[0] = '\0';
        std::printf("%s%s", buf, j + 1 < cols ? "," : "\n");
      }
    }
  }
  bool pass = sg_report_pass(rep) == 1;
  std::printf("%s\n", pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitResidual;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeta-determinant, gluing and torsion computations on model "
               "cylinder geometries"};
  app.require_subcommand(1);

  // spectrum
  auto* cmd_spectrum = app.add_subcommand("spectrum", "generate or convert a spectrum");
  SpectrumOptions so_spectrum;
  add_spectrum_options(cmd_spectrum, so_spectrum);
  std::string spectrum_out;
  cmd_spectrum->add_option("--out", spectrum_out, "output spectrum file")->required();

  // det
  auto* cmd_det = app.add_subcommand("det", "closed-form vs oracle determinants");
  SpectrumOptions so_det;
  add_spectrum_options(cmd_det, so_det);
  std::string det_bc = "all", det_r = "1", det_out, det_format = "csv";
  int det_q = -1;
  double det_tol = 1e-6;
  cmd_det->add_option("--bc", det_bc, "pminus|pplus|rel|abs|all");
  cmd_det->add_option("--q", det_q, "form degree, -1 for all");
  cmd_det->add_option("--r", det_r, "length grid: list a,b,c or a:b:step");
  cmd_det->add_option("--tol", det_tol, "pass tolerance");
  cmd_det->add_option("--out", det_out, "output table file");
  cmd_det->add_option("--format", det_format, "csv|json");

  // glue
  auto* cmd_glue = app.add_subcommand("glue", "surgery identity for a cylinder cut");
  SpectrumOptions so_glue;
  add_spectrum_options(cmd_glue, so_glue);
  std::string glue_bc = "all", glue_out, glue_format = "csv";
  int glue_q = -1;
  double glue_r = 1.0, glue_L = 1.0, glue_tol = 1e-6;
  cmd_glue->add_option("--bc", glue_bc, "pminus|pplus|rel|abs|all");
  cmd_glue->add_option("--q", glue_q, "form degree, -1 for all");
  cmd_glue->add_option("--r", glue_r, "near piece length");
  cmd_glue->add_option("--L", glue_L, "far piece length");
  cmd_glue->add_option("--tol", glue_tol, "pass tolerance");
  cmd_glue->add_option("--out", glue_out, "output table file");
  cmd_glue->add_option("--format", glue_format, "csv|json");

  // adiabatic
  auto* cmd_ad = app.add_subcommand("adiabatic", "stretched-collar limits");
  SpectrumOptions so_ad;
  add_spectrum_options(cmd_ad, so_ad);
  std::string ad_r = "0.5:8:0.5", ad_out, ad_format = "csv";
  double ad_tol = 1e-6;
  cmd_ad->add_option("--r", ad_r, "length grid a:b:step or list");
  cmd_ad->add_option("--tol", ad_tol, "pass tolerance");
  cmd_ad->add_option("--out", ad_out, "output table file");
  cmd_ad->add_option("--format", ad_format, "csv|json");

  // flow
  auto* cmd_flow = app.add_subcommand("flow", "spectral flow vs eta difference");
  int flow_dim = 6, flow_paths = 100;
  unsigned long long flow_seed = 2026;
  std::string flow_out, flow_format = "csv";
  double flow_tol = 0.0;
  cmd_flow->add_option("--dim", flow_dim, "matrix dimension");
  cmd_flow->add_option("--paths", flow_paths, "number of random paths");
  cmd_flow->add_option("--seed", flow_seed, "random seed");
  cmd_flow->add_option("--tol", flow_tol, "pass tolerance");
  cmd_flow->add_option("--out", flow_out, "output table file");
  cmd_flow->add_option("--format", flow_format, "csv|json");

  // torsion
  auto* cmd_tor = app.add_subcommand("torsion", "torsion assembly and gluing");
  SpectrumOptions so_tor;
  add_spectrum_options(cmd_tor, so_tor);
  std::string tor_out, tor_format = "csv";
  double tor_r = 1.0, tor_L = 1.0, tor_twist = 0.5, tor_tol = 1e-5;
  cmd_tor->add_option("--r", tor_r, "near piece length");
  cmd_tor->add_option("--L", tor_L, "far piece length");
  cmd_tor->add_option("--twist", tor_twist, "holonomy twist of the closed model");
  cmd_tor->add_option("--tol", tor_tol, "pass tolerance");
  cmd_tor->add_option("--out", tor_out, "output table file");
  cmd_tor->add_option("--format", tor_format, "csv|json");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_error;
  if (!expand_config(args, config_error)) {
    std::fprintf(stderr, "error: %s\n", config_error.c_str());
    return kExitConfig;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (cmd_spectrum->parsed()) {
    SpectrumHandle s;
    int rc = make_spectrum(so_spectrum, s);
    if (rc != kExitPass) return rc;
    if (sg_spectrum_save(s.get(), spectrum_out.c_str()) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    std::printf("modes: %zu\ntail-estimate: %g\nwrote %s\n",
                sg_spectrum_mode_count(s.get()), sg_spectrum_tail_estimate(s.get()),
                spectrum_out.c_str());
    return kExitPass;
  }

  if (cmd_det->parsed()) {
    SpectrumHandle s;
    int rc = make_spectrum(so_det, s);
    if (rc != kExitPass) return rc;
    std::vector<double> rs;
    if (!parse_grid(det_r, rs)) {
      std::fprintf(stderr, "error: bad --r grid\n");
      return kExitConfig;
    }
    sg_report* rep = nullptr;
    if (sg_run_det(s.get(), det_bc.c_str(), det_q, rs.data(), rs.size(), det_tol,
                   &rep) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    return finish_report(rep, det_out, det_format);
  }

  if (cmd_glue->parsed()) {
    SpectrumHandle s;
    int rc = make_spectrum(so_glue, s);
    if (rc != kExitPass) return rc;
    sg_report* rep = nullptr;
    if (sg_run_glue(s.get(), glue_bc.c_str(), glue_q, glue_r, glue_L, glue_tol,
                    &rep) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    return finish_report(rep, glue_out, glue_format);
  }

  if (cmd_ad->parsed()) {
    SpectrumHandle s;
    int rc = make_spectrum(so_ad, s);
    if (rc != kExitPass) return rc;
    std::vector<double> rs;
    if (!parse_grid(ad_r, rs)) {
      std::fprintf(stderr, "error: bad --r grid\n");
      return kExitConfig;
    }
    sg_report* rep = nullptr;
    if (sg_run_adiabatic(s.get(), rs.data(), rs.size(), ad_tol, &rep) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    return finish_report(rep, ad_out, ad_format);
  }

  if (cmd_flow->parsed()) {
    sg_report* rep = nullptr;
    if (sg_run_flow(flow_dim, flow_paths, flow_seed, flow_tol, &rep) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    return finish_report(rep, flow_out, flow_format);
  }

  if (cmd_tor->parsed()) {
    SpectrumHandle s;
    int rc = make_spectrum(so_tor, s);
    if (rc != kExitPass) return rc;
    sg_report* rep = nullptr;
    if (sg_run_torsion(s.get(), tor_r, tor_L, tor_twist, tor_tol, &rep) != SG_OK) {
      std::fprintf(stderr, "error: %s\n", sg_last_error());
      return kExitConfig;
    }
    return finish_report(rep, tor_out, tor_format);
  }

  return kExitConfig;
}
