// optomech: sweeps and single-point evaluations for the cavity + thermal
// mirror model.
//
//   optomech sweep --config run.json [--output out.csv] [--workers 4]
//   optomech kc --alpha 1
//   optomech alpha-max --k 0.5
//   optomech alpha-c --k 0.5
//   optomech mutual-info --T 1 --wm 1e7 --k 1 --alpha 1e6 --theta pi
//   optomech negativity-at --k 1 --alpha 1 --nbar 1 --theta pi --subspace 0,1,0,1
//
// Single-point commands print the scalar on the first line and a JSON
// record on the second. Exit codes: 0 ok, 2 config error, 3 numeric error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "optomech/analysis.hpp"
#include "optomech/entanglement.hpp"
#include "optomech/entropy.hpp"
#include "optomech/errors.hpp"
#include "optomech/sweep.hpp"

using namespace optomech;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void emit(double value, json record) {
  record["version"] = kToolVersion;
  std::cout << format_number(value) << '\n' << record.dump() << '\n';
}

SubspaceSelector parse_subspace(const std::string& text) {
  std::vector<int> idx;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      idx.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw ConfigError("subspace: cannot parse '" + part + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (idx.size() != 4) throw ConfigError("subspace: expected mu,nu,n,m");
  SubspaceSelector sel{idx[0], idx[1], idx[2], idx[3]};
  sel.validate();
  return sel;
}

EntropyMethod parse_method(const std::string& name) {
  if (name == "auto") return EntropyMethod::automatic;
  if (name == "series") return EntropyMethod::exact_series;
  if (name == "asymptotic") return EntropyMethod::asymptotic;
  throw ConfigError("method must be auto, series or asymptotic");
}

const char* method_name(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::exact_series: return "series";
    case EntropyMethod::asymptotic: return "asymptotic";
    case EntropyMethod::automatic: return "auto";
  }
  return "auto";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement of a coherent cavity field with a thermal mirror"};
  app.require_subcommand(1);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
  std::string config_path, output_override;
  std::optional<unsigned> workers_override;
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--output", output_override, "Output path (overrides config)");
  sweep->add_option("--workers", workers_override, "Worker threads (overrides config)")
      ->check(CLI::PositiveNumber);

  auto* kc = app.add_subcommand("kc", "Critical coupling k_c(alpha) at nbar = 0");
  double kc_alpha = 1.0;
  kc->add_option("--alpha", kc_alpha)->required();

  auto* amax = app.add_subcommand("alpha-max", "Amplitude maximizing tau(pi)");
  double amax_k = 0.5;
  amax->add_option("--k", amax_k)->required();

  auto* ac = app.add_subcommand("alpha-c", "Amplitude with k_c(alpha) = k");
  double ac_k = 0.5;
  ac->add_option("--k", ac_k)->required();

  auto* mi = app.add_subcommand("mutual-info", "Normalized linear mutual information");
  std::optional<double> mi_temp, mi_nbar;
  double mi_wm = 1.0, mi_k = 1.0, mi_alpha = 1.0;
  std::string mi_theta = "pi", mi_method = "auto";
  mi->add_option("--T", mi_temp, "Temperature in K (needs --wm)");
  mi->add_option("--wm", mi_wm, "Mirror angular frequency in rad/s");
  mi->add_option("--nbar", mi_nbar, "Thermal occupancy");
  mi->add_option("--k", mi_k)->required();
  mi->add_option("--alpha", mi_alpha)->required();
  mi->add_option("--theta", mi_theta, "Scaled time, e.g. pi or pi/2");
  mi->add_option("--method", mi_method, "auto | series | asymptotic");

  auto* neg = app.add_subcommand("negativity-at", "Negativity on a 2x2 subspace");
  double neg_k = 1.0, neg_alpha = 1.0, neg_nbar = 0.0;
  std::string neg_theta = "pi", neg_sub = "0,1,0,1";
  neg->add_option("--k", neg_k)->required();
  neg->add_option("--alpha", neg_alpha)->required();
  neg->add_option("--nbar", neg_nbar);
  neg->add_option("--theta", neg_theta);
  neg->add_option("--subspace", neg_sub, "mu,nu,n,m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sweep) {
      SweepConfig cfg = SweepConfig::from_file(config_path);
      if (!output_override.empty()) cfg.output = output_override;
      if (workers_override) cfg.workers = *workers_override;
      if (cfg.output.empty()) throw ConfigError("config: no output path");
      const SweepResult result = run_sweep(cfg);
      write_outputs(result, cfg.output);
      std::cerr << "wrote " << cfg.output << " (" << result.rows.size() << " rows, "
                << result.error_rows << " with errors)\n";
      return result.error_rows ? kExitNumeric : 0;
    }
    if (*kc) {
      const auto r = solve_kc(kc_alpha);
      emit(r.k_c, {{"command", "kc"}, {"alpha", kc_alpha}, {"k_c", r.k_c},
                   {"residual", r.residual}, {"sign_changes", r.sign_changes.size()}});
    } else if (*amax) {
      const auto r = alpha_max(amax_k);
      emit(r.value, {{"command", "alpha-max"}, {"k", amax_k}, {"alpha_max", r.value},
                     {"valid", r.valid}});
    } else if (*ac) {
      const double v = alpha_c(ac_k);
      emit(v, {{"command", "alpha-c"}, {"k", ac_k}, {"alpha_c", v}});
    } else if (*mi) {
      SystemParams p;
      p.mirror_freq = mi_wm;
      p.coupling_k = mi_k;
      p.alpha = mi_alpha;
      if (mi_temp) {
        p.temperature = *mi_temp;
        p.nbar = mi_nbar ? *mi_nbar : thermal_occupancy(*mi_temp, mi_wm);
      } else if (mi_nbar) {
        p.nbar = *mi_nbar;
      } else {
        throw ConfigError("mutual-info: give --T (with --wm) or --nbar");
      }
      p.validate();
      const double theta = parse_angle(mi_theta);
      const auto r = mutual_information(p, theta, parse_method(mi_method));
      emit(r.mutual_excess,
           {{"command", "mutual-info"}, {"k", mi_k}, {"alpha", mi_alpha}, {"nbar", p.nbar},
            {"theta", theta}, {"S1", r.s_mirror}, {"S2", r.s_cavity}, {"S", r.s_total},
            {"I_norm", r.mutual}, {"I_minus_half", r.mutual_excess},
            {"araki_lieb", r.araki_lieb_quantum}, {"method", method_name(r.method)}});
    } else if (*neg) {
      SystemParams p;
      p.coupling_k = neg_k;
      p.alpha = neg_alpha;
      p.nbar = neg_nbar;
      p.validate();
      const SubspaceSelector sel = parse_subspace(neg_sub);
      const double theta = parse_angle(neg_theta);
      double v = 0.0;  // a vanishing projection carries no entanglement
      try {
        v = negativity(project_elements(p, ScaledTime(theta), sel));
      } catch (const DegenerateSubspaceError&) {
      }
      emit(v, {{"command", "negativity-at"}, {"k", neg_k}, {"alpha", neg_alpha},
               {"nbar", neg_nbar}, {"theta", theta},
               {"subspace", {sel.mu, sel.nu, sel.n, sel.m}},
               {"negativity", v}});
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << " error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
