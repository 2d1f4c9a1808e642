#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "envstat/canonical.hpp"
#include "envstat/envariance.hpp"
#include "envstat/errors.hpp"
#include "envstat/json_io.hpp"
#include "envstat/thermo.hpp"

namespace {

using namespace envstat;

struct Options {
  std::string input;
  std::string unitary;
  std::string bath;
  std::string output;
  std::string format = "json";
  std::string energy;
  std::int64_t n = 0;
  bool n_set = false;
  std::uint64_t seed = 0;
  double k_b = 1.0;
  std::vector<std::string> tolerances;
};

struct Tolerances {
  double marginal = 1e-9;
  double shell = 1e-9;
  double even = 1e-9;
  double verify = 1e-9;
};

Tolerances parse_tolerances(const std::vector<std::string>& entries) {
  Tolerances tol;
  std::map<std::string, double*> keys{{"marginal", &tol.marginal},
                                      {"shell", &tol.shell},
                                      {"even", &tol.even},
                                      {"verify", &tol.verify}};
  for (const std::string& entry : entries) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw validation_error("tolerance entries must look like KEY=VALUE: '" + entry + "'");
    const std::string key = entry.substr(0, eq);
    const auto it = keys.find(key);
    if (it == keys.end()) throw validation_error("unknown tolerance key '" + key + "'");
    const double value = std::strtod(entry.c_str() + eq + 1, nullptr);
    if (!(value > 0.0)) throw validation_error("tolerance '" + key + "' must be positive");
    *it->second = value;
  }
  return tol;
}

void emit_text(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw validation_error("cannot write '" + output + "'");
  out << text;
}

void emit_report(const Json& report, const Options& opt) {
  emit_text(report.dump(2) + "\n", opt.output);
}

Rational required_energy(const Options& opt) {
  if (opt.energy.empty()) throw validation_error("--energy is required for this subcommand");
  return parse_rational(opt.energy);
}

BathSpec load_bath(const Options& opt) {
  if (opt.bath.empty()) throw validation_error("--bath is required for this subcommand");
  return bath_from_json(load_json_file(opt.bath),
                        opt.n_set ? std::optional<std::int64_t>(opt.n) : std::nullopt);
}

Json occupation_json(const std::vector<std::int64_t>& counts) {
  Json arr = Json::array();
  for (std::int64_t c : counts) arr.push_back(c);
  return arr;
}

int run_schmidt(const Options& opt) {
  const Tolerances tol = parse_tolerances(opt.tolerances);
  const PureState state = state_from_json(load_json_file(opt.input));
  const SchmidtDecomposition sd = schmidt(state);
  const EquiprobabilityReport eq = equiprobability(state, tol.even);

  if (opt.format == "csv") {
    std::string csv = "index,coefficient,probability\n";
    for (int k = 0; k < sd.rank; ++k) {
      char row[96];
      std::snprintf(row, sizeof row, "%d,%.12g,%.12g\n", k + 1, sd.coefficients[k],
                    eq.probabilities[k]);
      csv += row;
    }
    emit_text(csv, opt.output);
    return 0;
  }

  Json report;
  report["rank"] = sd.rank;
  report["even"] = is_maximally_envariant(state, tol.even);
  report["equiprobable"] = eq.equiprobable;
  report["maxDeviation"] = report_number(eq.max_deviation);
  Json coeffs = Json::array(), probs = Json::array();
  for (int k = 0; k < sd.rank; ++k) {
    coeffs.push_back(report_number(sd.coefficients[k]));
    probs.push_back(report_number(eq.probabilities[k]));
  }
  report["coefficients"] = std::move(coeffs);
  report["probabilities"] = std::move(probs);
  emit_report(report, opt);
  return 0;
}

int run_envariance(const Options& opt) {
  const Tolerances tol = parse_tolerances(opt.tolerances);
  const PureState state = state_from_json(load_json_file(opt.input));
  if (opt.unitary.empty()) throw validation_error("--unitary is required for envariance");
  const UnitaryOp u = unitary_from_json(load_json_file(opt.unitary));

  const EnvarianceVerdict verdict = is_envariant(state, u, tol.marginal);
  Json report;
  report["envariant"] = verdict.envariant;
  report["residual"] = report_number(verdict.residual);
  report["reason"] = verdict.reason == EnvarianceReason::Constructed ? "constructed"
                                                                     : "marginal-not-preserved";
  report["marginalMismatch"] = report_number(verdict.marginal_mismatch);
  if (verdict.witness) report["witness"] = to_json(*verdict.witness);
  emit_report(report, opt);
  return verdict.envariant ? 0 : 1;
}

int run_microcanonical(const Options& opt) {
  const Tolerances tol = parse_tolerances(opt.tolerances);
  const Hamiltonian h = hamiltonian_from_json(load_json_file(opt.input));
  if (!opt.n_set) throw validation_error("--N (environment dimension) is required");
  const MicrocanonicalState mc =
      build_microcanonical(h, required_energy(opt), static_cast<int>(opt.n), opt.seed);
  const MicrocanonicalReport verification =
      verify_microcanonical(mc.state, h, tol.verify, 20, opt.seed + 1000);

  Json report;
  report["Z"] = mc.z;
  report["energy"] = format_rational(mc.shell_energy);
  Json phases = Json::array();
  for (Eigen::Index k = 0; k < mc.phases.size(); ++k) phases.push_back(report_number(mc.phases[k]));
  report["phases"] = std::move(phases);
  report["verification"] = Json{{"envariantCondition", verification.envariant_condition},
                                {"degenerateCondition", verification.degenerate_condition},
                                {"pass", verification.pass},
                                {"supportDim", verification.support_dim},
                                {"marginalDeviation", report_number(verification.marginal_deviation)},
                                {"energySpread", report_number(verification.energy_spread)},
                                {"haarPasses", verification.haar_passes}};
  if (opt.output.empty()) {
    report["state"] = to_json(mc.state);
    std::cout << report.dump(2) << "\n";
  } else {
    emit_text(to_json(mc.state).dump(2) + "\n", opt.output);
    std::cout << report.dump(2) << "\n";
  }
  return verification.pass ? 0 : 1;
}

int run_count(const Options& opt) {
  parse_tolerances(opt.tolerances);
  const BathSpec bath = load_bath(opt);
  if (!opt.energy.empty()) {
    const Rational e = parse_rational(opt.energy);
    Json report;
    report["energy"] = format_rational(e);
    report["count"] = bath_degeneracy(bath, e).str();
    emit_report(report, opt);
    return 0;
  }
  const DegeneracyTable table = degeneracy_table(bath);
  if (opt.format == "csv") {
    std::string csv = "energy,count\n";
    for (const auto& [e, c] : table.reachable()) csv += format_rational(e) + "," + c.str() + "\n";
    emit_text(csv, opt.output);
    return 0;
  }
  Json rows = Json::array();
  for (const auto& [e, c] : table.reachable())
    rows.push_back(Json{{"energy", format_rational(e)}, {"count", c.str()}});
  emit_report(Json{{"counts", std::move(rows)}}, opt);
  return 0;
}

int run_canonical(const Options& opt) {
  parse_tolerances(opt.tolerances);
  const BathSpec bath = load_bath(opt);
  const Rational e_bath = required_energy(opt);
  const CanonicalSolution sol = solve_boltzmann_gibbs(bath.unit(), bath.n_units(), e_bath);

  std::optional<ArgmaxResult> argmax;
  try {
    argmax = argmax_occupation(bath, e_bath);
  } catch (const domain_error&) {
    // enumeration guard exceeded; the continuous solution stands alone
  }
  std::optional<double> inv_t;
  try {
    inv_t = bath_inverse_temperature(bath, e_bath, opt.k_b);
  } catch (const domain_error&) {
  }

  if (opt.format == "csv") {
    std::string csv = "level,energy,n_continuous,n_argmax,count\n";
    std::int64_t placed = 0;
    for (int j = 0; j < bath.unit().num_levels(); ++j) {
      char head[64];
      std::snprintf(head, sizeof head, "%d,", j + 1);
      csv += head;
      csv += format_rational(bath.unit().levels()[j].energy);
      char mid[48];
      std::snprintf(mid, sizeof mid, ",%.12g,", sol.occupations[j]);
      csv += mid;
      if (argmax) {
        const std::int64_t n_j = argmax->occupation.counts[j];
        // Per-level factor of the exact count: C(N - placed, n_j) * g_j^n_j;
        // the factors multiply to the argmax occupation's total count.
        BigInt factor =
            multinomial({std::vector<std::int64_t>{n_j, bath.n_units() - placed - n_j}});
        factor *= boost::multiprecision::pow(BigInt(bath.unit().levels()[j].degeneracy),
                                             static_cast<unsigned>(n_j));
        placed += n_j;
        csv += std::to_string(n_j) + "," + factor.str() + "\n";
      } else {
        csv += ",\n";
      }
    }
    emit_text(csv, opt.output);
    return 0;
  }

  Json report;
  report["lambda"] = report_number(sol.lambda);
  report["mu"] = report_number(sol.mu);
  Json occs = Json::array();
  for (double n : sol.occupations) occs.push_back(report_number(n));
  report["occupations"] = std::move(occs);
  report["residuals"] = Json{{"meanEnergy", report_number(sol.mean_energy_residual)},
                             {"count", report_number(sol.count_residual)}};
  if (argmax) {
    report["argmax"] = Json{{"occupation", occupation_json(argmax->occupation.counts)},
                            {"count", argmax->count.str()},
                            {"tied", argmax->tied}};
  } else {
    report["argmax"] = nullptr;
  }
  report["invT"] = inv_t ? report_number(*inv_t) : Json(nullptr);
  emit_report(report, opt);
  return 0;
}

int run_thermo(const Options& opt) {
  parse_tolerances(opt.tolerances);
  const BathSpec bath = load_bath(opt);
  std::optional<Spectrum> system;
  if (!opt.input.empty()) system = spectrum_from_json(load_json_file(opt.input));
  const ThermoReport report = thermo_report(bath, required_energy(opt), opt.k_b, system);

  Json j;
  j["kB"] = report_number(report.k_b);
  j["invT"] = report_number(report.inverse_temperature);
  j["T"] = report_number(report.temperature);
  j["H_B"] = report_number(report.bath_entropy);
  j["H_S"] = report.system_entropy ? report_number(*report.system_entropy) : Json(nullptr);
  j["F_S"] = report.free_energy ? report_number(*report.free_energy) : Json(nullptr);
  Json weights = Json::object();
  for (const auto& [e, w] : report.weights) weights[format_rational(e)] = report_number(w);
  j["weights"] = std::move(weights);
  emit_report(j, opt);
  return 0;
}

int run_mutualinfo(const Options& opt, const std::string& count_s, const std::string& count_b,
                   const std::string& count_joint) {
  const Tolerances tol = parse_tolerances(opt.tolerances);
  const PureState state = state_from_json(load_json_file(opt.input));
  Json report;
  report["D"] = report_number(mutual_information(state));
  if (!count_s.empty() || !count_b.empty() || !count_joint.empty()) {
    if (count_s.empty() || count_b.empty() || count_joint.empty())
      throw validation_error("provide all of --countS, --countB, --countJoint or none");
    const MutualInfoReport identity = mutual_info_identity_check(
        state, BigInt(count_s), BigInt(count_b), BigInt(count_joint), tol.even);
    report["logCountRatio"] = report_number(identity.log_count_ratio);
    report["discrepancy"] = report_number(identity.discrepancy);
  }
  emit_report(report, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"envariance and equilibrium-state toolkit"};
  app.require_subcommand(1);

  Options opt;
  std::string count_s, count_b, count_joint;
  int exit_code = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", opt.output, "write the report/state here instead of stdout");
    sub->add_option("--format", opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", opt.seed, "seed for any randomized construction");
    sub->add_option("--kB", opt.k_b, "Boltzmann constant (default 1)");
    sub->add_option("--tolerance", opt.tolerances, "KEY=VAL (marginal, shell, even, verify)");
    sub->add_option("--energy", opt.energy, "exact energy, e.g. 3 or 1/2");
    sub->add_option("--N", opt.n, "unit count (bath) or environment dimension (microcanonical)")
        ->each([&](const std::string&) { opt.n_set = true; });
  };

  CLI::App* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a state file");
  schmidt->add_option("--input", opt.input, "state JSON")->required();
  add_common(schmidt);
  schmidt->callback([&] { exit_code = run_schmidt(opt); });

  CLI::App* envariance = app.add_subcommand("envariance", "decide envariance of a unitary");
  envariance->add_option("--input", opt.input, "state JSON")->required();
  envariance->add_option("--unitary", opt.unitary, "system-side unitary JSON")->required();
  add_common(envariance);
  envariance->callback([&] { exit_code = run_envariance(opt); });

  CLI::App* micro = app.add_subcommand("microcanonical", "build and verify a microcanonical state");
  micro->add_option("--input", opt.input, "Hamiltonian JSON")->required();
  add_common(micro);
  micro->callback([&] { exit_code = run_microcanonical(opt); });

  CLI::App* count = app.add_subcommand("count", "exact bath degeneracy counts");
  count->add_option("--bath", opt.bath, "bath JSON (levels + N)")->required();
  add_common(count);
  count->callback([&] { exit_code = run_count(opt); });

  CLI::App* canonical = app.add_subcommand("canonical", "Boltzmann-Gibbs occupations");
  canonical->add_option("--bath", opt.bath, "bath JSON (levels + N)")->required();
  add_common(canonical);
  canonical->callback([&] { exit_code = run_canonical(opt); });

  CLI::App* thermo = app.add_subcommand("thermo", "bath temperature and canonical weights");
  thermo->add_option("--bath", opt.bath, "bath JSON (levels + N)")->required();
  thermo->add_option("--input", opt.input, "optional system spectrum JSON");
  add_common(thermo);
  thermo->callback([&] { exit_code = run_thermo(opt); });

  CLI::App* mutual = app.add_subcommand("mutualinfo", "mutual information and count-ratio identity");
  mutual->add_option("--input", opt.input, "state JSON")->required();
  mutual->add_option("--countS", count_s, "system shell count (decimal string)");
  mutual->add_option("--countB", count_b, "bath shell count (decimal string)");
  mutual->add_option("--countJoint", count_joint, "joint shell count (decimal string)");
  add_common(mutual);
  mutual->callback([&] { exit_code = run_mutualinfo(opt, count_s, count_b, count_joint); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const validation_error& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return exit_code;
}
