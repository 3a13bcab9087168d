#include "p14/cli/commands.hpp"

#include "p14/cli/config.hpp"
#include "p14/state_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace p14::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kFaithfulnessThreshold = 1e-12;
constexpr double kJacobiThreshold = 1e-10;
constexpr double kCentralityThreshold = 1e-10;
constexpr double kRepTableThreshold = 1e-12;

struct GlobalOptions {
  std::string out_dir;
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool timing = false;
};

struct CommandResult {
  int code = kSuccess;
  ordered_json report;
  std::string text;
  // Extra files to place in the output directory: (name, contents).
  std::vector<std::pair<std::string, std::string>> files;
};

// Mixed pairs are written rotation first, e.g. [M12,P1].
std::string pair_name(GeneratorId a, GeneratorId b) {
  if (a.is_translation() && !b.is_translation()) std::swap(a, b);
  return "[" + a.name() + "," + b.name() + "]";
}

std::string vector_text(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
  return s + ")";
}

fs::path ensure_dir(const std::string& dir) {
  const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(p);
  return p;
}

MatrixRealization realization_named(const std::string& name) {
  if (name == "affine") return build_affine_realization();
  if (name == "spinor-affine") return build_spinor_affine_realization();
  throw ConfigError("unknown realization '" + name + "' (expected affine or spinor-affine)");
}

CommandResult cmd_verify(const std::string& realization, const std::string& corrupt, const GlobalOptions& g) {
  MatrixRealization r = realization_named(realization);
  if (!corrupt.empty()) {
    bool found = false;
    for (GeneratorId id : all_generators()) {
      if (id.name() == corrupt) {
        r.set(id, Matrix::Zero(r.dim(), r.dim()));
        found = true;
      }
    }
    if (!found) throw ConfigError("--corrupt: unknown generator '" + corrupt + "'");
  }
  const double threshold = g.tol.value_or(kFaithfulnessThreshold);

  const RealizationReport rep = verify_realization(r);
  ordered_json pairs = ordered_json::array();
  ordered_json offending = ordered_json::array();
  for (const PairDeviation& d : rep.pairs) {
    pairs.push_back({{"pair", pair_name(d.a, d.b)}, {"deviation", d.deviation}});
    if (!(d.deviation < threshold)) offending.push_back(pair_name(d.a, d.b));
  }
  const int symbolic = symbolic_jacobi_failures();
  const double jacobi = jacobi_residual(r);

  ordered_json centrality = ordered_json::array();
  bool central = true;
  const std::array<FiveMomentum, 3> frozen{(FiveMomentum() << 1, 0, 0, 0, 0).finished(),
                                           (FiveMomentum() << 1, 0, 0, 0, 1).finished(),
                                           (FiveMomentum() << 0, 0, 0, 0, 1).finished()};
  std::ostringstream text;
  text << "verify realization=" << realization << " dim=" << r.dim() << "\n";
  text << "faithfulness global_max=" << format_number(rep.global_max) << " threshold=" << format_number(threshold)
       << "\n";
  text << "jacobi symbolic_failures=" << symbolic << " matrix_residual=" << format_number(jacobi) << "\n";
  for (const FiveMomentum& p : frozen) {
    const CentralityReport c = casimir_centrality(r, p);
    const std::vector<double> pv(p.data(), p.data() + p.size());
    centrality.push_back({{"momentum", pv},
                          {"little_algebra_dim", c.little_algebra_dim},
                          {"v_residual", c.v_residual},
                          {"w_residual", c.w_residual}});
    if (!(c.v_residual < kCentralityThreshold && c.w_residual < kCentralityThreshold)) central = false;
    text << "centrality p=" << vector_text(pv) << " little_algebra_dim=" << c.little_algebra_dim
         << " v_residual=" << format_number(c.v_residual) << " w_residual=" << format_number(c.w_residual) << "\n";
  }
  const bool passed = offending.empty() && symbolic == 0 && jacobi < kJacobiThreshold && central;
  for (const auto& o : offending) text << "offending " << o.get<std::string>() << "\n";
  text << "result " << (passed ? "PASS" : "FAIL") << "\n";

  CommandResult res;
  res.code = passed ? kSuccess : kVerificationFailure;
  res.report["command"] = "verify";
  res.report["inputs"] = {{"realization", realization},
                          {"corrupt", corrupt.empty() ? ordered_json(nullptr) : ordered_json(corrupt)},
                          {"tol", threshold}};
  res.report["results"] = {
      {"dim", r.dim()},
      {"faithfulness", {{"global_max", rep.global_max}, {"threshold", threshold}, {"pairs", pairs}}},
      {"jacobi",
       {{"symbolic_failures", symbolic}, {"matrix_residual", jacobi}, {"threshold", kJacobiThreshold}}},
      {"centrality", centrality},
  };
  res.report["max_deviations"] = {{"commutator", rep.global_max}, {"jacobi", jacobi}};
  res.report["offending"] = offending;
  res.report["passed"] = passed;
  res.text = text.str();
  return res;
}

FiveMomentum parse_momentum(const std::string& s) {
  std::vector<double> values;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--p: cannot parse '" + item + "' as a number");
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("--p: cannot parse '" + item + "' as a finite number");
    values.push_back(v);
  }
  if (values.size() != 5 || (!s.empty() && s.back() == ',')) throw ConfigError("--p expects five comma-separated reals");
  return Eigen::Map<const FiveMomentum>(values.data());
}

CommandResult cmd_classify(const std::string& p_text, const GlobalOptions& g) {
  const FiveMomentum p = parse_momentum(p_text);
  const double tol = g.tol.value_or(kDefaultClassifyTol);
  if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
  const double p2 = casimir_P2(p);
  const RepClass c = classify(p2, p, tol);

  CommandResult res;
  const std::vector<double> pv(p.data(), p.data() + 5);
  res.report["command"] = "classify";
  res.report["inputs"] = {{"p", pv}, {"tol", tol}};
  ordered_json results = {{"class", to_string(c)}, {"p2", p2}};
  std::ostringstream text;
  text << "class " << to_string(c) << "\n" << "p2 " << format_number(p2) << "\n";
  if (c == RepClass::I) {
    results["kappa"] = std::sqrt(p2);
    text << "kappa " << format_number(std::sqrt(p2)) << "\n";
  } else if (c == RepClass::III) {
    results["eta"] = std::sqrt(-p2);
    text << "eta " << format_number(std::sqrt(-p2)) << "\n";
  }
  res.report["results"] = results;
  res.text = text.str();
  return res;
}

CommandResult cmd_rep_table(int max_2s, int max_2i, const GlobalOptions& g) {
  if (max_2s < 0 || max_2i < 0) throw ConfigError("--max-2s and --max-2I must be non-negative");
  const double threshold = g.tol.value_or(kRepTableThreshold);
  std::ostringstream csv;
  csv << "s,I,dim,S2,I2,residual\n";
  ordered_json rows = ordered_json::array();
  bool ok = true;
  for (int ts = 0; ts <= max_2s; ++ts) {
    for (int ti = 0; ti <= max_2i; ++ti) {
      const HalfInteger s = HalfInteger::from_twice(ts);
      const HalfInteger iso = HalfInteger::from_twice(ti);
      const SpinIsospinRep rep = build_class1_rep(s, iso);
      const double dim = static_cast<double>(rep.dim);
      const double s2 = spin_casimir(rep.M, rep.R).trace().real() / dim;
      const double i2 = isospin_casimir(rep.M, rep.R).trace().real() / dim;
      const double residual = so4_bracket_residual(rep.M, rep.R);
      bool round_trip = false;
      try {
        round_trip = spin_isospin_eigen(rep) == std::pair{s, iso};
      } catch (const ReducibleInput&) {
        round_trip = false;
      }
      if (!round_trip || !(residual < threshold)) ok = false;
      csv << format_number(s.value()) << ',' << format_number(iso.value()) << ',' << rep.dim << ','
          << format_number(s2) << ',' << format_number(i2) << ',' << format_number(residual) << '\n';
      rows.push_back({{"s", s.value()},
                      {"I", iso.value()},
                      {"dim", rep.dim},
                      {"S2", s2},
                      {"I2", i2},
                      {"residual", residual},
                      {"round_trip", round_trip}});
    }
  }
  CommandResult res;
  res.code = ok ? kSuccess : kVerificationFailure;
  res.report["command"] = "rep-table";
  res.report["inputs"] = {{"max_2s", max_2s}, {"max_2I", max_2i}, {"tol", threshold}};
  res.report["results"] = {{"rows", rows}, {"csv", "rep_table.csv"}};
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, row["residual"].get<double>());
  res.report["max_deviations"] = {{"bracket", worst}};
  res.report["passed"] = ok;
  res.text = csv.str();
  res.files.emplace_back("rep_table.csv", csv.str());
  return res;
}

RunConfig load_with_overrides(const std::string& path, Command command, const GlobalOptions& g) {
  RunConfig cfg = load_run_config(path, command);
  if (g.seed) cfg.seed = *g.seed;
  if (g.tol) {
    if (*g.tol < 0.0) throw ConfigError("--tol must be non-negative");
    cfg.reject_tolerance = *g.tol;
  }
  return cfg;
}

// Applies the class III policy once to the initial state.
double apply_threshold_policy(WaveFunction& psi, const RunConfig& cfg) {
  const auto* c3 = std::get_if<ClassIII>(&cfg.label);
  if (!c3) return 0.0;
  FilterResult filtered = subthreshold_filter(psi, c3->eta);
  if (cfg.policy == SubthresholdPolicy::Reject && filtered.removed_norm > cfg.reject_tolerance) {
    throw ThresholdError("evanescent modes carry weight " + format_number(filtered.removed_norm) +
                         " above reject_tolerance " + format_number(cfg.reject_tolerance));
  }
  psi = std::move(filtered.state);
  return filtered.removed_norm;
}

std::string state_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "state_%03zu.p14", index);
  return buf;
}

CommandResult cmd_evolve(const std::string& config_path, const GlobalOptions& g) {
  const RunConfig cfg = load_with_overrides(config_path, Command::Evolve, g);
  const PropagatorSpec spec = cfg.propagator();
  WaveFunction psi0 = build_initial_state(cfg);
  const double truncated = apply_threshold_policy(psi0, cfg);
  const fs::path dir = ensure_dir(g.out_dir);

  ordered_json steps = ordered_json::array();
  std::ostringstream text;
  text << "evolve class=" << to_string(class_of(cfg.label)) << " modes=" << cfg.grid.size()
       << " components=" << psi0.components() << "\n";
  const double norm0 = psi0.norm();
  double max_norm_dev = 0.0;
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const double t = cfg.times[i];
    const Propagated out = propagate(psi0, t, spec);
    const Observables obs = observables(out.state, spec);
    const std::string name = state_file_name(i);
    write_state_file(dir / name, {cfg.label, t, out.state});
    max_norm_dev = std::max(max_norm_dev, std::abs(obs.norm - norm0));
    steps.push_back({{"time", t},
                     {"file", name},
                     {"norm", obs.norm},
                     {"position_mean", obs.position_mean},
                     {"energy_mean", obs.energy_mean},
                     {"p4_mean", obs.p4_mean}});
    text << "t=" << format_number(t) << " norm=" << format_number(obs.norm)
         << " x=" << vector_text(obs.position_mean) << " E=" << format_number(obs.energy_mean)
         << " p4=" << format_number(obs.p4_mean) << " file=" << name << "\n";
  }
  if (class_of(cfg.label) == RepClass::III) text << "truncated_norm " << format_number(truncated) << "\n";

  CommandResult res;
  res.report["command"] = "evolve";
  res.report["inputs"] = to_json(cfg);
  res.report["results"] = {{"steps", steps}, {"truncated_norm", truncated}};
  res.report["max_deviations"] = {{"norm", max_norm_dev}};
  res.text = text.str();
  return res;
}

CommandResult cmd_spectrum(const std::string& config_path, const GlobalOptions& g) {
  const RunConfig cfg = load_with_overrides(config_path, Command::Spectrum, g);
  const PropagatorSpec spec = cfg.propagator();
  const WaveFunction psi0 = build_initial_state(cfg);
  if (cfg.policy == SubthresholdPolicy::Reject) {
    WaveFunction probe = psi0;
    apply_threshold_policy(probe, cfg);
  }
  const MassSpectrum ms = mass_spectrum(psi0, spec, *cfg.bins);
  const bool class3 = class_of(cfg.label) == RepClass::III;

  std::ostringstream csv;
  csv << "m,density\n";
  for (std::size_t b = 0; b < ms.density.size(); ++b) {
    csv << format_number(0.5 * (ms.edges[b] + ms.edges[b + 1])) << ',' << format_number(ms.density[b]) << '\n';
  }
  if (class3) csv << "# truncated_norm=" << format_number(ms.truncated_norm) << '\n';
  const double integral = ms.integral();

  CommandResult res;
  res.report["command"] = "spectrum";
  res.report["inputs"] = to_json(cfg);
  ordered_json results = {{"csv", "spectrum.csv"},
                          {"bins", ms.density.size()},
                          {"m_lower", ms.edges.front()},
                          {"m_upper", ms.edges.back()},
                          {"integral", integral},
                          {"outside_norm", ms.outside_norm}};
  if (class3) results["truncated_norm"] = ms.truncated_norm;
  res.report["results"] = results;
  res.report["max_deviations"] = {{"probability", std::abs(integral + ms.truncated_norm + ms.outside_norm - 1.0)}};
  std::ostringstream text;
  text << "spectrum class=" << to_string(class_of(cfg.label)) << " bins=" << ms.density.size() << "\n";
  text << "integral " << format_number(integral) << "\n";
  if (class3) text << "truncated_norm " << format_number(ms.truncated_norm) << "\n";
  text << "csv spectrum.csv\n";
  res.text = text.str();
  res.files.emplace_back("spectrum.csv", csv.str());
  return res;
}

void write_text_file(const fs::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << contents;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix realizations, representation classes and variable-mass propagation for P(1,4)", "p14"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  double tol = 0.0;
  app.add_option("--out", g.out_dir, "Directory for reports and output files");
  app.add_flag("--json", g.json, "Print the report as a single JSON object");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized packet noise (overrides config)");
  auto* tol_opt = app.add_option("--tol", tol, "Command tolerance override");
  app.add_flag("--timing", g.timing, "Include wall time in the report (breaks byte-identical output)");

  std::string realization = "affine";
  std::string corrupt;
  auto* verify = app.add_subcommand("verify", "Check commutators, Jacobi identity and Casimir centrality");
  verify->add_option("--realization", realization, "affine | spinor-affine");
  verify->add_option("--corrupt", corrupt, "Zero one generator before verifying (test hook)");

  std::string p_text;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a five-momentum");
  classify_cmd->add_option("--p", p_text, "p0,p1,p2,p3,p4")->required();

  int max_2s = 2;
  int max_2i = 2;
  auto* rep_table = app.add_subcommand("rep-table", "Tabulate class I spin-isospin representations");
  rep_table->add_option("--max-2s", max_2s, "Largest 2s");
  rep_table->add_option("--max-2I", max_2i, "Largest 2I");

  std::string config_path;
  auto* evolve = app.add_subcommand("evolve", "Propagate an initial packet and write state files");
  evolve->add_option("--config", config_path, "JSON run configuration")->required();
  auto* spectrum = app.add_subcommand("spectrum", "Mass spectrum of the configured packet");
  spectrum->add_option("--config", config_path, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }
  if (seed_opt->count() > 0) g.seed = seed;
  if (tol_opt->count() > 0) g.tol = tol;

  const auto start = std::chrono::steady_clock::now();
  CommandResult res;
  try {
    if (verify->parsed()) res = cmd_verify(realization, corrupt, g);
    else if (classify_cmd->parsed()) res = cmd_classify(p_text, g);
    else if (rep_table->parsed()) res = cmd_rep_table(max_2s, max_2i, g);
    else if (evolve->parsed()) res = cmd_evolve(config_path, g);
    else if (spectrum->parsed()) res = cmd_spectrum(config_path, g);

    if (g.timing) {
      res.report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    const std::string report_text = res.report.dump(2) + "\n";
    const bool writes_files = evolve->parsed() || spectrum->parsed();
    if (!g.out_dir.empty() || writes_files) {
      const fs::path dir = ensure_dir(g.out_dir);
      write_text_file(dir / "report.json", report_text);
      for (const auto& [name, contents] : res.files) write_text_file(dir / name, contents);
    }
    out << (g.json ? report_text : res.text);
    return res.code;
  } catch (const ThresholdError& e) {
    err << "error: " << e.what() << "\n";
    return kPolicyError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"p14"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace p14::cli
