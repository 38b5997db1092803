// eclone: command-line front end for the entanglement-cloning simulator.
// Talks to the library exclusively through the C API in eclone/eclone.h.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eclone/eclone.h"

namespace {

using nlohmann::ordered_json;

struct ApiError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(eclone_status status) {
  if (status != ECLONE_OK) {
    throw ApiError(std::string(eclone_status_name(status)) + ": " + eclone_last_error());
  }
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Density = std::unique_ptr<eclone_density, Deleter<eclone_density, eclone_density_free>>;
using Outcome = std::unique_ptr<eclone_outcome, Deleter<eclone_outcome, eclone_outcome_free>>;
using Counts = std::unique_ptr<eclone_counts, Deleter<eclone_counts, eclone_counts_free>>;
using Resamples = std::unique_ptr<eclone_resamples, Deleter<eclone_resamples, eclone_resamples_free>>;
using Report = std::unique_ptr<eclone_check_report, Deleter<eclone_check_report, eclone_check_report_free>>;

std::string take_string(char* s) {
  std::string out(s);
  eclone_string_free(s);
  return out;
}

std::string read_text(const std::string& path) {
  char* contents = nullptr;
  check(eclone_read_file(path.c_str(), &contents));
  return take_string(contents);
}

void write_text(const std::string& path, const std::string& text) { check(eclone_write_file(path.c_str(), text.c_str())); }

std::string density_json(const eclone_density* rho) {
  char* json = nullptr;
  check(eclone_density_to_json(rho, &json));
  return take_string(json);
}

// Named state, or a matrix JSON file when `spec` names an existing path.
Density load_state(const std::string& spec) {
  eclone_density* rho = nullptr;
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) {
    check(eclone_density_from_json(read_text(spec).c_str(), &rho));
  } else {
    check(eclone_density_named(spec.c_str(), &rho));
  }
  return Density(rho);
}

struct Global {
  std::uint64_t seed = 2020;
  std::string out;
  std::string format;
  unsigned threads = 0;
};

void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text(g.out, text);
  }
}

std::string format_or(const Global& g, const char* fallback) { return g.format.empty() ? fallback : g.format; }

// Flattens nested objects into `quantity,value` rows.
void flatten(const ordered_json& j, const std::string& prefix, std::string& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else if (it->is_string()) {
      out += key + "," + it->get<std::string>() + "\n";
    } else {
      out += key + "," + it->dump() + "\n";
    }
  }
}

std::string render(const Global& g, const ordered_json& report, const char* fallback) {
  const std::string format = format_or(g, fallback);
  if (format == "csv") {
    std::string out = "quantity,value\n";
    flatten(report, "", out);
    return out;
  }
  return report.dump(2) + "\n";
}

ordered_json state_metrics(const eclone_density* rho) {
  eclone_metrics m{};
  check(eclone_metrics_compute(rho, &m));
  ordered_json j;
  j["fidelity_phi_plus"] = m.fidelity_phi_plus;
  j["witness"] = m.witness;
  j["witness_from_correlations"] = m.witness_correlations;
  j["xx"] = m.xx;
  j["yy"] = m.yy;
  j["zz"] = m.zz;
  j["concurrence"] = m.concurrence;
  j["entropy_bits"] = m.entropy_bits;
  return j;
}

// ---------------------------------------------------------------- clone

struct CloneArgs {
  std::string input = "phi+";
  std::optional<double> r;
  std::optional<double> r1;
  std::optional<double> r2;
  double overlap_sq = 1.0;
  std::string model = "ideal";
  std::string local_matrix;
  std::string distant_matrix;
};

int cmd_clone(const Global& g, const CloneArgs& a) {
  const double base = a.r.value_or(1.0 / 3.0);
  eclone_network net{a.input.c_str(), a.r1.value_or(base), a.r2.value_or(base), a.overlap_sq,
                     a.model == "physical" ? ECLONE_MODEL_PHYSICAL : ECLONE_MODEL_IDEAL};
  eclone_outcome* raw = nullptr;
  check(eclone_clone_run(&net, &raw));
  Outcome outcome(raw);

  ordered_json report;
  report["input"] = a.input;
  report["model"] = a.model;
  report["r1"] = net.r1;
  report["r2"] = net.r2;
  report["overlap_sq"] = net.overlap_sq;
  report["success_weight"] = eclone_outcome_success_weight(outcome.get());
  if (!eclone_outcome_heralded(outcome.get())) {
    report["heralded"] = false;
    emit(g, render(g, report, "json"));
    return 0;
  }
  const eclone_density* local = nullptr;
  const eclone_density* distant = nullptr;
  check(eclone_outcome_local(outcome.get(), &local));
  check(eclone_outcome_distant(outcome.get(), &distant));
  double f_local = 0.0;
  double f_distant = 0.0;
  check(eclone_outcome_fidelities(outcome.get(), &f_local, &f_distant));
  double distance = 0.0;
  double uhlmann = 0.0;
  check(eclone_trace_distance(local, distant, &distance));
  check(eclone_uhlmann_fidelity(local, distant, &uhlmann));

  report["heralded"] = true;
  report["fidelity_local"] = f_local;
  report["fidelity_distant"] = f_distant;
  report["local"] = state_metrics(local);
  report["distant"] = state_metrics(distant);
  report["clones"] = {{"trace_distance", distance}, {"uhlmann_fidelity", uhlmann}};
  if (!a.local_matrix.empty()) write_text(a.local_matrix, density_json(local) + "\n");
  if (!a.distant_matrix.empty()) write_text(a.distant_matrix, density_json(distant) + "\n");
  emit(g, render(g, report, "json"));
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string input = "phi+";
  double r_min = 0.0;
  double r_max = 1.0;
  int steps = 11;
  double overlap_sq = 1.0;
};

int cmd_sweep(const Global& g, const SweepArgs& a) {
  if (a.r_min > a.r_max) throw CLI::ValidationError("--r-min", "must not exceed --r-max");
  if (a.steps < 2) throw CLI::ValidationError("--steps", "must be at least 2");
  std::vector<double> grid;
  if (a.r_min == a.r_max) {
    grid.push_back(a.r_min);
  } else {
    for (int k = 0; k < a.steps; ++k) grid.push_back(a.r_min + (a.r_max - a.r_min) * k / (a.steps - 1));
    grid.back() = a.r_max;
  }
  std::vector<eclone_sweep_point> points(grid.size());
  check(eclone_sweep(a.input.c_str(), grid.data(), grid.size(), a.overlap_sq, g.threads, points.data()));

  if (format_or(g, "csv") == "json") {
    ordered_json rows = ordered_json::array();
    for (const auto& p : points) {
      rows.push_back({{"R", p.r}, {"F_local", p.fidelity_local}, {"F_distant", p.fidelity_distant},
                      {"success_weight", p.success_weight}});
    }
    emit(g, rows.dump(2) + "\n");
  } else {
    char* csv = nullptr;
    check(eclone_sweep_to_csv(points.data(), points.size(), &csv));
    emit(g, take_string(csv));
  }
  return 0;
}

// ---------------------------------------------------------------- tomo

struct TomoArgs {
  std::string state = "sigma";
  double n = 4000;
  int mc = 200;
  std::string counts_in;
  std::string counts_out;
  std::string matrix_out;
};

int cmd_tomo(const Global& g, const TomoArgs& a) {
  Density truth;
  eclone_counts* raw_counts = nullptr;
  if (!a.counts_in.empty()) {
    check(eclone_counts_from_csv(read_text(a.counts_in).c_str(), &raw_counts));
  } else {
    truth = load_state(a.state);
    check(eclone_counts_sample(truth.get(), a.n, g.seed, &raw_counts));
  }
  Counts counts(raw_counts);
  if (!a.counts_out.empty()) {
    char* csv = nullptr;
    check(eclone_counts_to_csv(counts.get(), &csv));
    write_text(a.counts_out, take_string(csv));
  }

  eclone_density* raw_fit = nullptr;
  eclone_mle_info info{};
  check(eclone_mle(counts.get(), &raw_fit, &info));
  Density fit(raw_fit);
  if (!a.matrix_out.empty()) write_text(a.matrix_out, density_json(fit.get()) + "\n");

  // Distances are measured against the true state when it is known, against
  // Phi+ otherwise.
  Density reference = truth ? std::move(truth) : load_state("phi+");

  ordered_json report;
  report["state"] = a.counts_in.empty() ? a.state : std::string("counts:") + a.counts_in;
  if (a.counts_in.empty()) report["n_per_setting"] = a.n;
  report["seed"] = g.seed;
  report["mle"] = {{"log_likelihood", info.log_likelihood},
                   {"iterations", info.iterations},
                   {"converged", info.converged != 0},
                   {"likelihood_monotone", info.likelihood_monotone != 0}};

  double uhlmann = 0.0;
  double distance = 0.0;
  check(eclone_uhlmann_fidelity(fit.get(), reference.get(), &uhlmann));
  check(eclone_trace_distance(fit.get(), reference.get(), &distance));
  ordered_json metrics = state_metrics(fit.get());
  metrics["uhlmann_fidelity_to_reference"] = uhlmann;
  metrics["trace_distance_to_reference"] = distance;
  report["estimate"] = metrics;

  if (a.mc > 0) {
    eclone_resamples* raw_mc = nullptr;
    check(eclone_resample(counts.get(), static_cast<size_t>(a.mc), g.seed + 1, g.threads, &raw_mc));
    Resamples mc(raw_mc);
    ordered_json bars;
    const std::pair<const char*, eclone_statistic> stats[] = {
        {"fidelity_phi_plus", ECLONE_STAT_FIDELITY},
        {"witness", ECLONE_STAT_WITNESS},
        {"concurrence", ECLONE_STAT_CONCURRENCE},
        {"entropy_bits", ECLONE_STAT_ENTROPY},
        {"uhlmann_fidelity_to_reference", ECLONE_STAT_UHLMANN_FIDELITY},
        {"trace_distance_to_reference", ECLONE_STAT_TRACE_DISTANCE},
    };
    for (const auto& [name, stat] : stats) {
      const bool needs_reference = stat == ECLONE_STAT_UHLMANN_FIDELITY || stat == ECLONE_STAT_TRACE_DISTANCE;
      double mean = 0.0;
      double std = 0.0;
      check(eclone_resamples_summary(mc.get(), stat, needs_reference ? reference.get() : nullptr, &mean, &std));
      bars[name] = {{"mean", mean}, {"std", std}};
    }
    report["monte_carlo"] = {{"resamples", a.mc}, {"statistics", bars}};
  }
  report["matrix"] = ordered_json::parse(density_json(fit.get()));
  emit(g, render(g, report, "json"));
  return 0;
}

// ---------------------------------------------------------------- hom

struct HomArgs {
  double r = 1.0 / 3.0;
  double overlap_sq = 1.0;
  std::optional<double> fit;
};

int cmd_hom(const Global& g, const HomArgs& a) {
  ordered_json report;
  report["r"] = a.r;
  if (a.fit) {
    double overlap_sq = 0.0;
    check(eclone_fit_overlap(*a.fit, a.r, &overlap_sq));
    report["measured_visibility"] = *a.fit;
    report["overlap_sq"] = overlap_sq;
  } else {
    double visibility = 0.0;
    check(eclone_hom_visibility(a.r, a.overlap_sq, &visibility));
    report["overlap_sq"] = a.overlap_sq;
    report["visibility"] = visibility;
  }
  emit(g, render(g, report, "json"));
  return 0;
}

// ---------------------------------------------------------------- paper

int cmd_paper(const Global& g) {
  eclone_check_report* raw = nullptr;
  check(eclone_checks_run(g.seed, g.threads, &raw));
  Report report(raw);
  const std::size_t n = eclone_check_count(report.get());
  std::vector<eclone_check> rows(n);
  bool all_passed = true;
  for (std::size_t i = 0; i < n; ++i) {
    check(eclone_check_get(report.get(), i, &rows[i]));
    all_passed = all_passed && rows[i].passed;
  }

  const std::string format = format_or(g, "text");
  std::string text;
  if (format == "json") {
    ordered_json out = ordered_json::array();
    for (const auto& r : rows) {
      out.push_back({{"id", r.id},
                     {"description", r.description},
                     {"comparison", r.comparison},
                     {"computed", r.computed},
                     {"expected", r.expected},
                     {"tolerance", r.tolerance},
                     {"passed", r.passed != 0}});
    }
    text = out.dump(2) + "\n";
  } else if (format == "csv") {
    text = "id,comparison,computed,expected,tolerance,passed\n";
    for (const auto& r : rows) {
      std::ostringstream line;
      line.precision(12);
      line << r.id << ',' << r.comparison << ',' << r.computed << ',' << r.expected << ',' << r.tolerance << ','
           << (r.passed ? "true" : "false") << '\n';
      text += line.str();
    }
  } else {
    std::ostringstream table;
    char line[256];
    std::snprintf(line, sizeof(line), "%-4s  %-26s %-7s %16s %16s %10s\n", "", "check", "compare", "computed",
                  "expected", "tolerance");
    table << line;
    std::size_t failed = 0;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof(line), "%-4s  %-26s %-7s %16.10g %16.10g %10.3g\n", r.passed ? "PASS" : "FAIL",
                    r.id, r.comparison, r.computed, r.expected, r.tolerance);
      table << line;
      if (!r.passed) ++failed;
    }
    table << (n - failed) << "/" << n << " checks passed\n";
    text = table.str();
  }
  emit(g, text);
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-cloning network simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Root RNG seed (falls back to $ECLONE_SEED)")->envname("ECLONE_SEED");
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--threads", g.threads, "Worker threads (0 = all logical processors)");

  CloneArgs clone_args;
  auto* clone = app.add_subcommand("clone", "Run the cloning network once");
  clone->add_option("--input", clone_args.input, "phi+, psi+, psi- or schmidt:<theta radians>");
  clone->add_option("--r", clone_args.r, "Reflectivity of both splitters (default 1/3)")->check(CLI::Range(0.0, 1.0));
  clone->add_option("--r1", clone_args.r1, "Reflectivity of the splitter on arms 1, 3")->check(CLI::Range(0.0, 1.0));
  clone->add_option("--r2", clone_args.r2, "Reflectivity of the splitter on arms 2, 5")->check(CLI::Range(0.0, 1.0));
  clone->add_option("--overlap-sq", clone_args.overlap_sq, "Squared mode overlap of interfering photons")
      ->check(CLI::Range(0.0, 1.0));
  clone->add_option("--model", clone_args.model, "ideal (qubit) or physical (Fock)")
      ->check(CLI::IsMember({"ideal", "physical"}));
  clone->add_option("--local-matrix", clone_args.local_matrix, "Write the local clone as matrix JSON");
  clone->add_option("--distant-matrix", clone_args.distant_matrix, "Write the distant clone as matrix JSON");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Clone fidelities over a reflectivity grid (R1 = R2)");
  sweep->add_option("--input", sweep_args.input, "Input state");
  sweep->add_option("--r-min", sweep_args.r_min)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--r-max", sweep_args.r_max)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--steps", sweep_args.steps, "Grid points (>= 2)");
  sweep->add_option("--overlap-sq", sweep_args.overlap_sq)->check(CLI::Range(0.0, 1.0));

  TomoArgs tomo_args;
  auto* tomo = app.add_subcommand("tomo", "Simulate 36-setting tomography and reconstruct by maximum likelihood");
  tomo->add_option("--state", tomo_args.state, "Named state or matrix JSON file");
  tomo->add_option("--n", tomo_args.n, "Expected counts per setting at unit probability")
      ->check(CLI::PositiveNumber);
  tomo->add_option("--mc", tomo_args.mc, "Monte Carlo resamples for error bars (0 disables)")
      ->check(CLI::NonNegativeNumber);
  tomo->add_option("--counts", tomo_args.counts_in, "Reconstruct from this counts CSV instead of simulating");
  tomo->add_option("--counts-out", tomo_args.counts_out, "Write the simulated counts CSV");
  tomo->add_option("--matrix-out", tomo_args.matrix_out, "Write the reconstructed matrix JSON");

  HomArgs hom_args;
  auto* hom = app.add_subcommand("hom", "Hong-Ou-Mandel visibility or overlap fit");
  hom->add_option("--r", hom_args.r, "Splitter reflectivity")->check(CLI::Range(0.0, 1.0));
  hom->add_option("--overlap-sq", hom_args.overlap_sq)->check(CLI::Range(0.0, 1.0));
  hom->add_option("--fit", hom_args.fit, "Measured visibility; prints the fitted overlap_sq");

  auto* paper = app.add_subcommand("paper", "Run every reference check and print a pass/fail table");

  try {
    app.parse(argc, argv);
    if (clone->parsed()) return cmd_clone(g, clone_args);
    if (sweep->parsed()) return cmd_sweep(g, sweep_args);
    if (tomo->parsed()) return cmd_tomo(g, tomo_args);
    if (hom->parsed()) return cmd_hom(g, hom_args);
    if (paper->parsed()) return cmd_paper(g);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "eclone: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
