#include "eclone/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "eclone/cloner.hpp"
#include "eclone/metrics.hpp"
#include "eclone/rng.hpp"
#include "eclone/states.hpp"
#include "eclone/tomography.hpp"

namespace eclone::checks {

namespace {

using cloner::InputSpec;
using cloner::NetworkConfig;

class Collector {
 public:
  void within(std::string id, std::string description, double computed, double expected, double tolerance) {
    add(std::move(id), std::move(description), computed, expected, tolerance, Comparison::within,
        std::abs(computed - expected) <= tolerance);
  }
  void at_least(std::string id, std::string description, double computed, double bound) {
    add(std::move(id), std::move(description), computed, bound, 0.0, Comparison::at_least, computed >= bound);
  }
  void above(std::string id, std::string description, double computed, double bound) {
    add(std::move(id), std::move(description), computed, bound, 0.0, Comparison::above, computed > bound);
  }
  void at_most(std::string id, std::string description, double computed, double bound) {
    add(std::move(id), std::move(description), computed, bound, 0.0, Comparison::at_most, computed <= bound);
  }
  void holds(std::string id, std::string description, bool ok) {
    add(std::move(id), std::move(description), ok ? 1.0 : 0.0, 1.0, 0.0, Comparison::holds, ok);
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  void add(std::string id, std::string description, double computed, double expected, double tolerance,
           Comparison comparison, bool passed) {
    results_.push_back({std::move(id), std::move(description), computed, expected, tolerance, comparison, passed});
  }

  std::vector<CheckResult> results_;
};

cloner::CloneOutcome ideal(const InputSpec& input, double r) {
  NetworkConfig config;
  config.input = input;
  config.r1 = config.r2 = r;
  return cloner::run_ideal(config);
}

cloner::CloneOutcome physical(const InputSpec& input, double r, double overlap_sq) {
  NetworkConfig config;
  config.input = input;
  config.r1 = config.r2 = r;
  config.overlap_sq = overlap_sq;
  return cloner::run_physical(config);
}

double outcome_distance(const cloner::CloneOutcome& a, const cloner::CloneOutcome& b) {
  return std::max({max_abs_diff(a.rho_local->matrix(), b.rho_local->matrix()),
                   max_abs_diff(a.rho_distant->matrix(), b.rho_distant->matrix()),
                   std::abs(a.success_weight - b.success_weight)});
}

DensityMatrix random_two_qubit_state(Engine& engine) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(4, 4);
  for (auto& z : g.entries()) z = Complex(normal(engine), normal(engine));
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  rho = (rho + rho.adjoint()) * 0.5;
  return DensityMatrix({"1", "2"}, rho);
}

void ideal_fixed_points(Collector& out) {
  const DensityMatrix sigma = states::ideal_clone({"1'", "2'"});
  const auto symmetric = ideal(InputSpec::phi_plus(), 1.0 / 3.0);
  const auto f = cloner::clone_fidelities(symmetric, InputSpec::phi_plus());
  out.within("C1.local_state", "R=1/3 local clone equals 4/9 Phi+ + 5/36 I (max entry error)",
             max_abs_diff(symmetric.rho_local->matrix(), sigma.matrix()), 0.0, 1e-9);
  out.within("C1.distant_state", "R=1/3 distant clone equals 4/9 Phi+ + 5/36 I (max entry error)",
             max_abs_diff(symmetric.rho_distant->matrix(), sigma.matrix()), 0.0, 1e-9);
  out.within("C1.fidelity_local", "R=1/3 local fidelity 7/12", f.local, 7.0 / 12.0, 1e-9);
  out.within("C1.fidelity_distant", "R=1/3 distant fidelity 7/12", f.distant, 7.0 / 12.0, 1e-9);

  const auto half = cloner::clone_fidelities(ideal(InputSpec::phi_plus(), 0.5), InputSpec::phi_plus());
  const auto zero = cloner::clone_fidelities(ideal(InputSpec::phi_plus(), 0.0), InputSpec::phi_plus());
  out.within("C2.r_half_distant", "R=1/2 distant fidelity (teleportation)", half.distant, 1.0, 1e-9);
  out.within("C2.r_half_local", "R=1/2 local fidelity", half.local, 0.25, 1e-9);
  out.within("C2.r_zero_local", "R=0 local fidelity", zero.local, 1.0, 1e-9);
  out.within("C2.r_zero_distant", "R=0 distant fidelity", zero.distant, 0.25, 1e-9);

  const DensityMatrix& clone = *symmetric.rho_local;
  const DensityMatrix phi = DensityMatrix::from_pure(PureState({"1'", "2'"}, bell::phi_plus()));
  const double entropy = -(21.0 / 36.0) * std::log2(21.0 / 36.0) - 3.0 * (5.0 / 36.0) * std::log2(5.0 / 36.0);
  out.within("C3.witness", "witness on the clone", metrics::witness_expectation(clone).direct, -1.0 / 12.0, 1e-9);
  out.within("C3.concurrence", "concurrence of the clone", metrics::concurrence(clone), 1.0 / 6.0, 1e-9);
  out.within("C3.entropy", "von Neumann entropy of the clone (bits)", metrics::von_neumann_entropy(clone), entropy,
             1e-9);
  out.within("C3.trace_distance", "trace distance clone vs Phi+", metrics::trace_distance(clone, phi), 5.0 / 12.0,
             1e-9);
  out.within("C3.uhlmann", "Uhlmann fidelity clone vs Phi+", metrics::uhlmann_fidelity(phi, clone), 7.0 / 12.0, 1e-9);
}

void witness_identity(Collector& out, std::uint64_t seed) {
  Engine engine = make_engine(seed, 400);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto w = metrics::witness_expectation(random_two_qubit_state(engine));
    worst = std::max(worst, std::abs(w.direct - w.from_correlations));
  }
  out.within("C4.witness_identity", "Pauli form of the witness vs Tr[W rho], 10^4 random states", worst, 0.0, 1e-12);
}

void oracle_equivalence(Collector& out) {
  double worst = 0.0;
  for (const auto& input : {InputSpec::phi_plus(), InputSpec::psi_plus(), InputSpec::schmidt(std::numbers::pi / 8)}) {
    for (int k = 0; k <= 10; ++k) {
      const double r = k / 10.0;
      worst = std::max(worst, outcome_distance(physical(input, r, 1.0), ideal(input, r)));
    }
  }
  out.within("C5.fock_equals_qubit", "Fock model at overlap 1 vs qubit model, R in {0,...,1}", worst, 0.0, 1e-9);
}

double hom_and_noise(Collector& out, double measured_visibility) {
  out.within("C6.ideal_visibility", "HOM visibility at R=1/3, indistinguishable photons",
             cloner::hom_visibility(1.0 / 3.0, 1.0), 0.8, 1e-9);
  const double overlap_sq = cloner::fit_overlap(measured_visibility, 1.0 / 3.0);
  out.within("C6.fit_roundtrip", "visibility re-evaluated at the fitted overlap",
             cloner::hom_visibility(1.0 / 3.0, overlap_sq), measured_visibility, 1e-9);

  struct Measured {
    double r;
    const char* tag;
    double local;
    double distant;
  };
  const Measured measured[] = {{1.0 / 3.0, "r1_3", 0.562, 0.530}, {0.5, "r1_2", 0.278, 0.783}, {2.0 / 3.0, "r2_3", 0.334, 0.493}};
  double distant[3];
  for (int i = 0; i < 3; ++i) {
    const auto f = cloner::clone_fidelities(physical(InputSpec::phi_plus(), measured[i].r, overlap_sq),
                                            InputSpec::phi_plus());
    out.within(std::string("C7.local_") + measured[i].tag, "noisy local fidelity vs measured", f.local,
               measured[i].local, 0.05);
    out.within(std::string("C7.distant_") + measured[i].tag, "noisy distant fidelity vs measured", f.distant,
               measured[i].distant, 0.05);
    distant[i] = f.distant;
  }
  out.holds("C7.distant_ordering", "distant fidelity low-high-low over R = 1/3, 1/2, 2/3",
            distant[0] < distant[1] && distant[1] > distant[2]);
  return overlap_sq;
}

void universality(Collector& out) {
  double worst = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double r = k / 10.0;
    const auto phi = cloner::clone_fidelities(ideal(InputSpec::phi_plus(), r), InputSpec::phi_plus());
    const auto psi = cloner::clone_fidelities(ideal(InputSpec::psi_plus(), r), InputSpec::psi_plus());
    worst = std::max({worst, std::abs(phi.local - psi.local), std::abs(phi.distant - psi.distant)});
  }
  out.within("C8.bell_universality", "Psi+ vs Phi+ fidelities over R in {0,...,1}", worst, 0.0, 1e-9);

  // 50 equally spaced angles in (0, pi/2), the 25th being pi/4.
  std::size_t argmin = 0;
  double best = INFINITY;
  for (std::size_t k = 1; k <= 50; ++k) {
    const double theta = std::numbers::pi / 4 + (static_cast<double>(k) - 25.0) * std::numbers::pi / 102.0;
    const auto input = InputSpec::schmidt(theta);
    const auto f = cloner::clone_fidelities(ideal(input, 1.0 / 3.0), input);
    const double worst_clone = std::min(f.local, f.distant);
    if (worst_clone < best - 1e-12) {
      best = worst_clone;
      argmin = k;
    }
  }
  out.holds("C8.worst_case_maximal", "fidelity minimized at theta = pi/4 on a 50-point grid", argmin == 25);
}

void tomography_checks(Collector& out, const CheckOptions& options) {
  namespace tomo = tomography;
  const DensityMatrix sigma = states::ideal_clone();
  const DensityMatrix phi = states::named("phi+");
  tomo::MleOptions mle;
  mle.keep_trace = true;

  auto monotone = [](const std::vector<double>& trace) {
    return std::adjacent_find(trace.begin(), trace.end(), [](double a, double b) { return b < a; }) == trace.end();
  };

  const auto sigma_fit = tomo::mle_reconstruct(tomo::sample_counts(sigma, 1e6, stream_seed(options.seed, 900)), mle);
  out.at_least("C9.sigma_roundtrip", "Uhlmann fidelity of MLE(sigma counts, n=1e6) to sigma",
               metrics::uhlmann_fidelity(sigma_fit.rho, sigma), 0.999);
  const auto phi_fit = tomo::mle_reconstruct(tomo::sample_counts(phi, 1e5, stream_seed(options.seed, 901)), mle);
  out.above("C9.phi_roundtrip", "fidelity of MLE(Phi+ counts, n=1e5) to Phi+",
            metrics::fidelity_to_pure(phi_fit.rho, PureState({"1", "2"}, bell::phi_plus())), 0.991);
  out.holds("C9.likelihood_monotone", "MLE log-likelihood non-decreasing over accepted steps",
            monotone(sigma_fit.likelihood_trace) && monotone(phi_fit.likelihood_trace));

  if (options.skip_monte_carlo) return;
  const auto counts = tomo::sample_counts(sigma, 4000, stream_seed(options.seed, 1000));
  const auto mc = tomo::monte_carlo_uncertainty(counts, 1000, stream_seed(options.seed, 1001),
                                                {tomo::Statistic::concurrence, std::nullopt, std::nullopt},
                                                options.threads);
  out.within("C10.concurrence_std", "Monte Carlo std of concurrence (n=4000, 1000 resamples), log10 ratio to 0.032",
             std::log10(mc.std / 0.032), 0.0, std::log10(3.0));
}

}  // namespace

std::vector<CheckResult> run_all(const CheckOptions& options) {
  Collector out;
  ideal_fixed_points(out);
  witness_identity(out, options.seed);
  oracle_equivalence(out);
  hom_and_noise(out, options.measured_visibility);
  universality(out);
  tomography_checks(out, options);
  return out.take();
}

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::within:
      return "within";
    case Comparison::at_least:
      return ">=";
    case Comparison::above:
      return ">";
    case Comparison::at_most:
      return "<=";
    case Comparison::holds:
      break;
  }
  return "holds";
}

}  // namespace eclone::checks
