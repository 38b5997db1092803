#pragma once

// Two-photon polarization tomography: 36 product projective settings,
// Poisson count simulation, maximum-likelihood reconstruction and Monte Carlo
// error bars.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eclone/qmath.hpp"

namespace eclone::tomography {

// Single-photon analyzer states: H/V (Z basis), D/A (X basis), L/R (Y basis),
// with D = (H+V)/sqrt2, A = (H-V)/sqrt2, L = (H+iV)/sqrt2, R = (H-iV)/sqrt2.
enum class Projector : std::uint8_t { H, V, D, A, L, R };

std::string_view projector_name(Projector p);
// ParseError on anything but the six single-letter names.
Projector parse_projector(std::string_view name);
std::array<Complex, 2> projector_ket(Projector p);

struct MeasurementSetting {
  Projector a = Projector::H;
  Projector b = Projector::H;

  auto operator<=>(const MeasurementSetting&) const = default;
};

// All 36 ordered pairs, a-major in the order H V D A L R.
std::array<MeasurementSetting, 36> all_settings();

struct CountRecord {
  MeasurementSetting setting;
  std::uint64_t count = 0;
  // Relative accumulation weight of the setting.
  double exposure = 1.0;

  bool operator==(const CountRecord&) const = default;
};

// Tr[rho (P_a x P_b)].
double born_probability(const DensityMatrix& rho, MeasurementSetting setting);

// Count_s ~ Poisson(n_per_setting * p_s) for every setting, deterministic in
// `seed`.
std::vector<CountRecord> sample_counts(const DensityMatrix& rho, double n_per_setting, std::uint64_t seed);

struct MleOptions {
  // Stop once an accepted step improves the log-likelihood by less than this.
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  // Record the log-likelihood after every accepted step.
  bool keep_trace = false;
};

struct MleResult {
  DensityMatrix rho;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  // False when the iteration cap was hit; rho is then the best iterate.
  bool converged = false;
  // Expected counts per unit exposure and unit probability, fixed at
  // 4 x mean(count / exposure) before the iteration starts.
  double total_rate = 0.0;
  std::vector<double> likelihood_trace;
};

// Poisson log-likelihood sum_s [c_s log(mu_s) - mu_s - log(c_s!)] with
// mu_s = total_rate * exposure_s * p_s(rho).
double log_likelihood(std::span<const CountRecord> records, const ComplexMatrix& rho, double total_rate);

// Maximum-likelihood state by diluted RrhoR iteration from I/4. Steps are
// accepted only if they do not lower the likelihood; the dilution factor
// shrinks on rejection and grows after acceptance. Records are processed in
// canonical setting order, so their input order does not matter.
MleResult mle_reconstruct(std::span<const CountRecord> records,
                          const MleOptions& options = {},
                          const Labels& labels = {"1", "2"});

enum class Statistic { fidelity, concurrence, entropy, witness, trace_distance, uhlmann_fidelity };

std::string_view statistic_name(Statistic s);
// PreconditionError for unknown names.
Statistic parse_statistic(std::string_view name);

struct StatisticSpec {
  Statistic kind = Statistic::fidelity;
  // Pure reference for `fidelity`; Phi+ when unset.
  std::optional<PureState> target;
  // Reference for `trace_distance` and `uhlmann_fidelity`; |target><target|
  // when unset.
  std::optional<DensityMatrix> reference;
};

double evaluate_statistic(const StatisticSpec& spec, const DensityMatrix& rho);

// Reconstructions of `n_resamples` Poisson resamplings of the observed
// counts. Resample k draws from stream k of `seed`, so the output does not
// depend on `threads`.
std::vector<DensityMatrix> resample_reconstructions(std::span<const CountRecord> records,
                                                    std::size_t n_resamples,
                                                    std::uint64_t seed,
                                                    unsigned threads = 1,
                                                    const MleOptions& options = {});

struct McSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  std::vector<double> samples;
};

McSummary summarize(std::span<const DensityMatrix> reconstructions, const StatisticSpec& spec);

McSummary monte_carlo_uncertainty(std::span<const CountRecord> records,
                                  std::size_t n_resamples,
                                  std::uint64_t seed,
                                  const StatisticSpec& spec,
                                  unsigned threads = 1,
                                  const MleOptions& options = {});

struct TomographyRecord {
  std::vector<CountRecord> records;
  DensityMatrix rho_hat;
  double log_likelihood = 0.0;
  std::optional<std::vector<DensityMatrix>> mc_samples;
};

// Reconstructs `records` and, when n_resamples > 0, keeps the Monte Carlo
// reconstructions alongside.
TomographyRecord analyze(std::vector<CountRecord> records,
                         std::size_t n_resamples,
                         std::uint64_t seed,
                         unsigned threads = 1);

}  // namespace eclone::tomography
