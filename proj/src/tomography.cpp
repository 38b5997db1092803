#include "eclone/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "eclone/error.hpp"
#include "eclone/metrics.hpp"
#include "eclone/parallel.hpp"
#include "eclone/rng.hpp"

namespace eclone::tomography {

namespace {

constexpr std::array<Projector, 6> kProjectors = {Projector::H, Projector::V, Projector::D,
                                                  Projector::A, Projector::L, Projector::R};

constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 8.0;

using Ket = std::array<Complex, 4>;

Ket setting_ket(MeasurementSetting s) {
  const auto a = projector_ket(s.a);
  const auto b = projector_ket(s.b);
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

double expectation(const ComplexMatrix& rho, const Ket& v) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < 4; ++j) row += rho(i, j) * v[j];
    sum += std::conj(v[i]) * row;
  }
  return sum.real();
}

// Canonically ordered copy of the data with precomputed kets.
struct Dataset {
  std::vector<CountRecord> records;
  std::vector<Ket> kets;
  double total_counts = 0.0;
  double total_rate = 0.0;
};

void require_informationally_complete(const std::vector<Ket>& kets) {
  // Rank of the span of the projectors |v><v| in the 16-dimensional operator
  // space, from the Gram matrix of Hilbert-Schmidt products |<v|w>|^2.
  const std::size_t k = kets.size();
  if (k < 16) throw PreconditionError("tomography settings are not informationally complete");
  std::vector<ComplexMatrix> ops;
  for (const auto& v : kets) ops.push_back(ComplexMatrix::projector(v));
  ComplexMatrix gram(16, 16);
  // Sum of vec(P) vec(P)^dagger over settings.
  for (const auto& op : ops) {
    const auto e = op.entries();
    for (std::size_t i = 0; i < 16; ++i) {
      for (std::size_t j = 0; j < 16; ++j) gram(i, j) += e[i] * std::conj(e[j]);
    }
  }
  const auto eig = herm_eig(gram);
  const auto rank = std::count_if(eig.values.begin(), eig.values.end(), [](double x) { return x > 1e-9; });
  if (rank < 16) throw PreconditionError("tomography settings are not informationally complete");
}

Dataset prepare(std::span<const CountRecord> input) {
  if (input.empty()) throw PreconditionError("no count records");
  Dataset data;
  data.records.assign(input.begin(), input.end());
  std::sort(data.records.begin(), data.records.end(), [](const CountRecord& x, const CountRecord& y) {
    if (x.setting != y.setting) return x.setting < y.setting;
    if (x.count != y.count) return x.count < y.count;
    return x.exposure < y.exposure;
  });
  double rate_sum = 0.0;
  for (const auto& r : data.records) {
    if (!(r.exposure > 0.0) || !std::isfinite(r.exposure)) throw PreconditionError("exposure must be positive");
    data.kets.push_back(setting_ket(r.setting));
    data.total_counts += static_cast<double>(r.count);
    rate_sum += static_cast<double>(r.count) / r.exposure;
  }
  if (data.total_counts <= 0.0) throw DegenerateDataError("all tomography counts are zero");
  require_informationally_complete(data.kets);
  data.total_rate = 4.0 * rate_sum / static_cast<double>(data.records.size());
  return data;
}

double dataset_log_likelihood(const Dataset& data, const ComplexMatrix& rho) {
  double sum = 0.0;
  for (std::size_t s = 0; s < data.records.size(); ++s) {
    const auto& r = data.records[s];
    const double mu = data.total_rate * r.exposure * std::max(0.0, expectation(rho, data.kets[s]));
    const double c = static_cast<double>(r.count);
    if (r.count > 0) {
      if (!(mu > 0.0)) return -INFINITY;
      sum += c * std::log(mu);
    }
    sum -= mu + std::lgamma(c + 1.0);
  }
  return sum;
}

// Gradient of the log-likelihood divided by the total count.
ComplexMatrix ascent_operator(const Dataset& data, const ComplexMatrix& rho) {
  ComplexMatrix a(4, 4);
  for (std::size_t s = 0; s < data.records.size(); ++s) {
    const auto& r = data.records[s];
    const auto& v = data.kets[s];
    const double p = expectation(rho, v);
    double weight = -data.total_rate * r.exposure;
    if (r.count > 0) weight += static_cast<double>(r.count) / p;
    weight /= data.total_counts;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) a(i, j) += weight * v[i] * std::conj(v[j]);
    }
  }
  return a;
}

ComplexMatrix diluted_step(const ComplexMatrix& rho, const ComplexMatrix& a, double step) {
  ComplexMatrix m = ComplexMatrix::identity(4);
  m += a * step;
  ComplexMatrix next = m * rho * m.adjoint();
  next = (next + next.adjoint()) * 0.5;
  next *= 1.0 / next.trace().real();
  return next;
}

// Clamps rounding-level negative eigenvalues so the result passes the
// DensityMatrix invariants exactly.
ComplexMatrix clean_state(const ComplexMatrix& rho) {
  HermitianEigen eig = herm_eig(rho);
  double total = 0.0;
  for (double& lambda : eig.values) {
    lambda = std::max(0.0, lambda);
    total += lambda;
  }
  for (double& lambda : eig.values) lambda /= total;
  ComplexMatrix out = compose_spectral(eig);
  return (out + out.adjoint()) * 0.5;
}

}  // namespace

std::string_view projector_name(Projector p) {
  static constexpr std::array<std::string_view, 6> names = {"H", "V", "D", "A", "L", "R"};
  return names[static_cast<std::size_t>(p)];
}

Projector parse_projector(std::string_view name) {
  for (Projector p : kProjectors) {
    if (projector_name(p) == name) return p;
  }
  throw ParseError("unknown polarization setting '" + std::string(name) + "'");
}

std::array<Complex, 2> projector_ket(Projector p) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (p) {
    case Projector::H:
      return {1.0, 0.0};
    case Projector::V:
      return {0.0, 1.0};
    case Projector::D:
      return {h, h};
    case Projector::A:
      return {h, -h};
    case Projector::L:
      return {h, Complex(0.0, h)};
    case Projector::R:
      break;
  }
  return {h, Complex(0.0, -h)};
}

std::array<MeasurementSetting, 36> all_settings() {
  std::array<MeasurementSetting, 36> out;
  std::size_t k = 0;
  for (Projector a : kProjectors) {
    for (Projector b : kProjectors) out[k++] = {a, b};
  }
  return out;
}

double born_probability(const DensityMatrix& rho, MeasurementSetting setting) {
  if (rho.num_qubits() != 2) throw DimensionError("born_probability needs a two-qubit state");
  return std::clamp(expectation(rho.matrix(), setting_ket(setting)), 0.0, 1.0);
}

std::vector<CountRecord> sample_counts(const DensityMatrix& rho, double n_per_setting, std::uint64_t seed) {
  if (!(n_per_setting > 0.0) || !std::isfinite(n_per_setting)) {
    throw PreconditionError("counts per setting must be positive");
  }
  Engine engine = make_engine(seed);
  std::vector<CountRecord> records;
  for (const auto& setting : all_settings()) {
    const double mean = n_per_setting * born_probability(rho, setting);
    std::uint64_t count = 0;
    if (mean > 0.0) count = std::poisson_distribution<std::uint64_t>(mean)(engine);
    records.push_back({setting, count, 1.0});
  }
  return records;
}

double log_likelihood(std::span<const CountRecord> records, const ComplexMatrix& rho, double total_rate) {
  Dataset data = prepare(records);
  data.total_rate = total_rate;
  return dataset_log_likelihood(data, rho);
}

MleResult mle_reconstruct(std::span<const CountRecord> records, const MleOptions& options, const Labels& labels) {
  const Dataset data = prepare(records);

  ComplexMatrix rho = ComplexMatrix::identity(4) * 0.25;
  double current = dataset_log_likelihood(data, rho);
  double step = 1.0;

  MleResult result;
  result.total_rate = data.total_rate;
  if (options.keep_trace) result.likelihood_trace.push_back(current);

  ComplexMatrix direction = ascent_operator(data, rho);
  while (result.iterations < options.max_iterations) {
    ++result.iterations;
    const ComplexMatrix trial = diluted_step(rho, direction, step);
    const double value = dataset_log_likelihood(data, trial);
    if (!(value >= current)) {
      step *= 0.5;
      if (step < kMinStep) {
        result.converged = true;
        break;
      }
      continue;
    }
    const double gain = value - current;
    rho = trial;
    current = value;
    if (options.keep_trace) result.likelihood_trace.push_back(current);
    if (gain < options.tolerance) {
      result.converged = true;
      break;
    }
    step = std::min(step * 1.5, kMaxStep);
    direction = ascent_operator(data, rho);
  }

  result.rho = DensityMatrix(labels, clean_state(rho));
  result.log_likelihood = current;
  return result;
}

// ---------------------------------------------------------------------------

std::string_view statistic_name(Statistic s) {
  switch (s) {
    case Statistic::fidelity:
      return "fidelity";
    case Statistic::concurrence:
      return "concurrence";
    case Statistic::entropy:
      return "entropy";
    case Statistic::witness:
      return "witness";
    case Statistic::trace_distance:
      return "trace_distance";
    case Statistic::uhlmann_fidelity:
      break;
  }
  return "uhlmann_fidelity";
}

Statistic parse_statistic(std::string_view name) {
  for (Statistic s : {Statistic::fidelity, Statistic::concurrence, Statistic::entropy, Statistic::witness,
                      Statistic::trace_distance, Statistic::uhlmann_fidelity}) {
    if (statistic_name(s) == name) return s;
  }
  throw PreconditionError("unknown statistic '" + std::string(name) + "'");
}

double evaluate_statistic(const StatisticSpec& spec, const DensityMatrix& rho) {
  const PureState target = spec.target.value_or(PureState({"1", "2"}, bell::phi_plus()));
  switch (spec.kind) {
    case Statistic::fidelity:
      return metrics::fidelity_to_pure(rho, target);
    case Statistic::concurrence:
      return metrics::concurrence(rho);
    case Statistic::entropy:
      return metrics::von_neumann_entropy(rho);
    case Statistic::witness:
      return metrics::witness_expectation(rho).direct;
    case Statistic::trace_distance:
      return metrics::trace_distance(rho, spec.reference.value_or(DensityMatrix::from_pure(target)));
    case Statistic::uhlmann_fidelity:
      break;
  }
  return metrics::uhlmann_fidelity(rho, spec.reference.value_or(DensityMatrix::from_pure(target)));
}

std::vector<DensityMatrix> resample_reconstructions(std::span<const CountRecord> records,
                                                    std::size_t n_resamples,
                                                    std::uint64_t seed,
                                                    unsigned threads,
                                                    const MleOptions& options) {
  if (n_resamples < 2) throw PreconditionError("Monte Carlo needs at least two resamples");
  const Dataset base = prepare(records);
  std::vector<std::optional<DensityMatrix>> slots(n_resamples);
  parallel_for(n_resamples, threads, [&](std::size_t k) {
    Engine engine = make_engine(seed, k + 1);
    std::vector<CountRecord> resampled = base.records;
    for (auto& r : resampled) {
      if (r.count > 0) {
        r.count = std::poisson_distribution<std::uint64_t>(static_cast<double>(r.count))(engine);
      }
    }
    slots[k] = mle_reconstruct(resampled, options).rho;
  });
  std::vector<DensityMatrix> out;
  out.reserve(n_resamples);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

McSummary summarize(std::span<const DensityMatrix> reconstructions, const StatisticSpec& spec) {
  if (reconstructions.size() < 2) throw PreconditionError("Monte Carlo summary needs at least two samples");
  McSummary summary;
  summary.samples.reserve(reconstructions.size());
  for (const auto& rho : reconstructions) summary.samples.push_back(evaluate_statistic(spec, rho));
  const double n = static_cast<double>(summary.samples.size());
  summary.mean = std::accumulate(summary.samples.begin(), summary.samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : summary.samples) ss += (x - summary.mean) * (x - summary.mean);
  summary.std = std::sqrt(ss / (n - 1.0));
  return summary;
}

McSummary monte_carlo_uncertainty(std::span<const CountRecord> records,
                                  std::size_t n_resamples,
                                  std::uint64_t seed,
                                  const StatisticSpec& spec,
                                  unsigned threads,
                                  const MleOptions& options) {
  const auto reconstructions = resample_reconstructions(records, n_resamples, seed, threads, options);
  return summarize(reconstructions, spec);
}

TomographyRecord analyze(std::vector<CountRecord> records, std::size_t n_resamples, std::uint64_t seed,
                         unsigned threads) {
  MleResult fit = mle_reconstruct(records);
  TomographyRecord out{std::move(records), std::move(fit.rho), fit.log_likelihood, std::nullopt};
  if (n_resamples > 0) out.mc_samples = resample_reconstructions(out.records, n_resamples, seed, threads);
  return out;
}

}  // namespace eclone::tomography
