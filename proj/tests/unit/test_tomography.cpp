#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "eclone/error.hpp"
#include "eclone/metrics.hpp"
#include "eclone/tomography.hpp"
#include "support/oracles.hpp"

using namespace eclone;
using namespace eclone::tomography;
using oracle::Mat;
using oracle::Vec;

namespace {

const Labels kPair{"1", "2"};
const DensityMatrix kSigma = oracle::to_density(oracle::werner_clone(), kPair);
const DensityMatrix kPhi = oracle::to_density(oracle::projector(oracle::bell_phi_plus()), kPair);

Vec analyzer(Projector p) {
  const double s = 1.0 / std::sqrt(2.0);
  Vec v(2);
  switch (p) {
    case Projector::H: v << 1, 0; break;
    case Projector::V: v << 0, 1; break;
    case Projector::D: v << s, s; break;
    case Projector::A: v << s, -s; break;
    case Projector::L: v << s, std::complex<double>(0, s); break;
    case Projector::R: v << s, std::complex<double>(0, -s); break;
  }
  return v;
}

double oracle_probability(const Mat& rho, MeasurementSetting s) {
  const Vec v = oracle::kron(analyzer(s.a), analyzer(s.b));
  return (v.adjoint() * rho * v)(0, 0).real();
}

// Poisson log-likelihood written out term by term.
double oracle_log_likelihood(std::span<const CountRecord> records, const Mat& rho, double rate) {
  double sum = 0.0;
  for (const auto& r : records) {
    const double mu = rate * r.exposure * oracle_probability(rho, r.setting);
    const double c = static_cast<double>(r.count);
    sum += (r.count > 0 ? c * std::log(mu) : 0.0) - mu - std::lgamma(c + 1.0);
  }
  return sum;
}

std::vector<CountRecord> exact_counts(const Mat& rho, double n) {
  std::vector<CountRecord> out;
  for (const auto& s : all_settings())
    out.push_back({s, static_cast<std::uint64_t>(std::llround(n * oracle_probability(rho, s))), 1.0});
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("projector names and kets") {
  for (auto p : {Projector::H, Projector::V, Projector::D, Projector::A, Projector::L, Projector::R}) {
    CHECK(parse_projector(projector_name(p)) == p);
    const auto k = projector_ket(p);
    const Vec ref = analyzer(p);
    CHECK(std::abs(k[0] - ref(0)) < 1e-15);
    CHECK(std::abs(k[1] - ref(1)) < 1e-15);
  }
  CHECK_THROWS_AS(parse_projector("X"), ParseError);
  CHECK_THROWS_AS(parse_projector("h"), ParseError);
}

TEST_CASE("the 36 settings are distinct and complete") {
  const auto settings = all_settings();
  std::set<MeasurementSetting> unique(settings.begin(), settings.end());
  CHECK(unique.size() == 36);
  CHECK(settings[0].a == Projector::H);
  CHECK(settings[0].b == Projector::H);
  CHECK(settings[1].b == Projector::V);
  CHECK(settings[35].a == Projector::R);
}

TEST_CASE("Born probabilities") {
  CHECK(std::abs(born_probability(kPhi, {Projector::H, Projector::H}) - 0.5) < 1e-15);
  CHECK(std::abs(born_probability(kPhi, {Projector::H, Projector::V})) < 1e-15);
  CHECK(std::abs(born_probability(kSigma, {Projector::H, Projector::H}) - 13.0 / 36.0) < 1e-15);
  oracle::Random rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat m = rng.density(4);
    const auto rho = oracle::to_density(m, kPair);
    for (const auto& s : all_settings()) CHECK(std::abs(born_probability(rho, s) - oracle_probability(m, s)) < 1e-14);
  }
}

TEST_CASE("sampling is deterministic and converges") {
  const auto a = sample_counts(kSigma, 4000, 9);
  const auto b = sample_counts(kSigma, 4000, 9);
  const auto c = sample_counts(kSigma, 4000, 10);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.size() == 36);

  const double n = 1e6;
  for (const auto& r : sample_counts(kSigma, n, 3)) {
    CHECK(std::abs(static_cast<double>(r.count) / n - born_probability(kSigma, r.setting)) < 0.005);
  }
  CHECK_THROWS_AS(sample_counts(kSigma, 0.0, 1), PreconditionError);
}

TEST_CASE("log-likelihood matches the Poisson formula") {
  oracle::Random rng(62);
  const auto records = sample_counts(kSigma, 500, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat m = rng.density(4, 4);
    const double rate = rng.uniform(100, 3000);
    CHECK(log_likelihood(records, oracle::from_eigen(m), rate) ==
          doctest::Approx(oracle_log_likelihood(records, m, rate)).epsilon(1e-12));
  }
}

TEST_CASE("noiseless counts reconstruct the pure state") {
  const auto result = mle_reconstruct(exact_counts(oracle::projector(oracle::bell_phi_plus()), 1e6));
  CHECK(metrics::fidelity_to_pure(result.rho, PureState(kPair, bell::phi_plus())) >= 0.9999);
  CHECK(result.converged);
  CHECK(result.rho.labels() == kPair);
}

TEST_CASE("large-n reconstructions") {
  const auto sigma_fit = mle_reconstruct(sample_counts(kSigma, 1e6, 2020));
  CHECK(metrics::uhlmann_fidelity(sigma_fit.rho, kSigma) >= 0.999);
  const auto phi_fit = mle_reconstruct(sample_counts(kPhi, 1e5, 2020));
  CHECK(metrics::fidelity_to_pure(phi_fit.rho, PureState(kPair, bell::phi_plus())) > 0.991);
}

TEST_CASE("reconstruction preconditions") {
  std::vector<CountRecord> zeros;
  for (const auto& s : all_settings()) zeros.push_back({s, 0, 1.0});
  CHECK_THROWS_AS(mle_reconstruct(zeros), DegenerateDataError);
  CHECK_THROWS_AS(mle_reconstruct(std::vector<CountRecord>{}), PreconditionError);

  std::vector<CountRecord> z_only;
  for (auto a : {Projector::H, Projector::V})
    for (auto b : {Projector::H, Projector::V})
      for (int repeat = 0; repeat < 5; ++repeat) z_only.push_back({{a, b}, 10, 1.0});
  CHECK_THROWS_AS(mle_reconstruct(z_only), PreconditionError);

  auto bad_exposure = sample_counts(kSigma, 100, 1);
  bad_exposure[3].exposure = 0.0;
  CHECK_THROWS_AS(mle_reconstruct(bad_exposure), PreconditionError);
}

TEST_CASE("property: reconstructions are valid states with monotone likelihood") {
  oracle::Random rng(63);
  MleOptions options;
  options.keep_trace = true;
  for (int trial = 0; trial < 60; ++trial) {
    const Mat m = rng.density(4);
    const double n = std::pow(10.0, rng.uniform(1.0, 5.0));
    const auto records = sample_counts(oracle::to_density(m, kPair), n, 1000 + trial);
    std::uint64_t total = 0;
    for (const auto& r : records) total += r.count;
    if (total == 0) continue;
    const auto result = mle_reconstruct(records, options);
    const auto& rho = result.rho.matrix();
    CHECK(rho.hermiticity_error() <= 1e-10);
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-10);
    CHECK(oracle::spectrum(oracle::to_eigen(rho)).back() >= -1e-9);
    REQUIRE_FALSE(result.likelihood_trace.empty());
    for (std::size_t k = 1; k < result.likelihood_trace.size(); ++k)
      CHECK(result.likelihood_trace[k] >= result.likelihood_trace[k - 1]);
    CHECK(result.log_likelihood == doctest::Approx(oracle_log_likelihood(records, oracle::to_eigen(rho),
                                                                         result.total_rate)).epsilon(1e-9));
  }
}

TEST_CASE("property: record order does not matter") {
  oracle::Random rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    auto records = sample_counts(oracle::to_density(rng.density(4), kPair), 2000, 70 + trial);
    const auto reference = mle_reconstruct(records);
    std::shuffle(records.begin(), records.end(), rng.engine());
    const auto shuffled = mle_reconstruct(records);
    CHECK(max_abs_diff(reference.rho.matrix(), shuffled.rho.matrix()) <= 1e-10);
  }
}

TEST_CASE("property: error shrinks with the count budget") {
  std::vector<double> medians;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    std::vector<double> distances;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto fit = mle_reconstruct(sample_counts(kSigma, n, 500 + seed));
      distances.push_back(metrics::trace_distance(fit.rho, kSigma));
    }
    medians.push_back(median(distances));
  }
  for (std::size_t k = 1; k < medians.size(); ++k) CHECK(medians[k] < medians[k - 1]);
}

TEST_CASE("round trip at the default budget") {
  std::vector<double> fidelities;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    fidelities.push_back(metrics::uhlmann_fidelity(mle_reconstruct(sample_counts(kSigma, 4000, seed)).rho, kSigma));
  CHECK(median(fidelities) >= 0.98);
}

TEST_CASE("unequal exposures are accounted for") {
  std::vector<CountRecord> records;
  int k = 0;
  for (const auto& s : all_settings()) {
    const double exposure = (k++ % 3) + 1.0;
    records.push_back({s, static_cast<std::uint64_t>(std::llround(1e5 * exposure * born_probability(kSigma, s))),
                       exposure});
  }
  CHECK(metrics::uhlmann_fidelity(mle_reconstruct(records).rho, kSigma) >= 0.9999);
}

TEST_CASE("statistics by name") {
  for (auto s : {Statistic::fidelity, Statistic::concurrence, Statistic::entropy, Statistic::witness,
                 Statistic::trace_distance, Statistic::uhlmann_fidelity})
    CHECK(parse_statistic(statistic_name(s)) == s);
  CHECK_THROWS_AS(parse_statistic("purity"), PreconditionError);

  CHECK(evaluate_statistic({Statistic::fidelity, {}, {}}, kSigma) == doctest::Approx(7.0 / 12.0));
  CHECK(evaluate_statistic({Statistic::witness, {}, {}}, kSigma) == doctest::Approx(-1.0 / 12.0));
  CHECK(evaluate_statistic({Statistic::trace_distance, {}, {}}, kSigma) == doctest::Approx(5.0 / 12.0));
  CHECK(evaluate_statistic({Statistic::uhlmann_fidelity, {}, kSigma}, kSigma) == doctest::Approx(1.0));
}

TEST_CASE("Monte Carlo uncertainty") {
  const auto noiseless = exact_counts(oracle::projector(oracle::bell_phi_plus()), 1e6);
  const auto tight = monte_carlo_uncertainty(noiseless, 20, 5, {Statistic::fidelity, {}, {}});
  CHECK(tight.std < 1e-3);
  CHECK(tight.samples.size() == 20);

  const auto records = sample_counts(kSigma, 4000, 8);
  const StatisticSpec conc{Statistic::concurrence, {}, {}};
  const auto a = monte_carlo_uncertainty(records, 40, 77, conc, 1);
  const auto b = monte_carlo_uncertainty(records, 40, 77, conc, 3);
  const auto c = monte_carlo_uncertainty(records, 40, 78, conc, 1);
  CHECK(a.mean == b.mean);
  CHECK(a.std == b.std);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);

  double mean = 0.0;
  for (double x : a.samples) mean += x;
  mean /= a.samples.size();
  double var = 0.0;
  for (double x : a.samples) var += (x - mean) * (x - mean);
  CHECK(a.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(a.std == doctest::Approx(std::sqrt(var / (a.samples.size() - 1))).epsilon(1e-12));

  CHECK_THROWS_AS(monte_carlo_uncertainty(records, 1, 77, conc), PreconditionError);
}

TEST_CASE("analyze bundles the reconstruction and resamples") {
  const auto records = sample_counts(kSigma, 4000, 12);
  const auto rec = analyze(records, 5, 3);
  CHECK(rec.records.size() == 36);
  REQUIRE(rec.mc_samples.has_value());
  CHECK(rec.mc_samples->size() == 5);
  CHECK(max_abs_diff(rec.rho_hat.matrix(), mle_reconstruct(records).rho.matrix()) == 0.0);
  CHECK_FALSE(analyze(records, 0, 3).mc_samples.has_value());
}
