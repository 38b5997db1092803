#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "eclone/checks.hpp"
#include "eclone/cloner.hpp"
#include "eclone/eclone.h"
#include "eclone/error.hpp"
#include "eclone/io.hpp"
#include "eclone/metrics.hpp"
#include "eclone/states.hpp"
#include "eclone/tomography.hpp"

struct eclone_density {
  eclone::DensityMatrix rho;
};

struct eclone_outcome {
  eclone::cloner::CloneOutcome outcome;
  eclone::cloner::InputSpec input;
  std::unique_ptr<eclone_density> local;
  std::unique_ptr<eclone_density> distant;
};

struct eclone_counts {
  std::vector<eclone::tomography::CountRecord> records;
};

struct eclone_resamples {
  std::vector<eclone::DensityMatrix> states;
};

struct eclone_check_report {
  std::vector<eclone::checks::CheckResult> results;
};

namespace {

thread_local std::string g_last_error;

eclone_status fail(eclone_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating library exceptions into status codes.
template <class Fn>
eclone_status guarded(Fn&& fn) {
  try {
    fn();
    return ECLONE_OK;
  } catch (const eclone::DomainError& e) {
    return fail(ECLONE_ERR_DOMAIN, e.what());
  } catch (const eclone::DimensionError& e) {
    return fail(ECLONE_ERR_DIMENSION, e.what());
  } catch (const eclone::LabelError& e) {
    return fail(ECLONE_ERR_LABEL, e.what());
  } catch (const eclone::RegistryError& e) {
    return fail(ECLONE_ERR_REGISTRY, e.what());
  } catch (const eclone::DegenerateDataError& e) {
    return fail(ECLONE_ERR_DEGENERATE, e.what());
  } catch (const eclone::ParseError& e) {
    return fail(ECLONE_ERR_PARSE, e.what());
  } catch (const eclone::IoError& e) {
    return fail(ECLONE_ERR_IO, e.what());
  } catch (const eclone::PreconditionError& e) {
    return fail(ECLONE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ECLONE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ECLONE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ECLONE_ERR_INTERNAL, "unknown error");
  }
}

#define ECLONE_REQUIRE(ptr)                                                          \
  do {                                                                               \
    if ((ptr) == nullptr) return fail(ECLONE_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

eclone::PureState as_pure(const eclone::DensityMatrix& rho) {
  const auto eig = eclone::herm_eig(rho.matrix());
  if (eig.values.front() < 1.0 - 1e-9) throw eclone::PreconditionError("reference state is not pure");
  std::vector<eclone::Complex> ket(rho.dim());
  for (std::size_t i = 0; i < ket.size(); ++i) ket[i] = eig.vectors(i, 0);
  return eclone::PureState::normalized(rho.labels(), std::move(ket));
}

}  // namespace

extern "C" {

const char* eclone_last_error(void) { return g_last_error.c_str(); }

const char* eclone_status_name(eclone_status status) {
  switch (status) {
    case ECLONE_OK:
      return "ok";
    case ECLONE_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case ECLONE_ERR_DOMAIN:
      return "domain error";
    case ECLONE_ERR_DIMENSION:
      return "dimension mismatch";
    case ECLONE_ERR_LABEL:
      return "label error";
    case ECLONE_ERR_REGISTRY:
      return "registry error";
    case ECLONE_ERR_DEGENERATE:
      return "degenerate data";
    case ECLONE_ERR_PARSE:
      return "parse error";
    case ECLONE_ERR_IO:
      return "i/o error";
    case ECLONE_ERR_INTERNAL:
      break;
  }
  return "internal error";
}

const char* eclone_version(void) { return "1.0.0"; }

void eclone_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------- states

eclone_status eclone_density_named(const char* name, eclone_density** out) {
  ECLONE_REQUIRE(name);
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = new eclone_density{eclone::states::named(name)}; });
}

eclone_status eclone_density_from_json(const char* json, eclone_density** out) {
  ECLONE_REQUIRE(json);
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = new eclone_density{eclone::io::matrix_from_json(json)}; });
}

eclone_status eclone_density_to_json(const eclone_density* rho, char** out_json) {
  ECLONE_REQUIRE(rho);
  ECLONE_REQUIRE(out_json);
  return guarded([&] { *out_json = copy_string(eclone::io::matrix_to_json(rho->rho)); });
}

eclone_status eclone_density_clone(const eclone_density* rho, eclone_density** out) {
  ECLONE_REQUIRE(rho);
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = new eclone_density{rho->rho}; });
}

void eclone_density_free(eclone_density* rho) { delete rho; }

size_t eclone_density_num_qubits(const eclone_density* rho) { return rho ? rho->rho.num_qubits() : 0; }

size_t eclone_density_dim(const eclone_density* rho) { return rho ? rho->rho.dim() : 0; }

eclone_status eclone_density_entries(const eclone_density* rho, double* out, size_t capacity) {
  ECLONE_REQUIRE(rho);
  ECLONE_REQUIRE(out);
  const auto entries = rho->rho.matrix().entries();
  if (capacity < 2 * entries.size()) return fail(ECLONE_ERR_INVALID_ARGUMENT, "output buffer too small");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out[2 * i] = entries[i].real();
    out[2 * i + 1] = entries[i].imag();
  }
  return ECLONE_OK;
}

// ---------------------------------------------------------------- metrics

eclone_status eclone_metrics_compute(const eclone_density* rho, eclone_metrics* out) {
  ECLONE_REQUIRE(rho);
  ECLONE_REQUIRE(out);
  return guarded([&] {
    namespace m = eclone::metrics;
    const auto& state = rho->rho;
    const auto witness = m::witness_expectation(state);
    eclone_metrics result{};
    result.fidelity_phi_plus = m::fidelity_to_pure(state, eclone::PureState(state.labels(), eclone::bell::phi_plus()));
    result.witness = witness.direct;
    result.witness_correlations = witness.from_correlations;
    result.xx = m::pauli_correlation(state, {m::Pauli::X, m::Pauli::X});
    result.yy = m::pauli_correlation(state, {m::Pauli::Y, m::Pauli::Y});
    result.zz = m::pauli_correlation(state, {m::Pauli::Z, m::Pauli::Z});
    result.concurrence = m::concurrence(state);
    result.entropy_bits = m::von_neumann_entropy(state);
    *out = result;
  });
}

eclone_status eclone_trace_distance(const eclone_density* a, const eclone_density* b, double* out) {
  ECLONE_REQUIRE(a);
  ECLONE_REQUIRE(b);
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = eclone::metrics::trace_distance(a->rho, b->rho); });
}

eclone_status eclone_uhlmann_fidelity(const eclone_density* a, const eclone_density* b, double* out) {
  ECLONE_REQUIRE(a);
  ECLONE_REQUIRE(b);
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = eclone::metrics::uhlmann_fidelity(a->rho, b->rho); });
}

eclone_status eclone_fidelity_to_named(const eclone_density* rho, const char* input_name, double* out) {
  ECLONE_REQUIRE(rho);
  ECLONE_REQUIRE(input_name);
  ECLONE_REQUIRE(out);
  return guarded([&] {
    *out = eclone::metrics::fidelity_to_pure(rho->rho, eclone::cloner::InputSpec::parse(input_name).state());
  });
}

// ---------------------------------------------------------------- cloner

eclone_status eclone_clone_run(const eclone_network* network, eclone_outcome** out) {
  ECLONE_REQUIRE(network);
  ECLONE_REQUIRE(network->input);
  ECLONE_REQUIRE(out);
  return guarded([&] {
    eclone::cloner::NetworkConfig config;
    config.input = eclone::cloner::InputSpec::parse(network->input);
    config.r1 = network->r1;
    config.r2 = network->r2;
    config.overlap_sq = network->overlap_sq;
    auto result = std::make_unique<eclone_outcome>(eclone_outcome{{}, config.input, nullptr, nullptr});
    switch (network->model) {
      case ECLONE_MODEL_IDEAL:
        result->outcome = eclone::cloner::run_ideal(config);
        break;
      case ECLONE_MODEL_PHYSICAL:
        result->outcome = eclone::cloner::run_physical(config);
        break;
      default:
        throw eclone::PreconditionError("unknown model");
    }
    if (result->outcome.heralded()) {
      result->local = std::make_unique<eclone_density>(eclone_density{*result->outcome.rho_local});
      result->distant = std::make_unique<eclone_density>(eclone_density{*result->outcome.rho_distant});
    }
    *out = result.release();
  });
}

void eclone_outcome_free(eclone_outcome* outcome) { delete outcome; }

int eclone_outcome_heralded(const eclone_outcome* outcome) {
  return outcome != nullptr && outcome->outcome.heralded() ? 1 : 0;
}

double eclone_outcome_success_weight(const eclone_outcome* outcome) {
  return outcome ? outcome->outcome.success_weight : 0.0;
}

eclone_status eclone_outcome_local(const eclone_outcome* outcome, const eclone_density** out) {
  ECLONE_REQUIRE(outcome);
  ECLONE_REQUIRE(out);
  if (!outcome->local) return fail(ECLONE_ERR_DEGENERATE, "no heralded events");
  *out = outcome->local.get();
  return ECLONE_OK;
}

eclone_status eclone_outcome_distant(const eclone_outcome* outcome, const eclone_density** out) {
  ECLONE_REQUIRE(outcome);
  ECLONE_REQUIRE(out);
  if (!outcome->distant) return fail(ECLONE_ERR_DEGENERATE, "no heralded events");
  *out = outcome->distant.get();
  return ECLONE_OK;
}

eclone_status eclone_outcome_fidelities(const eclone_outcome* outcome, double* local, double* distant) {
  ECLONE_REQUIRE(outcome);
  ECLONE_REQUIRE(local);
  ECLONE_REQUIRE(distant);
  return guarded([&] {
    const auto f = eclone::cloner::clone_fidelities(outcome->outcome, outcome->input);
    *local = f.local;
    *distant = f.distant;
  });
}

eclone_status eclone_sweep(const char* input, const double* grid, size_t count, double overlap_sq, unsigned threads,
                           eclone_sweep_point* out) {
  ECLONE_REQUIRE(input);
  if (count > 0) {
    ECLONE_REQUIRE(grid);
    ECLONE_REQUIRE(out);
  }
  return guarded([&] {
    const auto points = eclone::cloner::fidelity_sweep(eclone::cloner::InputSpec::parse(input),
                                                       std::span<const double>(grid, count), overlap_sq, threads);
    for (std::size_t i = 0; i < points.size(); ++i) {
      out[i] = {points[i].r, points[i].fidelity_local, points[i].fidelity_distant, points[i].success_weight};
    }
  });
}

eclone_status eclone_sweep_to_csv(const eclone_sweep_point* points, size_t count, char** out_csv) {
  if (count > 0) ECLONE_REQUIRE(points);
  ECLONE_REQUIRE(out_csv);
  return guarded([&] {
    std::vector<eclone::cloner::SweepPoint> rows;
    for (std::size_t i = 0; i < count; ++i) {
      rows.push_back({points[i].r, points[i].fidelity_local, points[i].fidelity_distant, points[i].success_weight});
    }
    *out_csv = copy_string(eclone::io::sweep_to_csv(rows));
  });
}

eclone_status eclone_hom_visibility(double r, double overlap_sq, double* out) {
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = eclone::cloner::hom_visibility(r, overlap_sq); });
}

eclone_status eclone_fit_overlap(double measured_visibility, double r, double* out_overlap_sq) {
  ECLONE_REQUIRE(out_overlap_sq);
  return guarded([&] { *out_overlap_sq = eclone::cloner::fit_overlap(measured_visibility, r); });
}

// ---------------------------------------------------------------- tomography

eclone_status eclone_counts_sample(const eclone_density* rho, double n_per_setting, uint64_t seed,
                                   eclone_counts** out) {
  ECLONE_REQUIRE(rho);
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = new eclone_counts{eclone::tomography::sample_counts(rho->rho, n_per_setting, seed)}; });
}

eclone_status eclone_counts_from_csv(const char* csv, eclone_counts** out) {
  ECLONE_REQUIRE(csv);
  ECLONE_REQUIRE(out);
  return guarded([&] { *out = new eclone_counts{eclone::io::counts_from_csv(csv)}; });
}

eclone_status eclone_counts_to_csv(const eclone_counts* counts, char** out_csv) {
  ECLONE_REQUIRE(counts);
  ECLONE_REQUIRE(out_csv);
  return guarded([&] { *out_csv = copy_string(eclone::io::counts_to_csv(counts->records)); });
}

size_t eclone_counts_size(const eclone_counts* counts) { return counts ? counts->records.size() : 0; }

void eclone_counts_free(eclone_counts* counts) { delete counts; }

eclone_status eclone_mle(const eclone_counts* counts, eclone_density** out_rho, eclone_mle_info* info) {
  ECLONE_REQUIRE(counts);
  ECLONE_REQUIRE(out_rho);
  return guarded([&] {
    eclone::tomography::MleOptions options;
    options.keep_trace = info != nullptr;
    auto fit = eclone::tomography::mle_reconstruct(counts->records, options);
    if (info != nullptr) {
      const auto& trace = fit.likelihood_trace;
      bool monotone = true;
      for (std::size_t i = 1; i < trace.size(); ++i) monotone = monotone && trace[i] >= trace[i - 1];
      *info = {fit.log_likelihood, fit.iterations, fit.converged ? 1 : 0, monotone ? 1 : 0};
    }
    *out_rho = new eclone_density{std::move(fit.rho)};
  });
}

eclone_status eclone_resample(const eclone_counts* counts, size_t n_resamples, uint64_t seed, unsigned threads,
                              eclone_resamples** out) {
  ECLONE_REQUIRE(counts);
  ECLONE_REQUIRE(out);
  return guarded([&] {
    *out = new eclone_resamples{
        eclone::tomography::resample_reconstructions(counts->records, n_resamples, seed, threads)};
  });
}

void eclone_resamples_free(eclone_resamples* resamples) { delete resamples; }

eclone_status eclone_resamples_summary(const eclone_resamples* resamples, eclone_statistic statistic,
                                       const eclone_density* reference, double* mean, double* std) {
  ECLONE_REQUIRE(resamples);
  ECLONE_REQUIRE(mean);
  ECLONE_REQUIRE(std);
  return guarded([&] {
    namespace t = eclone::tomography;
    t::StatisticSpec spec;
    switch (statistic) {
      case ECLONE_STAT_FIDELITY:
        spec.kind = t::Statistic::fidelity;
        break;
      case ECLONE_STAT_CONCURRENCE:
        spec.kind = t::Statistic::concurrence;
        break;
      case ECLONE_STAT_ENTROPY:
        spec.kind = t::Statistic::entropy;
        break;
      case ECLONE_STAT_WITNESS:
        spec.kind = t::Statistic::witness;
        break;
      case ECLONE_STAT_TRACE_DISTANCE:
        spec.kind = t::Statistic::trace_distance;
        break;
      case ECLONE_STAT_UHLMANN_FIDELITY:
        spec.kind = t::Statistic::uhlmann_fidelity;
        break;
      default:
        throw eclone::PreconditionError("unknown statistic");
    }
    if (reference != nullptr) {
      if (spec.kind == t::Statistic::fidelity) {
        spec.target = as_pure(reference->rho);
      } else {
        spec.reference = reference->rho;
      }
    }
    const auto summary = t::summarize(resamples->states, spec);
    *mean = summary.mean;
    *std = summary.std;
  });
}

// ---------------------------------------------------------------- checks

eclone_status eclone_checks_run(uint64_t seed, unsigned threads, eclone_check_report** out) {
  ECLONE_REQUIRE(out);
  return guarded([&] {
    eclone::checks::CheckOptions options;
    options.seed = seed;
    options.threads = threads;
    *out = new eclone_check_report{eclone::checks::run_all(options)};
  });
}

size_t eclone_check_count(const eclone_check_report* report) { return report ? report->results.size() : 0; }

eclone_status eclone_check_get(const eclone_check_report* report, size_t index, eclone_check* out) {
  ECLONE_REQUIRE(report);
  ECLONE_REQUIRE(out);
  if (index >= report->results.size()) return fail(ECLONE_ERR_INVALID_ARGUMENT, "check index out of range");
  const auto& r = report->results[index];
  *out = {r.id.c_str(),  r.description.c_str(), eclone::checks::comparison_name(r.comparison),
          r.computed,    r.expected,            r.tolerance,
          r.passed ? 1 : 0};
  return ECLONE_OK;
}

void eclone_check_report_free(eclone_check_report* report) { delete report; }

// ---------------------------------------------------------------- files

eclone_status eclone_read_file(const char* path, char** out_contents) {
  ECLONE_REQUIRE(path);
  ECLONE_REQUIRE(out_contents);
  return guarded([&] { *out_contents = copy_string(eclone::io::read_file(path)); });
}

eclone_status eclone_write_file(const char* path, const char* contents) {
  ECLONE_REQUIRE(path);
  ECLONE_REQUIRE(contents);
  return guarded([&] { eclone::io::write_file(path, contents); });
}

}  // extern "C"
