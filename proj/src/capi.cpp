#include "conerisk/conerisk.h"

#include "conerisk/errors.hpp"
#include "conerisk/limits.hpp"
#include "conerisk/risklab.hpp"
#include "conerisk/sets.hpp"
#include "conerisk/statdim.hpp"
#include "conerisk/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct conerisk_set {
  conerisk::ConstraintSet set;
};

struct conerisk_text {
  std::string data;
};

namespace {

thread_local std::string last_error;

template <class F>
conerisk_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const conerisk::InvalidInput& e) {
    last_error = e.what();
    return CONERISK_INVALID_INPUT;
  } catch (const conerisk::NumericalError& e) {
    last_error = e.what();
    return CONERISK_NUMERICAL_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CONERISK_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CONERISK_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return CONERISK_INTERNAL_ERROR;
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw conerisk::InvalidInput(message);
}

conerisk::Vector to_vector(const double* data, size_t n) {
  require(data != nullptr || n == 0, "null data pointer");
  return Eigen::Map<const conerisk::Vector>(data, static_cast<Eigen::Index>(n));
}

conerisk::McOptions to_options(const conerisk_mc_options* o) {
  conerisk::McOptions opts;
  if (!o) return opts;
  opts.samples = o->samples;
  opts.seed = o->seed;
  opts.workers = o->workers;
  if (o->noise) opts.noise = conerisk::NoiseModel::parse(o->noise);
  return opts;
}

conerisk_status emit(std::string text, conerisk_text** out) {
  require(out != nullptr, "null output pointer");
  *out = new conerisk_text{std::move(text)};
  return CONERISK_OK;
}

}  // namespace

extern "C" {

const char* conerisk_version(void) { return "0.1.0"; }

const char* conerisk_last_error(void) { return last_error.c_str(); }

conerisk_status conerisk_set_parse(const char* spec, conerisk_set** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = new conerisk_set{conerisk::ConstraintSet::parse(spec)};
    return CONERISK_OK;
  });
}

void conerisk_set_free(conerisk_set* set) { delete set; }

conerisk_status conerisk_set_dim(const conerisk_set* set, size_t* out) {
  return guarded([&] {
    require(set && out, "null argument");
    *out = static_cast<size_t>(set->set.dim());
    return CONERISK_OK;
  });
}

conerisk_status conerisk_set_family(const conerisk_set* set, conerisk_text** out) {
  return guarded([&] {
    require(set != nullptr, "null set");
    return emit(set->set.family(), out);
  });
}

conerisk_status conerisk_project(const conerisk_set* set, const double* x, size_t n, double* out, int* converged) {
  return guarded([&] {
    require(set && out, "null argument");
    const auto p = conerisk::project(set->set, to_vector(x, n));
    std::memcpy(out, p.point.data(), n * sizeof(double));
    if (converged) *converged = p.converged ? 1 : 0;
    return CONERISK_OK;
  });
}

conerisk_status conerisk_statdim(const conerisk_set* cone, const double* hyperplane, size_t n,
                                 const conerisk_mc_options* options, double* value, double* std_error) {
  return guarded([&] {
    require(cone && value, "null argument");
    const auto opts = to_options(options);
    const auto e = hyperplane ? conerisk::mc_statdim(cone->set, to_vector(hyperplane, n), opts)
                              : conerisk::mc_statdim(cone->set, opts);
    *value = e.value;
    if (std_error) *std_error = e.std_error;
    return CONERISK_OK;
  });
}

conerisk_status conerisk_limits_report(const conerisk_set* set, const double* theta, size_t n,
                                       const conerisk_mc_options* options, conerisk_text** out) {
  return guarded([&] {
    require(set != nullptr, "null set");
    return emit(conerisk::limit_report(set->set, to_vector(theta, n), to_options(options)).render(), out);
  });
}

conerisk_status conerisk_sweep(const char* scenario_path, int workers, conerisk_text** out) {
  return guarded([&] {
    require(scenario_path != nullptr, "null path");
    auto s = conerisk::load_scenario(scenario_path);
    s.workers = workers;
    return emit(conerisk::sweep_csv(s, conerisk::simulate_risks(s)), out);
  });
}

conerisk_status conerisk_table1(uint64_t samples, uint64_t seed, int workers, conerisk_text** out) {
  return guarded([&] {
    require(samples == 0 || samples >= 100, "samples must be 0 or at least 100");
    const auto rows = conerisk::table1_rows(samples, seed, workers);
    return emit(conerisk::table1_text(rows, samples > 0), out);
  });
}

conerisk_status conerisk_spiking(size_t n, uint64_t samples, uint64_t seed, int workers, conerisk_text** out) {
  return guarded([&] {
    return emit(conerisk::spiking_demo(static_cast<Eigen::Index>(n), samples, seed, workers).render(), out);
  });
}

conerisk_status conerisk_verify(uint64_t seed, int workers, double tol_scale, conerisk_text** out) {
  return guarded([&] {
    require(tol_scale >= 0.0, "tol_scale must be nonnegative");
    const auto report = conerisk::run_verification({seed, workers, tol_scale});
    emit(report.render(), out);
    return report.passed() ? CONERISK_OK : CONERISK_VERIFICATION_FAILED;
  });
}

conerisk_status conerisk_verify_criterion(int id, uint64_t seed, int workers, double tol_scale, int* passed,
                                          conerisk_text** out) {
  return guarded([&] {
    require(tol_scale >= 0.0, "tol_scale must be nonnegative");
    require(id >= 1 && id <= conerisk::kCriterionCount, "criterion id out of range");
    const auto r = conerisk::verify_criterion(id, {seed, workers, tol_scale});
    if (passed) *passed = r.passed ? 1 : 0;
    conerisk::VerifyReport report;
    report.seed = seed;
    report.criteria.push_back(r);
    if (out) emit(report.render(), out);
    return r.passed ? CONERISK_OK : CONERISK_VERIFICATION_FAILED;
  });
}

conerisk_status conerisk_load_csv_vector(const char* path, double** data, size_t* n) {
  return guarded([&] {
    require(path && data && n, "null argument");
    const auto v = conerisk::read_csv_vector(path);
    auto* buffer = static_cast<double*>(std::malloc(static_cast<size_t>(v.size()) * sizeof(double)));
    if (!buffer) throw std::bad_alloc();
    std::memcpy(buffer, v.data(), static_cast<size_t>(v.size()) * sizeof(double));
    *data = buffer;
    *n = static_cast<size_t>(v.size());
    return CONERISK_OK;
  });
}

void conerisk_vector_free(double* data) { std::free(data); }

const char* conerisk_text_data(const conerisk_text* text) { return text ? text->data.c_str() : ""; }

size_t conerisk_text_size(const conerisk_text* text) { return text ? text->data.size() : 0; }

void conerisk_text_free(conerisk_text* text) { delete text; }

}  // extern "C"
