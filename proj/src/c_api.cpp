#include "axeval/axe_eval.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "axeval/dataset.hpp"
#include "axeval/errors.hpp"
#include "axeval/model.hpp"
#include "axeval/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

axeval::Dataset* unwrap(axev_dataset* h) {
  return reinterpret_cast<axeval::Dataset*>(h);
}
const axeval::Dataset* unwrap(const axev_dataset* h) {
  return reinterpret_cast<const axeval::Dataset*>(h);
}
axeval::ModelPtr* unwrap(axev_model* h) {
  return reinterpret_cast<axeval::ModelPtr*>(h);
}
const axeval::ModelPtr* unwrap(const axev_model* h) {
  return reinterpret_cast<const axeval::ModelPtr*>(h);
}

// Run fn, translating exceptions into status codes + the thread-local message.
template <typename Fn>
axev_status guarded(Fn&& fn) {
  try {
    fn();
    return AXEV_OK;
  } catch (const axeval::ConfigError& e) {
    g_last_error = e.what();
    return AXEV_ERR_CONFIG;
  } catch (const axeval::DataError& e) {
    g_last_error = e.what();
    return AXEV_ERR_DATA;
  } catch (const axeval::CapabilityError& e) {
    g_last_error = e.what();
    return AXEV_ERR_CAPABILITY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AXEV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return AXEV_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_config(const char* config_json) {
  if (!config_json) throw axeval::ConfigError("config JSON is null");
  try {
    return nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw axeval::ConfigError(std::string("invalid config JSON: ") + e.what());
  }
}

template <typename RunFn>
axev_status run_json(RunFn&& run, const char* config_json, char** result_json) {
  return guarded([&] {
    if (!result_json) throw axeval::ConfigError("result out-param is null");
    const nlohmann::json result = run(parse_config(config_json));
    *result_json = dup_string(result.dump(2) + "\n");
  });
}

}  // namespace

extern "C" {

const char* axev_last_error(void) { return g_last_error.c_str(); }

axev_status axev_dataset_load_csv(const char* path, axev_dataset** out) {
  return guarded([&] {
    if (!path || !out) throw axeval::ConfigError("null argument");
    auto* ds = new axeval::Dataset(axeval::Dataset::load_csv(path));
    *out = reinterpret_cast<axev_dataset*>(ds);
  });
}

void axev_dataset_free(axev_dataset* ds) { delete unwrap(ds); }

size_t axev_dataset_rows(const axev_dataset* ds) {
  return ds ? unwrap(ds)->rows() : 0;
}

size_t axev_dataset_cols(const axev_dataset* ds) {
  return ds ? unwrap(ds)->cols() : 0;
}

int axev_dataset_has_target(const axev_dataset* ds) {
  return ds && unwrap(ds)->labels() ? 1 : 0;
}

axev_status axev_model_load(const char* path, axev_model** out) {
  return guarded([&] {
    if (!path || !out) throw axeval::ConfigError("null argument");
    auto* m = new axeval::ModelPtr(axeval::load_model(path));
    *out = reinterpret_cast<axev_model*>(m);
  });
}

axev_status axev_model_fit(const axev_dataset* ds, const char* kind,
                           uint64_t seed, axev_model** out) {
  return guarded([&] {
    if (!ds || !kind || !out) throw axeval::ConfigError("null argument");
    const axeval::Dataset& d = *unwrap(ds);
    if (!d.labels())
      throw axeval::DataError("dataset has no target column to fit against");
    const std::string k = kind;
    axeval::ModelPtr m;
    if (k == "logistic") m = axeval::fit_logistic(d, *d.labels());
    else if (k == "mlp") m = axeval::fit_mlp(d, *d.labels(), 16, seed);
    else throw axeval::ConfigError("model kind must be 'logistic' or 'mlp'");
    *out = reinterpret_cast<axev_model*>(new axeval::ModelPtr(std::move(m)));
  });
}

void axev_model_free(axev_model* m) { delete unwrap(m); }

axev_status axev_model_score(const axev_model* m, const double* std_x,
                             size_t n, double* out_score) {
  return guarded([&] {
    if (!m || !std_x || !out_score) throw axeval::ConfigError("null argument");
    *out_score = (*unwrap(m))->score({std_x, n});
  });
}

axev_status axev_model_save(const axev_model* m, const axev_dataset* ds,
                            const char* path) {
  return guarded([&] {
    if (!m || !ds || !path) throw axeval::ConfigError("null argument");
    axeval::save_model(**unwrap(m), *unwrap(ds), path);
  });
}

axev_status axev_evaluate(const char* config_json, char** result_json) {
  return run_json(axeval::run_evaluate_config, config_json, result_json);
}

axev_status axev_run_synthetic(const char* config_json, char** result_json) {
  return run_json(axeval::run_synthetic_config, config_json, result_json);
}

axev_status axev_run_fairwash(const char* config_json, char** result_json) {
  return run_json(axeval::run_fairwash_config, config_json, result_json);
}

axev_status axev_run_benchmark(const char* config_json, char** result_json) {
  return run_json(axeval::run_benchmark_config, config_json, result_json);
}

void axev_string_free(char* s) { delete[] s; }

}  // extern "C"
