#include "asindy.h"

#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "harness.hpp"

namespace {

thread_local std::string g_last_error;

asindy_status fail(asindy_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
asindy_status guarded(Fn&& fn) {
  try {
    fn();
    return ASINDY_OK;
  } catch (const asindy::IoError& e) {
    return fail(ASINDY_ERR_IO, e.what());
  } catch (const asindy::ConfigError& e) {
    return fail(ASINDY_ERR_CONFIG, e.what());
  } catch (const asindy::DataError& e) {
    return fail(ASINDY_ERR_DATA, e.what());
  } catch (const asindy::SolverError& e) {
    return fail(ASINDY_ERR_SOLVER, e.what());
  } catch (const asindy::SimDivergenceError& e) {
    return fail(ASINDY_ERR_SIM, e.what());
  } catch (const asindy::AdaptationDivergenceError& e) {
    return fail(ASINDY_ERR_SIM, e.what());
  } catch (const asindy::DomainError& e) {
    return fail(ASINDY_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(ASINDY_ERR_INTERNAL, e.what());
  }
}

}  // namespace

struct asindy_config {
  asindy::ConfigFile file;
};

extern "C" {

const char* asindy_version(void) { return "1.0.0"; }

const char* asindy_last_error(void) { return g_last_error.c_str(); }

asindy_status asindy_config_load(const char* path, asindy_config** out) {
  if (path == nullptr || out == nullptr) {
    return fail(ASINDY_ERR_INVALID, "asindy_config_load: null argument");
  }
  *out = nullptr;
  return guarded([&] {
    auto* cfg = new asindy_config{asindy::ConfigFile::parse_file(path)};
    // Reject malformed content eagerly so later calls cannot trip over it.
    try {
      asindy::ExperimentConfig::from_config(cfg->file);
    } catch (...) {
      delete cfg;
      throw;
    }
    *out = cfg;
  });
}

asindy_status asindy_config_set(asindy_config* cfg, const char* key,
                                const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr) {
    return fail(ASINDY_ERR_INVALID, "asindy_config_set: null argument");
  }
  return guarded([&] {
    asindy::ConfigFile updated = cfg->file;
    updated.set(key, value);
    asindy::ExperimentConfig::from_config(updated);  // validate before commit
    cfg->file = std::move(updated);
  });
}

void asindy_config_free(asindy_config* cfg) { delete cfg; }

asindy_status asindy_collect(const asindy_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr) {
    return fail(ASINDY_ERR_INVALID, "asindy_collect: null argument");
  }
  return guarded([&] { asindy::collect(cfg->file, out_dir); });
}

asindy_status asindy_identify(const asindy_config* cfg,
                              const char* const* log_paths, size_t n_logs,
                              const char* model_out) {
  if (cfg == nullptr || log_paths == nullptr || model_out == nullptr) {
    return fail(ASINDY_ERR_INVALID, "asindy_identify: null argument");
  }
  return guarded([&] {
    std::vector<std::string> paths;
    paths.reserve(n_logs);
    for (size_t i = 0; i < n_logs; ++i) {
      if (log_paths[i] == nullptr) {
        throw asindy::DomainError("asindy_identify: null log path");
      }
      paths.emplace_back(log_paths[i]);
    }
    asindy::identify(cfg->file, paths, model_out);
  });
}

asindy_status asindy_evaluate(const asindy_config* cfg, const char* model_path,
                              const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr) {
    return fail(ASINDY_ERR_INVALID, "asindy_evaluate: null argument");
  }
  return guarded([&] {
    asindy::evaluate(cfg->file, model_path != nullptr ? model_path : "",
                     out_dir);
  });
}

asindy_status asindy_sweep(const asindy_config* cfg, const char* model_path,
                           const char* const* grid, size_t n_grid,
                           const char* out_dir) {
  if (cfg == nullptr || grid == nullptr || out_dir == nullptr) {
    return fail(ASINDY_ERR_INVALID, "asindy_sweep: null argument");
  }
  return guarded([&] {
    std::vector<std::string> specs;
    specs.reserve(n_grid);
    for (size_t i = 0; i < n_grid; ++i) {
      if (grid[i] == nullptr) {
        throw asindy::DomainError("asindy_sweep: null grid entry");
      }
      specs.emplace_back(grid[i]);
    }
    asindy::sweep(cfg->file, model_path != nullptr ? model_path : "", specs,
                  out_dir);
  });
}

}  // extern "C"
