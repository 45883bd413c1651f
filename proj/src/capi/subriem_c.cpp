// C shim over the core library: opaque handles, status codes, and a
// thread-local error message.
#include "subriem/subriem.h"

#include <cstring>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>

#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "core/flows.hpp"
#include "core/frenet.hpp"
#include "core/model.hpp"
#include "core/models.hpp"

namespace {

thread_local std::string g_lastError = "no error";

void setError(const std::string& message) { g_lastError = message; }

sr_status capture(const std::exception& error, sr_status status) {
  setError(error.what());
  return status;
}

// Runs fn inside a catch-all that maps the error hierarchy onto statuses.
template <typename Fn>
sr_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const subriem::InputError& e) {
    return capture(e, SR_ERR_INPUT);
  } catch (const subriem::GeometryError& e) {
    return capture(e, SR_ERR_GEOMETRY);
  } catch (const subriem::DivergenceError& e) {
    return capture(e, SR_ERR_DIVERGENCE);
  } catch (const subriem::NumericError& e) {
    return capture(e, SR_ERR_NUMERIC);
  } catch (const std::exception& e) {
    return capture(e, SR_ERR_INTERNAL);
  } catch (...) {
    setError("unknown failure");
    return SR_ERR_INTERNAL;
  }
}

sr_status inputError(const std::string& message) {
  setError(message);
  return SR_ERR_INPUT;
}

subriem::RunOptions toRunOptions(const sr_run_options* options) {
  subriem::RunOptions out;
  if (options == nullptr) {
    return out;
  }
  if (options->has_tol_algebraic) {
    out.tolAlgebraic = options->tol_algebraic;
  }
  if (options->has_tol_numeric) {
    out.tolNumeric = options->tol_numeric;
  }
  if (options->has_seed) {
    out.seed = options->seed;
  }
  if (options->output_dir != nullptr) {
    out.outputDir = std::string(options->output_dir);
  }
  return out;
}

sr_status fillBuffer(const std::string& text, char* buffer, size_t bufferSize,
                     size_t* outNeeded) {
  if (outNeeded != nullptr) {
    *outNeeded = text.size() + 1;
  }
  if (buffer != nullptr && bufferSize > 0) {
    const size_t copied = std::min(bufferSize - 1, text.size());
    std::memcpy(buffer, text.data(), copied);
    buffer[copied] = '\0';
  }
  return SR_OK;
}

}  // namespace

struct sr_model {
  subriem::ModelPtr ptr;
};

struct sr_trajectory {
  subriem::PhaseTrajectory traj;
};

extern "C" {

const char* sr_last_error(void) { return g_lastError.c_str(); }

sr_status sr_model_create(const char* name, sr_model** out_model) {
  if (name == nullptr || out_model == nullptr) {
    return inputError("sr_model_create: name and out_model must be non-NULL");
  }
  return guarded([&] {
    *out_model = new sr_model{subriem::makeModel(name)};
    return SR_OK;
  });
}

sr_status sr_model_create_carnot(int base_dim, int manifold_dim,
                                 const double* entries, size_t entry_count,
                                 sr_model** out_model) {
  if (out_model == nullptr || (entries == nullptr && entry_count > 0)) {
    return inputError("sr_model_create_carnot: bad pointer arguments");
  }
  return guarded([&] {
    if (base_dim < 2 || manifold_dim <= base_dim) {
      throw subriem::InputError(
          "sr_model_create_carnot: need base_dim >= 2 and "
          "manifold_dim > base_dim");
    }
    subriem::StructureConstants constants;
    constants.n = base_dim;
    constants.verticalDim = manifold_dim - base_dim;
    constants.c =
        subriem::zeroTensor3(constants.verticalDim, base_dim, base_dim);
    for (size_t e = 0; e < entry_count; ++e) {
      const double* q = entries + 4 * e;
      const int k = static_cast<int>(q[0]);
      const int i = static_cast<int>(q[1]);
      const int j = static_cast<int>(q[2]);
      if (k < 1 || k > constants.verticalDim || i < 1 || i > base_dim ||
          j < 1 || j > base_dim || i == j) {
        throw subriem::InputError("structure constant entry " +
                                  std::to_string(e) + " is out of range");
      }
      constants.c[k - 1](i - 1, j - 1) = q[3];
    }
    for (int k = 0; k < constants.verticalDim; ++k) {
      for (int i = 0; i < base_dim; ++i) {
        for (int j = 0; j < base_dim; ++j) {
          if (constants.c[k](i, j) != 0.0 && constants.c[k](j, i) == 0.0) {
            constants.c[k](j, i) = -constants.c[k](i, j);
          }
        }
      }
    }
    *out_model = new sr_model{subriem::step2Carnot(constants, "carnot")};
    return SR_OK;
  });
}

void sr_model_destroy(sr_model* model) { delete model; }

sr_status sr_model_dims(const sr_model* model, int* manifold_dim,
                        int* base_dim, int* chart_dim) {
  if (model == nullptr) {
    return inputError("sr_model_dims: model must be non-NULL");
  }
  if (manifold_dim != nullptr) {
    *manifold_dim = model->ptr->manifoldDim();
  }
  if (base_dim != nullptr) {
    *base_dim = model->ptr->baseDim();
  }
  if (chart_dim != nullptr) {
    *chart_dim = model->ptr->chartDim();
  }
  return SR_OK;
}

sr_status sr_integrate_normal_geodesic(const sr_model* model, const double* x0,
                                       const double* lambda0, double horizon,
                                       double step, int normalize,
                                       sr_trajectory** out_trajectory) {
  if (model == nullptr || x0 == nullptr || lambda0 == nullptr ||
      out_trajectory == nullptr) {
    return inputError(
        "sr_integrate_normal_geodesic: pointer arguments must be non-NULL");
  }
  return guarded([&] {
    const int dim = model->ptr->chartDim();
    const subriem::Vec x = Eigen::Map<const subriem::Vec>(x0, dim);
    const subriem::Vec lambda = Eigen::Map<const subriem::Vec>(lambda0, dim);
    *out_trajectory = new sr_trajectory{subriem::integrateNormalGeodesic(
        *model->ptr, x, lambda, horizon, step, normalize != 0)};
    return SR_OK;
  });
}

void sr_trajectory_destroy(sr_trajectory* trajectory) { delete trajectory; }

sr_status sr_trajectory_sample_count(const sr_trajectory* trajectory,
                                     int* out_count) {
  if (trajectory == nullptr || out_count == nullptr) {
    return inputError(
        "sr_trajectory_sample_count: arguments must be non-NULL");
  }
  *out_count = static_cast<int>(trajectory->traj.times.size());
  return SR_OK;
}

sr_status sr_trajectory_times(const sr_trajectory* trajectory,
                              double* out_times) {
  if (trajectory == nullptr || out_times == nullptr) {
    return inputError("sr_trajectory_times: arguments must be non-NULL");
  }
  const auto& times = trajectory->traj.times;
  std::memcpy(out_times, times.data(), times.size() * sizeof(double));
  return SR_OK;
}

sr_status sr_trajectory_states(const sr_trajectory* trajectory,
                               double* out_states) {
  if (trajectory == nullptr || out_states == nullptr) {
    return inputError("sr_trajectory_states: arguments must be non-NULL");
  }
  const subriem::Mat& x = trajectory->traj.x;
  const subriem::Mat& lambda = trajectory->traj.lambda;
  const int dim = static_cast<int>(x.cols());
  for (int s = 0; s < static_cast<int>(x.rows()); ++s) {
    for (int i = 0; i < dim; ++i) {
      out_states[s * 2 * dim + i] = x(s, i);
      out_states[s * 2 * dim + dim + i] = lambda(s, i);
    }
  }
  return SR_OK;
}

sr_status sr_trajectory_energy_drift(const sr_model* model,
                                     const sr_trajectory* trajectory,
                                     double* out_drift) {
  if (model == nullptr || trajectory == nullptr || out_drift == nullptr) {
    return inputError(
        "sr_trajectory_energy_drift: arguments must be non-NULL");
  }
  return guarded([&] {
    *out_drift = subriem::energyDrift(*model->ptr, trajectory->traj);
    return SR_OK;
  });
}

sr_status sr_trajectory_curvatures(const sr_model* model,
                                   const sr_trajectory* trajectory,
                                   double* out_kappa1, double* out_kappa2) {
  if (model == nullptr || trajectory == nullptr) {
    return inputError("sr_trajectory_curvatures: arguments must be non-NULL");
  }
  return guarded([&] {
    const subriem::BaseTrajectory base =
        subriem::projectToBase(*model->ptr, trajectory->traj);
    const subriem::CurvatureProfile profile =
        subriem::frenetCurvatures(*model->ptr, base);
    const int count = static_cast<int>(profile.times.size());
    for (int s = 0; s < count; ++s) {
      if (out_kappa1 != nullptr) {
        out_kappa1[s] = profile.kappa1(s);
      }
      if (out_kappa2 != nullptr) {
        out_kappa2[s] = profile.kappa2(s);
      }
    }
    return SR_OK;
  });
}

sr_status sr_run_experiment(const char* config_path,
                            const sr_run_options* options,
                            int* out_exit_code) {
  if (config_path == nullptr || out_exit_code == nullptr) {
    return inputError(
        "sr_run_experiment: config_path and out_exit_code must be non-NULL");
  }
  return guarded([&] {
    *out_exit_code =
        subriem::runExperiment(config_path, toRunOptions(options), std::cout);
    return SR_OK;
  });
}

sr_status sr_verify_model(const char* model_name,
                          const sr_run_options* options, int* out_exit_code) {
  if (model_name == nullptr || out_exit_code == nullptr) {
    return inputError(
        "sr_verify_model: model_name and out_exit_code must be non-NULL");
  }
  return guarded([&] {
    *out_exit_code =
        subriem::verifyModel(model_name, toRunOptions(options), std::cout);
    return SR_OK;
  });
}

sr_status sr_list_models(char* buffer, size_t buffer_size,
                         size_t* out_needed) {
  return guarded([&] {
    std::ostringstream stream;
    subriem::listModels(stream);
    return fillBuffer(stream.str(), buffer, buffer_size, out_needed);
  });
}

sr_status sr_list_checks(char* buffer, size_t buffer_size,
                         size_t* out_needed) {
  return guarded([&] {
    std::ostringstream stream;
    subriem::listChecks(stream);
    return fillBuffer(stream.str(), buffer, buffer_size, out_needed);
  });
}

}  // extern "C"
