#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gsa/design.hpp"
#include "gsa/kernels.hpp"
#include "gsa/models.hpp"
#include "gsa/output.hpp"

namespace gsa {

using kernels::RowFault;

struct RunOptions {
  bool parallel = true;  // internal models: evaluate rows concurrently
  int threads = 0;       // 0 = OpenMP default
  std::filesystem::path workdir;  // scratch for external models; empty = system temp
};

struct RunResult {
  std::vector<OutputVector> outputs;  // one per model output, rows in sample order
  std::vector<RowFault> faults;       // row-level diagnostics, ascending rows
};

/// Evaluates the model on every row of `values`.  Per-row math faults are
/// recorded; external launch or protocol failures throw Errc::external.
RunResult evaluate_all(const ModelDef& model, const Matrix& values, const RunOptions& options = {});
inline RunResult evaluate_all(const ModelDef& model, const SampleMatrix& sample, const RunOptions& options = {}) {
  return evaluate_all(model, sample.values, options);
}

struct ExternalStatus {
  int exit_code = 0;        // -1 when killed by a signal or timeout
  bool timed_out = false;
  std::string stderr_text;  // combined stdout and stderr of the child
};

/// Runs `<command> <sample_file> <output_file>` through /bin/sh, in
/// `working_directory` when given.  Throws Errc::external only if the process
/// cannot be spawned.
ExternalStatus run_external(const std::string& command, const std::filesystem::path& sample_file,
                            const std::filesystem::path& output_file, double timeout_seconds = 0.0,
                            const std::filesystem::path& working_directory = {});

}  // namespace gsa
