#include "gsa/runner.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "gsa/error.hpp"
#include "gsa/io.hpp"

namespace gsa {

namespace {

namespace fs = std::filesystem;
using Idx = Eigen::Index;

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

class ScratchDir {
 public:
  explicit ScratchDir(const fs::path& parent) {
    const fs::path base = parent.empty() ? fs::temp_directory_path() : parent;
    std::string templ = (base / "gsa-run-XXXXXX").string();
    if (!mkdtemp(templ.data())) throw Error(Errc::io, "cannot create scratch directory under " + base.string());
    path_ = templ;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string describe_failure(const ExternalStatus& st, const std::string& command) {
  std::string msg = "external model '" + command + "' ";
  if (st.timed_out) {
    msg += "timed out";
  } else if (st.exit_code < 0) {
    msg += "was terminated by a signal";
  } else {
    msg += "exited with status " + std::to_string(st.exit_code);
  }
  if (!st.stderr_text.empty()) {
    // Keep the diagnostic on one line.
    std::string text = st.stderr_text;
    std::replace(text.begin(), text.end(), '\n', ' ');
    msg += "; stderr: " + text;
  }
  return msg;
}

std::vector<OutputVector> run_external_batch(const ExternalModel& model, const Matrix& values, const fs::path& dir) {
  const fs::path in = dir / "sample.txt";
  const fs::path out = dir / "output.txt";
  write_sample_file(in, values);
  const auto st = run_external(model.command, in, out, model.timeout_seconds, model.working_directory);
  if (st.timed_out || st.exit_code != 0) throw Error(Errc::external, describe_failure(st, model.command));
  try {
    return read_output_file(out, static_cast<std::size_t>(values.rows()), model.outputs.size());
  } catch (const Error& e) {
    throw Error(Errc::external, "external model '" + model.command + "' produced an unusable output file: " +
                                    e.what() + (st.stderr_text.empty() ? "" : "; stderr: " + st.stderr_text));
  }
}

}  // namespace

ExternalStatus run_external(const std::string& command, const fs::path& sample_file, const fs::path& output_file,
                            double timeout_seconds, const fs::path& working_directory) {
  const std::string script = command + " " + shell_quote(fs::absolute(sample_file).string()) + " " +
                             shell_quote(fs::absolute(output_file).string());
  std::string log_templ = (output_file.parent_path().empty() ? fs::temp_directory_path() : output_file.parent_path())
                              .append("stderr-XXXXXX")
                              .string();
  const int log_fd = mkstemp(log_templ.data());
  if (log_fd < 0) throw Error(Errc::external, "cannot create stderr capture file");
  const char* argv[] = {"/bin/sh", "-c", script.c_str(), nullptr};

  const pid_t pid = fork();
  if (pid < 0) {
    close(log_fd);
    unlink(log_templ.c_str());
    throw Error(Errc::external, "cannot spawn external model '" + command + "'");
  }
  if (pid == 0) {
    setpgid(0, 0);
    const int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    dup2(log_fd, STDOUT_FILENO);
    dup2(log_fd, STDERR_FILENO);
    if (!working_directory.empty() && chdir(working_directory.c_str()) != 0) _exit(126);
    execv("/bin/sh", const_cast<char* const*>(argv));
    _exit(127);
  }
  setpgid(pid, pid);

  ExternalStatus st;
  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  for (;;) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) break;
    if (timeout_seconds > 0.0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() > timeout_seconds) {
        kill(-pid, SIGKILL);
        waitpid(pid, &status, 0);
        st.timed_out = true;
        break;
      }
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (!st.timed_out && WIFEXITED(status)) {
    st.exit_code = WEXITSTATUS(status);
  } else {
    st.exit_code = -1;
  }
  close(log_fd);
  try {
    st.stderr_text = read_text_file(log_templ);
  } catch (const Error&) {
  }
  unlink(log_templ.c_str());
  while (!st.stderr_text.empty() && (st.stderr_text.back() == '\n' || st.stderr_text.back() == '\r')) {
    st.stderr_text.pop_back();
  }
  return st;
}

RunResult evaluate_all(const ModelDef& model, const Matrix& values, const RunOptions& options) {
  const auto names = output_names(model);
  const Idx n = values.rows();
  RunResult result;

  if (const auto* ext = std::get_if<ExternalModel>(&model)) {
    ScratchDir dir(options.workdir);
    if (ext->mode == ExternalMode::batch) {
      result.outputs = run_external_batch(*ext, values, dir.path());
    } else {
      // One child process per row, bounded by the worker count.
      const std::size_t m = ext->outputs.empty() ? 1 : ext->outputs.size();
      Matrix y(n, static_cast<Idx>(m));
      std::atomic<std::size_t> counter{0};
      kernels::RowFunction fn = [&](std::span<const double> row, std::span<double> out) {
        const std::size_t id = counter++;
        const fs::path in = dir.path() / ("row-" + std::to_string(id) + ".in");
        const fs::path op = dir.path() / ("row-" + std::to_string(id) + ".out");
        Matrix one(1, static_cast<Idx>(row.size()));
        for (std::size_t j = 0; j < row.size(); ++j) one(0, static_cast<Idx>(j)) = row[j];
        write_sample_file(in, one);
        const auto st = run_external(ext->command, in, op, ext->timeout_seconds, ext->working_directory);
        if (st.timed_out || st.exit_code != 0) throw Error(Errc::external, describe_failure(st, ext->command));
        std::vector<OutputVector> got;
        try {
          got = read_output_file(op, 1, m);
        } catch (const Error& e) {
          throw Error(Errc::external, "external model '" + ext->command + "' produced an unusable output file: " + e.what());
        }
        for (std::size_t j = 0; j < m; ++j) out[j] = got[j].y[0];
        if (!got[0].fault_rows.empty()) throw Error(Errc::evaluation, "external model reported NaN");
        std::error_code ec;
        fs::remove(in, ec);
        fs::remove(op, ec);
      };
      kernels::evaluate_rows(fn, values, y, result.faults, static_cast<int>(ext->workers));
      const auto out_names = output_names(model);
      for (std::size_t j = 0; j < m; ++j) {
        OutputVector o;
        o.name = out_names[j];
        o.y.resize(static_cast<std::size_t>(n));
        for (Idx i = 0; i < n; ++i) o.y[static_cast<std::size_t>(i)] = y(i, static_cast<Idx>(j));
        for (const auto& f : result.faults) o.fault_rows.push_back(f.row);
        result.outputs.push_back(std::move(o));
      }
      return result;
    }
    // Batch: faults are whatever rows carry NaN.
    std::vector<std::size_t> rows;
    for (const auto& o : result.outputs) rows.insert(rows.end(), o.fault_rows.begin(), o.fault_rows.end());
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (auto r : rows) result.faults.push_back({r, "external model reported NaN"});
    return result;
  }

  const std::size_t m = names.size();
  Matrix y(n, static_cast<Idx>(m));
  kernels::RowFunction fn = [&model](std::span<const double> row, std::span<double> out) {
    const auto v = evaluate(model, row);
    std::copy(v.begin(), v.end(), out.begin());
  };
  if (options.parallel) {
    kernels::evaluate_rows(fn, values, y, result.faults, options.threads);
  } else {
    kernels::evaluate_rows_serial(fn, values, y, result.faults);
  }
  for (std::size_t j = 0; j < m; ++j) {
    OutputVector o;
    o.name = names[j];
    o.y.resize(static_cast<std::size_t>(n));
    for (Idx i = 0; i < n; ++i) o.y[static_cast<std::size_t>(i)] = y(i, static_cast<Idx>(j));
    for (const auto& f : result.faults) o.fault_rows.push_back(f.row);
    result.outputs.push_back(std::move(o));
  }
  return result;
}

}  // namespace gsa
