#include "gsa/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>

#include "gsa/config.hpp"
#include "gsa/correlate.hpp"
#include "gsa/error.hpp"
#include "gsa/io.hpp"
#include "gsa/plots.hpp"
#include "gsa/runner.hpp"
#include "gsa/sensitivity.hpp"
#include "gsa/uncertainty.hpp"

namespace gsa::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUserError = 2;
constexpr int kModelError = 3;

struct Globals {
  std::string config;
  Seed seed = 0;
  std::string out;
};

struct SampleArgs {
  std::string method = "lhs";
  std::size_t n = 0;
  std::size_t trajectories = 10;
  std::size_t levels = 4;
  std::size_t replicates = 2;
  std::size_t n_per_factor = 0;
  std::size_t interference = 4;
  std::uint64_t skip = 0;
  std::string from;
  std::string base = "lptau";
};

struct RunArgs {
  std::string sample;
  bool serial = false;
  std::string workdir;
};

struct AnalyzeArgs {
  std::string sample;
  std::string output;
  bool ua = false;
  std::string sa;
  std::size_t bins = 0;
  double alpha = 0.05;
};

[[noreturn]] void usage(const std::string& msg) { throw Error(Errc::config, msg); }

fs::path unit_path(const fs::path& sample) { return fs::path(sample.string() + ".unit"); }
fs::path sidecar_path(const fs::path& sample) { return fs::path(sample.string() + ".meta.json"); }

RunConfig usable_config(const Globals& g) {
  if (g.config.empty()) usage("--config is required");
  RunConfig cfg = load_config(g.config);
  const auto problems = validate_config(cfg);
  if (!problems.empty()) {
    std::string msg = "invalid config: " + problems.front();
    if (problems.size() > 1) msg += " (and " + std::to_string(problems.size() - 1) + " more)";
    throw Error(Errc::config, msg);
  }
  return cfg;
}

int cmd_validate(const Globals& g, std::ostream& out, std::ostream& err) {
  if (g.config.empty()) usage("--config is required");
  const RunConfig cfg = load_config(g.config);
  const auto problems = validate_config(cfg);
  if (!problems.empty()) {
    for (const auto& p : problems) err << errc_name(Errc::config) << ": " << p << "\n";
    return kUserError;
  }
  out << "OK: k=" << cfg.space.size() << " factors\n";
  return kOk;
}

bool accepts_correlation(const std::string& method) {
  return method == "random" || method == "lhs" || method == "rlhs" || method == "lptau" || method == "fixed";
}

SampleMatrix generate(const SampleArgs& a, const RunConfig& cfg, Seed seed) {
  const std::size_t k = cfg.space.size();
  auto need_n = [&] {
    if (a.n == 0) usage("--method " + a.method + " needs -n > 0");
    return a.n;
  };
  if (a.method == "random") return random_design(k, need_n(), seed);
  if (a.method == "lhs") return lhs_design(k, need_n(), seed, 1);
  if (a.method == "rlhs") return lhs_design(k, need_n(), seed, a.replicates);
  if (a.method == "lptau") return lptau_design(k, need_n(), a.skip);
  if (a.method == "morris") return morris_design(k, a.trajectories, a.levels, seed);
  if (a.method == "fixed") {
    if (a.from.empty()) usage("--method fixed needs --from FILE");
    auto s = fixed_design(a.from);
    if (s.cols() != k) {
      throw Error(Errc::dimension, "fixed design has " + std::to_string(s.cols()) + " columns, config has " +
                                       std::to_string(k) + " factors");
    }
    return s;
  }
  if (a.method == "saltelli") {
    SaltelliBase base = SaltelliBase::lptau;
    if (a.base == "random") {
      base = SaltelliBase::random;
    } else if (a.base != "lptau") {
      usage("--base must be lptau or random");
    }
    return saltelli_design(k, need_n(), seed, base);
  }
  if (a.method == "fast-classic" || a.method == "fast-extended") {
    FastOptions opt;
    opt.interference = a.interference;
    std::size_t block = a.n_per_factor;
    if (a.method == "fast-classic") {
      opt.mode = FastMode::classic;
      if (a.n > 0) block = a.n;
      if (block == 0) usage("--method fast-classic needs -n");
      if (!cfg.groups.empty()) usage("factor groups need --method fast-extended");
    } else {
      opt.mode = FastMode::extended;
      if (block == 0) usage("--method fast-extended needs --n-per-factor");
      if (!cfg.groups.empty()) {
        for (const auto& grp : cfg.groups) {
          opt.groups.push_back(grp.members);
          opt.group_names.push_back(grp.name);
        }
      }
    }
    return fast_design(k, block, opt, seed);
  }
  usage("unknown sampling method '" + a.method +
        "' (random, lhs, rlhs, lptau, morris, fast-classic, fast-extended, saltelli, fixed)");
}

int cmd_sample(const Globals& g, const SampleArgs& a, std::ostream& out) {
  const RunConfig cfg = usable_config(g);
  if (g.out.empty()) usage("--out is required");
  SampleMatrix sample = generate(a, cfg, g.seed);
  const bool correlated = cfg.space.correlation.has_value();
  if (correlated) {
    if (!accepts_correlation(a.method)) {
      throw Error(Errc::config, "rank correlation cannot be induced on a " + a.method +
                                    " design without breaking its structure; use random, lhs, rlhs, lptau or fixed");
    }
    sample.unit = iman_conover(sample.unit, *cfg.space.correlation, g.seed);
  }
  bind(sample, cfg.space);

  const fs::path path(g.out);
  write_sample_file(path, sample.values);
  write_sample_file(unit_path(path), sample.unit);
  SampleSidecar side;
  side.method = method_name(sample.meta);
  side.seed = g.seed;
  side.rows = sample.rows();
  side.factors = cfg.space.names();
  side.unit_file = unit_path(path).filename().string();
  side.correlated = correlated;
  side.meta = sample.meta;
  write_text_file(sidecar_path(path), sidecar_json(side));
  out << "wrote " << sample.rows() << "x" << sample.cols() << " " << side.method << " sample to " << path.string()
      << "\n";
  return kOk;
}

int cmd_run(const Globals& g, const RunArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = usable_config(g);
  if (a.sample.empty()) usage("--sample is required");
  if (g.out.empty()) usage("--out is required");
  const Matrix values = read_sample_file(a.sample);
  if (static_cast<std::size_t>(values.cols()) != cfg.space.size()) {
    throw Error(Errc::dimension, "sample has " + std::to_string(values.cols()) + " columns, config has " +
                                     std::to_string(cfg.space.size()) + " factors");
  }
  RunOptions opt;
  opt.parallel = !a.serial;
  opt.workdir = a.workdir;
  RunResult result;
  try {
    result = evaluate_all(cfg.model, values, opt);
  } catch (const Error& e) {
    err << errc_name(e.code()) << ": " << e.what() << "\n";
    return kModelError;
  }
  write_output_file(g.out, result.outputs);
  for (const auto& f : result.faults) err << "warning: row " << f.row + 1 << ": " << f.message << "\n";
  out << "wrote " << values.rows() << " rows x " << result.outputs.size() << " outputs to " << g.out;
  if (!result.faults.empty()) out << " (" << result.faults.size() << " fault rows)";
  out << "\n";
  return kOk;
}

SampleMatrix load_sample(const fs::path& path, const RunConfig& cfg, SampleSidecar& side) {
  if (!fs::exists(sidecar_path(path))) {
    throw Error(Errc::io, "missing sidecar " + sidecar_path(path).string() + "; samples must come from 'sample'");
  }
  side = parse_sidecar(read_text_file(sidecar_path(path)));
  SampleMatrix s;
  s.values = read_sample_file(path);
  s.unit = read_sample_file(path.parent_path() / side.unit_file);
  s.meta = side.meta;
  s.seed = side.seed;
  if (s.rows() != side.rows || s.values.rows() != s.unit.rows() || s.values.cols() != s.unit.cols()) {
    throw Error(Errc::mismatch, "sample, unit file and sidecar disagree on the sample size");
  }
  if (side.factors != cfg.space.names()) {
    throw Error(Errc::mismatch, "sample factors do not match the config factors");
  }
  return s;
}

const char* kCompatibility =
    "compatible pairs: regression/importance with random, lhs, rlhs, lptau, fixed; morris with morris; "
    "fast with fast-classic, fast-extended; sobol with saltelli";

std::string default_sa(const std::string& method) {
  if (method == "morris") return "morris";
  if (method == "fast-classic" || method == "fast-extended") return "fast";
  if (method == "saltelli") return "sobol";
  return "regression";
}

void check_compatible(const std::string& sa, const std::string& method) {
  const bool plain = accepts_correlation(method);
  bool ok = false;
  if (sa == "regression" || sa == "importance") {
    ok = plain;
  } else if (sa == "morris") {
    ok = method == "morris";
  } else if (sa == "fast") {
    ok = method == "fast-classic" || method == "fast-extended";
  } else if (sa == "sobol") {
    ok = method == "saltelli";
  } else {
    usage("unknown --sa method '" + sa + "' (regression, importance, morris, fast, sobol)");
  }
  if (!ok) throw Error(Errc::mismatch, "--sa " + sa + " cannot use a " + method + " design; " + kCompatibility);
}

std::string file_stem(const std::string& name) {
  std::string s;
  for (char c : name) s += std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ? c : '_';
  return s;
}

int cmd_analyze(const Globals& g, const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = usable_config(g);
  if (a.sample.empty()) usage("--sample is required");
  if (a.output.empty()) usage("--output is required");
  if (g.out.empty()) usage("--out is required (report directory)");
  SampleSidecar side;
  const SampleMatrix sample = load_sample(a.sample, cfg, side);
  const auto outputs = read_output_file(a.output, sample.rows(), output_names(cfg.model).size());

  // Neither flag: both analyses, SA chosen by the design.
  const bool do_ua = a.ua || a.sa.empty();
  std::string sa = a.sa;
  if (sa.empty() && !a.ua) sa = default_sa(side.method);
  if (sa == "none") sa.clear();
  if (!sa.empty()) check_compatible(sa, side.method);

  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text_file(dir / name, text);
    written.push_back(name);
  };

  const auto names = cfg.space.names();
  UaOptions ua_opt;
  ua_opt.bins = a.bins;
  ua_opt.alpha = a.alpha;
  for (const auto& y : outputs) {
    const std::string stem = file_stem(y.name);
    if (y.n_effective() == 0) {
      err << "warning: output '" << y.name << "' has no valid rows\n";
      continue;
    }
    if (do_ua) {
      const UaSummary s = summarize(y, ua_opt);
      emit("ua_" + stem + ".csv", to_csv(s));
      emit("histogram_" + stem + ".csv", histogram_csv(s));
      emit("histogram_" + stem + ".svg", plots::histogram_svg(s));
      emit("ecdf_" + stem + ".csv", ecdf_csv(s));
      emit("ecdf_" + stem + ".svg", plots::ecdf_svg(s));
      emit("scatter_" + stem + ".svg", plots::scatter_svg(sample.values, y, names));
      emit("cobweb_" + stem + ".csv", plots::cobweb_csv(sample.values, y, names));
      emit("cobweb_" + stem + ".svg", plots::cobweb_svg(sample.values, y, names));
    }
    if (!sa.empty()) {
      SaReport rep;
      if (sa == "regression") {
        rep = regression_measures(sample.values, y, names);
      } else if (sa == "importance") {
        rep = importance_measures(sample.values, y, names);
      } else if (sa == "morris") {
        rep = morris_measures(sample, y, names);
      } else if (sa == "fast") {
        rep = fast_indices(sample, y, names);
      } else {
        rep = sobol_from_outputs(sample, y, names);
      }
      emit("sa_" + sa + "_" + stem + ".csv", to_csv(rep));
    }
  }
  for (const auto& w : written) out << "wrote " << (dir / w).string() << "\n";
  return kOk;
}

int exit_code_for(Errc code) {
  return code == Errc::evaluation || code == Errc::external ? kModelError : kUserError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo uncertainty and sensitivity analysis toolkit", "gsatk"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "output file or directory");

  auto* validate = app.add_subcommand("validate", "check a configuration");
  validate->fallthrough();

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "generate a sample file");
  sample->fallthrough();
  sample->add_option("--method", sa.method, "random|lhs|rlhs|lptau|morris|fast-classic|fast-extended|saltelli|fixed");
  sample->add_option("-n", sa.n, "rows (saltelli: base size)");
  sample->add_option("-r", sa.trajectories, "Morris trajectories");
  sample->add_option("-p", sa.levels, "Morris levels (even)");
  sample->add_option("--replicates", sa.replicates, "replicated LHS blocks");
  sample->add_option("--n-per-factor", sa.n_per_factor, "extended FAST block size");
  sample->add_option("--interference", sa.interference, "FAST interference order M");
  sample->add_option("--skip", sa.skip, "LP-tau points to skip");
  sample->add_option("--from", sa.from, "unit-hypercube sample file for --method fixed");
  sample->add_option("--base", sa.base, "saltelli base: lptau|random");

  RunArgs ra;
  auto* runc = app.add_subcommand("run", "evaluate the model on a sample");
  runc->fallthrough();
  runc->add_option("--sample", ra.sample, "sample file");
  runc->add_flag("--serial", ra.serial, "evaluate internal models on one thread");
  runc->add_option("--workdir", ra.workdir, "scratch directory for external models");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "uncertainty and sensitivity reports");
  analyze->fallthrough();
  analyze->add_option("--sample", aa.sample, "sample file");
  analyze->add_option("--output", aa.output, "output file");
  analyze->add_flag("--ua", aa.ua, "uncertainty summary and plots");
  analyze->add_option("--sa", aa.sa, "regression|importance|morris|fast|sobol|none");
  analyze->add_option("--bins", aa.bins, "histogram bins (0 = Sturges)");
  analyze->add_option("--alpha", aa.alpha, "significance level for bands");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "E_USAGE: " << e.what() << "\n";
    return kUserError;
  }

  try {
    if (*validate) return cmd_validate(g, out, err);
    if (*sample) return cmd_sample(g, sa, out);
    if (*runc) return cmd_run(g, ra, out, err);
    return cmd_analyze(g, aa, out, err);
  } catch (const Error& e) {
    err << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "E_INTERNAL: " << e.what() << "\n";
    return kUserError;
  }
}

}  // namespace gsa::cli
