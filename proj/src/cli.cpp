#include "cdspin/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdspin/config.hpp"
#include "cdspin/errors.hpp"
#include "cdspin/experiments.hpp"

namespace cdspin::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<double> tf;
  std::string picture = "total";
  double gamma = 0.0;
  std::string out;
  std::string summary;
  std::string kind;
  std::string range;
  std::vector<double> tf_list;
  std::size_t points = kDefaultTracePoints;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Fixed 17-digit CSV; nullopt cells are left empty.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
    text_ += '\n';
  }

  void row(const std::vector<std::optional<double>>& cells) {
    for (std::size_t i = 0; i < columns_; ++i) {
      if (i) text_ += ',';
      if (i < cells.size() && cells[i]) text_ += num(*cells[i]);
    }
    text_ += '\n';
  }

  void save(const fs::path& path) const {
    std::ofstream file(path, std::ios::binary);
    file << text_;
    if (!file) throw UsageError("cannot write '" + path.string() + "'");
  }

 private:
  std::size_t columns_;
  std::string text_;
};

DotParams resolve_params(const Options& opt) {
  DotParams p = opt.config_path.empty() ? DotParams::defaults() : load_config(opt.config_path);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    set_param(p, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.tf) p.t_f = *opt.tf;
  validate(p);
  return p;
}

json params_json(const DotParams& p) {
  json j = json::object();
  for (auto name : param_names()) j[std::string(name)] = get_param(p, name);
  return j;
}

struct Range {
  double start = 0.0, stop = 0.0;
  std::size_t count = 0;
  bool log = false;
};

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log")) {
    throw UsageError("range must be start:stop:count[:log], got '" + text + "'");
  }
  Range r;
  try {
    std::size_t used = 0;
    r.start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("start");
    r.stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("stop");
    const long long count = std::stoll(parts[2], &used);
    if (used != parts[2].size() || count < 1) throw std::invalid_argument("count");
    r.count = static_cast<std::size_t>(count);
  } catch (const std::logic_error&) {
    throw UsageError("malformed range '" + text + "'");
  }
  r.log = parts.size() == 4;
  if (r.log && !(r.start > 0.0 && r.stop > 0.0)) {
    throw UsageError("log range needs positive end points");
  }
  return r;
}

fs::path summary_path(const Options& opt) {
  if (!opt.summary.empty()) return opt.summary;
  fs::path p = opt.out;
  p.replace_extension(".json");
  return p;
}

json cmd_fields(const Options& opt, const DotParams& p) {
  const Picture picture = parse_picture(opt.picture);
  ExperimentOptions ex;
  ex.trace_points = opt.points;
  const DriveSchedule schedule(p);
  const PulseTrace x = trace(p, ex.trace_points);

  std::optional<CdFieldTrace> y;
  std::optional<RotatedTrace> rot;
  std::optional<XOnlyFields> xn;
  if (picture == Picture::total) y = cd_field_synthesis(schedule, x.grid);
  if (picture == Picture::rotated) {
    rot = rotated_trace(p, ex);
    xn = synthesize_x_only_fields(*rot, p);
  }

  CsvWriter csv({"t_ns", "uL", "uR", "Y", "Z", "X", "Q", "phi", "dphi", "eps_xL", "eps_xR",
                 "eps_yD", "eps_xnL", "eps_xnR"});
  for (std::size_t i = 0; i < x.grid.size(); ++i) {
    const double t = x.grid[i];
    const auto c = schedule.reference(t);
    std::vector<std::optional<double>> row(14);
    row[0] = t;
    row[1] = x.uL[i];
    row[2] = x.uR[i];
    row[3] = c.Y;
    row[4] = c.Z;
    if (picture != Picture::rotated) {
      row[9] = x.epsL[i];
      row[10] = x.epsR[i];
    }
    if (y) {
      row[5] = y->vD[i];
      row[11] = y->epsD[i];
    }
    if (rot) {
      row[5] = counterdiabatic_coefficient(c.Y, c.Z, c.dY, c.dZ);
      row[6] = rot->Q[i];
      row[7] = rot->phi[i];
      row[8] = rot->dphi[i];
      row[12] = xn->epsL[i];
      row[13] = xn->epsR[i];
    }
    csv.row(row);
  }
  csv.save(opt.out);

  json j;
  j["picture"] = std::string(to_string(picture));
  if (xn) j["eps_max"] = xn->max_field();
  return j;
}

json cmd_evolve(const Options& opt, const DotParams& p) {
  const Picture picture = parse_picture(opt.picture);
  if (opt.gamma < 0.0) throw NegativeRateError("--gamma must be non-negative");
  ExperimentOptions ex;
  ex.trace_points = opt.points;

  CsvWriter csv({"t_ns", "rx", "ry", "rz", "pop1", "norm_drift"});
  double fid = 0.0, drift = 0.0;
  if (opt.gamma == 0.0) {
    const auto tr = evolve_unitary(p, picture, ex);
    for (std::size_t i = 0; i < tr.grid.size(); ++i) {
      const auto r = to_bloch(tr.states[i]);
      csv.row({tr.grid[i], r.x(), r.y(), r.z(), fidelity(tr.states[i]),
               tr.states[i].squaredNorm() - 1.0});
    }
    fid = tr.fidelity;
    drift = tr.max_norm_drift;
  } else {
    const auto tr = evolve_dephasing(p, picture, opt.gamma, ex);
    for (std::size_t i = 0; i < tr.grid.size(); ++i) {
      const auto& r = tr.states[i];
      csv.row({tr.grid[i], r.x(), r.y(), r.z(), fidelity(r),
               r.norm() - std::exp(-4.0 * opt.gamma * tr.grid[i])});
    }
    fid = tr.fidelity;
    drift = tr.max_norm_drift;
  }
  csv.save(opt.out);

  json j;
  j["picture"] = std::string(to_string(picture));
  j["gamma"] = opt.gamma;
  j["fidelity"] = fid;
  j["max_norm_drift"] = drift;
  return j;
}

json cmd_sweep(const Options& opt, const DotParams& p) {
  if (opt.kind != "tf" && opt.kind != "gamma" && opt.kind != "lambda") {
    throw UsageError("--kind must be tf, gamma or lambda");
  }
  std::vector<double> values;
  if (opt.range.empty()) {
    values = opt.kind == "tf"      ? default_tf_values()
             : opt.kind == "gamma" ? default_gamma_values()
                                   : default_lambda_values();
  } else {
    const Range r = parse_range(opt.range);
    values = numerics::spaced(r.start, r.stop, r.count, r.log);
  }
  ExperimentOptions ex;
  ex.trace_points = opt.points;
  json j;
  j["kind"] = opt.kind;

  if (opt.kind == "tf") {
    const auto result = sweep_operation_time(p, values, ex);
    CsvWriter csv({"tf_ns", "eps_max"});
    for (std::size_t i = 0; i < values.size(); ++i) {
      csv.row({result.parameter_values[i], result.observable_values[i]});
    }
    csv.save(opt.out);
    if (result.fit) {
      j["slope"] = result.fit->slope;
      j["intercept"] = result.fit->intercept;
      j["r_squared"] = result.fit->r_squared;
    }
    return j;
  }

  const auto tfs = opt.tf_list.empty() ? default_comparison_tfs() : opt.tf_list;
  const auto results = opt.kind == "gamma" ? sweep_dephasing(p, values, tfs, ex)
                                           : sweep_systematic_error(p, values, tfs, ex);
  CsvWriter csv({"tf_ns", opt.kind, "fidelity"});
  json peaks = json::array();
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    std::size_t best = 0;
    for (std::size_t i = 0; i < r.parameter_values.size(); ++i) {
      csv.row({tfs[k], r.parameter_values[i], r.observable_values[i]});
      if (r.observable_values[i] > r.observable_values[best]) best = i;
    }
    if (!r.parameter_values.empty()) {
      peaks.push_back({{"tf_ns", tfs[k]},
                       {opt.kind, r.parameter_values[best]},
                       {"fidelity", r.observable_values[best]}});
    }
  }
  csv.save(opt.out);
  j["tf_ns"] = tfs;
  j["peaks"] = peaks;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counter-diabatic singlet-triplet driving in a double quantum dot", kToolName};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "flat key = value parameter file")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", opt.overrides, "override a parameter, key=value (repeatable)");
    sub->add_option("--tf", opt.tf, "operation time in ns (overrides config)");
    sub->add_option("--out", opt.out, "output CSV path")->required();
    sub->add_option("--summary", opt.summary, "JSON summary path (default: <out>.json)");
    sub->add_option("--points", opt.points, "field-trace grid points")
        ->check(CLI::Range(std::size_t{5}, std::size_t{10'000'000}));
  };

  auto* fields = app.add_subcommand("fields", "write drive, coefficient and field traces");
  add_common(fields);
  fields->add_option("--picture", opt.picture, "reference|total|rotated")
      ->check(CLI::IsMember({"reference", "total", "rotated"}));

  auto* evolve = app.add_subcommand("evolve", "propagate from |-1> and report F");
  add_common(evolve);
  evolve->add_option("--picture", opt.picture, "reference|total|rotated")
      ->check(CLI::IsMember({"reference", "total", "rotated"}));
  evolve->add_option("--gamma", opt.gamma, "dephasing rate, 1/ns");

  auto* sweep = app.add_subcommand("sweep", "operation-time, dephasing or field-error sweep");
  add_common(sweep);
  sweep->add_option("--kind", opt.kind, "tf|gamma|lambda")
      ->required()
      ->check(CLI::IsMember({"tf", "gamma", "lambda"}));
  sweep->add_option("--range", opt.range, "start:stop:count[:log]");
  sweep->add_option("--tf-list", opt.tf_list, "operation times for gamma/lambda sweeps")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  CLI::App* active = app.get_subcommands().front();
  const std::string command = active->get_name();
  try {
    const DotParams params = resolve_params(opt);
    json summary;
    if (command == "fields") summary = cmd_fields(opt, params);
    else if (command == "evolve") summary = cmd_evolve(opt, params);
    else summary = cmd_sweep(opt, params);

    const fs::path json_path = summary_path(opt);
    summary["command"] = command;
    summary["tool"] = kToolName;
    summary["version"] = kVersion;
    summary["params"] = params_json(params);
    summary["files"] = {opt.out, json_path.string()};
    summary["duration_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ofstream file(json_path);
    file << summary.dump(2) << '\n';
    if (!file) throw UsageError("cannot write '" + json_path.string() + "'");
    out << summary.dump(2) << '\n';
    return kOk;
  } catch (const NormDriftError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kNormDrift;
  } catch (const ValidationError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kUsageOrConfig;
  } catch (const UsageError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kUsageOrConfig;
  } catch (const NegativeRateError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kUsageOrConfig;
  } catch (const GridError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kUsageOrConfig;
  } catch (const std::exception& e) {
    err << kToolName << ": numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back(kToolName);
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cdspin::cli
