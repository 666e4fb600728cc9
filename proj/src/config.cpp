#include "cdspin/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cdspin/errors.hpp"

namespace cdspin {

namespace {

double* field_ptr(DotParams& p, std::string_view key) {
  if (key == "J") return &p.J;
  if (key == "g") return &p.g;
  if (key == "B") return &p.B;
  if (key == "A0_beta") return &p.A0_beta;
  if (key == "A0_alpha") return &p.A0_alpha;
  if (key == "a_L") return &p.a_L;
  if (key == "a_R") return &p.a_R;
  if (key == "w_L") return &p.w_L;
  if (key == "w_R") return &p.w_R;
  if (key == "t_f") return &p.t_f;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ValidationError("invalid number for '" + std::string(key) + "': '" + std::string(text) +
                          "'");
  }
  return value;
}

double auto_beta(const DotParams& p) {
  return std::abs(p.J + zeeman_splitting(p.g, p.B)) / units::kHbar / 2.0;
}

}  // namespace

DotParams DotParams::defaults() {
  DotParams p;
  p.A0_beta = auto_beta(p);
  p.A0_alpha = kDefaultA0Alpha;
  return p;
}

DotParams DotParams::with_tf(double t_f) const {
  DotParams p = *this;
  p.t_f = t_f;
  return p;
}

double zeeman_splitting(double g, double B) { return g * units::kBohrMagneton * B; }

double two_level_ratio(const DotParams& params) {
  return std::abs(params.J + zeeman_splitting(params.g, params.B)) / params.J;
}

void validate(const DotParams& p) {
  for (auto name : param_names()) {
    if (!std::isfinite(get_param(p, name))) {
      throw ValidationError("parameter '" + std::string(name) + "' is not finite");
    }
  }
  if (!(p.J > 0.0)) throw ValidationError("J must be positive");
  if (!(p.t_f > 0.0)) throw ValidationError("t_f must be positive");
  if (!(p.w_L > 0.0) || !(p.w_R > 0.0)) throw ValidationError("pulse widths must be positive");
  const double ratio = two_level_ratio(p);
  if (ratio > kMaxTwoLevelRatio) {
    std::ostringstream msg;
    msg << "|J + Delta|/J = " << ratio << " exceeds " << kMaxTwoLevelRatio
        << "; the two-level reduction does not hold";
    throw ValidationError(msg.str());
  }
}

ReducedConstants reduce(const DotParams& params) {
  validate(params);
  ReducedConstants rc;
  rc.Delta = zeeman_splitting(params.g, params.B);
  rc.Z0 = -(params.J + rc.Delta) / rc.hbar;
  return rc;
}

const std::vector<std::string_view>& param_names() {
  static const std::vector<std::string_view> names = {
      "J", "g", "B", "A0_beta", "A0_alpha", "a_L", "a_R", "w_L", "w_R", "t_f"};
  return names;
}

void set_param(DotParams& params, std::string_view key, std::string_view value) {
  double* field = field_ptr(params, key);
  if (field == nullptr) throw ValidationError("unknown parameter '" + std::string(key) + "'");
  value = trim(value);
  if (key == "A0_beta" && value == "auto") {
    *field = auto_beta(params);
    return;
  }
  *field = parse_number(key, value);
}

double get_param(const DotParams& params, std::string_view key) {
  double* field = field_ptr(const_cast<DotParams&>(params), key);
  if (field == nullptr) throw ValidationError("unknown parameter '" + std::string(key) + "'");
  return *field;
}

DotParams parse_config(std::istream& in) {
  std::map<std::string, std::string, std::less<>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = std::string(trim(view.substr(0, eq)));
    const auto value = std::string(trim(view.substr(eq + 1)));
    if (DotParams probe; field_ptr(probe, key) == nullptr) {
      throw ValidationError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!entries.emplace(key, value).second) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  DotParams p;
  for (auto name : param_names()) {
    if (!entries.contains(name)) {
      throw ValidationError("missing key '" + std::string(name) + "'");
    }
  }
  // A0_beta may be "auto", which depends on J, g and B; set it last.
  for (auto name : param_names()) {
    if (name != "A0_beta") set_param(p, name, entries.find(name)->second);
  }
  set_param(p, "A0_beta", entries.find("A0_beta")->second);
  validate(p);
  return p;
}

DotParams load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

std::string format_config(const DotParams& params) {
  std::string out;
  char buf[64];
  for (auto name : param_names()) {
    std::snprintf(buf, sizeof buf, "%.17g", get_param(params, name));
    out += std::string(name) + " = " + buf + "\n";
  }
  return out;
}

}  // namespace cdspin
