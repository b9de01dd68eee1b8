#include "cargen/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "cargen/error.hpp"

namespace cargen {

std::string_view to_string(Side side) {
  switch (side) {
    case Side::femoral: return "femoral";
    case Side::pelvic: return "pelvic";
    case Side::generic: return "generic";
  }
  return "generic";
}

std::string_view to_string(Site site) {
  switch (site) {
    case Site::femoral: return "femoral";
    case Site::pelvic: return "pelvic";
    case Site::sacroiliac: return "sacroiliac";
    case Site::pubic: return "pubic";
  }
  return "femoral";
}

Side parse_side(std::string_view name) {
  if (name == "femoral") return Side::femoral;
  if (name == "pelvic") return Side::pelvic;
  if (name == "generic") return Side::generic;
  throw InputError("unknown side '" + std::string(name) + "' (expected femoral, pelvic or generic)");
}

Site parse_site(std::string_view name) {
  if (name == "femoral") return Site::femoral;
  if (name == "pelvic") return Site::pelvic;
  if (name == "sacroiliac") return Site::sacroiliac;
  if (name == "pubic") return Site::pubic;
  throw InputError("unknown site '" + std::string(name) + "' (expected femoral, pelvic, sacroiliac or pubic)");
}

void PipelineConfig::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("delta must be a positive finite distance");
  if (n_trim < 0) throw InputError("n_trim must be non-negative");
  if (!(contact_epsilon >= 0.0) || !std::isfinite(contact_epsilon)) {
    throw InputError("contact_epsilon must be a non-negative finite distance");
  }
  if (extrusion_trim && *extrusion_trim < 0) throw InputError("extrusion_trim must be non-negative");
  if (neighborhood && *neighborhood < 1) throw InputError("neighborhood must be at least 1");
  if (kappa_min && std::isnan(*kappa_min)) throw InputError("kappa_min must be a number");
  if (kappa_max && std::isnan(*kappa_max)) throw InputError("kappa_max must be a number");
  if (kappa_min && kappa_max && *kappa_min > *kappa_max) throw InputError("kappa_min must not exceed kappa_max");
  if (side == Side::femoral) {
    if (!neighborhood) throw InputError("femoral side requires neighborhood");
    if (!kappa_min || !kappa_max) throw InputError("femoral side requires kappa_min and kappa_max");
    if (!curvature_measure) throw InputError("femoral side requires curvature_measure");
  } else if (!extrusion_trim) {
    throw InputError(std::string(to_string(side)) + " side requires extrusion_trim");
  }
}

PipelineConfig default_config(Site site) {
  PipelineConfig c;
  switch (site) {
    case Site::femoral:
      c.side = Side::femoral;
      c.delta = 4.2;
      c.n_trim = 7;
      c.neighborhood = 20;
      c.kappa_min = 0.026;
      c.kappa_max = std::numeric_limits<double>::infinity();
      c.curvature_measure = CurvatureMeasure::mean;
      break;
    case Site::pelvic:
      c.side = Side::pelvic;
      c.delta = 3.0;
      c.n_trim = 2;
      break;
    case Site::sacroiliac:
      c.delta = 4.6;
      c.n_trim = 0;
      break;
    case Site::pubic:
      c.delta = 6.0;
      c.n_trim = 1;
      break;
  }
  // At least one layer so the extrusion subset is strictly smaller than the region.
  if (c.side != Side::femoral) c.extrusion_trim = std::max(1, c.n_trim);
  return c;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

namespace {

constexpr std::array<std::string_view, 10> kKeys = {
    "side",      "delta",     "n_trim",            "extrusion_trim", "neighborhood",
    "kappa_min", "kappa_max", "curvature_measure", "bounds_enabled", "contact_epsilon"};

template <class T, class F>
std::string opt(const std::optional<T>& v, F&& fmt) {
  return v ? fmt(*v) : std::string("-");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw InputError("config key '" + std::string(key) + "': invalid value '" + std::string(value) + "' (expected " +
                   std::string(expected) + ")");
}

double parse_double(std::string_view key, const std::string& value) {
  if (value == "inf" || value == "+inf") return std::numeric_limits<double>::infinity();
  if (value == "-inf") return -std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || std::isnan(out)) {
    bad_value(key, value, "a number");
  }
  return out;
}

int parse_int(std::string_view key, const std::string& value) {
  int out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return out;
}

bool parse_bool(std::string_view key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad_value(key, value, "true or false");
}

}  // namespace

std::string format_config(const PipelineConfig& c) {
  const auto num = [](double v) { return format_number(v); };
  const auto integer = [](int v) { return std::to_string(v); };
  std::ostringstream out;
  out << "side = " << to_string(c.side) << '\n'
      << "delta = " << format_number(c.delta) << '\n'
      << "n_trim = " << c.n_trim << '\n'
      << "extrusion_trim = " << opt(c.extrusion_trim, integer) << '\n'
      << "neighborhood = " << opt(c.neighborhood, integer) << '\n'
      << "kappa_min = " << opt(c.kappa_min, num) << '\n'
      << "kappa_max = " << opt(c.kappa_max, num) << '\n'
      << "curvature_measure = "
      << opt(c.curvature_measure, [](CurvatureMeasure m) { return std::string(to_string(m)); }) << '\n'
      << "bounds_enabled = " << (c.bounds_enabled ? "true" : "false") << '\n'
      << "contact_epsilon = " << format_number(c.contact_epsilon) << '\n';
  return out.str();
}

PipelineConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> values;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw InputError("config line " + std::to_string(line_no) + ": missing value for '" + key + "'");
    if (!values.emplace(key, value).second) {
      throw InputError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  for (std::string_view key : kKeys) {
    if (!values.contains(key)) throw InputError("config is missing key '" + std::string(key) + "'");
  }

  const auto get = [&](std::string_view key) -> const std::string& { return values.find(key)->second; };
  const auto optional_value = [&](std::string_view key, auto parse) {
    const std::string& v = get(key);
    using T = decltype(parse(key, v));
    return v == "-" ? std::optional<T>{} : std::optional<T>{parse(key, v)};
  };

  PipelineConfig c;
  c.side = parse_side(get("side"));
  c.delta = parse_double("delta", get("delta"));
  c.n_trim = parse_int("n_trim", get("n_trim"));
  c.extrusion_trim = optional_value("extrusion_trim", parse_int);
  c.neighborhood = optional_value("neighborhood", parse_int);
  c.kappa_min = optional_value("kappa_min", parse_double);
  c.kappa_max = optional_value("kappa_max", parse_double);
  c.curvature_measure = optional_value(
      "curvature_measure", [](std::string_view, const std::string& v) { return parse_curvature_measure(v); });
  c.bounds_enabled = parse_bool("bounds_enabled", get("bounds_enabled"));
  c.contact_epsilon = parse_double("contact_epsilon", get("contact_epsilon"));
  c.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace cargen
