#include "intersim/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace intersim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view raw, const std::string& key, int line_no,
                    bool allow_inf = false) {
  const std::string v = lower(trim(raw));
  if (allow_inf && (v == "inf" || v == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    fail(line_no, key + ": not a number: '" + std::string(trim(raw)) + "'");
  }
}

std::uint64_t parse_u64(std::string_view raw, const std::string& key, int line_no) {
  const auto v = trim(raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(line_no, key + ": not an unsigned integer: '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view raw, const std::string& key, int line_no) {
  const std::string v = lower(trim(raw));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(line_no, key + ": not a boolean: '" + std::string(trim(raw)) + "'");
}

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg;
  std::string section;
  int line_no = 0;

  std::string_view rest = text;
  while (!rest.empty()) {
    ++line_no;
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = (nl == std::string_view::npos) ? std::string_view{} : rest.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section != "geometry" && section != "vehicle" && section != "traffic" &&
          section != "policy" && section != "run") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (section.empty()) fail(line_no, "key '" + key + "' appears before any [section]");
    const std::string qual = section + "." + key;

    if (section == "geometry") {
      if (key == "arm_length") cfg.geometry.arm_length = parse_double(value, qual, line_no);
      else if (key == "lane_width") cfg.geometry.lane_width = parse_double(value, qual, line_no);
      else fail(line_no, "unknown key '" + qual + "'");
    } else if (section == "vehicle") {
      if (key == "length") cfg.vehicle.length = parse_double(value, qual, line_no);
      else if (key == "width") cfg.vehicle.width = parse_double(value, qual, line_no);
      else if (key == "max_speed") cfg.vehicle.max_speed = parse_double(value, qual, line_no);
      else if (key == "max_accel") cfg.vehicle.max_accel = parse_double(value, qual, line_no);
      else if (key == "max_decel") cfg.vehicle.max_decel = parse_double(value, qual, line_no);
      else fail(line_no, "unknown key '" + qual + "'");
    } else if (section == "traffic") {
      if (key == "t1" || key == "t2" || key == "t3" || key == "t4") {
        const int slot = key[1] - '1';
        const double t = parse_double(value, qual, line_no, /*allow_inf=*/true);
        if (std::isnan(t) || !(t > 0.5)) {
          fail(line_no, qual + ": mean inter-arrival must exceed 0.5 s so the "
                        "uniform support [T-0.5, T+0.5] stays positive");
        }
        cfg.mean_interarrival[slot] = t;
      } else if (key == "spawn_window") {
        cfg.spawn_window = parse_double(value, qual, line_no);
      } else if (key == "seed") {
        cfg.seed = parse_u64(value, qual, line_no);
      } else {
        fail(line_no, "unknown key '" + qual + "'");
      }
    } else if (section == "policy") {
      if (key == "type") {
        const std::string v = lower(value);
        if (v == "light") cfg.policy = PolicyKind::Light;
        else if (v == "v2v") cfg.policy = PolicyKind::V2V;
        else fail(line_no, qual + ": expected 'light' or 'v2v'");
      } else if (key == "green") cfg.light.green = parse_double(value, qual, line_no);
      else if (key == "yellow") cfg.light.yellow = parse_double(value, qual, line_no);
      else if (key == "red") cfg.light.red = parse_double(value, qual, line_no);
      else if (key == "phase_origin") {
        const std::string v = lower(value);
        if (v == "ns" || v == "northsouth" || v == "north-south") {
          cfg.light.phase_origin = Axis::NorthSouth;
        } else if (v == "ew" || v == "eastwest" || v == "east-west") {
          cfg.light.phase_origin = Axis::EastWest;
        } else {
          fail(line_no, qual + ": expected 'ns' or 'ew'");
        }
      } else if (key == "margin") cfg.v2v_margin = parse_double(value, qual, line_no);
      else fail(line_no, "unknown key '" + qual + "'");
    } else if (section == "run") {
      if (key == "drain_cap") cfg.drain_cap = parse_double(value, qual, line_no);
      else if (key == "dt") cfg.dt = parse_double(value, qual, line_no);
      else if (key == "strict") cfg.strict = parse_bool(value, qual, line_no);
      else fail(line_no, "unknown key '" + qual + "'");
    }
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[geometry]\n";
  out << "arm_length = " << format_double(cfg.geometry.arm_length) << "\n";
  out << "lane_width = " << format_double(cfg.geometry.lane_width) << "\n";
  out << "\n[vehicle]\n";
  out << "length = " << format_double(cfg.vehicle.length) << "\n";
  out << "width = " << format_double(cfg.vehicle.width) << "\n";
  out << "max_speed = " << format_double(cfg.vehicle.max_speed) << "\n";
  out << "max_accel = " << format_double(cfg.vehicle.max_accel) << "\n";
  out << "max_decel = " << format_double(cfg.vehicle.max_decel) << "\n";
  out << "\n[traffic]\n";
  for (Direction d : kAllDirections) {
    out << "t" << index_of(d) << " = "
        << format_double(cfg.mean_interarrival[slot_of(d)]) << "\n";
  }
  out << "spawn_window = " << format_double(cfg.spawn_window) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "\n[policy]\n";
  out << "type = " << (cfg.policy == PolicyKind::Light ? "light" : "v2v") << "\n";
  out << "green = " << format_double(cfg.light.green) << "\n";
  out << "yellow = " << format_double(cfg.light.yellow) << "\n";
  out << "red = " << format_double(cfg.light.red) << "\n";
  out << "phase_origin = "
      << (cfg.light.phase_origin == Axis::NorthSouth ? "ns" : "ew") << "\n";
  out << "margin = " << format_double(cfg.v2v_margin) << "\n";
  out << "\n[run]\n";
  out << "drain_cap = " << format_double(cfg.drain_cap) << "\n";
  out << "dt = " << format_double(cfg.dt) << "\n";
  out << "strict = " << (cfg.strict ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace intersim
