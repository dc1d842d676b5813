#include "fraclab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "fraclab/core.hpp"

namespace fraclab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view name, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("key '" + std::string(name) + "': cannot parse '" + std::string(text) + "' as a number");
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view name, std::string_view text) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_number<T>(name, text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
std::string format_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

struct Binding {
  ConfigKey key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Binding make_binding(std::string_view section, std::string_view name, T RunConfig::*member) {
  Binding b{{section, name}, {}, {}};
  b.set = [member, name](RunConfig& c, std::string_view v) {
    if constexpr (std::is_same_v<T, std::string>)
      c.*member = std::string(trim(v));
    else if constexpr (std::is_same_v<T, std::vector<int>> || std::is_same_v<T, std::vector<double>>)
      c.*member = parse_list<typename T::value_type>(name, v);
    else
      c.*member = parse_number<T>(name, v);
  };
  b.get = [member](const RunConfig& c) {
    if constexpr (std::is_same_v<T, std::string>)
      return c.*member;
    else if constexpr (std::is_same_v<T, std::vector<int>> || std::is_same_v<T, std::vector<double>>)
      return format_list(c.*member);
    else if constexpr (std::is_floating_point_v<T>)
      return format_double(c.*member);
    else
      return std::to_string(c.*member);
  };
  return b;
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table{
      make_binding("run", "command", &RunConfig::command),
      make_binding("run", "seed", &RunConfig::seed),
      make_binding("run", "samples", &RunConfig::samples),
      make_binding("run", "output_dir", &RunConfig::output_dir),
      make_binding("run", "method", &RunConfig::method),
      make_binding("run", "grid_h", &RunConfig::grid_h),
      make_binding("geometry", "domain", &RunConfig::domain),
      make_binding("geometry", "level", &RunConfig::level),
      make_binding("geometry", "radius", &RunConfig::radius),
      make_binding("geometry", "width", &RunConfig::width),
      make_binding("geometry", "height", &RunConfig::height),
      make_binding("geometry", "teeth", &RunConfig::teeth),
      make_binding("sobolev", "s", &RunConfig::s),
      make_binding("sobolev", "p", &RunConfig::p),
      make_binding("sobolev", "field", &RunConfig::field),
      make_binding("sobolev", "field_a", &RunConfig::field_a),
      make_binding("sobolev", "field_b", &RunConfig::field_b),
      make_binding("sobolev", "n_grid", &RunConfig::n_grid),
      make_binding("tube", "r", &RunConfig::r),
      make_binding("tube", "r_min", &RunConfig::r_min),
      make_binding("tube", "r_max", &RunConfig::r_max),
      make_binding("tube", "scales", &RunConfig::scales),
      make_binding("dimension", "centers", &RunConfig::centers),
      make_binding("dimension", "kappa", &RunConfig::kappa),
      make_binding("scaling", "phi", &RunConfig::phi),
      make_binding("scaling", "phi_exponent", &RunConfig::phi_exponent),
      make_binding("scaling", "phi_t", &RunConfig::phi_t),
      make_binding("scaling", "phi_values", &RunConfig::phi_values),
      make_binding("scaling", "eta", &RunConfig::eta),
      make_binding("scaling", "H", &RunConfig::H),
      make_binding("scaling", "M", &RunConfig::M),
      make_binding("scaling", "eta0", &RunConfig::eta0),
      make_binding("scaling", "dimA", &RunConfig::dimA),
      make_binding("reduction", "R_loc", &RunConfig::R_loc),
  };
  return table;
}

const Binding& find_binding(std::string_view name) {
  for (const Binding& b : bindings())
    if (b.key.name == name) return b;
  throw ConfigError("unknown config key '" + std::string(name) + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const Binding& b : bindings()) out.push_back(b.key);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view name, std::string_view value) {
  find_binding(name).set(cfg, value);
}

std::string get_config_value(const RunConfig& cfg, std::string_view name) { return find_binding(name).get(cfg); }

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::string section;
  std::vector<std::string> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      const auto& keys = config_keys();
      if (std::none_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.section == section; }))
        throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string name(trim(line.substr(0, eq)));
    const Binding* binding = nullptr;
    try {
      binding = &find_binding(name);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
    if (section.empty()) throw ConfigError(where + "key '" + name + "' appears before any [section]");
    if (binding->key.section != section)
      throw ConfigError(where + "key '" + name + "' belongs to [" + std::string(binding->key.section) + "], not [" +
                        section + "]");
    if (std::find(seen.begin(), seen.end(), name) != seen.end())
      throw ConfigError(where + "duplicate key '" + name + "'");
    seen.push_back(name);
    binding->set(base, line.substr(eq + 1));
  }
  return base;
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string_view section;
  for (const Binding& b : bindings()) {
    if (b.key.section != section) {
      if (!section.empty()) out += "\n";
      section = b.key.section;
      out += "[" + std::string(section) + "]\n";
    }
    out += std::string(b.key.name) + " = " + b.get(cfg) + "\n";
  }
  return out;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& overrides) {
  for (const auto& [name, value] : overrides) set_config_value(cfg, name, value);
}

}  // namespace fraclab
