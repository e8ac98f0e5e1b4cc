#pragma once

// Flat `key = value` configuration files. `#` starts a comment; unknown keys
// are rejected.
//
// Pipeline keys:
//   <c>.enabled, <c>.t50, <c>.tend, <c>.t0 (number or `none`)  for c in td ad sd piou pcd
//   bounds.L, bounds.U
//   cutter.enabled, cutter.t_tc
//   interp.enabled, interp.max_gap_size
//   endpoints.window, endpoints.min_length
// Synthetic scenario keys are prefixed `scenario.` and `corruption.`.

#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tracklet_assoc/mot_io.hpp"
#include "tracklet_assoc/pipeline.hpp"
#include "tracklet_assoc/scoring.hpp"
#include "tracklet_assoc/synth.hpp"

namespace tracklet_assoc {

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line{0};
};

inline std::vector<ConfigEntry> read_key_values(std::istream& in) {
  std::vector<ConfigEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = detail::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const auto key = detail::trim(body.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    out.push_back({std::string(key), std::string(detail::trim(body.substr(eq + 1))), line_no});
  }
  return out;
}

namespace detail {

inline bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return out = true, true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return out = false, true;
  return false;
}

using Setter = std::function<bool(std::string_view)>;

inline Setter set_double(double& target) {
  return [&target](std::string_view v) { return parse_double(v, target); };
}
inline Setter set_int(int& target) {
  return [&target](std::string_view v) { return parse_integral(v, target); };
}
inline Setter set_size(std::size_t& target) {
  return [&target](std::string_view v) {
    int x = 0;
    if (!parse_integral(v, x) || x < 0) return false;
    target = static_cast<std::size_t>(x);
    return true;
  };
}
inline Setter set_u64(std::uint64_t& target) {
  return [&target](std::string_view v) {
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), target);
    return ec == std::errc{} && ptr == v.data() + v.size();
  };
}
inline Setter set_bool(bool& target) {
  return [&target](std::string_view v) { return parse_bool(v, target); };
}
inline Setter set_optional(std::optional<double>& target) {
  return [&target](std::string_view v) {
    if (v == "none" || v.empty()) {
      target.reset();
      return true;
    }
    double x = 0.0;
    if (!parse_double(v, x)) return false;
    target = x;
    return true;
  };
}

inline void apply_entries(const std::vector<ConfigEntry>& entries,
                          const std::map<std::string, Setter, std::less<>>& setters) {
  for (const auto& e : entries) {
    const auto it = setters.find(e.key);
    if (it == setters.end()) throw ParseError(e.line, "unknown key '" + e.key + "'");
    if (!it->second(e.value)) throw ParseError(e.line, "invalid value for '" + e.key + "'");
  }
}

inline std::map<std::string, Setter, std::less<>> pipeline_setters(PipelineConfig& cfg) {
  std::map<std::string, Setter, std::less<>> s;
  for (const auto k : kAllConstraints) {
    auto& p = cfg.scores[k];
    const std::string name(key_of(k));
    s[name + ".enabled"] = set_bool(p.enabled);
    s[name + ".t50"] = set_double(p.t50);
    s[name + ".tend"] = set_double(p.tend);
    s[name + ".t0"] = set_optional(p.t0);
  }
  s["bounds.L"] = set_double(cfg.scores.bounds.lower);
  s["bounds.U"] = set_double(cfg.scores.bounds.upper);
  s["cutter.enabled"] = set_bool(cfg.cutter.enabled);
  s["cutter.t_tc"] = set_double(cfg.cutter.t_tc);
  s["interp.enabled"] = set_bool(cfg.interpolation.enabled);
  s["interp.max_gap_size"] = set_int(cfg.interpolation.max_gap_size);
  s["endpoints.window"] = set_size(cfg.endpoints.window);
  s["endpoints.min_length"] = set_size(cfg.endpoints.min_length);
  return s;
}

}  // namespace detail

// Starts from `base` (defaults unless given) and applies every entry.
inline PipelineConfig read_pipeline_config(std::istream& in, PipelineConfig base = {}) {
  const auto entries = read_key_values(in);
  detail::apply_entries(entries, detail::pipeline_setters(base));
  base.validate();
  return base;
}

inline void write_pipeline_config(std::ostream& out, const PipelineConfig& cfg) {
  using detail::format_number;
  for (const auto k : kAllConstraints) {
    const auto& p = cfg.scores[k];
    const auto name = key_of(k);
    out << name << ".enabled = " << (p.enabled ? "true" : "false") << '\n'
        << name << ".t50 = " << format_number(p.t50) << '\n'
        << name << ".tend = " << format_number(p.tend) << '\n'
        << name << ".t0 = " << (p.t0 ? format_number(*p.t0) : std::string("none")) << '\n';
  }
  out << "bounds.L = " << format_number(cfg.scores.bounds.lower) << '\n'
      << "bounds.U = " << format_number(cfg.scores.bounds.upper) << '\n'
      << "cutter.enabled = " << (cfg.cutter.enabled ? "true" : "false") << '\n'
      << "cutter.t_tc = " << format_number(cfg.cutter.t_tc) << '\n'
      << "interp.enabled = " << (cfg.interpolation.enabled ? "true" : "false") << '\n'
      << "interp.max_gap_size = " << cfg.interpolation.max_gap_size << '\n'
      << "endpoints.window = " << cfg.endpoints.window << '\n'
      << "endpoints.min_length = " << cfg.endpoints.min_length << '\n';
}

struct SynthConfig {
  ScenarioConfig scenario{};
  CorruptionConfig corruption{};
};

inline SynthConfig read_synth_config(std::istream& in, SynthConfig base = {}) {
  auto& sc = base.scenario;
  auto& cc = base.corruption;
  using namespace detail;
  const std::map<std::string, Setter, std::less<>> setters{
      {"scenario.num_objects", set_int(sc.num_objects)},
      {"scenario.num_frames", set_int(sc.num_frames)},
      {"scenario.fps", set_double(sc.fps)},
      {"scenario.img_width", set_int(sc.img_width)},
      {"scenario.img_height", set_int(sc.img_height)},
      {"scenario.box_width_min", set_double(sc.box_width_min)},
      {"scenario.box_width_max", set_double(sc.box_width_max)},
      {"scenario.aspect_min", set_double(sc.aspect_min)},
      {"scenario.aspect_max", set_double(sc.aspect_max)},
      {"scenario.speed_min", set_double(sc.speed_min)},
      {"scenario.speed_max", set_double(sc.speed_max)},
      {"scenario.turn_rate_max", set_double(sc.turn_rate_max)},
      {"scenario.crossings", set_int(sc.crossings)},
      {"scenario.seed", set_u64(sc.seed)},
      {"corruption.fragments_per_trajectory", set_int(cc.fragments_per_trajectory)},
      {"corruption.fragment_gap_min", set_int(cc.fragment_gap_min)},
      {"corruption.fragment_gap_max", set_int(cc.fragment_gap_max)},
      {"corruption.min_fragment_length", set_int(cc.min_fragment_length)},
      {"corruption.fragment_probability", set_double(cc.fragment_probability)},
      {"corruption.swap_probability", set_double(cc.swap_probability)},
      {"corruption.dropout_rate", set_double(cc.dropout_rate)},
      {"corruption.seed", set_u64(cc.seed)},
  };
  apply_entries(read_key_values(in), setters);
  sc.validate();
  cc.validate();
  return base;
}

}  // namespace tracklet_assoc
