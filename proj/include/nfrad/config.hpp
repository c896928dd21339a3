#pragma once

// INI-style run configuration: `[section]` headers, `key = value` lines and
// `#` comments. Parsing collects every problem with its line number before
// reporting.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nfrad/materials.hpp"
#include "nfrad/planar.hpp"
#include "nfrad/quadrature.hpp"
#include "nfrad/blackbody_geometry.hpp"
#include "nfrad/transmissivity.hpp"

namespace nfrad {

enum class Mode { spectrum, heat_flux, conductance, pressure, viewfactor, bb_heat };

inline constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::spectrum, "spectrum"},       {Mode::heat_flux, "heat-flux"},   {Mode::conductance, "conductance"},
    {Mode::pressure, "pressure"},       {Mode::viewfactor, "viewfactor"}, {Mode::bb_heat, "bb-heat"}};

inline std::string_view to_string(Mode m) {
  for (const auto& [mode, name] : kModeNames)
    if (mode == m) return name;
  return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (const auto& [mode, name] : kModeNames)
    if (name == s) return mode;
  return std::nullopt;
}

inline bool is_planar(Mode m) {
  return m == Mode::spectrum || m == Mode::heat_flux || m == Mode::conductance || m == Mode::pressure;
}

struct Diagnostic {
  std::size_t line = 0;  // 0 when the problem is not tied to one line
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Diagnostic> diagnostics)
      : std::runtime_error(format(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string format(const std::vector<Diagnostic>& d) {
    std::string s;
    for (const auto& e : d) {
      if (!s.empty()) s += '\n';
      s += e.line ? "line " + std::to_string(e.line) + ": " + e.message : e.message;
    }
    return s;
  }
  std::vector<Diagnostic> diagnostics_;
};

struct SpectrumGrid {
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t points = 0;
  bool logarithmic = true;

  std::vector<double> omegas() const {
    std::vector<double> w(points);
    if (points == 1) {
      w[0] = omega_min;
      return w;
    }
    for (std::size_t i = 0; i < points; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(points - 1);
      w[i] = logarithmic ? omega_min * std::pow(omega_max / omega_min, f) : omega_min + f * (omega_max - omega_min);
    }
    w.back() = omega_max;
    return w;
  }
};

struct RunConfig {
  Mode mode = Mode::spectrum;
  GapSystem system;
  IntegrationSpec integration;
  SpectrumGrid grid;
  double temperature = 0.0;  // conductance
  int source_body = 1;       // pressure
  std::string mesh1, mesh2;  // resolved paths
  int quad_order = 4;
  double mesh_t1 = 0.0, mesh_t2 = 0.0;
  std::string out_dir = ".";
};

namespace detail {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class ConfigReader {
 public:
  explicit ConfigReader(std::filesystem::path base) : base_(std::move(base)) {}

  std::vector<Diagnostic> errors;

  void error(std::size_t line, std::string msg) { errors.push_back({line, std::move(msg)}); }

  std::vector<Section> split(std::string_view text) {
    std::vector<Section> sections;
    std::size_t line_no = 0, pos = 0;
    while (pos < text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view raw = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          error(line_no, "malformed section header");
          continue;
        }
        const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
        for (const auto& s : sections)
          if (s.name == name) error(line_no, "duplicate section [" + name + "]");
        sections.push_back({name, line_no, {}});
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        error(line_no, "expected 'key = value'");
        continue;
      }
      if (sections.empty()) {
        error(line_no, "key outside of any section");
        continue;
      }
      Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
      if (e.key.empty()) {
        error(line_no, "empty key");
        continue;
      }
      sections.back().entries.push_back(std::move(e));
    }
    return sections;
  }

  std::optional<double> number(const Entry& e, const std::string& section) {
    double v = 0.0;
    std::string_view s = e.value;
    if (s.size() > 1 && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      error(e.line, "[" + section + "] " + e.key + ": expected a finite number, got '" + e.value + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> positive(const Entry& e, const std::string& section) {
    auto v = number(e, section);
    if (v && !(*v > 0.0)) {
      error(e.line, "[" + section + "] " + e.key + " must be > 0 (got " + e.value + ")");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> non_negative(const Entry& e, const std::string& section) {
    auto v = number(e, section);
    if (v && *v < 0.0) {
      error(e.line, "[" + section + "] " + e.key + " must be >= 0 (got " + e.value + ")");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> integer(const Entry& e, const std::string& section) {
    long long v = 0;
    const auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (res.ec != std::errc() || res.ptr != e.value.data() + e.value.size()) {
      error(e.line, "[" + section + "] " + e.key + ": expected an integer, got '" + e.value + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::vector<double>> numbers(const Entry& e, const std::string& section, std::size_t count) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(e.value);
    while (std::getline(ss, item, ',')) {
      Entry part{e.key, trim(item), e.line};
      auto v = number(part, section);
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    if (out.size() != count) {
      error(e.line, "[" + section + "] " + e.key + ": expected " + std::to_string(count) + " comma-separated numbers");
      return std::nullopt;
    }
    return out;
  }

  std::string existing_file(const Entry& e, const std::string& section) {
    std::filesystem::path p(e.value);
    if (p.is_relative()) p = base_ / p;
    if (!std::filesystem::is_regular_file(p)) error(e.line, "[" + section + "] " + e.key + ": file '" + e.value + "' does not exist");
    return p.string();
  }

  // Parses the material description held in a [bodyN] or [bodyN.film.K] section.
  // Keys consumed here are removed from `keys`.
  std::optional<Material> material(const Section& sec, std::vector<const Entry*>& keys) {
    const Entry* kind = take(keys, "material");
    if (!kind) {
      error(sec.line, "[" + sec.name + "] is missing 'material'");
      return std::nullopt;
    }
    const std::string& m = kind->value;
    auto num_or = [&](const char* key, double fallback) -> std::optional<double> {
      const Entry* e = take(keys, key);
      return e ? number(*e, sec.name) : std::optional<double>(fallback);
    };
    try {
      if (m == "constant") {
        auto er = num_or("eps_re", 1.0), ei = num_or("eps_im", 0.0), mr = num_or("mu_re", 1.0), mi = num_or("mu_im", 0.0);
        if (!er || !ei || !mr || !mi) return std::nullopt;
        return Material::constant({*er, *ei}, {*mr, *mi});
      }
      if (m == "drude") {
        auto einf = num_or("eps_inf", 1.0), mr = num_or("mu_re", 1.0), mi = num_or("mu_im", 0.0);
        const Entry* wp = take(keys, "omega_p");
        const Entry* g = take(keys, "gamma");
        if (!wp || !g) {
          error(kind->line, "[" + sec.name + "] drude material needs omega_p and gamma");
          return std::nullopt;
        }
        auto wpv = number(*wp, sec.name), gv = number(*g, sec.name);
        if (!einf || !mr || !mi || !wpv || !gv) return std::nullopt;
        return Material::drude(*einf, *wpv, *gv, {*mr, *mi});
      }
      if (m == "lorentz") {
        auto einf = num_or("eps_inf", 1.0), minf = num_or("mu_inf", 1.0);
        std::vector<Oscillator> eps_terms, mu_terms;
        bool ok = einf && minf;
        for (auto [key, dst] : {std::pair{"eps_oscillator", &eps_terms}, std::pair{"mu_oscillator", &mu_terms}}) {
          while (const Entry* e = take(keys, key)) {
            auto v = numbers(*e, sec.name, 3);
            if (!v) {
              ok = false;
              continue;
            }
            dst->push_back({(*v)[0], (*v)[1], (*v)[2]});
          }
        }
        if (!ok) return std::nullopt;
        return Material::lorentz(*einf, std::move(eps_terms), *minf, std::move(mu_terms));
      }
      if (m == "tabulated") {
        std::vector<DispersionSample> samples;
        std::vector<std::size_t> lines;
        bool ok = true;
        while (const Entry* e = take(keys, "sample")) {
          auto v = numbers(*e, sec.name, 5);
          if (!v) {
            ok = false;
            continue;
          }
          samples.push_back({(*v)[0], {(*v)[1], (*v)[2]}, {(*v)[3], (*v)[4]}});
          lines.push_back(e->line);
        }
        if (const Entry* f = take(keys, "table_file")) {
          const std::string path = existing_file(*f, sec.name);
          std::ifstream in(path);
          std::string row;
          while (in && std::getline(in, row)) {
            if (const auto h = row.find('#'); h != std::string::npos) row.resize(h);
            std::replace(row.begin(), row.end(), ',', ' ');
            std::istringstream rs(row);
            DispersionSample s;
            double er, ei, mr, mi;
            if (!(rs >> s.omega)) continue;
            if (!(rs >> er >> ei >> mr >> mi)) {
              error(f->line, "[" + sec.name + "] table_file: malformed row '" + row + "'");
              ok = false;
              break;
            }
            s.eps = {er, ei};
            s.mu = {mr, mi};
            samples.push_back(s);
            lines.push_back(f->line);
          }
        }
        if (!ok) return std::nullopt;
        for (std::size_t i = 1; i < samples.size(); ++i) {
          if (!(samples[i].omega > samples[i - 1].omega)) {
            error(lines[i], "[" + sec.name + "] non-monotonic table (omega must strictly increase)");
            return std::nullopt;
          }
        }
        return Material::tabulated(std::move(samples));
      }
      if (m == "black") return Material::black();
      error(kind->line, "[" + sec.name + "] unknown material '" + m + "' (constant, drude, lorentz, tabulated, black)");
    } catch (const MaterialError& ex) {
      error(kind->line, "[" + sec.name + "] " + ex.what());
    }
    return std::nullopt;
  }

  static const Entry* take(std::vector<const Entry*>& keys, std::string_view key) {
    auto it = std::find_if(keys.begin(), keys.end(), [&](const Entry* e) { return e->key == key; });
    if (it == keys.end()) return nullptr;
    const Entry* e = *it;
    keys.erase(it);
    return e;
  }

  void reject_leftovers(const Section& sec, const std::vector<const Entry*>& keys) {
    for (const Entry* e : keys) error(e->line, "[" + sec.name + "] unknown key '" + e->key + "'");
  }

 private:
  std::filesystem::path base_;
};

inline std::vector<const Entry*> entries_of(const Section& s) {
  std::vector<const Entry*> out;
  for (const auto& e : s.entries) out.push_back(&e);
  return out;
}

}  // namespace detail

/// Parses and validates a configuration. `base_dir` resolves relative file
/// paths; `mode_override` replaces the [output] mode before mode-specific
/// checks. Throws ConfigError carrying every problem found.
inline RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".",
                              std::optional<Mode> mode_override = std::nullopt) {
  using detail::Entry;
  using detail::Section;
  detail::ConfigReader rd(base_dir);
  const auto sections = rd.split(text);
  RunConfig cfg;

  const Section* gap = nullptr;
  const Section* bodies[2] = {nullptr, nullptr};
  std::map<long long, const Section*> films[2];
  const Section* integration = nullptr;
  const Section* output = nullptr;
  const Section* geometry = nullptr;

  for (const auto& s : sections) {
    if (s.name == "gap") gap = &s;
    else if (s.name == "body1") bodies[0] = &s;
    else if (s.name == "body2") bodies[1] = &s;
    else if (s.name == "integration") integration = &s;
    else if (s.name == "output") output = &s;
    else if (s.name == "geometry") geometry = &s;
    else if ((s.name.rfind("body1.film.", 0) == 0 || s.name.rfind("body2.film.", 0) == 0)) {
      const int b = s.name[4] - '1';
      const std::string idx = s.name.substr(11);
      long long k = 0;
      const auto res = std::from_chars(idx.data(), idx.data() + idx.size(), k);
      if (res.ec != std::errc() || res.ptr != idx.data() + idx.size() || k < 1)
        rd.error(s.line, "film sections are named [bodyN.film.K] with K = 1, 2, ...");
      else
        films[b][k] = &s;
    } else {
      rd.error(s.line, "unknown section [" + s.name + "]");
    }
  }

  // [output]
  bool have_mode = false;
  bool have_grid[3] = {false, false, false};
  bool have_temperature = false;
  if (output) {
    auto keys = detail::entries_of(*output);
    for (const Entry* e : keys) {
      const std::string& sec = output->name;
      if (e->key == "mode") {
        if (auto m = parse_mode(e->value)) {
          cfg.mode = *m;
          have_mode = true;
        } else {
          rd.error(e->line, "[output] unknown mode '" + e->value + "'");
        }
      } else if (e->key == "directory") {
        cfg.out_dir = e->value;
      } else if (e->key == "omega_min") {
        if (auto v = rd.positive(*e, sec)) cfg.grid.omega_min = *v, have_grid[0] = true;
      } else if (e->key == "omega_max") {
        if (auto v = rd.positive(*e, sec)) cfg.grid.omega_max = *v, have_grid[1] = true;
      } else if (e->key == "omega_points") {
        if (auto v = rd.integer(*e, sec)) {
          if (*v < 1) rd.error(e->line, "[output] omega_points must be >= 1");
          else cfg.grid.points = static_cast<std::size_t>(*v), have_grid[2] = true;
        }
      } else if (e->key == "omega_spacing") {
        if (e->value == "log") cfg.grid.logarithmic = true;
        else if (e->value == "linear") cfg.grid.logarithmic = false;
        else rd.error(e->line, "[output] omega_spacing must be 'log' or 'linear'");
      } else if (e->key == "temperature") {
        if (auto v = rd.positive(*e, sec)) cfg.temperature = *v, have_temperature = true;
      } else if (e->key == "source_body") {
        if (auto v = rd.integer(*e, sec)) {
          if (*v != 1 && *v != 2) rd.error(e->line, "[output] source_body must be 1 or 2");
          else cfg.source_body = static_cast<int>(*v);
        }
      } else {
        rd.error(e->line, "[output] unknown key '" + e->key + "'");
      }
    }
  }
  if (mode_override) {
    cfg.mode = *mode_override;
    have_mode = true;
  }
  if (!have_mode) rd.error(output ? output->line : 0, "no mode given ([output] mode or --mode)");

  // [integration]
  bool have_window[2] = {false, false};
  double window[2] = {0.0, 0.0};
  if (integration) {
    for (const Entry* e : detail::entries_of(*integration)) {
      const std::string& sec = integration->name;
      if (e->key == "relative_tolerance") {
        if (auto v = rd.positive(*e, sec)) cfg.integration.relative = *v;
      } else if (e->key == "absolute_tolerance") {
        if (auto v = rd.non_negative(*e, sec)) cfg.integration.absolute = *v;
      } else if (e->key == "max_subdivisions") {
        if (auto v = rd.integer(*e, sec)) {
          if (*v < 1) rd.error(e->line, "[integration] max_subdivisions must be >= 1");
          else cfg.integration.max_subdivisions = static_cast<std::size_t>(*v);
        }
      } else if (e->key == "omega_min") {
        if (auto v = rd.positive(*e, sec)) window[0] = *v, have_window[0] = true;
      } else if (e->key == "omega_max") {
        if (auto v = rd.positive(*e, sec)) window[1] = *v, have_window[1] = true;
      } else if (e->key == "threads") {
        if (auto v = rd.integer(*e, sec)) {
          if (*v < 1) rd.error(e->line, "[integration] threads must be >= 1");
          else cfg.integration.threads = static_cast<unsigned>(*v);
        }
      } else {
        rd.error(e->line, "[integration] unknown key '" + e->key + "'");
      }
    }
    if (have_window[0] != have_window[1]) {
      rd.error(integration->line, "[integration] omega_min and omega_max must be given together");
    } else if (have_window[0]) {
      if (!(window[0] < window[1])) rd.error(integration->line, "[integration] omega_min must be < omega_max");
      else cfg.integration.window = std::pair{window[0], window[1]};
    }
  }

  // Planar system sections.
  const bool planar = is_planar(cfg.mode);
  bool have_body_t[2] = {false, false};
  if (gap) {
    for (const Entry* e : detail::entries_of(*gap)) {
      if (e->key == "width") {
        if (auto v = rd.positive(*e, gap->name)) cfg.system.gap = *v;
      } else {
        rd.error(e->line, "[gap] unknown key '" + e->key + "'");
      }
    }
  }
  for (int b = 0; b < 2; ++b) {
    Material terminal = Material::vacuum();
    if (bodies[b]) {
      auto keys = detail::entries_of(*bodies[b]);
      if (const Entry* t = detail::ConfigReader::take(keys, "temperature")) {
        if (auto v = rd.non_negative(*t, bodies[b]->name)) {
          (b == 0 ? cfg.system.t1 : cfg.system.t2) = *v;
          have_body_t[b] = true;
        }
      }
      if (auto m = rd.material(*bodies[b], keys)) terminal = *m;
      rd.reject_leftovers(*bodies[b], keys);
    }
    std::vector<Film> stack_films;
    long long expect = 1;
    for (const auto& [k, sec] : films[b]) {
      if (!bodies[b]) rd.error(sec->line, "[" + sec->name + "] has no matching [body" + std::to_string(b + 1) + "]");
      if (k != expect) rd.error(sec->line, "film sections must be numbered 1, 2, ... without gaps");
      expect = k + 1;
      auto keys = detail::entries_of(*sec);
      double thickness = 0.0;
      if (const Entry* t = detail::ConfigReader::take(keys, "thickness")) {
        if (auto v = rd.positive(*t, sec->name)) thickness = *v;
      } else {
        rd.error(sec->line, "[" + sec->name + "] is missing 'thickness'");
      }
      auto m = rd.material(*sec, keys);
      if (m && m->is_black()) rd.error(sec->line, "[" + sec->name + "] black material is only allowed as the terminal medium");
      rd.reject_leftovers(*sec, keys);
      if (m) stack_films.push_back({*m, thickness});
    }
    LayerStack stack;
    try {
      stack = LayerStack(terminal, stack_films);
    } catch (const std::exception&) {
      // already reported per film
    }
    (b == 0 ? cfg.system.body1 : cfg.system.body2) = stack;
  }

  // [geometry]
  if (geometry) {
    for (const Entry* e : detail::entries_of(*geometry)) {
      const std::string& sec = geometry->name;
      if (e->key == "mesh1") cfg.mesh1 = rd.existing_file(*e, sec);
      else if (e->key == "mesh2") cfg.mesh2 = rd.existing_file(*e, sec);
      else if (e->key == "quad_order") {
        if (auto v = rd.integer(*e, sec)) {
          const auto& orders = kTriangleRuleOrders;
          if (std::find(std::begin(orders), std::end(orders), *v) == std::end(orders))
            rd.error(e->line, "[geometry] quad_order must be one of 1, 3, 4, 6, 7, 12");
          else cfg.quad_order = static_cast<int>(*v);
        }
      } else if (e->key == "t1") {
        if (auto v = rd.non_negative(*e, sec)) cfg.mesh_t1 = *v;
      } else if (e->key == "t2") {
        if (auto v = rd.non_negative(*e, sec)) cfg.mesh_t2 = *v;
      } else {
        rd.error(e->line, "[geometry] unknown key '" + e->key + "'");
      }
    }
  }

  // Mode requirements.
  if (have_mode) {
    const std::string mode_name(to_string(cfg.mode));
    if (planar) {
      if (!gap) rd.error(0, "missing section [gap] (required by mode " + mode_name + ")");
      else if (!(cfg.system.gap > 0.0) && rd.errors.empty()) rd.error(gap->line, "[gap] width is required");
      for (int b = 0; b < 2; ++b)
        if (!bodies[b]) rd.error(0, "missing section [body" + std::to_string(b + 1) + "] (required by mode " + mode_name + ")");
    }
    if (cfg.mode == Mode::spectrum && !(have_grid[0] && have_grid[1] && have_grid[2]))
      rd.error(output ? output->line : 0, "mode spectrum needs [output] omega_min, omega_max and omega_points");
    if (cfg.mode == Mode::spectrum && have_grid[0] && have_grid[1] && cfg.grid.omega_min > cfg.grid.omega_max)
      rd.error(output->line, "[output] omega_min must be <= omega_max");
    if (cfg.mode == Mode::heat_flux) {
      for (int b = 0; b < 2; ++b)
        if (bodies[b] && !have_body_t[b]) rd.error(bodies[b]->line, "[body" + std::to_string(b + 1) + "] temperature is required by mode heat-flux");
      if (have_body_t[0] && have_body_t[1] && cfg.system.t1 == 0.0 && cfg.system.t2 == 0.0)
        rd.error(bodies[0]->line, "heat-flux needs at least one non-zero temperature");
    }
    if (cfg.mode == Mode::conductance && !have_temperature)
      rd.error(output ? output->line : 0, "mode conductance needs [output] temperature");
    if (cfg.mode == Mode::pressure) {
      const int b = cfg.source_body - 1;
      if (bodies[b] && !have_body_t[b])
        rd.error(bodies[b]->line, "[body" + std::to_string(b + 1) + "] temperature is required as the pressure source");
    }
    if (cfg.mode == Mode::viewfactor || cfg.mode == Mode::bb_heat) {
      if (!geometry) rd.error(0, "missing section [geometry] (required by mode " + mode_name + ")");
      else if (cfg.mesh1.empty() || cfg.mesh2.empty()) rd.error(geometry->line, "[geometry] needs mesh1 and mesh2");
    }
  }

  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return cfg;
}

}  // namespace nfrad
