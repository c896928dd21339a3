#pragma once

// Executes a parsed configuration and writes the CSV / summary outputs.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nfrad/blackbody_geometry.hpp"
#include "nfrad/config.hpp"
#include "nfrad/mesh.hpp"
#include "nfrad/spectral.hpp"
#include "nfrad/transmissivity.hpp"

namespace nfrad {

inline constexpr std::string_view kVersion = "0.3.1";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitQuadrature = 2, kExitRuntime = 3 };

inline constexpr std::string_view kSpectrumHeader =
    "omega_rad_s,Te_total,Te_prop_s,Te_prop_p,Te_evan_s,Te_evan_p,Tm_total,Tm_prop_s,Tm_prop_p,Tm_evan_s,Tm_evan_p";

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

namespace detail {

class Summary {
 public:
  void add(std::string key, std::string value) { lines_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value) { add(std::move(key), sci(value)); }

  std::string text() const {
    std::string out;
    for (const auto& [k, v] : lines_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + p.string() + "'");
}

inline void add_spectral(Summary& s, const SpectralResult& r) {
  s.add("error_estimate", r.error);
  s.add("omega_window_lo", r.omega_lo);
  s.add("omega_window_hi", r.omega_hi);
  s.add("frequency_converged", r.converged ? "true" : "false");
  s.add("wavevector_converged", r.inner_converged ? "true" : "false");
  s.add("transmissivity_evaluations", std::to_string(r.evaluations));
}

}  // namespace detail

/// Runs `cfg`, writing outputs under cfg.out_dir. `config_hash` identifies the
/// effective configuration in every output file.
inline RunResult run(const RunConfig& cfg, std::string_view config_hash, std::ostream& log = std::cerr) {
  RunResult result;
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const unsigned threads = std::max(1u, cfg.integration.threads);
  const std::string mode(to_string(cfg.mode));

  detail::Summary s;
  s.add("tool", "nfrad");
  s.add("version", std::string(kVersion));
  s.add("config_hash", std::string(config_hash));
  s.add("mode", mode);
  s.add("threads", std::to_string(threads));
  s.add("relative_tolerance", cfg.integration.relative);

  auto finish_summary = [&](bool ok) {
    s.add("status", ok ? "ok" : "partial");
    const fs::path p = dir / ("summary_" + mode + ".txt");
    detail::write_file(p, s.text());
    result.files.push_back(p);
    if (!ok) {
      result.exit_code = kExitQuadrature;
      log << "nfrad: quadrature did not converge; " << p.string() << " is labeled partial\n";
    }
  };

  switch (cfg.mode) {
    case Mode::spectrum: {
      const auto omegas = cfg.grid.omegas();
      struct Row {
        ChannelBreakdown te, tm;
      };
      std::vector<Row> rows(omegas.size());
      IntegrationSpec spec = cfg.integration;
      spec.threads = 1;
      auto work = [&](std::size_t i) {
        rows[i].te = energy_transmissivity_pp(cfg.system, omegas[i], spec);
        rows[i].tm = momentum_transmissivity_pp(cfg.system, omegas[i], spec);
      };
      if (threads <= 1) {
        for (std::size_t i = 0; i < omegas.size(); ++i) work(i);
      } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        for (unsigned t = 0; t < threads; ++t)
          pool.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < omegas.size(); i = next++) work(i);
          }));
        for (auto& f : pool) f.get();
      }
      std::vector<double> unconverged;
      std::string csv;
      csv += "# tool = nfrad " + std::string(kVersion) + "\n";
      csv += "# config_hash = " + std::string(config_hash) + "\n";
      csv += "# mode = spectrum\n";
      csv += "# threads = " + std::to_string(threads) + "\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].te.converged || !rows[i].tm.converged) unconverged.push_back(omegas[i]);
      csv += unconverged.empty() ? "# status = ok\n" : "# status = partial\n";
      for (double w : unconverged) csv += "# unconverged_omega = " + sci(w) + "\n";
      csv += std::string(kSpectrumHeader) + "\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [te, tm] = rows[i];
        for (double v : {omegas[i], te.total, te.prop_s, te.prop_p, te.evan_s, te.evan_p, tm.total, tm.prop_s, tm.prop_p,
                         tm.evan_s, tm.evan_p}) {
          csv += sci(v);
          csv += ',';
        }
        csv.back() = '\n';
      }
      const fs::path p = dir / "spectrum.csv";
      detail::write_file(p, csv);
      result.files.push_back(p);
      if (!unconverged.empty()) {
        result.exit_code = kExitQuadrature;
        log << "nfrad: " << unconverged.size() << " spectrum rows did not converge; see " << p.string() << "\n";
      }
      return result;
    }
    case Mode::heat_flux: {
      const SpectralResult r = heat_flux(cfg.system, cfg.integration);
      s.add("t1_K", cfg.system.t1);
      s.add("t2_K", cfg.system.t2);
      s.add("heat_flux_W_m2", r.value);
      detail::add_spectral(s, r);
      finish_summary(r.ok());
      return result;
    }
    case Mode::conductance: {
      const SpectralResult r = conductance(cfg.system, cfg.temperature, cfg.integration);
      s.add("temperature_K", cfg.temperature);
      s.add("conductance_W_m2_K", r.value);
      detail::add_spectral(s, r);
      finish_summary(r.ok());
      return result;
    }
    case Mode::pressure: {
      const double t = cfg.source_body == 1 ? cfg.system.t1 : cfg.system.t2;
      const SpectralResult r = neq_pressure(cfg.system, cfg.source_body, t, cfg.integration);
      s.add("source_body", std::to_string(cfg.source_body));
      s.add("source_temperature_K", t);
      s.add("pressure_Pa", r.value);
      detail::add_spectral(s, r);
      s.add("zero_point", "excluded; the hbar*omega/2 (equilibrium Casimir) part of the mode energy is not integrated");
      finish_summary(r.ok());
      return result;
    }
    case Mode::viewfactor: {
      const TriMesh m1 = load_mesh(cfg.mesh1);
      const TriMesh m2 = load_mesh(cfg.mesh2);
      const ViewFactorResult f12 = view_factor(m1, m2, cfg.quad_order);
      const ViewFactorResult f21 = view_factor(m2, m1, cfg.quad_order);
      s.add("mesh1", cfg.mesh1);
      s.add("mesh2", cfg.mesh2);
      s.add("mesh1_ignored_lines", std::to_string(m1.ignored_lines));
      s.add("mesh2_ignored_lines", std::to_string(m2.ignored_lines));
      s.add("quad_order", std::to_string(cfg.quad_order));
      s.add("area1_m2", f12.area1);
      s.add("area2_m2", f12.area2);
      s.add("view_factor_12", f12.f12);
      s.add("view_factor_21", f21.f12);
      s.add("a1f12_m2", f12.a1f12);
      s.add("a2f21_m2", f21.a1f12);
      s.add("near_pairs", std::to_string(f12.near_pairs));
      finish_summary(true);
      return result;
    }
    case Mode::bb_heat: {
      const TriMesh m1 = load_mesh(cfg.mesh1);
      const TriMesh m2 = load_mesh(cfg.mesh2);
      const BlackbodyHeatRate q = bb_heat_rate(m1, m2, cfg.mesh_t1, cfg.mesh_t2, cfg.quad_order, cfg.integration);
      s.add("mesh1", cfg.mesh1);
      s.add("mesh2", cfg.mesh2);
      s.add("quad_order", std::to_string(cfg.quad_order));
      s.add("t1_K", cfg.mesh_t1);
      s.add("t2_K", cfg.mesh_t2);
      s.add("view_factor_12", q.view.f12);
      s.add("heat_rate_closed_form_W", q.closed_form);
      s.add("heat_rate_spectral_W", q.spectral);
      s.add("error_estimate", q.spectral_error);
      finish_summary(q.converged);
      return result;
    }
  }
  return result;
}

}  // namespace nfrad
