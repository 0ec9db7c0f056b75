#pragma once

// Deterministic data-file output: 17-significant-digit CSV with LF line
// endings and header rows, written atomically (temp file + rename).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vibronqed/diag.hpp"
#include "vibronqed/dyn.hpp"
#include "vibronqed/gfun.hpp"

namespace vibronqed {

inline std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  fs::create_directories(dir);
  const fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct ScanPoint {
  double energy = 0.0;  // absolute E/(hbar g)
  double g_value = 0.0;
  bool near_pole = false;
};

inline std::string scan_csv(const std::vector<ScanPoint>& points) {
  std::string out = "E_over_hg,G_value,is_near_pole\n";
  for (const auto& p : points) {
    out += format_g17(p.energy);
    out += ',';
    out += format_g17(p.g_value);
    out += ',';
    out += p.near_pole ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string roots_csv(const SpectrumResult& spectrum) {
  std::string out = "m,interval_index,E_over_hg,residual,oracle_E,abs_diff\n";
  for (const auto& r : spectrum.roots) {
    out += std::to_string(spectrum.m);
    out += ',';
    out += std::to_string(r.interval_index);
    out += ',';
    out += format_g17(r.energy);
    out += ',';
    out += format_g17(r.residual);
    out += ',';
    out += r.oracle_eps ? format_g17(spectrum.energy_offset + *r.oracle_eps)
                        : std::string("nan");
    out += ',';
    out += r.oracle_diff ? format_g17(*r.oracle_diff) : std::string("nan");
    out += '\n';
  }
  return out;
}

inline std::string eigenvalues_csv(const EigenSystem& sys) {
  std::string out = "m,index,E_over_hg,converged_flag\n";
  for (int i = 0; i < int(sys.eigenvalues.size()); ++i) {
    out += std::to_string(sys.m);
    out += ',';
    out += std::to_string(i);
    out += ',';
    out += format_g17(sys.absolute(i));
    out += ',';
    out += sys.eigenvalues(i) <= sys.reliability_ceiling ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string timeseries_csv(const DynamicsResult& result) {
  std::string out = "t,P,norm\n";
  for (std::size_t i = 0; i < result.time.size(); ++i) {
    out += format_g17(result.time[i]);
    out += ',';
    out += format_g17(result.population[i]);
    out += ',';
    out += format_g17(result.norm[i]);
    out += '\n';
  }
  return out;
}

inline std::string spectrum_csv(const DynamicsResult& result) {
  std::string out = "omega0,abs_f\n";
  for (std::size_t k = 0; k < result.omega0.size(); ++k) {
    out += format_g17(result.omega0[k]);
    out += ',';
    out += format_g17(result.spectrum_abs[k]);
    out += '\n';
  }
  return out;
}

inline std::string peaks_json(const DynamicsResult& result) {
  nlohmann::ordered_json j;
  j["m"] = result.m;
  j["resolution"] = result.resolution;
  j["mean_removed"] = result.mean_removed;
  j["peaks"] = nlohmann::ordered_json::array();
  for (const auto& p : result.peaks) {
    j["peaks"].push_back({{"frequency", p.frequency},
                          {"height", p.height},
                          {"interpolated", p.interpolated}});
  }
  return j.dump(2) + "\n";
}

}  // namespace vibronqed
