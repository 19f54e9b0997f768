// CSV field/spectrum files and the scattering-data JSON sidecar.
//
// Field file:     '# x,re,im'     one row per node, 17 significant digits.
// Spectrum file:  '# z,re_r,im_r'
// Sidecar keys:   q, beta, zeros, gammas ([re,im] pairs), r_file.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"

namespace bnls {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline double parse_double(const std::string& tok) {
  // Reject non-finite tokens so a stored NaN cannot round-trip silently.
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw FormatError("bad numeric token '" + tok + "'");
  if (!std::isfinite(v)) throw FormatError("non-finite value '" + tok + "'");
  return v;
}

inline void split3(const std::string& line, double out[3]) {
  std::stringstream ss(line);
  std::string tok;
  int k = 0;
  while (std::getline(ss, tok, ',')) {
    if (k >= 3) throw FormatError("row has more than 3 columns");
    out[k++] = parse_double(tok);
  }
  if (k != 3) throw FormatError("row has fewer than 3 columns");
}

}  // namespace detail

inline void save_field(const SampledField& u, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "# x,re,im\n";
  for (int i = 0; i < u.grid.n_points; ++i)
    os << fmt17(u.grid.x(i)) << ',' << fmt17(u.values[i].real()) << ','
       << fmt17(u.values[i].imag()) << '\n';
  if (!os) throw IoError("write failed on '" + path + "'");
}

inline SampledField load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::string line;
  RVec xs;
  CVec vs;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    double c[3];
    detail::split3(line, c);
    xs.push_back(c[0]);
    vs.emplace_back(c[1], c[2]);
  }
  if (xs.size() < 2) throw FormatError("field file has fewer than 2 rows");
  SpatialGrid g(xs.front(), xs.back(), static_cast<int>(xs.size()));
  const double h = g.h();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - g.x(static_cast<int>(i))) > 1e-9 * (1.0 + std::abs(xs[i])))
      throw FormatError("non-uniform x column");
  (void)h;
  return {g, std::move(vs)};
}

inline void save_spectrum(const SpectralGrid& g, const CVec& r, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "# z,re_r,im_r\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    os << fmt17(g.z[i]) << ',' << fmt17(r[i].real()) << ',' << fmt17(r[i].imag()) << '\n';
  if (!os) throw IoError("write failed on '" + path + "'");
}

inline void load_spectrum(const std::string& path, SpectralGrid& g, CVec& r) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::string line;
  RVec zs;
  CVec rs;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    double c[3];
    detail::split3(line, c);
    zs.push_back(c[0]);
    rs.emplace_back(c[1], c[2]);
  }
  g = SpectralGrid{std::move(zs)};
  r = std::move(rs);
}

inline void save_scattering_data(const ScatteringData& d, const std::string& json_path,
                                 const std::string& r_path) {
  save_spectrum(d.grid, d.r, r_path);
  nlohmann::json j;
  j["q"] = d.q;
  j["beta"] = d.beta;
  j["zeros"] = d.zeros;
  auto gs = nlohmann::json::array();
  for (const auto& g : d.gammas) gs.push_back({g.real(), g.imag()});
  j["gammas"] = gs;
  j["r_file"] = r_path;
  std::ofstream os(json_path);
  if (!os) throw IoError("cannot open '" + json_path + "' for writing");
  os << j.dump(2) << '\n';
}

inline ScatteringData load_scattering_data(const std::string& json_path) {
  std::ifstream is(json_path);
  if (!is) throw IoError("cannot open '" + json_path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad scattering-data json: ") + e.what());
  }
  ScatteringData d;
  try {
    d.q = j.at("q").get<double>();
    d.beta = j.at("beta").get<double>();
    d.zeros = j.at("zeros").get<RVec>();
    for (const auto& p : j.at("gammas")) d.gammas.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    load_spectrum(j.at("r_file").get<std::string>(), d.grid, d.r);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad scattering-data json: ") + e.what());
  }
  return d;
}

}  // namespace bnls
