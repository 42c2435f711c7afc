#pragma once
// JSON/CSV/binary serialization for samples, jets, regions, reports, and
// grid functions, plus the hashed output manifest.  All text output is
// deterministic: %.17g floats, '\n' separators, no timestamps.

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "cauchy.hpp"
#include "commutator.hpp"
#include "core.hpp"
#include "grid.hpp"
#include "jets.hpp"
#include "perimeter.hpp"
#include "plane_sets.hpp"
#include "sha256.hpp"

namespace jetplane {

using nlohmann::json;

inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json complex_to_json(cdouble z) { return json::array({z.real(), z.imag()}); }

inline cdouble complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex value must be a [re, im] pair");
  return cdouble(j[0].get<double>(), j[1].get<double>());
}

inline json ifs_to_json(const IfsSpec& spec) {
  json maps = json::array();
  for (const IfsMap& m : spec.maps)
    maps.push_back({{"rho", m.rho}, {"theta", m.theta}, {"trans", complex_to_json(m.trans)}});
  return json{{"maps", maps}};
}

inline IfsSpec ifs_from_json(const json& j) {
  IfsSpec spec;
  for (const json& m : j.at("maps"))
    spec.maps.push_back({m.at("rho").get<double>(), m.value("theta", 0.0),
                         complex_from_json(m.at("trans"))});
  spec.validate();
  return spec;
}

inline json sample_to_json(const SetSample& s) {
  json points = json::array();
  for (cdouble z : s.points) points.push_back(complex_to_json(z));
  json j{{"kind", s.kind}, {"h", s.h}, {"depth", s.depth},
         {"points", points}, {"cells", s.cells}, {"base", complex_to_json(s.base)}};
  if (s.generator) j["generator"] = ifs_to_json(*s.generator);
  return j;
}

inline SetSample sample_from_json(const json& j) {
  SetSample s;
  s.kind = j.value("kind", "points");
  s.h = j.at("h").get<double>();
  s.depth = j.value("depth", 0);
  for (const json& p : j.at("points")) s.points.push_back(complex_from_json(p));
  if (j.contains("cells")) s.cells = j["cells"].get<std::vector<std::string>>();
  if (j.contains("base")) s.base = complex_from_json(j["base"]);
  if (j.contains("generator")) s.generator = ifs_from_json(j["generator"]);
  if (s.points.empty()) throw std::invalid_argument("sample: no points");
  if (!s.cells.empty() && s.cells.size() != s.points.size())
    throw std::invalid_argument("sample: cell tag count mismatch");
  for (cdouble z : s.points) require_finite(z, "sample point");
  return s;
}

inline json jet_to_json(const Jet1& jet) {
  json values = json::array(), diffs = json::array();
  for (std::size_t i = 0; i < jet.size(); ++i) {
    values.push_back(complex_to_json(jet.value[i]));
    diffs.push_back(json::array({jet.dz[i].real(), jet.dz[i].imag(),
                                 jet.dzbar[i].real(), jet.dzbar[i].imag()}));
  }
  return json{{"sample", sample_to_json(jet.sample)}, {"values", values}, {"diffs", diffs}};
}

inline Jet1 jet_from_json(const json& j) {
  Jet1 jet;
  jet.sample = sample_from_json(j.at("sample"));
  for (const json& v : j.at("values")) jet.value.push_back(complex_from_json(v));
  for (const json& d : j.at("diffs")) {
    if (!d.is_array() || d.size() != 4)
      throw std::invalid_argument("jet diff must be [re_holo, im_holo, re_anti, im_anti]");
    jet.dz.emplace_back(d[0].get<double>(), d[1].get<double>());
    jet.dzbar.emplace_back(d[2].get<double>(), d[3].get<double>());
  }
  jet.validate();
  return jet;
}

inline json region_to_json(const Region& r) {
  if (r.kind == "disk")
    return json{{"kind", "disk"}, {"center", complex_to_json(r.center)}, {"radius", r.radius}};
  json verts = json::array();
  for (cdouble v : r.vertices) verts.push_back(complex_to_json(v));
  return json{{"kind", r.kind}, {"vertices", verts}};
}

inline Region region_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "disk")
    return region_disk(complex_from_json(j.at("center")), j.at("radius").get<double>());
  if (kind == "square" && j.contains("corner"))
    return region_square(complex_from_json(j.at("corner")), j.at("side").get<double>());
  if (kind == "square" || kind == "polygon") {
    std::vector<cdouble> verts;
    for (const json& v : j.at("vertices")) verts.push_back(complex_from_json(v));
    return region_polygon(verts, kind.c_str());
  }
  throw std::invalid_argument("region: unknown kind " + kind);
}

inline std::string modulus_csv(const ModulusTable& t) {
  std::string out = "scale,sup_R\n";
  for (const ModulusRow& r : t.rows) {
    if (r.pairs == 0) continue;  // absent row: no admissible pairs
    out += fmt_g17(r.scale) + "," + fmt_g17(r.sup_R) + "\n";
  }
  return out;
}

inline std::string profile_csv(const DiagonalProfile& p) {
  std::string out = "scale,osc,angvar\n";
  for (const ProfileRow& r : p.rows)
    out += fmt_g17(r.scale) + "," + (r.has_osc ? fmt_g17(r.osc) : std::string("nan")) + "," +
           fmt_g17(r.angvar) + "\n";
  return out;
}

inline std::string approx_csv(const std::vector<ApproxReport>& reports) {
  std::string out = "delta,sup_error,dbar_residual,trunc_area\n";
  for (const ApproxReport& r : reports)
    out += fmt_g17(r.delta) + "," + fmt_g17(r.sup_error_on_E) + "," +
           fmt_g17(r.dbar_residual_inside) + "," + fmt_g17(r.trunc_area) + "\n";
  return out;
}

inline std::string pairing_csv(const std::vector<PairingReport>& reports) {
  std::string out =
      "case,lhs_re,lhs_im,rhs_area_re,rhs_area_im,rhs_contour_re,rhs_contour_im,"
      "residual_abs,stokes_gap\n";
  for (const PairingReport& r : reports)
    out += r.case_label + "," + fmt_g17(r.lhs.real()) + "," + fmt_g17(r.lhs.imag()) + "," +
           fmt_g17(r.rhs_area.real()) + "," + fmt_g17(r.rhs_area.imag()) + "," +
           fmt_g17(r.rhs_contour.real()) + "," + fmt_g17(r.rhs_contour.imag()) + "," +
           fmt_g17(std::abs(r.residual)) + "," + fmt_g17(r.stokes_gap) + "\n";
  return out;
}

namespace detail {

inline void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((char)(std::uint8_t)(v >> (8 * i)));
}

inline void put_f64_le(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64_le(out, bits);
}

inline std::uint64_t get_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline double get_f64_le(const std::uint8_t* p) {
  std::uint64_t bits = get_u64_le(p);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace detail

// Binary layout: corner re, corner im, width, height, h as little-endian
// doubles; nx, ny as little-endian u64; then row-major interleaved re/im.
inline std::string grid_to_binary(const GridFunction& u) {
  std::string out;
  out.reserve(56 + 16 * u.v.size());
  detail::put_f64_le(out, u.grid.corner.real());
  detail::put_f64_le(out, u.grid.corner.imag());
  detail::put_f64_le(out, u.grid.width());
  detail::put_f64_le(out, u.grid.height());
  detail::put_f64_le(out, u.grid.h);
  detail::put_u64_le(out, u.grid.nx);
  detail::put_u64_le(out, u.grid.ny);
  for (cdouble z : u.v) {
    detail::put_f64_le(out, z.real());
    detail::put_f64_le(out, z.imag());
  }
  return out;
}

inline GridFunction grid_from_binary(const std::string& bytes) {
  if (bytes.size() < 56) throw std::invalid_argument("grid binary: truncated header");
  const std::uint8_t* p = (const std::uint8_t*)bytes.data();
  double cre = detail::get_f64_le(p), cim = detail::get_f64_le(p + 8);
  double width = detail::get_f64_le(p + 16), height = detail::get_f64_le(p + 24);
  double h = detail::get_f64_le(p + 32);
  std::uint64_t nx = detail::get_u64_le(p + 40), ny = detail::get_u64_le(p + 48);
  GridSpec spec(cdouble(cre, cim), (std::size_t)nx, (std::size_t)ny, h);
  if (std::abs(spec.width() - width) > 1e-9 * (1 + std::abs(width)) ||
      std::abs(spec.height() - height) > 1e-9 * (1 + std::abs(height)))
    throw std::invalid_argument("grid binary: inconsistent extents");
  if (bytes.size() != 56 + 16 * spec.size())
    throw std::invalid_argument("grid binary: payload size mismatch");
  GridFunction u(spec);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double re = detail::get_f64_le(p + 56 + 16 * i);
    double im = detail::get_f64_le(p + 56 + 16 * i + 8);
    u.v[i] = cdouble(re, im);
  }
  return u;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), (std::streamsize)content.size());
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

// Manifest of produced files (paths relative to the output directory),
// sorted by path, hashed with SHA-256.  Written last by experiment runners.
inline json make_manifest(const std::string& dir, std::vector<std::string> files,
                          const std::string& experiment) {
  std::sort(files.begin(), files.end());
  json entries = json::array();
  for (const std::string& f : files) {
    std::string full = dir + "/" + f;
    std::string bytes = read_file(full);
    entries.push_back(
        {{"path", f}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  return json{{"experiment", experiment}, {"files", entries}};
}

}  // namespace jetplane
