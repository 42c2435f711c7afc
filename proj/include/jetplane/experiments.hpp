#pragma once
// Experiment catalog and runner: JSON configs in, CSV/JSON artifacts plus a
// hashed manifest out.  Outputs are deterministic for a fixed config and
// seed, independent of thread count.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cauchy.hpp"
#include "commutator.hpp"
#include "core.hpp"
#include "functions.hpp"
#include "grid.hpp"
#include "jets.hpp"
#include "perimeter.hpp"
#include "plane_sets.hpp"
#include "serialize.hpp"
#include "wirtinger.hpp"

namespace jetplane {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "commutator-scan", "extend-linear",  "holo-approx",
      "perimeter",       "snowflake-jet",  "whitney-determinacy"};
  return names;
}

struct ExperimentConfig {
  std::string experiment;

  std::string set_kind = "four-corner";
  int depth = 5;
  double beta = kPi / 3;
  int count = 256;
  std::optional<IfsSpec> ifs;
  std::optional<json> inline_sample;

  std::optional<GridSpec> grid;

  std::string function_id = "z";
  std::vector<cdouble> poly;
  cdouble fn_center = 0;
  double fn_radius = 1;

  cdouble phi_center = 0;
  double phi_radius = 2;

  std::optional<Region> region;
  std::vector<std::string> pairing_functions = {"z", "z2", "conj-z"};

  std::vector<double> deltas;
  std::vector<double> scales;

  int trials = 200;
  int dim_n = 3;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool dump_grids = false;
};

namespace detail {

inline void require_descending(const std::vector<double>& v, const std::string& what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0)) throw std::invalid_argument(what + " entries must be positive");
    if (i + 1 < v.size() && !(v[i] > v[i + 1]))
      throw std::invalid_argument(what + " must be sorted strictly descending");
  }
}

inline double unit_real(std::mt19937_64& rng) {
  return (double)(rng() >> 11) * 0x1p-53;  // [0, 1), identical on all platforms
}

inline double sym_real(std::mt19937_64& rng) { return 2 * unit_real(rng) - 1; }

}  // namespace detail

inline GridSpec grid_from_config(const json& j) {
  return GridSpec(complex_from_json(j.at("corner")), j.at("nx").get<std::size_t>(),
                  j.at("ny").get<std::size_t>(), j.at("h").get<double>());
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    throw std::invalid_argument("unknown experiment: " + c.experiment);

  if (j.contains("set")) {
    const json& s = j["set"];
    c.set_kind = s.value("kind", c.set_kind);
    c.depth = s.value("depth", c.depth);
    if (s.contains("beta")) c.beta = s["beta"].get<double>();
    c.count = s.value("count", c.count);
    if (s.contains("maps")) c.ifs = ifs_from_json(s);
    if (s.contains("file")) {
      c.set_kind = "file";
      c.inline_sample = json::parse(read_file(s["file"].get<std::string>()));
    }
    if (s.contains("sample")) {
      c.set_kind = "inline";
      c.inline_sample = s["sample"];
    }
  }
  if (j.contains("grid")) c.grid = grid_from_config(j["grid"]);
  if (j.contains("function")) {
    const json& f = j["function"];
    c.function_id = f.value("id", c.function_id);
    if (f.contains("coefficients"))
      for (const json& co : f["coefficients"]) c.poly.push_back(complex_from_json(co));
    if (f.contains("center")) c.fn_center = complex_from_json(f["center"]);
    if (f.contains("radius")) c.fn_radius = f["radius"].get<double>();
  }
  if (j.contains("phi")) {
    if (j["phi"].contains("center")) c.phi_center = complex_from_json(j["phi"]["center"]);
    if (j["phi"].contains("radius")) c.phi_radius = j["phi"]["radius"].get<double>();
  }
  if (j.contains("region")) c.region = region_from_json(j["region"]);
  if (j.contains("functions"))
    c.pairing_functions = j["functions"].get<std::vector<std::string>>();
  if (j.contains("deltas")) c.deltas = j["deltas"].get<std::vector<double>>();
  if (j.contains("scales")) c.scales = j["scales"].get<std::vector<double>>();
  c.trials = j.value("trials", c.trials);
  c.dim_n = j.value("n", c.dim_n);
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out", c.out_dir);
  c.dump_grids = j.value("dump_grids", c.dump_grids);

  detail::require_descending(c.deltas, "deltas");
  detail::require_descending(c.scales, "scales");
  if (!(c.beta > 0 && c.beta < kPi / 2))
    throw std::invalid_argument("beta must lie in (0, pi/2)");
  if (c.depth < 0) throw std::invalid_argument("depth must be nonnegative");
  if (c.count < 2) throw std::invalid_argument("count must be at least 2");
  if (c.trials < 1) throw std::invalid_argument("trials must be positive");
  if (c.dim_n < 1 || c.dim_n > 8) throw std::invalid_argument("n must be in 1..8");
  return c;
}

inline SmoothFunction function_from_config(const ExperimentConfig& c) {
  if (c.function_id == "poly") {
    if (c.poly.empty())
      throw std::invalid_argument("poly function requires coefficients");
    return fn_poly(c.poly);
  }
  if (c.function_id == "bump") return fn_bump(c.fn_center, c.fn_radius);
  return function_by_id(c.function_id);
}

inline SetSample sample_from_config(const ExperimentConfig& c) {
  if (c.set_kind == "four-corner") return ifs_sample(IfsSpec::four_corner(), c.depth);
  if (c.set_kind == "middle-thirds-square")
    return ifs_sample(IfsSpec::middle_thirds_square(), c.depth);
  if (c.set_kind == "ifs") {
    if (!c.ifs) throw std::invalid_argument("ifs set requires maps");
    return ifs_sample(*c.ifs, c.depth);
  }
  if (c.set_kind == "koch") return snowflake_sample(c.beta, c.depth).to_sample();
  if (c.set_kind == "file" || c.set_kind == "inline") {
    if (!c.inline_sample) throw std::invalid_argument("sample JSON missing");
    return sample_from_json(*c.inline_sample);
  }
  SetSample s;
  if (c.set_kind == "circle") {
    check_budget((std::size_t)c.count, "circle sample");
    for (int k = 0; k < c.count; ++k) {
      double t = 2 * kPi * k / c.count;
      s.points.push_back(cdouble(std::cos(t), std::sin(t)));
      s.cells.push_back(std::to_string(k));
    }
    s.h = 2 * std::sin(kPi / c.count);
    s.kind = "points";
    return s;
  }
  if (c.set_kind == "segment") {
    check_budget((std::size_t)c.count, "segment sample");
    for (int k = 0; k < c.count; ++k) {
      s.points.push_back(cdouble((double)k / (c.count - 1), 0));
      s.cells.push_back(std::to_string(k));
    }
    s.h = 1.0 / (c.count - 1);
    s.kind = "points";
    return s;
  }
  if (c.set_kind == "grid") {
    check_budget((std::size_t)c.count * (std::size_t)c.count, "grid sample");
    for (int iy = 0; iy < c.count; ++iy)
      for (int ix = 0; ix < c.count; ++ix) {
        s.points.push_back(cdouble((ix + 0.5) / c.count, (iy + 0.5) / c.count));
        s.cells.push_back(std::to_string(ix) + "," + std::to_string(iy));
      }
    s.h = std::sqrt(2.0) / c.count;
    s.kind = "points";
    return s;
  }
  throw std::invalid_argument("unknown set kind: " + c.set_kind);
}

namespace detail {

inline json verdict_json(const RegularityVerdict& v, std::size_t points) {
  json j;
  j["holomorphic_like"] = v.holomorphic_like;
  if (std::isfinite(v.exponent))
    j["exponent"] = v.exponent;
  else
    j["exponent"] = nullptr;
  j["degraded"] = v.degraded;
  j["points"] = points;
  return j;
}

}  // namespace detail

inline std::vector<std::string> run_holo_approx(const ExperimentConfig& c) {
  if (!c.grid) throw std::invalid_argument("holo-approx requires a grid");
  if (c.deltas.empty()) throw std::invalid_argument("holo-approx requires deltas");
  if (c.deltas.back() < c.grid->h)
    throw std::invalid_argument("holo-approx: smallest delta below grid spacing");
  SetSample sample = sample_from_config(c);
  SmoothFunction F = function_from_config(c);
  if (!F.has_derivatives)
    throw std::invalid_argument("holo-approx requires exact derivatives");
  std::vector<std::string> files;
  std::vector<ApproxReport> reports;
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    HoloApprox res = holo_approx(F, sample, c.deltas[i], *c.grid);
    reports.push_back(res.report);
    if (c.dump_grids) {
      std::string name = "h_delta_" + std::to_string(i) + ".bin";
      write_file(c.out_dir + "/" + name, grid_to_binary(res.h));
      files.push_back(name);
    }
  }
  write_file(c.out_dir + "/approx.csv", approx_csv(reports));
  files.push_back("approx.csv");
  write_file(c.out_dir + "/sample.json", sample_to_json(sample).dump(2) + "\n");
  files.push_back("sample.json");
  return files;
}

inline std::vector<std::string> run_perimeter(const ExperimentConfig& c) {
  if (!c.grid) throw std::invalid_argument("perimeter requires a grid");
  if (!c.region) throw std::invalid_argument("perimeter requires a region");
  SmoothFunction phi = fn_bump(c.phi_center, c.phi_radius);
  std::vector<PairingReport> reports;
  for (const std::string& id : c.pairing_functions) {
    SmoothFunction f = id == "poly" ? fn_poly(c.poly) : function_by_id(id);
    reports.push_back(pair(f, phi, *c.region, *c.grid, id));
  }
  write_file(c.out_dir + "/pairing.csv", pairing_csv(reports));
  write_file(c.out_dir + "/region.json", region_to_json(*c.region).dump(2) + "\n");
  return {"pairing.csv", "region.json"};
}

inline std::vector<std::string> run_commutator_scan(const ExperimentConfig& c) {
  if (c.scales.empty()) throw std::invalid_argument("commutator-scan requires scales");
  SetSample sample = sample_from_config(c);
  SmoothFunction b = function_from_config(c);
  KernelMatrix K = build_kernel(b, sample, c.seed);
  DiagonalProfile prof = diagonal_profile(K, c.scales);
  RegularityVerdict v = regularity_verdict(prof);
  write_file(c.out_dir + "/profile.csv", profile_csv(prof));
  write_file(c.out_dir + "/verdict.json", detail::verdict_json(v, K.n).dump(2) + "\n");
  return {"profile.csv", "verdict.json"};
}

inline std::vector<std::string> run_snowflake_jet(const ExperimentConfig& c) {
  if (c.scales.empty()) throw std::invalid_argument("snowflake-jet requires scales");
  SnowflakeCurve curve = snowflake_sample(c.beta, c.depth);
  Jet1 jet = snowflake_zero_diff_jet(curve);
  ModulusTable table = whitney_modulus(jet, c.scales);
  HolderFit fit = holder_fit(table);
  double ratio_lo = 0, ratio_hi = 0;
  double_ratio_bounds(curve, ratio_lo, ratio_hi);
  json holder{{"exponent", fit.exponent},
              {"amplitude", fit.amplitude},
              {"rows_used", fit.rows_used},
              {"alpha", curve.alpha},
              {"double_ratio_lo", ratio_lo},
              {"double_ratio_hi", ratio_hi}};
  write_file(c.out_dir + "/modulus.csv", modulus_csv(table));
  write_file(c.out_dir + "/holder.json", holder.dump(2) + "\n");
  write_file(c.out_dir + "/curve.json", sample_to_json(curve.to_sample()).dump(2) + "\n");
  return {"modulus.csv", "holder.json", "curve.json"};
}

inline std::vector<std::string> run_whitney_determinacy(const ExperimentConfig& c) {
  if (c.scales.empty()) throw std::invalid_argument("whitney-determinacy requires scales");
  SetSample sample;
  KernelMatrix K;
  std::string fn_label = c.function_id;
  if (c.function_id == kKochParameterId) {
    if (c.set_kind != "koch")
      throw std::invalid_argument("koch-parameter requires the koch set");
    SnowflakeCurve curve = snowflake_sample(c.beta, c.depth);
    Jet1 jet = snowflake_zero_diff_jet(curve);
    sample = jet.sample;
    K = build_kernel(jet, c.seed);
  } else {
    sample = sample_from_config(c);
    Jet1 jet = restrict_smooth(function_from_config(c), sample);
    K = build_kernel(jet, c.seed);
  }
  DiagonalProfile prof = diagonal_profile(K, c.scales);
  std::string csv = "scale,spread\n";
  for (const ProfileRow& r : prof.rows)
    csv += fmt_g17(r.scale) + "," + fmt_g17(r.angvar) + "\n";
  json summary{{"points", K.n}, {"function", fn_label}};
  if (!prof.rows.empty()) {
    const ProfileRow* smallest = &prof.rows.front();
    for (const ProfileRow& r : prof.rows)
      if (r.scale < smallest->scale) smallest = &r;
    summary["smallest_scale_spread"] = smallest->angvar;
  }
  write_file(c.out_dir + "/determinacy.csv", csv);
  write_file(c.out_dir + "/summary.json", summary.dump(2) + "\n");
  return {"determinacy.csv", "summary.json"};
}

inline std::vector<std::string> run_extend_linear(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::size_t n = (std::size_t)c.dim_n;
  std::string csv = "trial,k,defect,residual,accepted\n";
  double max_residual = 0;
  int accepted = 0;
  for (int trial = 0; trial < c.trials; ++trial) {
    std::size_t k = 1 + detail::bounded_index(rng, n);
    RealSubspace W(n, {});
    while (true) {
      std::vector<std::vector<cdouble>> basis(k, std::vector<cdouble>(n));
      for (auto& w : basis)
        for (auto& x : w) x = cdouble(detail::sym_real(rng), detail::sym_real(rng));
      try {
        RealSubspace cand(n, basis);
        if (!is_totally_real(cand)) continue;
        W = std::move(cand);
        break;
      } catch (const std::invalid_argument&) {
        continue;  // dependent draw, resample
      }
    }
    std::vector<cdouble> coeff(n);
    for (auto& x : coeff) x = cdouble(detail::sym_real(rng), detail::sym_real(rng));
    std::vector<cdouble> values(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t m = 0; m < n; ++m) values[j] += coeff[m] * W.basis[j][m];
    ExtendOutcome out = extend_complex_linear(W, values);
    csv += std::to_string(trial) + "," + std::to_string(k) + "," +
           fmt_g17(out.criterion_defect) + "," + fmt_g17(out.residual) + "," +
           (out.ok ? "1" : "0") + "\n";
    if (out.ok) {
      ++accepted;
      max_residual = std::max(max_residual, out.residual);
    }
  }
  // Negative control: conjugation prescribed on C (not complex-linear).
  RealSubspace full(1, {{cdouble(1, 0)}, {cdouble(0, 1)}});
  ExtendOutcome conj_out = extend_complex_linear(full, {cdouble(1, 0), cdouble(0, -1)});
  json summary{{"trials", c.trials},
               {"accepted", accepted},
               {"max_residual", max_residual},
               {"conjugation_rejected", !conj_out.ok}};
  write_file(c.out_dir + "/extend.csv", csv);
  write_file(c.out_dir + "/summary.json", summary.dump(2) + "\n");
  return {"extend.csv", "summary.json"};
}

// Runs one experiment; outputs land in c.out_dir with manifest.json written
// last.  Returns all produced files including the manifest.
inline std::vector<std::string> run_experiment(const ExperimentConfig& c) {
  std::filesystem::create_directories(c.out_dir);
  std::vector<std::string> files;
  if (c.experiment == "holo-approx")
    files = run_holo_approx(c);
  else if (c.experiment == "perimeter")
    files = run_perimeter(c);
  else if (c.experiment == "commutator-scan")
    files = run_commutator_scan(c);
  else if (c.experiment == "snowflake-jet")
    files = run_snowflake_jet(c);
  else if (c.experiment == "whitney-determinacy")
    files = run_whitney_determinacy(c);
  else if (c.experiment == "extend-linear")
    files = run_extend_linear(c);
  else
    throw std::invalid_argument("unknown experiment: " + c.experiment);
  json manifest = make_manifest(c.out_dir, files, c.experiment);
  write_file(c.out_dir + "/manifest.json", manifest.dump(2) + "\n");
  files.push_back("manifest.json");
  return files;
}

inline std::string list_catalog() {
  return
      "experiments:\n"
      "  commutator-scan      diagonal regularity profile of (b(z)-b(w))/(z-w) on a sample\n"
      "  extend-linear        complex-linear extension from random totally-real subspaces\n"
      "  holo-approx          truncated Cauchy-transform approximation on a compact sample\n"
      "  perimeter            dbar pairing on a finite-perimeter region, area vs contour\n"
      "  snowflake-jet        zero-differential jet on a Koch-type curve with modulus fit\n"
      "  whitney-determinacy  spread of admissible complex differentials per scale\n"
      "sets:\n"
      "  circle  four-corner  grid  ifs  koch  middle-thirds-square  segment  file\n"
      "functions:\n"
      "  bump  conj-z  koch-parameter  poly  z  z-conj-z  z2\n";
}

inline json config_schema() {
  json pair_re_im = {{"type", "array"}, {"minItems", 2}, {"maxItems", 2},
                     {"items", {{"type", "number"}}}};
  json positive_desc = {{"type", "array"},
                        {"items", {{"type", "number"}, {"exclusiveMinimum", 0}}},
                        {"description", "sorted strictly descending"}};
  json schema;
  schema["$schema"] = "http://json-schema.org/draft-07/schema#";
  schema["title"] = "ExperimentConfig";
  schema["type"] = "object";
  schema["required"] = json::array({"experiment"});
  json& props = schema["properties"];
  props["experiment"] = {{"enum", experiment_names()}};
  props["set"] = {
      {"type", "object"},
      {"properties",
       {{"kind",
         {{"enum", json::array({"four-corner", "middle-thirds-square", "ifs", "koch",
                                "circle", "segment", "grid", "file"})}}},
        {"depth", {{"type", "integer"}, {"minimum", 0}}},
        {"beta", {{"type", "number"}, {"exclusiveMinimum", 0}}},
        {"count", {{"type", "integer"}, {"minimum", 2}}},
        {"maps", {{"type", "array"}}},
        {"file", {{"type", "string"}}},
        {"sample", {{"type", "object"}}}}}};
  props["grid"] = {{"type", "object"},
                   {"required", json::array({"corner", "nx", "ny", "h"})},
                   {"properties",
                    {{"corner", pair_re_im},
                     {"nx", {{"type", "integer"}, {"minimum", 1}}},
                     {"ny", {{"type", "integer"}, {"minimum", 1}}},
                     {"h", {{"type", "number"}, {"exclusiveMinimum", 0}}}}}};
  props["function"] = {{"type", "object"},
                       {"properties",
                        {{"id",
                          {{"enum", json::array({"z", "conj-z", "z2", "z-conj-z", "bump",
                                                 "koch-parameter", "poly"})}}},
                         {"coefficients", {{"type", "array"}, {"items", pair_re_im}}},
                         {"center", pair_re_im},
                         {"radius", {{"type", "number"}, {"exclusiveMinimum", 0}}}}}};
  props["phi"] = {{"type", "object"},
                  {"properties",
                   {{"center", pair_re_im},
                    {"radius", {{"type", "number"}, {"exclusiveMinimum", 0}}}}}};
  props["region"] = {{"type", "object"},
                     {"properties",
                      {{"kind", {{"enum", json::array({"disk", "square", "polygon"})}}},
                       {"center", pair_re_im},
                       {"radius", {{"type", "number"}}},
                       {"corner", pair_re_im},
                       {"side", {{"type", "number"}}},
                       {"vertices", {{"type", "array"}, {"items", pair_re_im}}}}}};
  props["functions"] = {{"type", "array"}, {"items", {{"type", "string"}}}};
  props["deltas"] = positive_desc;
  props["scales"] = positive_desc;
  props["trials"] = {{"type", "integer"}, {"minimum", 1}};
  props["n"] = {{"type", "integer"}, {"minimum", 1}, {"maximum", 8}};
  props["seed"] = {{"type", "integer"}, {"minimum", 0}};
  props["out"] = {{"type", "string"}};
  props["dump_grids"] = {{"type", "boolean"}};
  return schema;
}

}  // namespace jetplane
