#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "soliton/geometry.hpp"
#include "soliton/profile.hpp"
#include "soliton/taxonomy.hpp"
#include "soliton/variational.hpp"
#include "soliton/verify.hpp"

// JSON views of the library's reports. Non-finite numbers are written as the
// strings "inf", "-inf" and "nan" since JSON has no literal for them.

namespace soliton::io {

using nlohmann::json;

inline json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline json to_json(const SolitonParams& p) {
  return {{"lambda", number(p.lambda())},
          {"mu", number(p.mu())},
          {"gamma", number(p.gamma())},
          {"kind", to_string(p.kind())}};
}

inline json to_json(const Endpoint& e) {
  json j{{"t", number(e.t)},
         {"tag", to_string(e.tag)},
         {"limit", number(e.limit)},
         {"certified", e.certified}};
  if (e.tag == EndTag::BlowUp) j["uncertainty"] = number(e.uncertainty);
  return j;
}

inline json to_json(const ProfileA& prof) {
  return {{"params", to_json(prof.params())},
          {"representation", prof.is_closed_form() ? "CLOSED_FORM" : "SAMPLED"},
          {"t_ref", number(prof.t_ref())},
          {"a_ref", number(prof.a_ref())},
          {"lower", to_json(prof.lower())},
          {"upper", to_json(prof.upper())}};
}

/// Tagged union: {"kind": ..., "<field>": value} with the field named after what
/// the value measures; cusps carry no value.
inline json to_json(const EndDescriptor& d) {
  json j{{"kind", to_string(d.kind)}};
  switch (d.kind) {
    case EndKind::SmoothPoint: j["K_origin"] = number(d.value); break;
    case EndKind::ConeEnd: j["angle"] = number(d.value); break;
    case EndKind::CylinderEnd: j["radius"] = number(d.value); break;
    case EndKind::CuspEnd: break;
    case EndKind::GeodesicBoundary: j["length"] = number(d.value); break;
    case EndKind::ExplodingEnd: j["nu"] = number(d.value); break;
  }
  return j;
}

inline json to_json(const GeometryReport& g) {
  return {{"complete", g.complete},
          {"complete_inner", g.complete_inner},
          {"complete_outer", g.complete_outer},
          {"curvature_sign", to_string(g.curvature_sign)},
          {"K_inf", number(g.K_inf)},
          {"K_sup", number(g.K_sup)},
          {"bounded_curvature", g.bounded_curvature()},
          {"inner_end", to_json(g.inner_end)},
          {"outer_end", to_json(g.outer_end)},
          {"inner_distance", number(g.inner_distance)},
          {"outer_distance", number(g.outer_distance)}};
}

inline json to_json(const FamilyLabel& l) {
  json j{{"family", to_string(l.tag)},
          {"t0", number(l.t0)},
          {"t0_uncertainty", number(l.t0_uncertainty)}};
  const auto topo = l.topology();
  j["topology"] = topo ? json(to_string(*topo)) : json(nullptr);
  return j;
}

inline json to_json(const ResidualReport& r) {
  return {{"max_tracefree", number(r.max_tracefree)},
          {"max_laplace", number(r.max_laplace)},
          {"max_potential", number(r.max_potential)},
          {"max_killing", number(r.max_killing)},
          {"h", number(r.h)},
          {"r_range", {number(r.r_lo), number(r.r_hi)}},
          {"samples", r.samples},
          {"checked", r.checked},
          {"components", r.components}};
}

inline json to_json(const VariationReport& v) {
  json fd = json::array();
  for (double x : v.finite_difference) fd.push_back(number(x));
  json eps = json::array();
  for (double x : v.eps) eps.push_back(number(x));
  return {{"analytic", number(v.analytic)},
          {"finite_difference", fd},
          {"eps", eps},
          {"slope_estimate", number(v.slope_estimate)},
          {"noether_defect", number(v.noether_defect)}};
}

inline json to_json(const FamilyInfo& f) {
  json range{{"lo", number(f.nu_lo)}, {"hi", number(f.nu_hi)}, {"lo_closed", f.nu_lo_closed}};
  return {{"family", to_string(f.family)},
          {"topology", to_string(f.topology)},
          {"nu_range", range},
          {"complete", f.complete},
          {"curvature_sign", to_string(f.curvature)},
          {"inner_end", to_string(f.inner)},
          {"outer_end", to_string(f.outer)},
          {"summary", std::string(f.summary)}};
}

/// The family table as a JSON array, one row per tag (g4 split into ±).
inline json family_table() {
  json out = json::array();
  for (Family f : all_families()) out.push_back(to_json(family_info(f)));
  return out;
}

inline json to_json(const CatalogEntry& e) {
  return {{"family", to_string(e.family.tag)},
          {"nu", number(e.nu)},
          {"params", to_json(e.params)},
          {"profile", to_json(e.profile)},
          {"normalization", e.normalization_note},
          {"geometry", to_json(geometry_report(e.profile))}};
}

}  // namespace soliton::io
