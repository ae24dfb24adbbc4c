#include "g2/serialize.hpp"

#include <charconv>
#include <cmath>

#include "g2/error.hpp"

namespace g2 {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

json structure_to_json(const G2Structure& s) {
  json phi = json::array();
  for (unsigned mask : subsets(7, 3)) phi.push_back(s.phi().coeff_by_mask(mask));
  json metric = json::array();
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) metric.push_back(s.metric()(r, c));
  return {{"phi", phi}, {"metric", metric}, {"orientation", s.orientation()}};
}

G2Structure structure_from_json(const json& j) {
  try {
    const auto& phi = j.at("phi");
    const auto& metric = j.at("metric");
    const auto& masks = subsets(7, 3);
    if (phi.size() != masks.size()) throw Error("structure JSON: phi needs 35 coefficients");
    if (metric.size() != 49) throw Error("structure JSON: metric needs 49 entries");
    KForm form(7, 3);
    for (std::size_t i = 0; i < masks.size(); ++i) form.coeff_by_mask(masks[i]) = phi[i].get<double>();
    Mat7 g;
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 7; ++c) g(r, c) = metric[7 * r + c].get<double>();
    return G2Structure::from_parts(form, g, j.at("orientation").get<int>());
  } catch (const json::exception& e) {
    throw Error(std::string("structure JSON: ") + e.what());
  }
}

json plane_to_json(const OrientedPlane3& p) {
  json a = json::array();
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 7; ++r) a.push_back(p.frame()(r, c));
  return a;
}

OrientedPlane3 plane_from_json(const json& j) {
  if (!j.is_array() || j.size() != 21) throw Error("plane JSON: expected 21 numbers");
  Mat73 f;
  try {
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 7; ++r) f(r, c) = j[7 * c + r].get<double>();
  } catch (const json::exception& e) {
    throw Error(std::string("plane JSON: ") + e.what());
  }
  return OrientedPlane3(f);
}

json state_to_json(const torus::SWState& s) {
  s.validate();
  const int K = s.cutoff();
  torus::FourierSection a = s.a.fluctuation.empty() ? torus::FourierSection(K, torus::kOneForm, true)
                                                    : s.a.fluctuation.resized(K);
  json modes = json::array();
  for (int m = 0; m < s.v.mode_count(); ++m) {
    torus::Mode k = s.v.mode(m);
    json v = json::array(), al = json::array();
    for (int c = 0; c < torus::kWSpinor; ++c) {
      v.push_back(s.v(m, c).real());
      v.push_back(s.v(m, c).imag());
    }
    for (int c = 0; c < torus::kOneForm; ++c) {
      al.push_back(a(m, c).real());
      al.push_back(a(m, c).imag());
    }
    modes.push_back({{"k", {k.k1, k.k2, k.k3}}, {"v", v}, {"alpha", al}});
  }
  return {{"cutoff", K},
          {"holonomy", {s.a.holonomy[0], s.a.holonomy[1], s.a.holonomy[2]}},
          {"modes", modes}};
}

torus::SWState state_from_json(const json& j) {
  try {
    const int K = j.at("cutoff").get<int>();
    if (K < 0) throw Error("state JSON: negative cutoff");
    torus::SWState s;
    s.v = torus::FourierSection(K, torus::kWSpinor);
    s.a.fluctuation = torus::FourierSection(K, torus::kOneForm, true);
    const auto& h = j.at("holonomy");
    if (h.size() != 3) throw Error("state JSON: holonomy needs 3 entries");
    for (int c = 0; c < 3; ++c) s.a.holonomy[c] = h[c].get<double>();
    for (const auto& mode : j.at("modes")) {
      const auto& k = mode.at("k");
      const auto& v = mode.at("v");
      const auto& al = mode.at("alpha");
      if (k.size() != 3 || v.size() != 4 || al.size() != 6) throw Error("state JSON: malformed mode");
      int k1 = k[0].get<int>(), k2 = k[1].get<int>(), k3 = k[2].get<int>();
      if (!s.v.contains(k1, k2, k3)) throw Error("state JSON: mode outside the cutoff");
      for (int c = 0; c < torus::kWSpinor; ++c)
        s.v.at(k1, k2, k3, c) = torus::cplx(v[2 * c].get<double>(), v[2 * c + 1].get<double>());
      for (int c = 0; c < torus::kOneForm; ++c)
        s.a.fluctuation.at(k1, k2, k3, c) = torus::cplx(al[2 * c].get<double>(), al[2 * c + 1].get<double>());
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("state JSON: ") + e.what());
  }
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  if (header.empty()) throw Error("CSV header is empty");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw Error("CSV row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of(",\"\n") != std::string::npos) throw Error("CSV cell needs quoting");
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

}  // namespace g2
