#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>

#include "g2/error.hpp"
#include "g2/serialize.hpp"

using namespace g2;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0, 5e-324}) {
    std::string s = format_double(x);
    EXPECT_TRUE(same_bits(std::strtod(s.c_str(), nullptr), x)) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(StructureJson, StandardRoundTrip) {
  const G2Structure& s = G2Structure::standard();
  json j = structure_to_json(s);
  EXPECT_EQ(j.at("phi").size(), 35u);
  EXPECT_EQ(j.at("metric").size(), 49u);
  EXPECT_EQ(j.at("orientation"), 1);
  G2Structure back = structure_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.phi(), s.phi());
  EXPECT_EQ(back.metric(), s.metric());
}

TEST(StructureJson, TransformedRoundTripIsBitExact) {
  Rng rng(121);
  Mat7 A = Mat7::Identity() + 0.2 * Mat7(rng.normal_matrix(7, 7));
  G2Structure s = G2Structure::from_phi(pullback(phi0(), A));
  G2Structure back = structure_from_json(json::parse(structure_to_json(s).dump()));
  for (unsigned m : subsets(7, 3)) EXPECT_TRUE(same_bits(back.phi().coeff_by_mask(m), s.phi().coeff_by_mask(m)));
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) EXPECT_TRUE(same_bits(back.metric()(r, c), s.metric()(r, c)));
  EXPECT_EQ(back.orientation(), s.orientation());
}

TEST(StructureJson, MalformedInput) {
  json j = structure_to_json(G2Structure::standard());
  json short_phi = j;
  short_phi["phi"].erase(0);
  EXPECT_THROW(structure_from_json(short_phi), Error);
  json missing = j;
  missing.erase("metric");
  EXPECT_THROW(structure_from_json(missing), Error);
  json wrong_type = j;
  wrong_type["phi"][0] = "x";
  EXPECT_THROW(structure_from_json(wrong_type), Error);
}

TEST(PlaneJson, RoundTrip) {
  OrientedPlane3 L = random_plane(std::uint64_t{7});
  json j = plane_to_json(L);
  EXPECT_EQ(j.size(), 21u);
  // column-major
  EXPECT_EQ(j[8].get<double>(), L.frame()(1, 1));
  OrientedPlane3 back = plane_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.frame(), L.frame());
  EXPECT_THROW(plane_from_json(json::array({1, 2, 3})), Error);
}

TEST(StateJson, RoundTrip) {
  Rng rng(122);
  torus::SWState s = torus::SWState::random(rng, 2, 0.3, {M_PI, 0.1, -2.0});
  json j = state_to_json(s);
  EXPECT_EQ(j.at("cutoff"), 2);
  EXPECT_EQ(j.at("modes").size(), 125u);
  torus::SWState back = state_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.v.data(), s.v.data());
  EXPECT_EQ(back.a.holonomy, s.a.holonomy);
  EXPECT_EQ(back.alpha().data(), s.alpha().data());
}

TEST(StateJson, Rejections) {
  json j = state_to_json(torus::SWState::zero(1));
  json out_of_range = j;
  out_of_range["modes"][0]["k"] = {5, 0, 0};
  EXPECT_THROW(state_from_json(out_of_range), Error);
  json bad_v = j;
  bad_v["modes"][0]["v"] = {1, 2};
  EXPECT_THROW(state_from_json(bad_v), Error);
  json neg = j;
  neg["cutoff"] = -1;
  EXPECT_THROW(state_from_json(neg), Error);
}

TEST(Csv, WriterRules) {
  CsvWriter w({"a", "b"});
  w.row({"1", "2.5"});
  EXPECT_EQ(w.str(), "a,b\n1,2.5\n");
  EXPECT_THROW(w.row({"1"}), Error);
  EXPECT_THROW(w.row({"x,y", "2"}), Error);
  EXPECT_THROW(CsvWriter({}), Error);
}
