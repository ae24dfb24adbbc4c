#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "g2/calibration.hpp"
#include "g2/grassmann.hpp"
#include "g2/torus/seiberg_witten.hpp"

namespace g2 {

using json = nlohmann::json;

// Shortest decimal that parses back to the same double ('.' separator,
// independent of locale).
std::string format_double(double x);

// {"phi": 35 coefficients in lexicographic index order, "metric": 49 entries
// row-major, "orientation": +-1}. Doubles round-trip bit-exactly.
json structure_to_json(const G2Structure& s);
G2Structure structure_from_json(const json& j);

// 21 reals: the frame, column-major.
json plane_to_json(const OrientedPlane3& p);
OrientedPlane3 plane_from_json(const json& j);

// {"cutoff", "holonomy": [3], "modes": [{"k": [3], "v": [re, im, re, im],
// "alpha": [re, im] x 3}, ...]}; alpha holds the zero-mean fluctuation.
json state_to_json(const torus::SWState& s);
torus::SWState state_from_json(const json& j);

// Minimal CSV writer: header row first, '\n' line ends.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  std::size_t width_;
  std::string out_;
};

}  // namespace g2
