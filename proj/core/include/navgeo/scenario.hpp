#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "navgeo/transport.hpp"

namespace navgeo {

inline constexpr int kScenarioSchema = 1;

struct NamedCurve {
  std::string name;
  Curve curve;

  bool operator==(const NamedCurve&) const = default;
};

struct GridSpec {
  std::size_t points = 400;
  int directions = 16;

  bool operator==(const GridSpec&) const = default;
};

struct Experiments {
  std::vector<NamedCurve> curves;
  std::vector<NamedCurve> loops;
  std::vector<TangentSample> samples;
  std::optional<GridSpec> grid;

  bool operator==(const Experiments& other) const;
};

struct Scenario {
  std::string name;
  std::string description;
  NavigationData nav;
  Experiments experiments;

  bool operator==(const Scenario&) const = default;
};

// File format (schema 1):
//   { "schema": 1, "name": ..., "description": ..., "dim": n,
//     "domain": {"kind": "ball", "center": [...], "radius": r}
//             | {"kind": "box", "lo": [...], "hi": [...]},
//     "metric": [["h11", "h12", ...], ["h22", ...], ...],   upper triangle rows
//     "wind": ["W1", ...],
//     "experiments": {
//       "curves": [{"name": ..., "components": ["expr in t", ...]}
//                | {"name": ..., "points": [[...], ...]}],
//       "loops": [same as curves, closed],
//       "samples": [{"x": [...], "y": [...]}],
//       "grid": {"points": N, "directions": M} } }
//
// Throws ParseError (with line/column or JSON pointer) for malformed input and
// ValidationError (with the failing constraint and witness point) when the
// navigation data or experiments do not validate.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize(const Scenario& scenario);

// Throws UnknownScenario.
Scenario builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace navgeo
