#pragma once

#include <ostream>
#include <string>

#include "navgeo/classify.hpp"
#include "navgeo/holonomy.hpp"
#include "navgeo/scenario.hpp"

namespace navgeo {

// CSV with 17 significant digits.
// Trajectory: t, x1..xn, v1..vn, F(x,v).
void write_trajectory_csv(std::ostream& out, const NavigationData& nav, const TransportResult& r);
// Geodesic: t, x1..xn, y1..yn, F(x,y).
void write_geodesic_csv(std::ostream& out, const NavigationData& nav, const GeodesicPath& path);

// JSON reports, pretty-printed with a trailing newline.
std::string to_json(const ValidationReport& r);
std::string to_json(const TransportResult& r, const NavigationData& nav);
std::string to_json(const HolonomyElement& h);
std::string to_json(const RankReport& r);
std::string to_json(const TorsionEval& t);
std::string to_json(const ComparisonReport& r);
std::string to_json(const ClassificationReport& r);

// Multi-line plain-text summary for terminals.
std::string summary(const ClassificationReport& r);

std::string format_double(double v);

}  // namespace navgeo
