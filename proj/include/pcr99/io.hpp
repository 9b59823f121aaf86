#pragma once

#include <string>
#include <vector>

#include "pcr99/geometry.hpp"

namespace pcr99 {

/// Reads a correspondence file: one pair per line, `ax,ay,az,bx,by,bz`,
/// comma and/or whitespace separated; lines beginning with '#' (after
/// optional leading whitespace) and blank lines are ignored.
/// Throws ParseError (with the offending line number) or IoError.
CorrespondenceSet load_correspondences(const std::string& path);

/// Writes the matching format with full round-trip precision.
void save_correspondences(const CorrespondenceSet& corr, const std::string& path);

/// Reads a point file: `x y z` per line, same comment/separator rules.
std::vector<Point3> load_point_cloud(const std::string& path);

/// Translates and uniformly scales a cloud so it fits inside [0,1]^3.
std::vector<Point3> fit_to_unit_cube(std::vector<Point3> points);

}  // namespace pcr99
