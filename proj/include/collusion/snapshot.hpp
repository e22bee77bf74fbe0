#pragma once

#include <iosfwd>
#include <string>

#include "collusion/model.hpp"

namespace collusion {

// Line-oriented graph snapshot. First line is a header
//   {"M":5.0,"epoch":"2004-01-01","edges":N}
// followed by one edge per line in (reviewer, product) order:
//   {"r":"u1","p":"p1","v":5.0,"t":12,"s":0.0}
// Doubles are written in shortest round-trip form, so load+save reproduces
// the input bytes exactly.

void write_snapshot(std::ostream& out, const RatingGraph& graph);

/// Throws ParseError (with line number) on malformed content.
RatingGraph read_snapshot(std::istream& in);

void save_snapshot(const std::string& path, const RatingGraph& graph);
RatingGraph load_snapshot(const std::string& path);

}  // namespace collusion
