#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "critters/error.hpp"
#include "critters/lang.hpp"
#include "critters/simulation.hpp"

namespace critters {

// Portal files hold one portal per line:
//   3,7: pass if shirt == orange
// Blank lines and lines starting with '#' are ignored.

inline PortalPlacement parse_portal_line(std::string_view line) {
  const auto colon = line.find(':');
  const auto comma = line.find(',');
  if (colon == std::string_view::npos || comma == std::string_view::npos || comma > colon) {
    throw Error("expected 'x,y: <predicate>'");
  }
  auto number = [](std::string_view s) {
    const std::string t(s);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      throw Error("bad coordinate '" + t + "'");
    }
    if (t.find_first_not_of(" \t", used) != std::string::npos) {
      throw Error("bad coordinate '" + t + "'");
    }
    return v;
  };
  PortalPlacement p;
  p.tile = {number(line.substr(0, comma)), number(line.substr(comma + 1, colon - comma - 1))};
  p.predicate = parse_predicate(line.substr(colon + 1));
  return p;
}

inline std::vector<PortalPlacement> parse_portals(std::string_view text) {
  std::vector<PortalPlacement> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_portal_line(line));
    } catch (const Error& e) {
      throw Error("portal line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

inline std::string to_text(const PortalPlacement& p) {
  return std::to_string(p.tile.x) + "," + std::to_string(p.tile.y) + ": " + to_text(p.predicate);
}

inline std::string format_portals(const std::vector<PortalPlacement>& portals) {
  std::string out;
  for (const auto& p : portals) out += to_text(p) + "\n";
  return out;
}

}  // namespace critters
