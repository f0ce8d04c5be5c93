#pragma once

// Placeholder; the command surface is assembled once the core modules exist.

#include <iostream>
#include <string>
#include <vector>

namespace ordtop::cli {

inline int dispatch(const std::vector<std::string>&, std::ostream& out, std::ostream&) {
  out << "ordtop\n";
  return 0;
}

}  // namespace ordtop::cli
