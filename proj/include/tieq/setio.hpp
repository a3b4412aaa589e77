#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tieq/group.hpp"
#include "tieq/lattice.hpp"

namespace tieq {

struct ParsedSet {
    std::vector<Index> elements;        // sorted
    std::vector<std::string> notices;   // e.g. out-of-range coordinates reduced into the group
};

/// One element per line, whitespace-separated coordinates, arity equal to the
/// number of group factors. '#' starts a comment, blank lines are skipped.
/// Out-of-range coordinates are reduced with a notice; duplicates (after
/// reduction) are an error naming both lines.
ParsedSet parse_set_text(const std::string& text, const FiniteAbelianGroup& g);
ParsedSet parse_set_file(const std::string& path, const FiniteAbelianGroup& g);

/// Same line format for integer lattice points, taken verbatim (no
/// reduction). Duplicates are an error naming both lines.
LatticePointSet parse_point_text(const std::string& text, std::size_t dim, std::string source);
LatticePointSet parse_point_file(const std::string& path, std::size_t dim);

}  // namespace tieq
