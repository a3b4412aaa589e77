#pragma once

#include <string>

namespace tieq {

/// One asserted comparison inside a structured report: both sides are always
/// carried, never just the verdict.
struct CheckLine {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    bool pass = false;
};

}  // namespace tieq
