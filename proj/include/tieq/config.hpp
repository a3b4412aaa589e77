#pragma once

#include <cstdint>
#include <string>

namespace tieq {

/// Every constant the theory leaves implicit, surfaced with a name and a
/// default. Overridable from key=value config files; unknown keys are
/// rejected so typos cannot silently fall back to defaults.
struct Constants {
    double c = 0.0009765625;   // 2^-10; scale in the dilation precondition rho <= c*alpha*eps/d
    double otilde_c1 = 1.0;    // slowly-growing cost shape C1 * log(2/x)^C2 used when re-basing
    double otilde_c2 = 1.0;
    double cert_c = 8.0;       // strength constant C accepted certificates are checked against
    double delta = 1.0;        // density-gain parameter delta in the strength triple
    double eps = 0.25;         // trichotomy slack
    double rho_scale = 0.25;   // iteration dilation rho ~ rho_scale * alpha / rank
    std::int64_t step_cap = 12;
    std::int64_t budget = 4000000;  // branch-and-bound node budget
    std::int64_t gamma_cap = 3;     // largest |Gamma~| the increment search tries
    std::int64_t min_cell = 3;      // dilations stop shrinking below this many elements
    double audit_ratio = 8.0;       // reported rank-growth ratio is compared against this
};

/// Parse a key=value file ('#' comments, blank lines ok). Throws
/// std::invalid_argument naming the offending line for unknown keys or
/// malformed values.
Constants parse_config_file(const std::string& path);
Constants parse_config_text(const std::string& text);

}  // namespace tieq
