#include "tieq/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tieq {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Constants parse_config_text(const std::string& text) {
    Constants c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        double d = 0.0;
        try {
            std::size_t used = 0;
            d = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad numeric value '" + val + "'");
        }
        if (key == "c") c.c = d;
        else if (key == "otilde_c1") c.otilde_c1 = d;
        else if (key == "otilde_c2") c.otilde_c2 = d;
        else if (key == "cert_c") c.cert_c = d;
        else if (key == "delta") c.delta = d;
        else if (key == "eps") c.eps = d;
        else if (key == "rho_scale") c.rho_scale = d;
        else if (key == "step_cap") c.step_cap = static_cast<std::int64_t>(d);
        else if (key == "budget") c.budget = static_cast<std::int64_t>(d);
        else if (key == "gamma_cap") c.gamma_cap = static_cast<std::int64_t>(d);
        else if (key == "min_cell") c.min_cell = static_cast<std::int64_t>(d);
        else if (key == "audit_ratio") c.audit_ratio = d;
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return c;
}

Constants parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace tieq
