// Command-line front end. Every subcommand computes something with the
// library, re-states what it asserted as (name, lhs, rhs, pass) check lines,
// and writes one JSON report. Reports are deterministic for fixed inputs and
// seed; the only field allowed to vary between identical runs is timing_ms.
//
// Exit codes: 0 all asserted checks pass, 1 an invariant failed (a check
// line is false, or the library detected an internal contradiction),
// 2 malformed input or usage.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tieq/bohr.hpp"
#include "tieq/config.hpp"
#include "tieq/counting.hpp"
#include "tieq/endo.hpp"
#include "tieq/fourier.hpp"
#include "tieq/group.hpp"
#include "tieq/increment.hpp"
#include "tieq/lattice.hpp"
#include "tieq/report.hpp"
#include "tieq/setio.hpp"

using ojson = nlohmann::ordered_json;
using namespace tieq;

namespace {

// ---------------------------------------------------------------- parsing

std::vector<std::int64_t> parse_int_list(const std::string& s, char sep) {
    std::vector<std::int64_t> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        // trim spaces so "1, 2" works
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty entry in list '" + s + "'");
        item = item.substr(a, b - a + 1);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (...) {
            throw std::invalid_argument("'" + item + "' is not an integer");
        }
        if (used != item.size()) throw std::invalid_argument("'" + item + "' is not an integer");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty entry in list '" + s + "'");
        item = item.substr(a, b - a + 1);
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (...) {
            throw std::invalid_argument("'" + item + "' is not a number");
        }
        if (used != item.size()) throw std::invalid_argument("'" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
    return out;
}

// semicolon-separated groups of comma-separated integers
std::vector<std::vector<std::int64_t>> parse_grouped_ints(const std::string& s) {
    std::vector<std::vector<std::int64_t>> out;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, ';')) out.push_back(parse_int_list(part, ','));
    if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
    return out;
}

struct GroupOpts {
    std::string factors;       // --group "7" or "5,5"
    std::int64_t matrix_n = 0; // --matrix-n with --dim: (Z/N)^d
    std::int64_t dim = 0;
};

void add_group_opts(CLI::App* cmd, GroupOpts& o) {
    cmd->add_option("--group", o.factors, "cyclic factors, comma separated (e.g. 7 or 5,5)");
    cmd->add_option("--matrix-n", o.matrix_n, "uniform modulus N for the matrix form (Z/N)^d");
    cmd->add_option("--dim", o.dim, "number of copies d for --matrix-n");
}

FiniteAbelianGroup build_group(const GroupOpts& o) {
    if (!o.factors.empty()) {
        if (o.matrix_n != 0) throw std::invalid_argument("--group and --matrix-n are mutually exclusive");
        return FiniteAbelianGroup(parse_int_list(o.factors, ','));
    }
    if (o.matrix_n > 0) {
        if (o.dim <= 0) throw std::invalid_argument("--matrix-n needs --dim");
        return FiniteAbelianGroup::power(o.matrix_n, static_cast<std::size_t>(o.dim));
    }
    throw std::invalid_argument("specify the group: --group a,b,... or --matrix-n N --dim d");
}

// "c1,c2,c3" builds scalar maps; "a,b,..;a,b,..;a,b,.." builds three
// row-major matrices (uniform modulus groups only, enforced by the library).
EquationSystem build_system(const FiniteAbelianGroup& g, const std::string& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("--coeffs is required for this command");
    if (coeffs.find(';') != std::string::npos) {
        auto mats = parse_grouped_ints(coeffs);
        if (mats.size() != 3) throw std::invalid_argument("--coeffs needs exactly three matrices");
        return EquationSystem::make(Endomorphism::matrix(g, mats[0]), Endomorphism::matrix(g, mats[1]),
                                    Endomorphism::matrix(g, mats[2]));
    }
    auto cs = parse_int_list(coeffs, ',');
    if (cs.size() != 3) throw std::invalid_argument("--coeffs needs exactly three coefficients");
    return EquationSystem::make(Endomorphism::scalar(g, cs[0]), Endomorphism::scalar(g, cs[1]),
                                Endomorphism::scalar(g, cs[2]));
}

struct BohrOpts {
    std::string freqs;   // "1;3" or "1,0;0,2" (coordinates per frequency)
    std::string widths;  // "0.5,0.5"
    std::string file;    // JSON alternative
};

void add_bohr_opts(CLI::App* cmd, BohrOpts& o, const std::string& suffix) {
    cmd->add_option("--freqs" + suffix, o.freqs,
                    "frequency coordinates, ';' between frequencies (e.g. 1;3 or 1,0;0,2)");
    cmd->add_option("--widths" + suffix, o.widths, "widths, comma separated, one per frequency");
    cmd->add_option("--bohr" + suffix, o.file, "Bohr set JSON file (alternative to --freqs/--widths)");
}

BohrSet bohr_from_json_file(const std::string& path, const FiniteAbelianGroup& g) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    ojson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        if (k != "frequencies" && k != "widths" && k != "elements" && k != "factors")
            throw std::invalid_argument(path + ": unknown key '" + k + "'");
    }
    if (j.contains("factors")) {
        std::vector<std::int64_t> f = j["factors"].get<std::vector<std::int64_t>>();
        if (f != g.factors())
            throw std::invalid_argument(path + ": factors do not match the requested group");
    }
    if (!j.contains("frequencies") || !j.contains("widths"))
        throw std::invalid_argument(path + ": needs 'frequencies' and 'widths'");
    std::vector<Index> freqs;
    for (const auto& row : j["frequencies"]) {
        std::vector<std::int64_t> coords = row.get<std::vector<std::int64_t>>();
        freqs.push_back(g.index_of(coords));
    }
    std::vector<double> widths = j["widths"].get<std::vector<double>>();
    BohrSet b(g, freqs, widths);
    if (j.contains("elements")) {
        std::vector<Index> listed;
        for (const auto& row : j["elements"]) {
            std::vector<std::int64_t> coords = row.get<std::vector<std::int64_t>>();
            listed.push_back(g.index_of(coords));
        }
        if (sorted_unique(std::move(listed)) != b.elements())
            throw std::invalid_argument(path + ": recorded elements do not match the frequency/width data");
    }
    return b;
}

BohrSet build_bohr(const BohrOpts& o, const FiniteAbelianGroup& g, bool default_whole_group) {
    if (!o.file.empty()) {
        if (!o.freqs.empty() || !o.widths.empty())
            throw std::invalid_argument("--bohr excludes --freqs/--widths");
        return bohr_from_json_file(o.file, g);
    }
    if (o.freqs.empty() && o.widths.empty()) {
        if (default_whole_group) return BohrSet::whole_group(g);
        throw std::invalid_argument("specify a Bohr set: --freqs with --widths, or --bohr FILE");
    }
    if (o.freqs.empty() || o.widths.empty())
        throw std::invalid_argument("--freqs and --widths go together");
    auto rows = parse_grouped_ints(o.freqs);
    std::vector<Index> freqs;
    for (const auto& coords : rows) freqs.push_back(g.index_of(coords));
    return BohrSet(g, freqs, parse_double_list(o.widths));
}

// ------------------------------------------------------------- serializing

ojson coords_json(const FiniteAbelianGroup& g, Index x) { return ojson(g.coords_of(x)); }

ojson element_list_json(const FiniteAbelianGroup& g, const std::vector<Index>& set) {
    ojson arr = ojson::array();
    for (Index x : set) arr.push_back(coords_json(g, x));
    return arr;
}

ojson subset_json(const FiniteAbelianGroup& g, const std::vector<Index>& set) {
    ojson j;
    j["factors"] = g.factors();
    j["elements"] = element_list_json(g, set);
    return j;
}

ojson bohr_json(const BohrSet& b, bool with_elements) {
    ojson j;
    j["frequencies"] = element_list_json(b.group(), b.frequencies());
    j["widths"] = b.widths();
    j["rank"] = b.rank();
    j["size"] = b.size();
    j["density"] = b.density();
    if (with_elements) j["elements"] = element_list_json(b.group(), b.elements());
    return j;
}

ojson checks_json(const std::vector<CheckLine>& checks) {
    ojson arr = ojson::array();
    for (const auto& c : checks) {
        ojson line;
        line["name"] = c.name;
        line["lhs"] = c.lhs;
        line["rhs"] = c.rhs;
        line["pass"] = c.pass;
        arr.push_back(std::move(line));
    }
    return arr;
}

ojson constants_json(const Constants& k) {
    ojson j;
    j["c"] = k.c;
    j["otilde_c1"] = k.otilde_c1;
    j["otilde_c2"] = k.otilde_c2;
    j["cert_c"] = k.cert_c;
    j["delta"] = k.delta;
    j["eps"] = k.eps;
    j["rho_scale"] = k.rho_scale;
    j["step_cap"] = k.step_cap;
    j["budget"] = k.budget;
    j["gamma_cap"] = k.gamma_cap;
    j["min_cell"] = k.min_cell;
    j["audit_ratio"] = k.audit_ratio;
    return j;
}

ojson certificate_json(const IncrementCertificate& c) {
    const FiniteAbelianGroup& g = c.base.group();
    ojson j;
    j["strength"] = {{"delta", c.strength.delta}, {"d_prime", c.strength.d_prime}, {"c", c.strength.c}};
    j["rho"] = c.rho;
    j["witness"] = coords_json(g, c.witness);
    j["base"] = bohr_json(c.base, false);
    j["relative"] = bohr_json(c.relative, false);
    j["tilde"] = bohr_json(c.tilde, false);
    BohrSet bsec = c.b_second();
    j["b_second"] = {{"rank", bsec.rank()}, {"size", bsec.size()}};
    return j;
}

// ------------------------------------------------------------------ output

struct Report {
    std::string command;
    ojson config;  // semantic inputs: group, files, parameters, constants, seed
    ojson results;
    std::vector<CheckLine> checks;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int emit(const Report& r, const std::string& out_path, const std::vector<std::string>& argv_echo,
         std::chrono::steady_clock::time_point t0) {
    bool pass = true;
    int failed = 0;
    for (const auto& c : r.checks)
        if (!c.pass) {
            pass = false;
            ++failed;
        }

    ojson rep;
    rep["schema_version"] = 1;
    rep["command"] = r.command;
    rep["config"] = r.config;
    rep["results"] = r.results;
    rep["checks"] = checks_json(r.checks);
    rep["pass"] = pass;
    if (!pass) {
        ojson repro;
        repro["argv"] = argv_echo;
        repro["failed_checks"] = failed;
        repro["note"] = "re-run with this argv; output is identical apart from timing_ms";
        rep["reproducer"] = std::move(repro);
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep["timing_ms"] = ms;  // the one nondeterministic field, always last

    std::string text = rep.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
        out << text;
    }
    std::cerr << r.command << ": " << (pass ? "pass" : "FAIL (" + std::to_string(failed) + " check(s) failed)")
              << "\n";
    return pass ? 0 : 1;
}

ojson notices_json(const std::vector<std::string>& notices) {
    ojson arr = ojson::array();
    for (const auto& n : notices) arr.push_back(n);
    return arr;
}

ojson system_json(const EquationSystem& sys) {
    ojson j;
    j["t1"] = sys.t1().describe();
    j["t2"] = sys.t2().describe();
    j["t3"] = sys.t3().describe();
    ojson dets = ojson::array();
    for (const auto& d : sys.determinant_report())
        dets.push_back({{"name", d.name}, {"det", d.det}, {"gcd", d.gcd}});
    j["determinants"] = std::move(dets);
    j["canonical"] = sys.is_canonical();
    return j;
}

// ------------------------------------------------------------- subcommands

struct CommonOpts {
    GroupOpts group;
    std::string coeffs;
    std::string set_path, set2_path, set3_path;
    std::string config_path;
    std::string out_path;
    std::string trace_path;
    std::uint64_t seed = 0;
};

Constants load_constants(const std::string& path) {
    return path.empty() ? Constants{} : parse_config_file(path);
}

ojson base_config(const CommonOpts& o, const Constants& k) {
    ojson j;
    j["seed"] = o.seed;
    if (!o.group.factors.empty()) j["group"] = o.group.factors;
    if (o.group.matrix_n > 0) {
        j["matrix_n"] = o.group.matrix_n;
        j["dim"] = o.group.dim;
    }
    if (!o.coeffs.empty()) j["coeffs"] = o.coeffs;
    if (!o.set_path.empty()) j["set"] = o.set_path;
    if (!o.set2_path.empty()) j["set2"] = o.set2_path;
    if (!o.set3_path.empty()) j["set3"] = o.set3_path;
    if (!o.config_path.empty()) j["config_file"] = o.config_path;
    j["constants"] = constants_json(k);
    return j;
}

// count: exact enumeration against both evaluations of the normalized count
int run_count(const CommonOpts& o, const std::vector<std::string>& argv_echo,
              std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    FiniteAbelianGroup g = build_group(o.group);
    EquationSystem sys = build_system(g, o.coeffs);
    if (o.set_path.empty()) throw std::invalid_argument("--set is required");
    ParsedSet p1 = parse_set_file(o.set_path, g);
    ParsedSet p2 = o.set2_path.empty() ? p1 : parse_set_file(o.set2_path, g);
    ParsedSet p3 = o.set3_path.empty() ? p1 : parse_set_file(o.set3_path, g);

    SolutionCount sc = enumerate_solutions(p1.elements, p2.elements, p3.elements, sys);
    double td = t_functional(p1.elements, p2.elements, p3.elements, sys, TMethod::direct);
    double tf = t_functional(p1.elements, p2.elements, p3.elements, sys, TMethod::fourier);

    Report r;
    r.command = "count";
    r.config = base_config(o, k);
    r.results["system"] = system_json(sys);
    r.results["set_sizes"] = {p1.elements.size(), p2.elements.size(), p3.elements.size()};
    r.results["input_notices"] = notices_json(p1.notices);
    r.results["total"] = sc.total;
    r.results["trivial"] = sc.trivial;
    r.results["nontrivial"] = sc.nontrivial();
    r.results["normalized"] = sc.normalized;
    r.results["t_direct"] = td;
    r.results["t_fourier"] = tf;
    if (sc.sample_nontrivial) {
        ojson s = ojson::array();
        for (Index x : *sc.sample_nontrivial) s.push_back(coords_json(g, x));
        r.results["sample_nontrivial"] = std::move(s);
    } else {
        r.results["sample_nontrivial"] = nullptr;
    }

    const double tol = 1e-9;
    r.checks.push_back({"direct-vs-fourier", td, tf, std::abs(td - tf) <= tol});
    r.checks.push_back({"count-matches-functional", sc.normalized, tf, std::abs(sc.normalized - tf) <= tol});
    return emit(r, o.out_path, argv_echo, t0);
}

// maxfree: branch-and-bound extremal set, witness re-verified from scratch
int run_maxfree(const CommonOpts& o, const std::vector<std::string>& argv_echo,
                std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    FiniteAbelianGroup g = build_group(o.group);
    EquationSystem sys = build_system(g, o.coeffs);

    MaxFreeResult res = max_solution_free(sys, k.budget);
    std::vector<Index> greedy = greedy_solution_free(sys);
    SolutionCount recheck = enumerate_solutions(res.witness, res.witness, res.witness, sys);

    Report r;
    r.command = "maxfree";
    r.config = base_config(o, k);
    r.results["system"] = system_json(sys);
    r.results["best"] = res.best;
    r.results["exact"] = res.exact;
    r.results["nodes"] = res.nodes;
    r.results["witness"] = subset_json(g, res.witness);
    r.results["greedy_size"] = greedy.size();

    r.checks.push_back({"witness-solution-free", static_cast<double>(recheck.nontrivial()), 0.0,
                        recheck.nontrivial() == 0});
    r.checks.push_back({"witness-size-matches", static_cast<double>(res.witness.size()),
                        static_cast<double>(res.best),
                        static_cast<std::int64_t>(res.witness.size()) == res.best});
    r.checks.push_back({"greedy-not-larger", static_cast<double>(greedy.size()),
                        static_cast<double>(res.best),
                        !res.exact || static_cast<std::int64_t>(greedy.size()) <= res.best});
    return emit(r, o.out_path, argv_echo, t0);
}

// bohr-info: construct, enumerate, decide regularity
int run_bohr_info(const CommonOpts& o, const BohrOpts& bo, const std::vector<std::string>& argv_echo,
                  std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    FiniteAbelianGroup g = build_group(o.group);
    BohrSet b = build_bohr(bo, g, false);
    RegularityReport rr = b.is_regular();

    Report r;
    r.command = "bohr-info";
    r.config = base_config(o, k);
    if (!bo.file.empty()) r.config["bohr_file"] = bo.file;

    const bool small = b.size() <= 4096;
    r.results["bohr"] = bohr_json(b, small);
    if (!small) r.results["elements_omitted"] = "set larger than 4096 elements";
    r.results["regularity"] = {{"regular", rr.regular},
                               {"worst_kappa", rr.worst_kappa},
                               {"worst_size", rr.worst_size},
                               {"worst_bound", rr.worst_bound},
                               {"worst_side", rr.worst_is_upper ? "upper" : "lower"}};

    r.checks.push_back({"contains-identity", b.contains(0) ? 1.0 : 0.0, 1.0, b.contains(0)});
    return emit(r, o.out_path, argv_echo, t0);
}

// regular-dilate: find rho in [1/2, 1] whose dilate is regular, then prove it
int run_regular_dilate(const CommonOpts& o, const BohrOpts& bo, const std::vector<std::string>& argv_echo,
                       std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    FiniteAbelianGroup g = build_group(o.group);
    BohrSet b = build_bohr(bo, g, false);
    double rho = b.find_regular_dilate();
    BohrSet bd = b.dilate(rho);
    RegularityReport rr = bd.is_regular();

    Report r;
    r.command = "regular-dilate";
    r.config = base_config(o, k);
    if (!bo.file.empty()) r.config["bohr_file"] = bo.file;
    r.results["rho"] = rho;
    r.results["original_size"] = b.size();
    r.results["dilated"] = bohr_json(bd, bd.size() <= 4096);
    r.results["regularity"] = {{"regular", rr.regular},
                               {"worst_kappa", rr.worst_kappa},
                               {"worst_size", rr.worst_size},
                               {"worst_bound", rr.worst_bound}};

    r.checks.push_back({"rho-in-range", rho, 0.5, rho >= 0.5 && rho <= 1.0});
    r.checks.push_back({"dilate-regular", rr.worst_size, rr.worst_bound, rr.regular});
    return emit(r, o.out_path, argv_echo, t0);
}

// dichotomy: many solutions, small energy, or concentrated spectral mass
int run_dichotomy(const CommonOpts& o, const BohrOpts& bo, const BohrOpts& bo2, double alpha_flag,
                  double rho_flag, const std::vector<std::string>& argv_echo,
                  std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    FiniteAbelianGroup g = build_group(o.group);
    EquationSystem sys = build_system(g, o.coeffs);
    if (!sys.is_canonical())
        throw std::invalid_argument("dichotomy expects canonical coefficients (first map the identity)");
    if (o.set_path.empty()) throw std::invalid_argument("--set is required");
    BohrSet b = build_bohr(bo, g, false);
    BohrSet b2 = build_bohr(bo2, g, false);
    ParsedSet p1 = parse_set_file(o.set_path, g);
    ParsedSet p2 = o.set2_path.empty() ? p1 : parse_set_file(o.set2_path, g);
    ParsedSet p3 = o.set3_path.empty() ? p1 : parse_set_file(o.set3_path, g);
    double alpha = alpha_flag > 0.0
                       ? alpha_flag
                       : static_cast<double>(p1.elements.size()) / static_cast<double>(b.size());

    DichotomyReport rep = progressions_dichotomy(p1.elements, p2.elements, p3.elements, sys, b, b2,
                                                 alpha, rho_flag);

    Report r;
    r.command = "dichotomy";
    r.config = base_config(o, k);
    r.config["alpha"] = alpha;
    r.config["rho"] = rho_flag;
    r.results["system"] = system_json(sys);
    r.results["alpha"] = rep.alpha;
    r.results["mu_b"] = rep.mu_b;
    r.results["mu_bprime"] = rep.mu_bprime;
    r.results["t_value"] = rep.t_value;
    r.results["many"] = {{"lhs", rep.many_lhs}, {"rhs", rep.many_rhs}, {"holds", rep.many_solutions}};
    r.results["energy"] = {{"value", rep.energy},
                           {"threshold", rep.energy_threshold},
                           {"large", rep.energy_large}};
    r.results["spectral"] = {{"mass_a1", rep.mass_a1},
                             {"mass_a2", rep.mass_a2},
                             {"threshold", rep.mass_threshold},
                             {"branch_taken", rep.spectral_branch},
                             {"eta_star", rep.eta_star},
                             {"eta_star_source", rep.eta_star_source},
                             {"eta_star_mass", rep.eta_star_mass}};
    r.results["contract"] = {{"applicable", rep.contract_applicable}, {"holds", rep.contract_holds}};
    r.results["preconditions"] = checks_json(rep.preconditions);  // diagnostics, not folded into pass

    r.checks.push_back({"dichotomy-contract", std::max(rep.mass_a1, rep.mass_a2), rep.mass_threshold,
                        !rep.contract_applicable || rep.contract_holds});
    return emit(r, o.out_path, argv_echo, t0);
}

void write_trace(const std::string& path, const IterationLog& log) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << "step,alpha,rank,rank_star,mu_star,branch\n";
    for (const auto& s : log.steps)
        out << s.n << ',' << format_double(s.alpha) << ',' << s.rank_b << ',' << s.rank_star << ','
            << format_double(s.mu_star) << ',' << s.branch << '\n';
}

ojson step_json(const IterationStep& s, const FiniteAbelianGroup& g) {
    ojson j;
    j["n"] = s.n;
    j["alpha"] = s.alpha;
    j["set_size"] = s.set_size;
    j["rank_b"] = s.rank_b;
    j["rank_star"] = s.rank_star;
    j["mu_star"] = s.mu_star;
    j["branch"] = s.branch;
    j["rho"] = s.rho;
    j["shift_choice"] = s.shift_choice;
    j["translate"] = coords_json(g, s.translate);
    j["gamma_tilde"] = element_list_json(g, s.gamma_tilde);
    j["nu_tilde"] = s.nu_tilde;
    j["next_rank"] = s.freq_next.size();
    if (s.full_density_nontrivial >= 0) j["dense_branch_nontrivial"] = s.full_density_nontrivial;
    if (s.certificate) {
        j["certificate"] = certificate_json(*s.certificate);
        j["certificate_checks"] = checks_json(s.certificate_report.checks);
    }
    return j;
}

ojson iteration_json(const IterationLog& log, const FiniteAbelianGroup& g) {
    ojson j;
    j["alpha0"] = log.alpha0;
    j["initial_frequencies"] = element_list_json(g, log.freq_b0);
    ojson steps = ojson::array();
    for (const auto& s : log.steps) steps.push_back(step_json(s, g));
    j["steps"] = std::move(steps);
    j["outcome"] = log.outcome;
    j["has_solution"] = log.has_solution;
    if (log.has_solution) {
        ojson sol = ojson::array();
        for (Index x : log.solution) sol.push_back(coords_json(g, x));
        j["solution"] = std::move(sol);
    }
    return j;
}

// checks shared by iterate and rank-audit: certificates verify, density
// climbs at the certified rate, reported solutions really solve the equation
void iteration_checks(const IterationLog& log, const std::vector<Index>& a, const EquationSystem& sys,
                      std::vector<CheckLine>& checks) {
    for (std::size_t i = 0; i < log.steps.size(); ++i) {
        const IterationStep& s = log.steps[i];
        if (!s.certificate) continue;
        std::string tag = "-step-" + std::to_string(s.n);
        checks.push_back({"certificate" + tag, s.certificate_report.pass ? 1.0 : 0.0, 1.0,
                          s.certificate_report.pass});
        if (i + 1 < log.steps.size()) {
            double rate = 1.0 + s.certificate->strength.delta / s.certificate->strength.c;
            double expect = rate * s.alpha;
            double got = log.steps[i + 1].alpha;
            checks.push_back({"alpha-growth" + tag, got, expect, got >= expect - 1e-12});
        }
    }
    if (log.has_solution) {
        const auto& sol = log.solution;
        Index img = sys.group().add(sys.group().add(sys.t1().apply(sol[0]), sys.t2().apply(sol[1])),
                                    sys.t3().apply(sol[2]));
        checks.push_back({"solution-satisfies-equation", static_cast<double>(img), 0.0, img == 0});
        bool inside = sorted_contains(a, sol[0]) && sorted_contains(a, sol[1]) && sorted_contains(a, sol[2]);
        checks.push_back({"solution-in-set", inside ? 1.0 : 0.0, 1.0, inside});
    }
}

int run_iterate(const CommonOpts& o, const BohrOpts& bo, const std::vector<std::string>& argv_echo,
                std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    FiniteAbelianGroup g = build_group(o.group);
    EquationSystem sys = build_system(g, o.coeffs);
    if (o.set_path.empty()) throw std::invalid_argument("--set is required");
    ParsedSet p = parse_set_file(o.set_path, g);
    BohrSet b0 = build_bohr(bo, g, true);

    IterationLog log = run_weak_iteration(p.elements, b0, sys, k);
    if (!o.trace_path.empty()) write_trace(o.trace_path, log);

    Report r;
    r.command = "iterate";
    r.config = base_config(o, k);
    if (!bo.file.empty()) r.config["bohr_file"] = bo.file;
    r.results["system"] = system_json(sys);
    r.results["input_notices"] = notices_json(p.notices);
    r.results["iteration"] = iteration_json(log, g);
    iteration_checks(log, p.elements, sys, r.checks);
    return emit(r, o.out_path, argv_echo, t0);
}

int run_rank_audit(const CommonOpts& o, const BohrOpts& bo, const std::vector<std::string>& argv_echo,
                   std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    FiniteAbelianGroup g = build_group(o.group);
    EquationSystem sys = build_system(g, o.coeffs);
    if (o.set_path.empty()) throw std::invalid_argument("--set is required");
    ParsedSet p = parse_set_file(o.set_path, g);
    BohrSet b0 = build_bohr(bo, g, true);

    IterationLog log = run_weak_iteration(p.elements, b0, sys, k);
    if (!o.trace_path.empty()) write_trace(o.trace_path, log);
    AuditReport audit = rank_growth_audit(log, b0, sys, k);

    Report r;
    r.command = "rank-audit";
    r.config = base_config(o, k);
    if (!bo.file.empty()) r.config["bohr_file"] = bo.file;
    r.results["system"] = system_json(sys);
    r.results["iteration"] = iteration_json(log, g);
    r.results["commuting"] = audit.commuting;
    r.results["bound_path"] = audit.bound_path;
    ojson steps = ojson::array();
    for (const auto& s : audit.steps)
        steps.push_back({{"n", s.n},
                         {"contained", s.contained},
                         {"rank", s.rank},
                         {"predicted_cap", s.predicted_cap},
                         {"ratio", s.ratio}});
    r.results["audit_steps"] = std::move(steps);

    for (const auto& s : audit.steps) {
        std::string tag = "-step-" + std::to_string(s.n);
        if (audit.bound_path == "word-set")
            r.checks.push_back({"frequency-containment" + tag, s.contained ? 1.0 : 0.0, 1.0, s.contained});
        r.checks.push_back(
            {"rank-ratio" + tag, s.ratio, k.audit_ratio, s.ratio <= k.audit_ratio});
    }
    for (const auto& c : audit.fallback_checks) r.checks.push_back(c);
    r.checks.push_back({"audit-verdict", audit.pass ? 1.0 : 0.0, 1.0, audit.pass});
    return emit(r, o.out_path, argv_echo, t0);
}

// embed: truncate, reduce mod the constructed prime, confirm the exact lift
int run_embed(const CommonOpts& o, const std::string& points_path, std::int64_t t,
              const std::string& triple_str, const std::vector<std::string>& argv_echo,
              std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    if (points_path.empty()) throw std::invalid_argument("--points is required");
    if (o.group.dim <= 0) throw std::invalid_argument("--dim is required");
    if (triple_str.empty()) throw std::invalid_argument("--triple is required");
    auto mats = parse_grouped_ints(triple_str);
    if (mats.size() != 3) throw std::invalid_argument("--triple needs exactly three matrices");
    std::size_t d = static_cast<std::size_t>(o.group.dim);
    IntegerMatrixTriple triple = IntegerMatrixTriple::make(d, mats[0], mats[1], mats[2]);
    LatticePointSet a = parse_point_file(points_path, d);

    EmbedReport rep = embed_and_lift_check(a, t, triple);

    Report r;
    r.command = "embed";
    r.config = base_config(o, k);
    r.config["points"] = points_path;
    r.config["t"] = t;
    r.config["triple"] = triple_str;
    r.results["embedding_constant"] = rep.c;
    r.results["prime"] = rep.prime;
    r.results["points_total"] = a.points.size();
    r.results["points_dropped"] = rep.dropped;
    r.results["points_kept"] = rep.truncated.points.size();
    r.results["integer_solutions"] = rep.integer_solutions;
    r.results["modp_solutions"] = rep.modp_solutions;
    r.results["embedded"] = rep.embedded;
    ojson reduced = ojson::array();
    for (const auto& m : rep.reduced.m) reduced.push_back(m);
    r.results["reduced_matrices"] = std::move(reduced);
    r.checks = rep.checks;
    return emit(r, o.out_path, argv_echo, t0);
}

ojson pair_json(const ComplexLattice::Element& e) { return ojson::array({e[0], e[1]}); }

// triangles: multiplication-matrix system for a spec triangle, solved over A
int run_triangles(const CommonOpts& o, const std::string& points_path, const std::string& lattice_name,
                  const std::string& table_str, const std::string& vertices_str, bool dedup,
                  const std::vector<std::string>& argv_echo, std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    if (points_path.empty()) throw std::invalid_argument("--points is required");
    if (vertices_str.empty()) throw std::invalid_argument("--vertices is required");

    std::optional<ComplexLattice> lat;
    if (!table_str.empty()) {
        auto rows = parse_grouped_ints(table_str);
        if (rows.size() != 3 || rows[0].size() != 2 || rows[1].size() != 2 || rows[2].size() != 2)
            throw std::invalid_argument("--table needs three coordinate pairs: w1*w1; w1*w2; w2*w2");
        lat.emplace(ComplexLattice::Element{rows[0][0], rows[0][1]},
                    ComplexLattice::Element{rows[1][0], rows[1][1]},
                    ComplexLattice::Element{rows[2][0], rows[2][1]});
    } else if (lattice_name == "gaussian") {
        lat.emplace(ComplexLattice::gaussian());
    } else if (lattice_name == "eisenstein") {
        lat.emplace(ComplexLattice::eisenstein());
    } else {
        throw std::invalid_argument("--lattice must be gaussian or eisenstein (or give --table)");
    }

    auto verts = parse_grouped_ints(vertices_str);
    if (verts.size() != 3 || verts[0].size() != 2 || verts[1].size() != 2 || verts[2].size() != 2)
        throw std::invalid_argument("--vertices needs three coordinate pairs, e.g. 0,0;1,0;0,1");
    TriangleSpec spec{{verts[0][0], verts[0][1]}, {verts[1][0], verts[1][1]}, {verts[2][0], verts[2][1]}};

    LatticePointSet a = parse_point_file(points_path, 2);
    IntegerMatrixTriple triple = triangle_to_matrices(*lat, spec);
    std::vector<PointTriple> found = find_similar_triangles(a, *lat, spec, dedup);

    Report r;
    r.command = "triangles";
    r.config = base_config(o, k);
    r.config["points"] = points_path;
    r.config["lattice"] = table_str.empty() ? lattice_name : ("table:" + table_str);
    r.config["vertices"] = vertices_str;
    r.config["dedup"] = dedup;
    ojson matrices = ojson::array();
    std::int64_t min_abs_det = 0;
    std::int64_t max_abs_sum = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& m = triple.m[i];
        std::int64_t det = m[0] * m[3] - m[1] * m[2];
        matrices.push_back({{"entries", m}, {"det", det}});
        min_abs_det = i == 0 ? std::abs(det) : std::min(min_abs_det, std::abs(det));
    }
    for (std::size_t e = 0; e < 4; ++e) {
        std::int64_t s = triple.m[0][e] + triple.m[1][e] + triple.m[2][e];
        max_abs_sum = std::max(max_abs_sum, std::abs(s));
    }
    r.results["matrices"] = std::move(matrices);
    r.results["count"] = found.size();
    ojson triples = ojson::array();
    for (const auto& tr : found)
        triples.push_back(ojson::array({pair_json(tr[0]), pair_json(tr[1]), pair_json(tr[2])}));
    r.results["triples"] = std::move(triples);

    r.checks.push_back({"matrices-sum-to-zero", static_cast<double>(max_abs_sum), 0.0, max_abs_sum == 0});
    r.checks.push_back(
        {"matrices-nonsingular", static_cast<double>(min_abs_det), 1.0, min_abs_det >= 1});
    return emit(r, o.out_path, argv_echo, t0);
}

// diverge: partial sums of the inverse-norm series over sup-norm shells
int run_diverge(const CommonOpts& o, const std::string& points_path, std::int64_t exponent,
                bool euclidean, const std::vector<std::string>& argv_echo,
                std::chrono::steady_clock::time_point t0) {
    Constants k = load_constants(o.config_path);
    if (points_path.empty()) throw std::invalid_argument("--points is required");
    if (o.group.dim <= 0) throw std::invalid_argument("--dim is required");
    LatticePointSet a = parse_point_file(points_path, static_cast<std::size_t>(o.group.dim));
    std::vector<DivergenceRow> rows = divergence_diagnostic(a, exponent, euclidean);

    Report r;
    r.command = "diverge";
    r.config = base_config(o, k);
    r.config["points"] = points_path;
    r.config["exponent"] = exponent;
    r.config["norm"] = euclidean ? "euclidean" : "sup";
    ojson table = ojson::array();
    bool monotone = true;
    double prev = 0.0;
    for (const auto& row : rows) {
        table.push_back({{"radius", row.radius},
                         {"shell_count", row.shell_count},
                         {"partial_sum", row.partial_sum},
                         {"comparison_sum", row.comparison_sum}});
        if (row.partial_sum < prev - 1e-15) monotone = false;
        prev = row.partial_sum;
    }
    r.results["rows"] = std::move(table);
    r.results["final_partial_sum"] = rows.empty() ? 0.0 : rows.back().partial_sum;
    r.results["final_comparison_sum"] = rows.empty() ? 0.0 : rows.back().comparison_sum;

    r.checks.push_back({"partial-sums-monotone", monotone ? 1.0 : 0.0, 1.0, monotone});
    return emit(r, o.out_path, argv_echo, t0);
}

}  // namespace

int main(int argc, char** argv) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> argv_echo(argv, argv + argc);

    CLI::App app{"equation counting and density-increment toolkit for finite abelian groups"};
    app.require_subcommand(1);

    CommonOpts o;
    BohrOpts bo, bo2;
    double alpha_flag = 0.0;
    double rho_flag = 1.0;
    std::string points_path, triple_str, lattice_name = "gaussian", table_str, vertices_str;
    std::int64_t t_radius = 0, exponent = 0;
    bool dedup = false, euclidean = false;

    auto add_common = [&](CLI::App* cmd, bool with_system, bool with_sets) {
        add_group_opts(cmd, o.group);
        if (with_system) cmd->add_option("--coeffs", o.coeffs, "c1,c2,c3 or three row-major matrices m1;m2;m3");
        if (with_sets) {
            cmd->add_option("--set", o.set_path, "text file, one element per line");
            cmd->add_option("--set2", o.set2_path, "second set (defaults to --set)");
            cmd->add_option("--set3", o.set3_path, "third set (defaults to --set)");
        }
        cmd->add_option("--config", o.config_path, "key=value constants file");
        cmd->add_option("--out", o.out_path, "write the JSON report here instead of stdout");
        cmd->add_option("--seed", o.seed, "recorded in the report; runs are deterministic per seed");
    };

    CLI::App* c_count = app.add_subcommand("count", "exact and Fourier-side solution counts, cross-checked");
    add_common(c_count, true, true);

    CLI::App* c_maxfree = app.add_subcommand("maxfree", "largest solution-free subset by branch and bound");
    add_common(c_maxfree, true, false);

    CLI::App* c_bohr = app.add_subcommand("bohr-info", "enumerate a Bohr set and decide regularity");
    add_common(c_bohr, false, false);
    add_bohr_opts(c_bohr, bo, "");

    CLI::App* c_reg = app.add_subcommand("regular-dilate", "find a regular dilate with scale in [1/2, 1]");
    add_common(c_reg, false, false);
    add_bohr_opts(c_reg, bo, "");

    CLI::App* c_dich = app.add_subcommand("dichotomy", "count/energy/spectral trichotomy on one instance");
    add_common(c_dich, true, true);
    add_bohr_opts(c_dich, bo, "");
    add_bohr_opts(c_dich, bo2, "2");
    c_dich->add_option("--alpha", alpha_flag, "reference density (default |A1| / |B|)");
    c_dich->add_option("--rho", rho_flag, "dilation scale used to nest the smaller Bohr set");

    CLI::App* c_iter = app.add_subcommand("iterate", "density-increment iteration with verified certificates");
    add_common(c_iter, true, true);
    add_bohr_opts(c_iter, bo, "");
    c_iter->add_option("--trace", o.trace_path, "CSV trace: step,alpha,rank,rank_star,mu_star,branch");

    CLI::App* c_audit = app.add_subcommand("rank-audit", "iterate, then audit Bohr rank growth");
    add_common(c_audit, true, true);
    add_bohr_opts(c_audit, bo, "");
    c_audit->add_option("--trace", o.trace_path, "CSV trace: step,alpha,rank,rank_star,mu_star,branch");

    CLI::App* c_embed = app.add_subcommand("embed", "truncate, reduce mod a constructed prime, verify the lift");
    add_common(c_embed, false, false);
    c_embed->add_option("--points", points_path, "integer points, one per line");
    c_embed->add_option("--t", t_radius, "truncation radius: keep sup-norm <= T");
    c_embed->add_option("--triple", triple_str, "three row-major integer matrices m1;m2;m3");

    CLI::App* c_tri = app.add_subcommand("triangles", "similar copies of a spec triangle in a planar set");
    add_common(c_tri, false, false);
    c_tri->add_option("--points", points_path, "planar integer points, one per line");
    c_tri->add_option("--lattice", lattice_name, "gaussian (default) or eisenstein");
    c_tri->add_option("--table", table_str, "custom basis products w1*w1; w1*w2; w2*w2");
    c_tri->add_option("--vertices", vertices_str, "triangle vertices p1;p2;p3 as coordinate pairs");
    c_tri->add_flag("--dedup", dedup, "one representative per unordered vertex set");

    CLI::App* c_div = app.add_subcommand("diverge", "partial sums of sum 1/||a||^d over sup-norm shells");
    add_common(c_div, false, false);
    c_div->add_option("--points", points_path, "integer points, one per line");
    c_div->add_option("--exponent", exponent, "exponent d in the summand 1/||a||^d");
    c_div->add_flag("--euclidean", euclidean, "Euclidean summand norm (shells stay sup-norm)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(c_count)) return run_count(o, argv_echo, t0);
        if (app.got_subcommand(c_maxfree)) return run_maxfree(o, argv_echo, t0);
        if (app.got_subcommand(c_bohr)) return run_bohr_info(o, bo, argv_echo, t0);
        if (app.got_subcommand(c_reg)) return run_regular_dilate(o, bo, argv_echo, t0);
        if (app.got_subcommand(c_dich))
            return run_dichotomy(o, bo, bo2, alpha_flag, rho_flag, argv_echo, t0);
        if (app.got_subcommand(c_iter)) return run_iterate(o, bo, argv_echo, t0);
        if (app.got_subcommand(c_audit)) return run_rank_audit(o, bo, argv_echo, t0);
        if (app.got_subcommand(c_embed))
            return run_embed(o, points_path, t_radius, triple_str, argv_echo, t0);
        if (app.got_subcommand(c_tri))
            return run_triangles(o, points_path, lattice_name, table_str, vertices_str, dedup, argv_echo, t0);
        if (app.got_subcommand(c_div))
            return run_diverge(o, points_path, exponent, euclidean, argv_echo, t0);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 1;
    }
    return 2;  // unreachable with require_subcommand(1)
}
