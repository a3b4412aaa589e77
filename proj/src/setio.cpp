#include "tieq/setio.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tieq {

namespace {

struct Line {
    int number = 0;
    std::vector<std::int64_t> values;
};

std::vector<Line> tokenize(const std::string& text, std::size_t arity, const char* what) {
    std::vector<Line> out;
    std::istringstream stream(text);
    std::string raw;
    int number = 0;
    while (std::getline(stream, raw)) {
        ++number;
        std::string::size_type hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        Line line;
        line.number = number;
        std::string tok;
        while (fields >> tok) {
            std::size_t used = 0;
            std::int64_t v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("line " + std::to_string(number) + ": '" + tok +
                                            "' is not an integer");
            }
            if (used != tok.size())
                throw std::invalid_argument("line " + std::to_string(number) + ": '" + tok +
                                            "' is not an integer");
            line.values.push_back(v);
        }
        if (line.values.empty()) continue;
        if (line.values.size() != arity)
            throw std::invalid_argument("line " + std::to_string(number) + ": expected " +
                                        std::to_string(arity) + " " + what + ", got " +
                                        std::to_string(line.values.size()));
        out.push_back(std::move(line));
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

ParsedSet parse_set_text(const std::string& text, const FiniteAbelianGroup& g) {
    ParsedSet out;
    std::map<Index, int> first_line;
    for (const Line& line : tokenize(text, g.num_factors(), "coordinates")) {
        bool reduced = false;
        for (std::size_t j = 0; j < line.values.size(); ++j)
            if (line.values[j] < 0 || line.values[j] >= g.factors()[j]) reduced = true;
        Index x = g.index_of(line.values);
        auto [it, fresh] = first_line.emplace(x, line.number);
        if (!fresh)
            throw std::invalid_argument("line " + std::to_string(line.number) +
                                        ": duplicate of the element first given on line " +
                                        std::to_string(it->second));
        if (reduced)
            out.notices.push_back("line " + std::to_string(line.number) + ": coordinates reduced into " +
                                  g.describe());
        out.elements.push_back(x);
    }
    std::sort(out.elements.begin(), out.elements.end());
    return out;
}

ParsedSet parse_set_file(const std::string& path, const FiniteAbelianGroup& g) {
    return parse_set_text(slurp(path), g);
}

LatticePointSet parse_point_text(const std::string& text, std::size_t dim, std::string source) {
    std::vector<std::vector<std::int64_t>> pts;
    std::map<std::vector<std::int64_t>, int> first_line;
    for (const Line& line : tokenize(text, dim, "coordinates")) {
        auto [it, fresh] = first_line.emplace(line.values, line.number);
        if (!fresh)
            throw std::invalid_argument("line " + std::to_string(line.number) +
                                        ": duplicate of the point first given on line " +
                                        std::to_string(it->second));
        pts.push_back(line.values);
    }
    return LatticePointSet::make(dim, std::move(pts), std::move(source));
}

LatticePointSet parse_point_file(const std::string& path, std::size_t dim) {
    return parse_point_text(slurp(path), dim, path);
}

}  // namespace tieq
