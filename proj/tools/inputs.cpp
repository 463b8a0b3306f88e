#include "inputs.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "config.hpp"

namespace stablenoise::cli {

namespace {

double to_double(const std::string& t, const std::string& what) {
    const char* b = t.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (e == b || *e != '\0' || !std::isfinite(v)) throw config_error(what + ": not a number: '" + t + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, sep)) out.push_back(trim(t));
    return out;
}

// name(args) -> name, args
std::pair<std::string, std::vector<double>> call_form(const std::string& s, const std::string& what) {
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') throw config_error(what + ": expected name(args), got '" + s + "'");
    std::vector<double> args;
    for (const auto& t : split(s.substr(open + 1, s.size() - open - 2), ',')) args.push_back(to_double(t, what));
    return {trim(s.substr(0, open)), args};
}

}  // namespace

std::vector<double> parse_list(const std::string& s, const std::string& what, bool monotone) {
    std::vector<double> v;
    for (const auto& t : split(s, ',')) {
        if (t.empty()) continue;
        v.push_back(to_double(t, what));
    }
    if (v.empty()) throw config_error(what + ": empty list");
    if (monotone && v.size() > 1) {
        const bool up = v[1] > v[0];
        for (std::size_t i = 1; i < v.size(); ++i)
            if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) throw config_error(what + ": schedule must be strictly monotone");
    }
    return v;
}

filter_spec parse_filter(const std::string& s) {
    const auto colon = s.find(':');
    const std::string kind = trim(s.substr(0, colon));
    const std::vector<double> a = colon == std::string::npos ? std::vector<double>{} : parse_list(s.substr(colon + 1), "filter");
    const auto need = [&](std::size_t lo, std::size_t hi) {
        if (a.size() < lo || a.size() > hi) throw config_error("filter '" + s + "': wrong number of parameters");
    };
    const auto count = [&](double k) {
        if (k < 0.0 || k != std::floor(k)) throw config_error("filter '" + s + "': K must be a non-negative integer");
        return static_cast<std::int64_t>(k);
    };
    if (kind == "identity") {
        need(0, 0);
        return filter_spec::identity(1);
    }
    if (kind == "geometric") {
        need(2, 2);
        return filter_spec::geometric(a[0], count(a[1]));
    }
    if (kind == "power") {
        need(2, 4);
        homogeneous_profile p;
        p.beta = a[0];
        if (a.size() > 3) p.minus = a[3];
        return filter_spec::power(p, count(a[1]), a.size() > 2 ? a[2] : 1.0);
    }
    if (kind == "coeffs") {
        if (a.size() % 2 == 0) throw config_error("filter '" + s + "': coeffs needs an odd count c_-K..c_K");
        const auto K = static_cast<std::int64_t>(a.size() / 2);
        return filter_spec::explicit_coefficients(index_window({-K}, {K + 1}), a, filter_regime::summable);
    }
    throw config_error("unknown filter '" + s + "'");
}

space_ptr parse_space(const std::string& s) {
    const auto [name, a] = call_form(trim(s), "space");
    if (name == "box") {
        if (a.empty() || a.size() % 2) throw config_error("space box needs pairs a,b");
        std::vector<double> lo, hi;
        for (std::size_t i = 0; i < a.size(); i += 2) {
            lo.push_back(a[i]);
            hi.push_back(a[i + 1]);
        }
        return make_box_space(box(lo, hi));
    }
    if (name == "sphere") {
        if (a.size() != 1 || a[0] != std::floor(a[0])) throw config_error("space sphere needs an integer q");
        return make_sphere_space(static_cast<int>(a[0]));
    }
    throw config_error("unknown space '" + s + "'");
}

std::vector<std::vector<double>> read_points(const std::string& path) {
    std::stringstream in(read_text(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        for (char& c : line)
            if (c == '\t' || c == ';') c = ',';
        std::vector<std::string> cells;
        if (line.find(',') != std::string::npos) {
            cells = split(line, ',');
        } else {
            std::stringstream ws(line);
            std::string t;
            while (ws >> t) cells.push_back(t);
        }
        std::vector<double> row;
        try {
            for (const auto& c : cells) row.push_back(to_double(c, path));
        } catch (const config_error&) {
            if (first) {
                first = false;
                continue;
            }
            throw;
        }
        first = false;
        if (!rows.empty() && row.size() != rows.front().size()) throw config_error(path + ": rows differ in length");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw config_error(path + ": no points");
    return rows;
}

}  // namespace stablenoise::cli
