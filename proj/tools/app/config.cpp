#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mkzfrac::app {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "germ.name", "germ.params", "germ.file",
        "interval", "partition", "partition.uniform",
        "alpha.kind", "alpha.c", "alpha.rate",
        "base.kind", "base.n", "base.q",
        "grid.size", "solver.tol", "solver.max_iter", "solver.direct",
        "mkz.eps", "mkz.max_terms", "seed",
        "constrain.mode", "constrain.g.name", "constrain.g.params", "constrain.cn",
        "constrain.random", "constrain.margin",
        "converge.mode", "converge.n", "converge.q", "converge.lip", "converge.beta", "converge.fine",
        "dimension.levels", "dimension.points", "dimension.jmin", "dimension.jmax", "dimension.beta",
        "dimension.tol",
        "muntz.lambda", "muntz.count", "muntz.step", "muntz.ratio", "muntz.values", "muntz.m",
        "muntz.n_factor", "muntz.p", "muntz.compare", "muntz.target.name", "muntz.target.params",
        "lp.p", "lp.n",
    };
    return keys;
}

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && issp(static_cast<unsigned char>(s[b]))) ++b;
    return s.substr(b);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool parse_plain(const std::string& s, double& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    auto res = std::from_chars(b, e, v);
    return res.ec == std::errc{} && res.ptr == e;
}

}  // namespace

double parse_number(const std::string& text) {
    const std::string s = trim(text);
    double v = 0.0;
    if (parse_plain(s, v)) return v;
    const auto slash = s.find('/');
    double a = 0.0, b = 0.0;
    if (slash != std::string::npos && parse_plain(trim(s.substr(0, slash)), a) &&
        parse_plain(trim(s.substr(slash + 1)), b) && b != 0.0)
        return a / b;
    throw ConfigError("'" + s + "' is not a number");
}

Config Config::parse(std::istream& is, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (cfg.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.entries_[key] = value;
        cfg.lines_[key] = lineno;
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config '" + path + "'");
    return parse(is, path);
}

Config Config::from_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
}

void Config::set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
    entries_[key] = value;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

void Config::fail(const std::string& key, const std::string& what) const {
    std::string where = origin_.empty() ? std::string("<config>") : origin_;
    const auto it = lines_.find(key);
    if (it != lines_.end()) where += ":" + std::to_string(it->second);
    throw ConfigError(where + ": " + key + ": " + what);
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::string Config::str(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "missing");
    return it->second;
}

double Config::num(const std::string& key, double fallback) const {
    return has(key) ? num(key) : fallback;
}

double Config::num(const std::string& key) const {
    try {
        return parse_number(str(key));
    } catch (const ConfigError& e) {
        fail(key, e.what());
    }
}

long long Config::integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const double v = num(key);
    if (v != static_cast<double>(static_cast<long long>(v))) fail(key, "expected an integer");
    return static_cast<long long>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = str(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, "expected true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& w : split_list(str(key))) {
        try {
            out.push_back(parse_number(w));
        } catch (const ConfigError& e) {
            fail(key, e.what());
        }
    }
    if (out.empty()) fail(key, "empty list");
    return out;
}

std::vector<std::string> Config::words(const std::string& key) const {
    auto out = split_list(str(key));
    if (out.empty()) fail(key, "empty list");
    return out;
}

std::vector<int> Config::int_list(const std::string& key, const std::vector<int>& fallback) const {
    if (!has(key)) return fallback;
    const std::string v = str(key);
    const auto dots = v.find("..");
    std::vector<int> out;
    auto as_int = [&](const std::string& s) {
        double d = 0.0;
        try {
            d = parse_number(s);
        } catch (const ConfigError& e) {
            fail(key, e.what());
        }
        if (d != static_cast<double>(static_cast<int>(d))) fail(key, "expected integers");
        return static_cast<int>(d);
    };
    if (dots != std::string::npos) {
        const int a = as_int(v.substr(0, dots)), b = as_int(v.substr(dots + 2));
        if (b < a) fail(key, "empty range");
        for (int i = a; i <= b; ++i) out.push_back(i);
    } else {
        for (const auto& w : split_list(v)) out.push_back(as_int(w));
    }
    if (out.empty()) fail(key, "empty list");
    return out;
}

}  // namespace mkzfrac::app
