#pragma once

// Flat "key = value" experiment configs with dotted section names.
//
//   # sin on seven equal pieces
//   germ.name = sin
//   partition.uniform = 7
//   alpha.kind = sigmoid
//   alpha.c = 1
//   alpha.rate = 10
//   base.kind = quantum
//   base.n = 50
//   base.q = 0.9
//
// Lists are separated by spaces or commas; numbers may be written as a/b.
// Integer ranges accept "a..b". Unknown keys are rejected.

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mkzfrac::app {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    static Config parse(std::istream& is, const std::string& origin = "<config>");
    static Config load(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string str(const std::string& key, const std::string& fallback) const;
    std::string str(const std::string& key) const;
    double num(const std::string& key, double fallback) const;
    double num(const std::string& key) const;
    long long integer(const std::string& key, long long fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<std::string> words(const std::string& key) const;
    /// "a..b" or an explicit list.
    std::vector<int> int_list(const std::string& key, const std::vector<int>& fallback) const;

    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, int> lines_;
    std::string origin_;

    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

/// Parses one number, accepting a/b fractions.
double parse_number(const std::string& text);

}  // namespace mkzfrac::app
