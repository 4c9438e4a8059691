#include "config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using rw::ConfigInvalid;

namespace rwcli {

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    int line = 0;

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigInvalid("line " + std::to_string(line) + ": " + msg +
                            " in '" + s + "'");
    }
};

Value parse_value(Cursor& c);

Value parse_array(Cursor& c) {
    Value v;
    v.type = Value::Type::Array;
    ++c.i;  // '['
    c.skip_ws();
    if (c.i < c.s.size() && c.s[c.i] == ']') { ++c.i; return v; }
    while (true) {
        v.arr.push_back(parse_value(c));
        c.skip_ws();
        if (c.i >= c.s.size()) c.fail("unterminated array");
        if (c.s[c.i] == ',') { ++c.i; continue; }
        if (c.s[c.i] == ']') { ++c.i; return v; }
        c.fail("expected ',' or ']' in array");
    }
}

std::string parse_key(Cursor& c) {
    c.skip_ws();
    size_t start = c.i;
    while (c.i < c.s.size() &&
           (std::isalnum((unsigned char)c.s[c.i]) || c.s[c.i] == '_' || c.s[c.i] == '.'))
        ++c.i;
    if (c.i == start) c.fail("expected a key");
    return c.s.substr(start, c.i - start);
}

Value parse_table(Cursor& c) {
    Value v;
    v.type = Value::Type::Table;
    ++c.i;  // '{'
    c.skip_ws();
    if (c.i < c.s.size() && c.s[c.i] == '}') { ++c.i; return v; }
    while (true) {
        std::string key = parse_key(c);
        c.skip_ws();
        if (c.i >= c.s.size() || c.s[c.i] != '=') c.fail("expected '=' after '" + key + "'");
        ++c.i;
        v.tab[key] = parse_value(c);
        c.skip_ws();
        if (c.i >= c.s.size()) c.fail("unterminated inline table");
        if (c.s[c.i] == ',') { ++c.i; continue; }
        if (c.s[c.i] == '}') { ++c.i; return v; }
        c.fail("expected ',' or '}' in inline table");
    }
}

Value parse_value(Cursor& c) {
    c.skip_ws();
    if (c.i >= c.s.size()) c.fail("missing value");
    char ch = c.s[c.i];
    if (ch == '[') return parse_array(c);
    if (ch == '{') return parse_table(c);
    if (ch == '"') {
        Value v;
        v.type = Value::Type::String;
        ++c.i;
        while (c.i < c.s.size() && c.s[c.i] != '"') v.str.push_back(c.s[c.i++]);
        if (c.i >= c.s.size()) c.fail("unterminated string");
        ++c.i;
        return v;
    }
    if (c.s.compare(c.i, 4, "true") == 0) {
        Value v; v.type = Value::Type::Bool; v.b = true; c.i += 4; return v;
    }
    if (c.s.compare(c.i, 5, "false") == 0) {
        Value v; v.type = Value::Type::Bool; v.b = false; c.i += 5; return v;
    }
    char* end = nullptr;
    double d = std::strtod(c.s.c_str() + c.i, &end);
    if (end == c.s.c_str() + c.i) c.fail("cannot parse value");
    c.i = end - c.s.c_str();
    Value v;
    v.type = Value::Type::Number;
    v.num = d;
    return v;
}

std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void serialize(const Value& v, std::ostringstream& out) {
    char buf[40];
    switch (v.type) {
        case Value::Type::Number:
            std::snprintf(buf, sizeof buf, "%.17g", v.num);
            out << buf;
            break;
        case Value::Type::String: out << '"' << v.str << '"'; break;
        case Value::Type::Bool: out << (v.b ? "true" : "false"); break;
        case Value::Type::Array:
            out << '[';
            for (size_t i = 0; i < v.arr.size(); ++i) {
                if (i) out << ',';
                serialize(v.arr[i], out);
            }
            out << ']';
            break;
        case Value::Type::Table:
            out << '{';
            for (auto it = v.tab.begin(); it != v.tab.end(); ++it) {
                if (it != v.tab.begin()) out << ',';
                out << it->first << '=';
                serialize(it->second, out);
            }
            out << '}';
            break;
    }
}

} // namespace

const Value& Config::at(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigInvalid("missing required key '" + key + "'");
    return it->second;
}

double Config::num(const std::string& key) const {
    const Value& v = at(key);
    if (v.type != Value::Type::Number) throw ConfigInvalid("'" + key + "' must be a number");
    return v.num;
}

double Config::num_or(const std::string& key, double def) const {
    return has(key) ? num(key) : def;
}

std::string Config::str(const std::string& key) const {
    const Value& v = at(key);
    if (v.type != Value::Type::String) throw ConfigInvalid("'" + key + "' must be a string");
    return v.str;
}

std::string Config::str_or(const std::string& key, const std::string& def) const {
    return has(key) ? str(key) : def;
}

bool Config::bool_or(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const Value& v = at(key);
    if (v.type != Value::Type::Bool) throw ConfigInvalid("'" + key + "' must be a boolean");
    return v.b;
}

std::vector<double> Config::num_list(const std::string& key) const {
    const Value& v = at(key);
    if (v.type != Value::Type::Array) throw ConfigInvalid("'" + key + "' must be an array");
    std::vector<double> out;
    for (const Value& e : v.arr) {
        if (e.type != Value::Type::Number)
            throw ConfigInvalid("'" + key + "' must contain only numbers");
        out.push_back(e.num);
    }
    return out;
}

std::string Config::canonical() const {
    std::ostringstream out;
    for (const auto& [k, v] : kv) {
        out << k << '=';
        serialize(v, out);
        out << '\n';
    }
    return out.str();
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
    Config cfg;
    size_t slash = path.find_last_of('/');
    cfg.dir = slash == std::string::npos ? "." : path.substr(0, slash);
    std::string raw, prefix;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigInvalid("line " + std::to_string(lineno) + ": unterminated section header");
            prefix = trim(line.substr(1, line.size() - 2));
            if (prefix.empty())
                throw ConfigInvalid("line " + std::to_string(lineno) + ": empty section name");
            prefix += '.';
            continue;
        }
        Cursor c{line, 0, lineno};
        std::string key = parse_key(c);
        c.skip_ws();
        if (c.i >= c.s.size() || c.s[c.i] != '=') c.fail("expected '=' after '" + key + "'");
        ++c.i;
        Value v = parse_value(c);
        if (!c.done()) c.fail("trailing characters after value");
        cfg.kv[prefix + key] = v;
    }
    return cfg;
}

void apply_override(Config& cfg, const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigInvalid("--set expects key=value, got '" + assignment + "'");
    std::string key = trim(assignment.substr(0, eq));
    std::string rhs = trim(assignment.substr(eq + 1));
    Cursor c{rhs, 0, 0};
    Value v = parse_value(c);
    if (!c.done()) c.fail("trailing characters after value");
    cfg.kv[key] = v;
}

rw::PotentialSpec build_potential(const Config& cfg, const Value& v) {
    if (v.type != Value::Type::Table)
        throw ConfigInvalid("potential must be an inline table {kind=..., ...}");
    auto field = [&](const char* name) -> const Value& {
        auto it = v.tab.find(name);
        if (it == v.tab.end())
            throw ConfigInvalid(std::string("potential needs field '") + name + "'");
        return it->second;
    };
    auto numf = [&](const char* name) {
        const Value& f = field(name);
        if (f.type != Value::Type::Number)
            throw ConfigInvalid(std::string("potential field '") + name + "' must be a number");
        return f.num;
    };
    const Value& kindv = field("kind");
    if (kindv.type != Value::Type::String) throw ConfigInvalid("potential kind must be a string");
    const std::string& kind = kindv.str;
    if (kind == "zero") return rw::PotentialSpec::zero();
    if (kind == "inverse_power") return rw::PotentialSpec::inverse_power(numf("beta"));
    if (kind == "shifted_inverse_power")
        return rw::PotentialSpec::shifted_inverse_power(numf("beta"), numf("shift"));
    if (kind == "smoothed_inverse_power")
        return rw::PotentialSpec::smoothed_inverse_power(numf("beta"), numf("delta"));
    if (kind == "inverse_square_plus")
        return rw::PotentialSpec::inverse_square_plus(numf("mu"),
                                                      build_potential(cfg, field("inner")));
    if (kind == "truncated_linearization")
        return rw::truncate_to_type1(build_potential(cfg, field("inner")));
    if (kind == "tabulated") {
        const Value& fv = field("file");
        if (fv.type != Value::Type::String)
            throw ConfigInvalid("tabulated potential field 'file' must be a string");
        std::string path = fv.str;
        if (!path.empty() && path.front() != '/') path = cfg.dir + "/" + path;
        std::ifstream in(path);
        if (!in) throw ConfigInvalid("tabulated potential file '" + path + "' does not exist");
        std::vector<double> xs, qs;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            line = trim(strip_comment(line));
            if (line.empty() || line == "x,q") continue;
            double x, q;
            if (std::sscanf(line.c_str(), "%lf , %lf", &x, &q) != 2 &&
                std::sscanf(line.c_str(), "%lf %lf", &x, &q) != 2)
                throw ConfigInvalid(path + " line " + std::to_string(lineno) +
                                    ": expected two columns (x, q)");
            xs.push_back(x);
            qs.push_back(q);
        }
        return rw::PotentialSpec::tabulated(std::move(xs), std::move(qs));
    }
    throw ConfigInvalid("unknown potential kind '" + kind + "'");
}

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

} // namespace rwcli
