#pragma once
#include <map>
#include <string>
#include <vector>

#include "rw/errors.hpp"
#include "rw/potential.hpp"

namespace rwcli {

// Declarative config value: number, string, bool, array, or inline table.
struct Value {
    enum class Type { Number, String, Bool, Array, Table };
    Type type = Type::Number;
    double num = 0;
    std::string str;
    bool b = false;
    std::vector<Value> arr;
    std::map<std::string, Value> tab;
};

// Flat key -> value map; "[section]" headers prefix keys with "section.".
struct Config {
    std::map<std::string, Value> kv;
    std::string dir;  // directory of the config file, for relative paths

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    const Value& at(const std::string& key) const;

    double num(const std::string& key) const;
    double num_or(const std::string& key, double def) const;
    std::string str(const std::string& key) const;
    std::string str_or(const std::string& key, const std::string& def) const;
    bool bool_or(const std::string& key, bool def) const;
    std::vector<double> num_list(const std::string& key) const;

    // canonical serialization used for the manifest hash
    std::string canonical() const;
};

// Throws rw::ConfigInvalid with a line-numbered diagnostic.
Config parse_config_file(const std::string& path);
// Apply one "dotted.key=value" override (same value grammar as the file).
void apply_override(Config& cfg, const std::string& assignment);

// Build a potential from an inline table such as
// {kind="shifted_inverse_power", beta=0.6, shift=1.0}.  Supported kinds:
// zero, inverse_power(beta), shifted_inverse_power(beta, shift),
// smoothed_inverse_power(beta, delta), inverse_square_plus(mu, inner),
// truncated_linearization(inner), tabulated(file = two-column CSV x,q).
rw::PotentialSpec build_potential(const Config& cfg, const Value& v);

std::string fnv1a_hex(const std::string& data);

} // namespace rwcli
