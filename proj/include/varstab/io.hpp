#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "varstab/cone.hpp"
#include "varstab/system.hpp"

namespace varstab {

using json = nlohmann::json;

/// Malformed input text (bad JSON syntax or an unparsable value).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed JSON that does not describe a valid instance.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file that cannot be opened.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const Rational& r);
json to_json(const Vec& v);
json to_json(const RatMatrix& m);
json to_json(const HCone& c);
json to_json(const VCone& c);
json to_json(const PolySet& P);
json to_json(const VarSystem& sys);

Rational rational_from_json(const json& j, const std::string& where);
Vec vec_from_json(const json& j, const std::string& where);
HCone hcone_from_json(const json& j, const std::string& where);
PolySet polyset_from_json(const json& j, const std::string& where);

/// Parses and validates a problem description.
VarSystem system_from_json(const json& j);
VarSystem parse_system(const std::string& text);
/// Throws FileError when the file cannot be opened.
VarSystem load_system(const std::string& path);
json parse_json_text(const std::string& text);
std::string read_file(const std::string& path);

/// Parses "1;0", "1,0" or "1/2; -3".
Vec parse_direction(const std::string& text);
/// Splits "q;u" style text: the first `l` entries form q, the rest u.
std::pair<Vec, Vec> parse_qu(const std::string& text, std::size_t l, std::size_t n);

}  // namespace varstab
