#ifndef TALE_TOML_HPP
#define TALE_TOML_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tale::toml {

// Minimal TOML subset: [tables], [[arrays of tables]], key = value with
// strings, integers, floats, booleans and flat arrays. Enough for scenario
// files; not a general TOML implementation.
struct Value {
  std::variant<std::string, long long, double, bool, std::vector<double>,
               std::vector<std::string>>
      v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_number() const {
    return std::holds_alternative<long long>(v) || std::holds_alternative<double>(v);
  }
  double as_double() const;
  long long as_int() const;
  const std::string& as_string() const;
  bool as_bool() const;
  std::vector<double> as_double_array() const;
};

struct Table {
  std::map<std::string, Value> values;
  std::map<std::string, std::vector<Table>> table_arrays;
  std::map<std::string, Table> tables;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const Value& at(const std::string& key) const;
  double number_or(const std::string& key, double dflt) const;
  long long int_or(const std::string& key, long long dflt) const;
  std::string string_or(const std::string& key, const std::string& dflt) const;
  bool bool_or(const std::string& key, bool dflt) const;
  const Table* table(const std::string& name) const;
};

Table parse(const std::string& text);
Table parse_file(const std::string& path);

}  // namespace tale::toml

#endif
