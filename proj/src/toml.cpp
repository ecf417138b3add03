#include "tale/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "tale/errors.hpp"

namespace tale::toml {

double Value::as_double() const {
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  if (std::holds_alternative<long long>(v))
    return static_cast<double>(std::get<long long>(v));
  throw ConfigError("toml: value is not a number");
}

long long Value::as_int() const {
  if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
  if (std::holds_alternative<double>(v))
    return static_cast<long long>(std::get<double>(v));
  throw ConfigError("toml: value is not an integer");
}

const std::string& Value::as_string() const {
  if (!std::holds_alternative<std::string>(v))
    throw ConfigError("toml: value is not a string");
  return std::get<std::string>(v);
}

bool Value::as_bool() const {
  if (!std::holds_alternative<bool>(v)) throw ConfigError("toml: value is not a boolean");
  return std::get<bool>(v);
}

std::vector<double> Value::as_double_array() const {
  if (std::holds_alternative<std::vector<double>>(v))
    return std::get<std::vector<double>>(v);
  if (is_number()) return {as_double()};
  throw ConfigError("toml: value is not a numeric array");
}

const Value& Table::at(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ConfigError("toml: missing key '" + key + "'");
  return it->second;
}

double Table::number_or(const std::string& key, double dflt) const {
  auto it = values.find(key);
  return it == values.end() ? dflt : it->second.as_double();
}

long long Table::int_or(const std::string& key, long long dflt) const {
  auto it = values.find(key);
  return it == values.end() ? dflt : it->second.as_int();
}

std::string Table::string_or(const std::string& key, const std::string& dflt) const {
  auto it = values.find(key);
  return it == values.end() ? dflt : it->second.as_string();
}

bool Table::bool_or(const std::string& key, bool dflt) const {
  auto it = values.find(key);
  return it == values.end() ? dflt : it->second.as_bool();
}

const Table* Table::table(const std::string& name) const {
  auto it = tables.find(name);
  return it == tables.end() ? nullptr : &it->second;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

Value parse_scalar(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError("toml: empty value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      throw ConfigError("toml: unterminated string: " + s);
    return Value{s.substr(1, s.size() - 2)};
  }
  if (s == "true") return Value{true};
  if (s == "false") return Value{false};
  // integer or float
  try {
    size_t pos = 0;
    if (s.find_first_of(".eE") == std::string::npos) {
      const long long i = std::stoll(s, &pos);
      if (pos == s.size()) return Value{i};
    } else {
      const double d = std::stod(s, &pos);
      if (pos == s.size()) return Value{d};
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("toml: cannot parse value: " + s);
}

Value parse_value(const std::string& raw) {
  const std::string s = trim(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError("toml: unterminated array: " + s);
    std::string body = s.substr(1, s.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    bool in_str = false;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        items.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) items.push_back(cur);
    std::vector<double> nums;
    std::vector<std::string> strs;
    bool numeric = true;
    for (const auto& item : items) {
      Value v = parse_scalar(item);
      if (v.is_number())
        nums.push_back(v.as_double());
      else if (v.is_string()) {
        numeric = false;
        strs.push_back(v.as_string());
      } else {
        throw ConfigError("toml: unsupported array element");
      }
    }
    if (numeric) return Value{nums};
    return Value{strs};
  }
  return parse_scalar(s);
}

Table* descend(Table& root, const std::string& dotted, bool array_entry) {
  Table* cur = &root;
  std::stringstream ss(dotted);
  std::vector<std::string> parts;
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(trim(part));
  for (size_t i = 0; i < parts.size(); ++i) {
    const bool last = i + 1 == parts.size();
    if (last && array_entry) {
      cur->table_arrays[parts[i]].emplace_back();
      return &cur->table_arrays[parts[i]].back();
    }
    // a name already used by [[...]] refers to its most recent entry
    auto arr = cur->table_arrays.find(parts[i]);
    if (arr != cur->table_arrays.end() && !arr->second.empty())
      cur = &arr->second.back();
    else
      cur = &cur->tables[parts[i]];
  }
  return cur;
}

}  // namespace

Table parse(const std::string& text) {
  Table root;
  Table* current = &root;
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      const bool array_entry = line.size() > 1 && line[1] == '[';
      const size_t close = line.find(array_entry ? "]]" : "]");
      if (close == std::string::npos)
        throw ConfigError("toml: bad table header at line " + std::to_string(lineno));
      const std::string name =
          trim(line.substr(array_entry ? 2 : 1, close - (array_entry ? 2 : 1)));
      current = descend(root, name, array_entry);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("toml: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    current->values[key] = parse_value(line.substr(eq + 1));
  }
  return root;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("toml: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace tale::toml
