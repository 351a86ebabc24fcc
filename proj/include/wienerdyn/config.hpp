#pragma once

/// @file
/// Run configuration files: INI-style sections of key = value pairs.
///
///   [run]
///   seed = 42
///   m = 64
///   paths = 100000

#include <optional>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "errors.hpp"

namespace wienerdyn {

class Config {
 public:
  Config() = default;

  static Config load(const std::string& path) {
    Config c;
    try {
      boost::property_tree::read_ini(path, c.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw parse_error(e.message(), static_cast<int>(e.line()), e.filename());
    }
    return c;
  }

  static Config parse(std::istream& in) {
    Config c;
    try {
      boost::property_tree::read_ini(in, c.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw parse_error(e.message(), static_cast<int>(e.line()));
    }
    return c;
  }

  bool has(const std::string& key) const { return tree_.get_child_optional(key).has_value(); }

  /// Typed lookup of "section.key"; a value that does not convert is a
  /// parse_error naming the field.
  template <class T>
  std::optional<T> get(const std::string& key) const {
    const auto raw = tree_.get_optional<std::string>(key);
    if (!raw) return std::nullopt;
    const auto v = tree_.get_optional<T>(key);
    if (!v) throw parse_error("field '" + key + "' has invalid value '" + *raw + "'", 0, key);
    return *v;
  }

  template <class T>
  T get_or(const std::string& key, T fallback) const {
    return get<T>(key).value_or(fallback);
  }

  const boost::property_tree::ptree& tree() const noexcept { return tree_; }

 private:
  boost::property_tree::ptree tree_;
};

}  // namespace wienerdyn
