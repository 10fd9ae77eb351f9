#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "genprior/bounds.hpp"
#include "genprior/experiment.hpp"

namespace genprior {

/// INI-style configuration: "[section]" headers and "key = value" lines.
/// Keys are addressed as "section.key". Later `set` calls override the file.
class Config {
 public:
  Config() = default;
  static Config load(const std::filesystem::path& path);
  static Config parse(std::istream& in);

  /// "section.key=value"; throws UsageError on a malformed assignment.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Throws ConfigError naming any key outside `known`.
  void reject_unknown(const std::vector<std::string>& known) const;

  const boost::property_tree::ptree& tree() const noexcept { return tree_; }

 private:
  boost::property_tree::ptree tree_;
};

/// Every key the CLI understands, as "section.key".
const std::vector<std::string>& known_config_keys();

SweepConfig sweep_config_from(const Config& cfg);
LemmaDims lemma_dims_from(const Config& cfg);

/// Parses "1,2,5" or an inclusive range "1..10".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// All resolved settings, one "section.key = value" line each.
void describe(const SweepConfig& cfg, std::ostream& out);

}  // namespace genprior
