#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rrplay/sim.hpp"

namespace rrplay {

// Bad user input: malformed config file, unknown key, invalid value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure while reading inputs or writing outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value text. '#' starts a comment, blank lines are ignored, and a
// `preset=NAME` line expands the named preset in place so later keys
// override it. Errors carry the offending line number. `base` supplies the
// starting values (e.g. a preset picked on the command line).
SimConfig parse_config_text(std::string_view text, SimConfig base = {});
SimConfig parse_config_file(const std::filesystem::path& path,
                            SimConfig base = {});

// Applies one key to the config; throws ConfigError on unknown keys or
// unparseable values.
void apply_config_key(SimConfig& config, std::string_view key,
                      std::string_view value);

// Canonical one-key-per-line rendering of a resolved config; two configs
// render identically iff every field matches.
std::string canonical_config(const SimConfig& config);

// FNV-1a 64 over the canonical rendering.
std::uint64_t config_digest(const SimConfig& config);

}  // namespace rrplay
