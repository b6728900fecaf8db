#include "rrplay/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rrplay {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + std::string(key) +
                      "': expected a non-negative integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" +
                      std::string(value) + "'");
  }
  return out;
}

}  // namespace

void apply_config_key(SimConfig& config, std::string_view key,
                      std::string_view value) {
  try {
    if (key == "preset") {
      const Sampler sampler = config.sampler;  // preset does not pick a sampler
      const std::uint64_t base_seed = config.base_seed;
      config = preset_config(value);
      config.sampler = sampler;
      config.base_seed = base_seed;
    } else if (key == "timesteps") {
      config.timesteps = parse_u64(key, value);
    } else if (key == "capacity") {
      config.capacity = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "replay_start") {
      config.replay_start = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "batch") {
      config.batch = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "sampler") {
      config.sampler = sampler_from_name(value);
    } else if (key == "priority_scheme") {
      config.scheme = scheme_from_name(value);
    } else if (key == "priority_modulus") {
      config.priority_modulus = parse_u64(key, value);
    } else if (key == "priority_offset") {
      config.priority_offset = parse_double(key, value);
    } else if (key == "priority_decay") {
      config.priority_decay = parse_double(key, value);
    } else if (key == "seeds") {
      config.seeds = parse_u64(key, value);
    } else if (key == "base_seed") {
      config.base_seed = parse_u64(key, value);
    } else {
      throw ConfigError("unknown key '" + std::string(key) + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + std::string(key) + "': " + e.what());
  }
}

SimConfig parse_config_text(std::string_view text, SimConfig base) {
  SimConfig config = base;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key=value, got '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    try {
      apply_config_key(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

SimConfig parse_config_file(const std::filesystem::path& path,
                            SimConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed reading config file '" + path.string() + "'");
  }
  return parse_config_text(buffer.str(), base);
}

std::string canonical_config(const SimConfig& config) {
  char real[64];
  std::string out;
  const auto add_u64 = [&out](std::string_view key, std::uint64_t v) {
    out += key;
    out += '=';
    out += std::to_string(v);
    out += '\n';
  };
  const auto add_real = [&out, &real](std::string_view key, double v) {
    std::snprintf(real, sizeof(real), "%.17g", v);
    out += key;
    out += '=';
    out += real;
    out += '\n';
  };
  add_u64("timesteps", config.timesteps);
  add_u64("capacity", config.capacity);
  add_u64("replay_start", config.replay_start);
  add_u64("batch", config.batch);
  out += "sampler=" + sampler_name(config.sampler) + "\n";
  out += "priority_scheme=" + scheme_name(config.scheme) + "\n";
  add_u64("priority_modulus", config.priority_modulus);
  add_real("priority_offset", config.priority_offset);
  add_real("priority_decay", config.priority_decay);
  add_u64("seeds", config.seeds);
  add_u64("base_seed", config.base_seed);
  return out;
}

std::uint64_t config_digest(const SimConfig& config) {
  const std::string text = canonical_config(config);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace rrplay
