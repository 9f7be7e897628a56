#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gsa/design.hpp"
#include "gsa/distributions.hpp"
#include "gsa/models.hpp"

namespace gsa {

struct FactorGroup {
  std::string name;
  std::vector<std::size_t> members;
};

/// Parsed run configuration.  Distribution parameters are stored as given;
/// problems are reported by validate_config(), not by parsing.
struct RunConfig {
  FactorSpace space;
  ModelDef model;
  std::vector<FactorGroup> groups;
};

/// Throws Error(Errc::config) for malformed JSON or structurally wrong sections.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// All problems with the factor space, groups and model; empty when usable.
std::vector<std::string> validate_config(const RunConfig& config);

/// Sidecar metadata written next to every sample file.
struct SampleSidecar {
  std::string method;
  Seed seed = 0;
  std::size_t rows = 0;
  std::vector<std::string> factors;
  std::string unit_file;  // relative to the sidecar's directory
  bool correlated = false;
  DesignMeta meta;
};

std::string sidecar_json(const SampleSidecar& sidecar);
SampleSidecar parse_sidecar(const std::string& json_text);

}  // namespace gsa
