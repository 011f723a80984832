//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace turf::cli {

/// Provenance block embedded in every JSON report.
struct RunManifest {
  std::string tool_version;
  std::string command_line;
  /// (path as given, lowercase hex SHA-256).
  std::vector<std::pair<std::string, std::string>> inputs;
  uint64_t seed = 0;
  /// UTC, from SOURCE_DATE_EPOCH (0 when unset) so reruns are identical.
  std::string timestamp;

  Json to_json() const;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);
/// ISO-8601 UTC timestamp of SOURCE_DATE_EPOCH, or of 0 if unset/invalid.
std::string reproducible_timestamp();

/// Entry point shared by the `turf` binary. Returns the process exit code:
/// 0 on success, 1 on a domain error (its name goes to `err`), 2 on usage
/// errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace turf::cli
