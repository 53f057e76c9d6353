#pragma once

#include <filesystem>
#include <string>

#include "surprise/genesis.hpp"

namespace surprise {

// Sample dump: one "u v" edge per line (u < v), plus a JSON sidecar with
// sigma and counts.
void dump_election_sample(const ElectionSample& sample, const std::filesystem::path& edges_file,
                          const std::filesystem::path& sidecar_file);
ElectionSample load_election_sample(const std::filesystem::path& edges_file,
                                    const std::filesystem::path& sidecar_file);

void write_text_file(const std::filesystem::path& file, const std::string& content);

}  // namespace surprise
