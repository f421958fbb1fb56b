#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "hypgrowth/ball.hpp"

namespace hypgrowth {

// Versioned text serialization of a BallIndex: header (format version, spec,
// radius, sphere counts) followed by one record per element. Store/load is
// bit-exact; a version or header mismatch refuses to load.
std::string ball_cache_bytes(const BallIndex& index);
void cache_store(const BallIndex& index, const std::filesystem::path& file);
BallIndex cache_load(const std::filesystem::path& file);
BallIndex ball_cache_from_bytes(const std::string& bytes);

// Resolution order: explicit override, then HYPGROWTH_CACHE, else no cache.
std::optional<std::filesystem::path> resolve_cache_dir(const std::string& override_dir);
std::filesystem::path ball_cache_path(const std::filesystem::path& dir, const GroupSpec& spec,
                                      int radius);

// Load a cached ball when available (extending a shallower cached ball if
// needed), else enumerate; refreshes the cache file after extension.
BallIndex load_or_enumerate(const GroupSpec& spec, int radius, const std::string& cache_dir,
                            const EnumerationBudget& budget = {});

}  // namespace hypgrowth
