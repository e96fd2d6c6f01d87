#ifndef ADLIFT_PIPELINE_HPP
#define ADLIFT_PIPELINE_HPP

#include <cstdint>
#include <string>

#include "adlift/config.hpp"

namespace adlift {

// FNV-1a 64-bit content hash, as written into the MANIFEST.
std::uint64_t fnv1a64_file(const std::string& path);

// Execute the configured stages (smooth -> decompose -> forest) and write the
// artifact files plus a MANIFEST into cfg.out_dir. Idempotent for a fixed
// seed. On a stage failure the partial artifacts stay on disk, the MANIFEST
// records the completion state, and the error propagates.
void run_pipeline(const RunConfig& cfg);

} // namespace adlift

#endif
