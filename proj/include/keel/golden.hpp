#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "keel/collections.hpp"

// Golden transcriptions of the published collections and the incidence
// table, stored as version-controlled JSON with a content checksum.  The
// loader rejects files whose recomputed checksum disagrees with both the
// stored field and the compiled-in constant.

namespace keel::golden {

struct GoldenEntry {
  int l = 0;
  int g = -1;                // -1 on the 5-point space
  std::vector<int> twists;   // exceptional indices, ascending
  std::string tex;           // verbatim transcription, for auditing
  bool flagged = false;      // irregular entries called out in the notes
};

struct GoldenCollection {
  int n_points = 0;
  std::vector<GoldenEntry> entries;
  std::uint64_t checksum = 0;
};

struct GoldenIncidence {
  std::vector<intersect::IncidenceEntry> pairs;
  std::uint64_t checksum = 0;
};

std::uint64_t fnv1a64(const std::string& s);
std::string canonical_payload(const GoldenCollection& g);
std::string canonical_payload(const GoldenIncidence& g);

GoldenCollection load_collection(const std::string& path, int n_points);
GoldenIncidence load_incidence(const std::string& path);

std::string default_data_dir();

struct DiffLine {
  int index = 0;  // 1-based position
  bool flagged = false;
  std::string ours, golden;
};

// Entry-by-entry comparison of a pipeline run against the transcription.
std::vector<DiffLine> diff_collection(const collections::PipelineResult& run,
                                      const GoldenCollection& g);

}  // namespace keel::golden
