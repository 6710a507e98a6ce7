#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "patkg/claim_ingest.hpp"
#include "patkg/fact_extraction.hpp"
#include "patkg/graph_store.hpp"

namespace patkg {

struct PipelineOptions {
  ExtractionConfig extraction = ExtractionConfig::standard();
  int jobs = 1;
  std::size_t shard_size = 10000;
};

// Per-patent extraction over a record list. With jobs > 1 the work is spread
// over a thread pool but results come back in input order, so downstream
// output is byte-identical to a serial run.
std::vector<PatentGraph> extract_patents(const std::vector<ClaimRecord>& records,
                                         const PipelineOptions& options = {});

struct ExtractSummary {
  std::size_t patents = 0;
  std::size_t claims = 0;
  std::size_t facts = 0;
  std::size_t shard_files = 0;
};

// Writes one JSON object per patent into <dir>/<year>/<index>.jsonl, grouped
// by application year (unknown years last), chunked by shard_size.
std::size_t write_patent_shards(const std::vector<PatentGraph>& graphs,
                                const std::filesystem::path& dir,
                                std::size_t shard_size = 10000);

// extract_patents + write_patent_shards with a run summary.
ExtractSummary run_extract(const std::vector<ClaimRecord>& records,
                           const std::filesystem::path& out_dir,
                           const PipelineOptions& options = {});

// Reads an extract output directory back into a corpus-level graph. Year is
// recovered from the directory name.
MergedGraph merge_patent_shards(const std::filesystem::path& dir);

// Writes validated records as JSONL into <dir>/<year>/<index>.jsonl.
std::size_t write_record_shards(const std::vector<ClaimRecord>& records,
                                const std::filesystem::path& dir,
                                std::size_t shard_size = 10000);

}  // namespace patkg
