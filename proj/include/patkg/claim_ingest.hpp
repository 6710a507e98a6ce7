#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace patkg {

// One patent's application id, optional application year, and raw claims.
// A record with zero claims is kept; it just yields an empty graph later.
struct ClaimRecord {
  std::string patent_id;
  std::optional<int> year;  // 1975..2019 when present
  std::vector<std::string> claims;

  bool operator==(const ClaimRecord&) const = default;
};

inline constexpr int kMinYear = 1975;
inline constexpr int kMaxYear = 2019;

enum class CorpusFormat { Tsv, Jsonl };

struct RowError {
  std::size_t line = 0;  // 1-based input line
  std::string message;
};

struct ParseOptions {
  CorpusFormat format = CorpusFormat::Tsv;
  bool has_header = false;  // TSV only
  bool fail_fast = false;   // throw ParseError instead of collecting
};

struct ParseResult {
  std::vector<ClaimRecord> records;
  std::vector<RowError> errors;  // skipped rows, in line order
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads a corpus stream in the declared format. Row-level problems (wrong
// column count, bad year, malformed claims array, duplicate patent id) either
// throw (fail_fast) or are collected as RowErrors while parsing continues.
// Deterministic: identical bytes produce identical records.
ParseResult parse_corpus(std::istream& in, const ParseOptions& options = {});

// TSV line: patent_id<TAB>year<TAB>claims_json_array. The year field may be
// empty. The claims column is one JSON array of strings.
// JSONL line: {"patent_id": ..., "year": ..., "claims": [...]} with year
// optional or null.

struct Shard {
  std::string year_key;      // "1975".."2019" or "unknown"
  std::optional<int> year;   // unset for the unknown group
  int index = 0;             // chunk number within the year group
  std::vector<ClaimRecord> records;
};

// Partitions records by year, then chunks each group in input order. Shards
// come back ordered by ascending year with the unknown group last. No record
// is lost or duplicated.
std::vector<Shard> shard_records(const std::vector<ClaimRecord>& records,
                                 std::size_t shard_size = 10000);

}  // namespace patkg
