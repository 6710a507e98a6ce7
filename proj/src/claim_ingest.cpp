#include "patkg/claim_ingest.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <unordered_set>
#include <utility>

#include <json.hpp>

namespace patkg {

namespace {

// Either throws or records the problem, depending on fail_fast.
void report(ParseResult& result, const ParseOptions& options, std::size_t line,
            std::string message) {
  if (options.fail_fast) throw ParseError(line, message);
  result.errors.push_back(RowError{line, std::move(message)});
}

std::optional<int> parse_year_text(const std::string& text, std::string& error) {
  if (text.empty()) return std::nullopt;
  std::size_t consumed = 0;
  int year = 0;
  try {
    year = std::stoi(text, &consumed);
  } catch (const std::exception&) {
    error = "year is not an integer: '" + text + "'";
    return std::nullopt;
  }
  if (consumed != text.size()) {
    error = "year is not an integer: '" + text + "'";
    return std::nullopt;
  }
  if (year < kMinYear || year > kMaxYear) {
    error = "year " + std::to_string(year) + " outside " +
            std::to_string(kMinYear) + ".." + std::to_string(kMaxYear);
    return std::nullopt;
  }
  return year;
}

bool parse_claims_json(const nlohmann::json& value,
                       std::vector<std::string>& claims, std::string& error) {
  if (!value.is_array()) {
    error = "claims must be a JSON array of strings";
    return false;
  }
  for (const auto& item : value) {
    if (!item.is_string()) {
      error = "claims must be a JSON array of strings";
      return false;
    }
    claims.push_back(item.get<std::string>());
  }
  return true;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

ParseResult parse_corpus(std::istream& in, const ParseOptions& options) {
  ParseResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (options.format == CorpusFormat::Tsv && options.has_header &&
        line_no == 1) {
      continue;
    }

    ClaimRecord record;
    std::string error;

    if (options.format == CorpusFormat::Tsv) {
      // Split on the first two tabs only; the claims column is JSON and may
      // itself contain escaped tab bytes.
      std::size_t first = line.find('\t');
      std::size_t second =
          first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
      if (second == std::string::npos) {
        report(result, options, line_no,
               "expected patent_id<TAB>year<TAB>claims");
        continue;
      }
      record.patent_id = line.substr(0, first);
      std::string year_text = line.substr(first + 1, second - first - 1);
      std::string claims_text = line.substr(second + 1);

      record.year = parse_year_text(year_text, error);
      if (!error.empty()) {
        report(result, options, line_no, error);
        continue;
      }
      nlohmann::json claims_json;
      try {
        claims_json = nlohmann::json::parse(claims_text);
      } catch (const nlohmann::json::parse_error&) {
        report(result, options, line_no, "claims column is not valid JSON");
        continue;
      }
      if (!parse_claims_json(claims_json, record.claims, error)) {
        report(result, options, line_no, error);
        continue;
      }
    } else {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        report(result, options, line_no, "line is not valid JSON");
        continue;
      }
      if (!doc.is_object() || !doc.contains("patent_id") ||
          !doc.at("patent_id").is_string()) {
        report(result, options, line_no, "missing string field 'patent_id'");
        continue;
      }
      record.patent_id = doc.at("patent_id").get<std::string>();
      if (doc.contains("year") && !doc.at("year").is_null()) {
        if (!doc.at("year").is_number_integer()) {
          report(result, options, line_no, "year must be an integer or null");
          continue;
        }
        int year = doc.at("year").get<int>();
        if (year < kMinYear || year > kMaxYear) {
          report(result, options, line_no,
                 "year " + std::to_string(year) + " outside " +
                     std::to_string(kMinYear) + ".." + std::to_string(kMaxYear));
          continue;
        }
        record.year = year;
      }
      if (!doc.contains("claims")) {
        report(result, options, line_no, "missing field 'claims'");
        continue;
      }
      if (!parse_claims_json(doc.at("claims"), record.claims, error)) {
        report(result, options, line_no, error);
        continue;
      }
    }

    if (record.patent_id.empty()) {
      report(result, options, line_no, "empty patent_id");
      continue;
    }
    if (!seen_ids.insert(record.patent_id).second) {
      report(result, options, line_no,
             "duplicate patent_id '" + record.patent_id + "'");
      continue;
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

std::vector<Shard> shard_records(const std::vector<ClaimRecord>& records,
                                 std::size_t shard_size) {
  if (shard_size == 0) shard_size = 1;

  // Group by year, keeping input order inside each group. std::map sorts the
  // known years; the unknown group is appended after the loop.
  std::map<int, std::vector<const ClaimRecord*>> by_year;
  std::vector<const ClaimRecord*> unknown;
  for (const ClaimRecord& record : records) {
    if (record.year) {
      by_year[*record.year].push_back(&record);
    } else {
      unknown.push_back(&record);
    }
  }

  std::vector<Shard> shards;
  auto chunk_group = [&](const std::string& key, std::optional<int> year,
                         const std::vector<const ClaimRecord*>& group) {
    int index = 0;
    for (std::size_t start = 0; start < group.size(); start += shard_size) {
      Shard shard;
      shard.year_key = key;
      shard.year = year;
      shard.index = index++;
      std::size_t stop = std::min(start + shard_size, group.size());
      for (std::size_t i = start; i < stop; ++i) {
        shard.records.push_back(*group[i]);
      }
      shards.push_back(std::move(shard));
    }
  };

  for (const auto& [year, group] : by_year) {
    chunk_group(std::to_string(year), year, group);
  }
  chunk_group("unknown", std::nullopt, unknown);
  return shards;
}

}  // namespace patkg
