#include "patkg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace patkg {

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
}

// Groups indices by year key the same way shard_records does: known years
// ascending, unknown last, input order within a group.
template <typename YearOf>
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_by_year(
    std::size_t count, YearOf&& year_of) {
  std::map<int, std::vector<std::size_t>> known;
  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < count; ++i) {
    std::optional<int> year = year_of(i);
    if (year) {
      known[*year].push_back(i);
    } else {
      unknown.push_back(i);
    }
  }
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (auto& [year, indices] : known) {
    groups.emplace_back(std::to_string(year), std::move(indices));
  }
  if (!unknown.empty()) {
    groups.emplace_back("unknown", std::move(unknown));
  }
  return groups;
}

template <typename RowText>
std::size_t write_year_shards(
    const std::vector<std::pair<std::string, std::vector<std::size_t>>>& groups,
    const std::filesystem::path& dir, std::size_t shard_size,
    RowText&& row_text) {
  if (shard_size == 0) shard_size = 1;
  std::size_t files = 0;
  for (const auto& [year_key, indices] : groups) {
    int chunk = 0;
    for (std::size_t start = 0; start < indices.size();
         start += shard_size, ++chunk) {
      std::size_t stop = std::min(start + shard_size, indices.size());
      std::ostringstream lines;
      for (std::size_t i = start; i < stop; ++i) {
        lines << row_text(indices[i]) << "\n";
      }
      write_text(dir / year_key / (std::to_string(chunk) + ".jsonl"),
                 lines.str());
      ++files;
    }
  }
  return files;
}

}  // namespace

std::vector<PatentGraph> extract_patents(const std::vector<ClaimRecord>& records,
                                         const PipelineOptions& options) {
  std::vector<PatentGraph> graphs(records.size());
  int jobs = std::max(1, options.jobs);
  if (jobs == 1 || records.size() < 2) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      graphs[i] = aggregate_patent(records[i], options.extraction);
    }
    return graphs;
  }

  // Workers pull the next unclaimed index and write into that slot, so the
  // result vector is in input order no matter how the work interleaves.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= records.size()) break;
      graphs[i] = aggregate_patent(records[i], options.extraction);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& thread : pool) thread.join();
  return graphs;
}

std::size_t write_patent_shards(const std::vector<PatentGraph>& graphs,
                                const std::filesystem::path& dir,
                                std::size_t shard_size) {
  auto groups = group_by_year(
      graphs.size(), [&](std::size_t i) { return graphs[i].year; });
  return write_year_shards(groups, dir, shard_size, [&](std::size_t i) {
    return patent_graph_to_json(graphs[i]);
  });
}

ExtractSummary run_extract(const std::vector<ClaimRecord>& records,
                           const std::filesystem::path& out_dir,
                           const PipelineOptions& options) {
  std::vector<PatentGraph> graphs = extract_patents(records, options);
  ExtractSummary summary;
  summary.patents = graphs.size();
  for (const ClaimRecord& record : records) {
    summary.claims += record.claims.size();
  }
  for (const PatentGraph& graph : graphs) {
    summary.facts += graph.facts.size();
  }
  summary.shard_files = write_patent_shards(graphs, out_dir, options.shard_size);
  return summary;
}

MergedGraph merge_patent_shards(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::invalid_argument("no such directory: " + dir.string());
  }

  std::vector<std::filesystem::path> year_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory()) year_dirs.push_back(entry.path());
  }
  // Years ascending, "unknown" after them ('u' sorts past the digits).
  std::sort(year_dirs.begin(), year_dirs.end());

  MergedGraph merged;
  for (const std::filesystem::path& year_dir : year_dirs) {
    std::string year_name = year_dir.filename().string();
    std::optional<int> year;
    try {
      year = std::stoi(year_name);
    } catch (const std::exception&) {
      year = std::nullopt;
    }

    std::vector<std::filesystem::path> shard_files;
    for (const auto& entry : std::filesystem::directory_iterator(year_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        shard_files.push_back(entry.path());
      }
    }
    std::sort(shard_files.begin(), shard_files.end(),
              [](const std::filesystem::path& a, const std::filesystem::path& b) {
                // 2.jsonl before 10.jsonl
                const std::string sa = a.stem().string();
                const std::string sb = b.stem().string();
                if (sa.size() != sb.size()) return sa.size() < sb.size();
                return sa < sb;
              });

    for (const std::filesystem::path& path : shard_files) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw std::runtime_error("cannot read " + path.string());
      }
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        PatentGraph graph = patent_graph_from_json(line);
        graph.year = year;
        merged.add_patent(graph);
      }
    }
  }
  return merged;
}

std::size_t write_record_shards(const std::vector<ClaimRecord>& records,
                                const std::filesystem::path& dir,
                                std::size_t shard_size) {
  auto groups = group_by_year(
      records.size(), [&](std::size_t i) { return records[i].year; });
  return write_year_shards(groups, dir, shard_size, [&](std::size_t i) {
    const ClaimRecord& record = records[i];
    json doc;
    doc["patent_id"] = record.patent_id;
    doc["year"] = record.year ? json(*record.year) : json();
    doc["claims"] = record.claims;
    return doc.dump();
  });
}

}  // namespace patkg
