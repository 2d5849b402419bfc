#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "otbyz/experiments.hpp"

namespace otbyz {
namespace {

constexpr std::string_view kMissing = "NA";

std::string quote_field(std::string_view f) {
  if (f.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(f);
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw SpecError("unterminated quoted CSV field");
  return fields;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".meta.json");
}

}  // namespace

std::string to_csv(const SweepResult& result) {
  std::string out;
  for (std::size_t c = 0; c < result.columns.size(); ++c) {
    if (c) out += ',';
    out += quote_field(result.columns[c]);
  }
  out += '\n';
  char buf[64];
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (row[c]) {
        const auto res = std::to_chars(buf, buf + sizeof buf, *row[c]);
        out.append(buf, res.ptr);
      } else {
        out += kMissing;
      }
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << to_csv(result);
    if (!os) throw IoError("failed writing '" + path.string() + "'");
  }
  nlohmann::ordered_json meta;
  meta["label"] = result.label;
  meta["config_hash"] = result.provenance.config_hash;
  meta["seed"] = result.provenance.seed;
  meta["tool_version"] = result.provenance.tool_version;
  meta["columns"] = result.columns;
  const auto meta_path = sidecar_path(path);
  std::ofstream ms(meta_path, std::ios::binary | std::ios::trunc);
  if (!ms) throw IoError("cannot open '" + meta_path.string() + "' for writing");
  ms << meta.dump(2) << '\n';
  if (!ms) throw IoError("failed writing '" + meta_path.string() + "'");
}

SweepResult parse_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  SweepResult result;
  std::string line;
  if (!std::getline(is, line)) throw SpecError("'" + path.string() + "' has no header row");
  result.columns = split_record(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_record(line);
    if (fields.size() != result.columns.size())
      throw SpecError("'" + path.string() + "': row width does not match header");
    std::vector<Cell> row;
    for (const auto& f : fields) {
      if (f == kMissing) {
        row.emplace_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        throw SpecError("'" + path.string() + "': malformed number '" + f + "'");
      row.emplace_back(v);
    }
    result.rows.push_back(std::move(row));
  }

  const auto meta_path = sidecar_path(path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream ms(meta_path);
    try {
      const auto meta = nlohmann::json::parse(ms);
      result.label = meta.value("label", "");
      result.provenance.config_hash = meta.value("config_hash", "");
      result.provenance.seed = meta.value("seed", std::uint64_t{0});
      result.provenance.tool_version = meta.value("tool_version", "");
    } catch (const nlohmann::json::exception& e) {
      throw SpecError("'" + meta_path.string() + "': " + e.what());
    }
  }
  return result;
}

}  // namespace otbyz
