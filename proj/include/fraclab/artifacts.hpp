#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fraclab {

/// Documented CSV header of every table the command-line tool writes.
struct CsvSchema {
  std::string_view name;
  std::vector<std::string_view> columns;
};

const std::vector<CsvSchema>& csv_schemas();
/// Throws Error for names outside the registry.
const CsvSchema& csv_schema(std::string_view name);
/// Header line (without newline) of a registered schema.
std::string csv_header(std::string_view name);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

/// Rows of one registered CSV table; every row must match the header width.
class CsvTable {
 public:
  explicit CsvTable(std::string_view schema);

  CsvTable& add(std::vector<std::string> row);
  std::string render() const;
  const CsvSchema& schema() const { return *schema_; }
  std::size_t size() const { return rows_.size(); }

 private:
  const CsvSchema* schema_;
  std::vector<std::vector<std::string>> rows_;
};

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Writes artifacts into one directory and, on finish(), a manifest.json
/// listing every file with its size and SHA-256.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  void write_text(const std::string& name, const std::string& bytes);
  void write_csv(const CsvTable& table);
  void write_json(const std::string& name, const nlohmann::ordered_json& doc);
  /// Writes manifest.json and returns its content.
  nlohmann::ordered_json finish();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace fraclab
