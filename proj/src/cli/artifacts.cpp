#include "fraclab/artifacts.hpp"

#include <algorithm>
#include <fstream>

#include <openssl/evp.h>

#include "fraclab/core.hpp"

namespace fraclab {

const std::vector<CsvSchema>& csv_schemas() {
  static const std::vector<CsvSchema> schemas{
      {"tube", {"domain", "r", "R", "x_x", "x_y", "volume", "stderr", "method", "samples", "seed"}},
      {"dimension",
       {"domain", "quantity", "value", "r_min", "r_max", "fit_r2", "spread_min", "spread_max", "n_centers",
        "n_scalepairs", "seed"}},
      {"codim_exponents", {"domain", "x_x", "x_y", "R", "exponent", "seed"}},
      {"sobolev",
       {"domain", "field_label", "s", "p", "quantity", "value", "stderr", "samples", "rho_min", "bias_bound",
        "diverged", "seed"}},
      {"hardy_shells", {"domain", "field_label", "s", "p", "shell", "inner", "outer", "contribution", "stderr", "seed"}},
      {"cutoff",
       {"domain", "s", "p", "n", "seminorm_p", "stderr", "tube_volume", "tube_bound", "C", "envelope_holds", "seed"}},
      {"verdicts",
       {"domain", "s", "p", "sp", "codim_lower", "codim_upper", "margin", "plump", "homogeneous", "verdict",
        "expected", "matches"}},
      {"homogeneity", {"domain", "sigma", "lambda", "L", "growth_exponent", "stable"}},
      {"reduction",
       {"domain", "field_label", "phi", "s", "p", "M", "R_loc", "eta0", "quantity", "value", "stderr", "samples",
        "seed"}},
      {"scaling", {"check", "phi", "eta", "H", "pass", "worst_margin", "witness_s", "witness_t", "grid_points"}},
  };
  return schemas;
}

const CsvSchema& csv_schema(std::string_view name) {
  for (const CsvSchema& s : csv_schemas())
    if (s.name == name) return s;
  throw Error("no CSV schema named '" + std::string(name) + "'");
}

std::string csv_header(std::string_view name) {
  std::string out;
  for (const auto& col : csv_schema(name).columns) {
    if (!out.empty()) out += ",";
    out += col;
  }
  return out;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::string_view schema) : schema_(&csv_schema(schema)) {}

CsvTable& CsvTable::add(std::vector<std::string> row) {
  if (row.size() != schema_->columns.size())
    throw Error("CSV row for '" + std::string(schema_->name) + "' has " + std::to_string(row.size()) +
                " fields, expected " + std::to_string(schema_->columns.size()));
  rows_.push_back(std::move(row));
  return *this;
}

std::string CsvTable::render() const {
  std::string out = csv_header(schema_->name) + "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += csv_escape(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
}

void ArtifactWriter::write_text(const std::string& name, const std::string& bytes) {
  std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
  auto it = std::find_if(files_.begin(), files_.end(), [&](const auto& f) { return f.first == name; });
  if (it != files_.end())
    it->second = bytes;
  else
    files_.emplace_back(name, bytes);
}

void ArtifactWriter::write_csv(const CsvTable& table) {
  write_text(std::string(table.schema().name) + ".csv", table.render());
}

void ArtifactWriter::write_json(const std::string& name, const nlohmann::ordered_json& doc) {
  write_text(name, doc.dump(2) + "\n");
}

nlohmann::ordered_json ArtifactWriter::finish() {
  auto sorted = files_;
  std::sort(sorted.begin(), sorted.end());
  nlohmann::ordered_json manifest;
  manifest["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, bytes] : sorted)
    manifest["files"].push_back({{"name", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  const std::string text = manifest.dump(2) + "\n";
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size())))
    throw ConfigError("cannot write manifest in '" + dir_.string() + "'");
  return manifest;
}

}  // namespace fraclab
