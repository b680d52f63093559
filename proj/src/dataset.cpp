#include "promptopt/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "promptopt/errors.hpp"
#include "promptopt/jsonio.hpp"

namespace promptopt {
namespace {

// RFC-4180 record reader. Returns false at end of input. line_no tracks the
// physical line the record started on, for error messages.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no,
                     std::size_t& record_line) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  record_line = line_no;
  std::string field;
  bool quoted = false;
  for (;;) {
    if (c == EOF) {
      if (quoted) throw ParseError(record_line, "unterminated quoted field");
      fields.push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_no;
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r' && in.peek() == '\n') {
      // swallow, record ends at the '\n'
    } else if (ch == '\n') {
      ++line_no;
      fields.push_back(std::move(field));
      return true;
    } else {
      field += ch;
    }
    c = in.get();
  }
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Dataset ds;
  std::vector<std::string> fields;
  std::size_t line_no = 1;
  std::size_t record_line = 1;
  if (!read_csv_record(in, fields, line_no, record_line))
    throw ParseError(1, "empty file, expected a header record");
  ds.columns = fields;
  std::set<std::string> unique(ds.columns.begin(), ds.columns.end());
  if (unique.size() != ds.columns.size())
    throw SchemaError(path.string() + ": duplicate column names in header");
  std::int64_t row_id = 0;
  while (read_csv_record(in, fields, line_no, record_line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    if (fields.size() != ds.columns.size())
      throw SchemaError(path.string() + ": line " + std::to_string(record_line) + ": expected " +
                        std::to_string(ds.columns.size()) + " fields, got " +
                        std::to_string(fields.size()));
    DatasetRow row;
    row.row_id = row_id++;
    for (std::size_t i = 0; i < fields.size(); ++i) row.values[ds.columns[i]] = fields[i];
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

std::string coerce_to_string(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

Dataset load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::int64_t row_id = 0;
  std::set<std::string> column_set;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
    DatasetRow row;
    row.row_id = row_id;
    for (auto it = obj.begin(); it != obj.end(); ++it) row.values[it.key()] = coerce_to_string(it.value());
    if (row_id == 0) {
      for (auto it = obj.begin(); it != obj.end(); ++it) ds.columns.push_back(it.key());
      column_set.insert(ds.columns.begin(), ds.columns.end());
      if (column_set.size() != ds.columns.size())
        throw SchemaError(path.string() + ": duplicate keys on line " + std::to_string(line_no));
    } else {
      if (row.values.size() != column_set.size() ||
          !std::all_of(ds.columns.begin(), ds.columns.end(),
                       [&](const std::string& c) { return row.values.count(c) > 0; }))
        throw SchemaError(path.string() + ": line " + std::to_string(line_no) +
                          ": keys disagree with first row");
    }
    ds.rows.push_back(std::move(row));
    ++row_id;
  }
  return ds;
}

}  // namespace

bool Dataset::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

const DatasetRow* Dataset::find_row(std::int64_t row_id) const {
  // row_id equals the index for freshly loaded datasets; split datasets need
  // the scan.
  if (row_id >= 0 && static_cast<std::size_t>(row_id) < rows.size() &&
      rows[static_cast<std::size_t>(row_id)].row_id == row_id)
    return &rows[static_cast<std::size_t>(row_id)];
  for (const auto& r : rows)
    if (r.row_id == row_id) return &r;
  return nullptr;
}

std::optional<std::string> Dataset::expected_for(const DatasetRow& row) const {
  if (!expected_column) return std::nullopt;
  auto it = row.values.find(*expected_column);
  if (it == row.values.end()) return std::nullopt;
  return it->second;
}

DatasetFormat parse_dataset_format(const std::string& name) {
  if (name == "csv") return DatasetFormat::Csv;
  if (name == "jsonl") return DatasetFormat::Jsonl;
  throw ConfigError("unknown dataset format '" + name + "' (expected csv or jsonl)");
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                     std::optional<std::string> expected_column) {
  Dataset ds = format == DatasetFormat::Csv ? load_csv(path) : load_jsonl(path);
  if (expected_column) {
    if (!ds.has_column(*expected_column))
      throw SchemaError(path.string() + ": expected_column '" + *expected_column +
                        "' is not a dataset column");
    ds.expected_column = expected_column;
  }
  return ds;
}

std::vector<DatasetRow> sample_rows(const Dataset& dataset, std::size_t n, Rng& rng) {
  if (dataset.rows.empty()) throw EmptyDataset("cannot sample from an empty dataset");
  const auto idx = rng.sample_indices(dataset.rows.size(), n);
  std::vector<DatasetRow> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(dataset.rows[i]);
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, std::size_t train_n,
                                          std::size_t val_n, Rng& rng) {
  const std::size_t total = dataset.rows.size();
  const std::size_t take_train = std::min(train_n, total);
  const std::size_t take_val = std::min(val_n, total - take_train);
  const auto idx = rng.sample_indices(total, take_train + take_val);
  Dataset train{{}, dataset.columns, dataset.expected_column};
  Dataset val{{}, dataset.columns, dataset.expected_column};
  for (std::size_t i = 0; i < take_train; ++i) train.rows.push_back(dataset.rows[idx[i]]);
  for (std::size_t i = take_train; i < idx.size(); ++i) val.rows.push_back(dataset.rows[idx[i]]);
  return {std::move(train), std::move(val)};
}

}  // namespace promptopt
