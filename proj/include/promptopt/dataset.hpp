#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "promptopt/rng.hpp"

namespace promptopt {

// One record of a dataset. All cell values are strings: slots substitute text
// and the judge reads text, so numeric columns are not typed.
struct DatasetRow {
  std::map<std::string, std::string> values;
  // Stable 0-based position within the source file; survives sampling and
  // splitting, which makes train/validation provenance checkable.
  std::int64_t row_id = 0;
};

struct Dataset {
  std::vector<DatasetRow> rows;
  std::vector<std::string> columns;  // file order
  std::optional<std::string> expected_column;

  bool has_column(const std::string& name) const;
  const DatasetRow* find_row(std::int64_t row_id) const;
  std::optional<std::string> expected_for(const DatasetRow& row) const;
};

enum class DatasetFormat { Csv, Jsonl };

DatasetFormat parse_dataset_format(const std::string& name);

// Loads a dataset. CSV: first record is the header (RFC-4180 quoting).
// JSONL: one object per line, keys are columns; non-string values are
// coerced to their JSON text. Rows keep file order, row_id = file position.
// Throws ParseError for malformed records, SchemaError when rows disagree on
// columns or expected_column is absent.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                     std::optional<std::string> expected_column = std::nullopt);

// min(n, |dataset|) distinct rows, uniform without replacement, in draw
// order. Throws EmptyDataset when the dataset has zero rows.
std::vector<DatasetRow> sample_rows(const Dataset& dataset, std::size_t n, Rng& rng);

// Seeded split for single-file datasets: train gets min(train_n, N) rows,
// validation gets min(val_n, N - |train|). The two parts are disjoint by
// row_id provenance.
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, std::size_t train_n,
                                          std::size_t val_n, Rng& rng);

}  // namespace promptopt
