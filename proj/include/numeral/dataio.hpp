#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "numeral/core.hpp"
#include "numeral/measures.hpp"
#include "numeral/search.hpp"

namespace numeral {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingNumber : DataError {
    MissingNumber(const std::string& language, Number n)
        : DataError("language '" + language + "' has no numeral for " + std::to_string(n)),
          language(language), number(n) {}
    std::string language;
    Number number;
};

struct BadExpression : DataError {
    BadExpression(std::size_t row, const std::string& reason)
        : DataError("row " + std::to_string(row) + ": " + reason), row(row) {}
    std::size_t row; // 1-based, header = row 1
};

struct SystemRecord {
    std::string language;
    Number number = 0;
    std::string tokens;
    std::string family; // optional fourth column
};

/// Reads `language,number,tokens[,family]` rows. Every row is validated:
/// tokens must parse, evaluate to the stated number and be Hurford-shaped.
std::vector<SystemRecord> load_records(const std::filesystem::path& path);

/// One system per language, total on the range (rows outside it are
/// ignored). Languages keep their order of first appearance.
std::vector<NumeralSystem> load_systems(const std::filesystem::path& path, Range range = {});

/// Writes systems back out as `language,number,tokens` rows.
void export_systems(const std::vector<NumeralSystem>& systems, const std::filesystem::path& path);

/// CSV with header `system_id,source,prior,irregularity_bits,processing_bits,
/// lexicon_size,avg_morph_complexity`; reals with 6 decimals; rows sorted by
/// system_id. Written atomically (temp file + rename).
void export_measures(std::vector<MeasureReport> reports, const std::filesystem::path& path);

std::vector<MeasureReport> load_measures(const std::filesystem::path& path);

/// Digit/multiplier values attested across the given systems, via grammar
/// extraction per system.
AttestedPools derive_attested_pools(const std::vector<NumeralSystem>& systems);

/// Reads pools from either a `role,value` CSV or a full dataset CSV (the
/// header decides), so one flag serves both the offline override file and
/// derive-from-data.
AttestedPools load_attested_pools(const std::filesystem::path& path);

void export_attested_pools(const AttestedPools& pools, const std::filesystem::path& path);

/// Write-then-rename, so readers never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace numeral
