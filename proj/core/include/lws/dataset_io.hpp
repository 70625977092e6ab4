#pragma once

#include <filesystem>
#include <string>

#include "lws/trace.hpp"

namespace lws {

enum class FileFormat { Csv, Json };

/// Picks Csv/Json from the file extension; throws on anything else.
FileFormat format_from_path(const std::filesystem::path& path);

/// CSV layout: header `label,distance_cm,ambient_on,sample_rate_hz,n_samples,
/// s0,...,s{n-1}`, one trace per row, ambient_on in {0,1}. JSON layout: array
/// of objects {label, distance_cm, ambient_on, sample_rate_hz, samples}.
/// Errors name the offending row / array index. The loaded dataset is fully
/// validated before being returned.
Dataset load_dataset(const std::filesystem::path& path, FileFormat format);

/// Writes atomically (temp file + rename). Values are printed with enough
/// digits that a reload reproduces them to <= 1e-9 relative error.
void save_dataset(const Dataset& ds, const std::filesystem::path& path,
                  FileFormat format);

/// Atomic whole-file write used by every output path in the project.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace lws
