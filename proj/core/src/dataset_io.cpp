#include "lws/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace lws {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(std::string_view token, const std::string& where) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(where + ": cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw Error("empty dataset: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv_line(line);
  constexpr std::size_t kMetaCols = 5;
  if (header.size() < kMetaCols + 1 || header[0] != "label" ||
      header[1] != "distance_cm" || header[2] != "ambient_on" ||
      header[3] != "sample_rate_hz" || header[4] != "n_samples") {
    throw Error("malformed CSV header in " + path.string());
  }
  const std::size_t n_samples = header.size() - kMetaCols;

  Dataset ds;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const std::string where = "row " + std::to_string(row);
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(where + ": expected " + std::to_string(header.size()) +
                  " columns, got " + std::to_string(fields.size()));
    }
    Trace t;
    if (fields[0].size() != 1) {
      throw Error(where + ": bad label '" + std::string(fields[0]) + "'");
    }
    try {
      t.label = label_from_char(fields[0][0]);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    t.meta.distance_cm = parse_double(fields[1], where);
    const double ambient = parse_double(fields[2], where);
    if (ambient != 0.0 && ambient != 1.0) {
      throw Error(where + ": ambient_on must be 0 or 1");
    }
    t.meta.ambient_on = ambient != 0.0;
    t.meta.sample_rate_hz = parse_double(fields[3], where);
    const double declared = parse_double(fields[4], where);
    if (declared != static_cast<double>(n_samples)) {
      throw Error(where + ": n_samples " + format_double(declared) +
                  " disagrees with the " + std::to_string(n_samples) +
                  " sample columns declared by the header");
    }
    if (!(t.meta.sample_rate_hz > 0.0)) {
      throw Error(where + ": sample_rate_hz must be positive");
    }
    t.meta.duration_s = static_cast<double>(n_samples) / t.meta.sample_rate_hz;
    t.samples.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
      t.samples.push_back(parse_double(fields[kMetaCols + i], where));
    }
    ds.traces.push_back(std::move(t));
  }
  if (ds.traces.empty()) throw Error("empty dataset: " + path.string());
  try {
    ds.validate();
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return ds;
}

Dataset load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": JSON parse error: " + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw Error("empty dataset: " + path.string());
  }
  Dataset ds;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "trace " + std::to_string(i);
    const auto& obj = doc[i];
    try {
      Trace t;
      const std::string label = obj.at("label").get<std::string>();
      if (label.size() != 1) throw Error("bad label '" + label + "'");
      t.label = label_from_char(label[0]);
      t.meta.distance_cm = obj.at("distance_cm").get<double>();
      t.meta.ambient_on = obj.at("ambient_on").get<bool>();
      t.meta.sample_rate_hz = obj.at("sample_rate_hz").get<double>();
      t.samples = obj.at("samples").get<std::vector<double>>();
      if (!(t.meta.sample_rate_hz > 0.0)) {
        throw Error("sample_rate_hz must be positive");
      }
      t.meta.duration_s =
          static_cast<double>(t.samples.size()) / t.meta.sample_rate_hz;
      ds.traces.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }
  try {
    ds.validate();
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return ds;
}

std::string render_csv(const Dataset& ds) {
  const std::size_t n = ds.traces.front().samples.size();
  for (std::size_t i = 0; i < ds.traces.size(); ++i) {
    if (ds.traces[i].samples.size() != n) {
      throw Error("CSV requires uniform trace length; trace " +
                  std::to_string(i) + " has " +
                  std::to_string(ds.traces[i].samples.size()) +
                  " samples, expected " + std::to_string(n));
    }
  }
  std::ostringstream out;
  out << "label,distance_cm,ambient_on,sample_rate_hz,n_samples";
  for (std::size_t i = 0; i < n; ++i) out << ",s" << i;
  out << '\n';
  for (const Trace& t : ds.traces) {
    out << label_to_char(*t.label) << ',' << format_double(t.meta.distance_cm)
        << ',' << (t.meta.ambient_on ? 1 : 0) << ','
        << format_double(t.meta.sample_rate_hz) << ',' << n;
    for (double s : t.samples) out << ',' << format_double(s);
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Dataset& ds) {
  nlohmann::json doc = nlohmann::json::array();
  for (const Trace& t : ds.traces) {
    doc.push_back({{"label", std::string(1, label_to_char(*t.label))},
                   {"distance_cm", t.meta.distance_cm},
                   {"ambient_on", t.meta.ambient_on},
                   {"sample_rate_hz", t.meta.sample_rate_hz},
                   {"samples", t.samples}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace

FileFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return FileFormat::Csv;
  if (ext == ".json") return FileFormat::Json;
  throw Error("cannot infer format from extension '" + ext +
              "' (expected .csv or .json): " + path.string());
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename " + tmp.string() + " to " + path.string());
  }
}

Dataset load_dataset(const std::filesystem::path& path, FileFormat format) {
  if (!std::filesystem::exists(path)) {
    throw Error("no such file: " + path.string());
  }
  return format == FileFormat::Csv ? load_csv(path) : load_json(path);
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path,
                  FileFormat format) {
  ds.validate();
  write_file_atomic(
      path, format == FileFormat::Csv ? render_csv(ds) : render_json(ds));
}

}  // namespace lws
