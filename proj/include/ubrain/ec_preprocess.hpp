#pragma once

// Eddy-current signal records -> binary instances.
//
//   two channels -> complex signal ch1 + i*ch2 -> |DFT| over [0, Fs)
//   -> 25 equal-width bands (min / max / average / median of the magnitudes)
//   -> band average quantised to 16 levels by recursive median thresholds
//   -> 4-bit plain binary code per band, MSB first -> 100 crisp variables

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ubrain/error.hpp"
#include "ubrain/instance.hpp"

namespace ubrain::ec {

inline constexpr std::size_t kDefaultSampleCount = 4096;
inline constexpr double kDefaultSampleRate = 10000.0;
inline constexpr std::size_t kDefaultBandCount = 25;
inline constexpr std::size_t kDefaultBitDepth = 4;
inline constexpr int kModelVersion = 1;

struct SignalFormat {
  std::size_t sample_count = kDefaultSampleCount;
  double sample_rate = kDefaultSampleRate;
};

/// One acquisition: channel 1 in the real part, channel 2 in the imaginary part.
struct SignalRecord {
  std::string id;
  double sample_rate = kDefaultSampleRate;
  std::vector<std::complex<double>> samples;
  std::optional<Label> label;

  friend bool operator==(const SignalRecord&, const SignalRecord&) = default;
};

inline void validate(const SignalRecord& r, const SignalFormat& format) {
  if (!(r.sample_rate > 0.0)) throw Error(ErrorCode::config, "record '" + r.id + "' has non-positive sample rate");
  if (r.samples.size() != format.sample_count)
    throw Error(ErrorCode::ingestion, "record '" + r.id + "' has " + std::to_string(r.samples.size()) +
                                          " samples, expected " + std::to_string(format.sample_count));
}

// ---------------------------------------------------------------------------
// Signal files

namespace detail {

inline std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

inline std::optional<Label> parse_label(const std::string& text) {
  if (text == "+" || text == "positive") return Label::positive;
  if (text == "-" || text == "negative") return Label::negative;
  return std::nullopt;
}

}  // namespace detail

/// Rows "ch1,ch2"; an optional non-numeric header on the first line.
inline SignalRecord read_signal_csv(std::istream& in, const std::string& source, std::string id,
                                    const SignalFormat& format = {}) {
  SignalRecord r;
  r.id = std::move(id);
  r.sample_rate = format.sample_rate;
  r.samples.reserve(format.sample_count);
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      if (first_content && !detail::parse_number(line)) {
        first_content = false;
        continue;
      }
      throw IngestionError(source, line_no, "missing channel (expected 'ch1,ch2')");
    }
    if (line.find(',', comma + 1) != std::string::npos)
      throw IngestionError(source, line_no, "too many fields (expected 'ch1,ch2')");
    const auto ch1 = detail::parse_number(std::string_view(line).substr(0, comma));
    const auto ch2 = detail::parse_number(std::string_view(line).substr(comma + 1));
    if (!ch1 || !ch2) {
      if (first_content) {
        first_content = false;
        continue;
      }
      throw IngestionError(source, line_no, "malformed row '" + line + "'");
    }
    first_content = false;
    r.samples.emplace_back(*ch1, *ch2);
  }
  if (r.samples.size() != format.sample_count)
    throw IngestionError(source, line_no, "record has " + std::to_string(r.samples.size()) + " samples, expected " +
                                              std::to_string(format.sample_count));
  return r;
}

/// Little-endian float32 interleaved pairs; the stream may hold several records back to back.
inline std::vector<SignalRecord> read_signal_binary(std::istream& in, const std::string& source,
                                                    const std::string& id_prefix, const SignalFormat& format = {}) {
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t record_bytes = format.sample_count * 8;
  if (bytes.empty() || bytes.size() % record_bytes != 0)
    throw IngestionError(source, 0, "size " + std::to_string(bytes.size()) + " is not a whole number of " +
                                        std::to_string(format.sample_count) + "-pair records");
  auto read_f32 = [&](std::size_t offset) {
    std::uint32_t bits = 0;
    for (int b = 3; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(bytes[offset + static_cast<std::size_t>(b)]);
    return static_cast<double>(std::bit_cast<float>(bits));
  };
  std::vector<SignalRecord> out;
  const std::size_t count = bytes.size() / record_bytes;
  for (std::size_t rec = 0; rec < count; ++rec) {
    SignalRecord r;
    r.id = count == 1 ? id_prefix : id_prefix + "#" + std::to_string(rec);
    r.sample_rate = format.sample_rate;
    r.samples.reserve(format.sample_count);
    for (std::size_t n = 0; n < format.sample_count; ++n) {
      const std::size_t at = rec * record_bytes + n * 8;
      r.samples.emplace_back(read_f32(at), read_f32(at + 4));
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_signal_csv(std::ostream& out, const SignalRecord& r) {
  out << "ch1,ch2\n";
  char buf[64];
  for (const auto& z : r.samples) {
    auto end = std::to_chars(buf, buf + sizeof buf, z.real()).ptr;
    *end++ = ',';
    end = std::to_chars(end, buf + sizeof buf, z.imag()).ptr;
    *end++ = '\n';
    out.write(buf, end - buf);
  }
}

inline void write_signal_binary(std::ostream& out, const SignalRecord& r) {
  auto put = [&](double v) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    char b[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                 static_cast<char>((bits >> 16) & 0xff), static_cast<char>((bits >> 24) & 0xff)};
    out.write(b, 4);
  };
  for (const auto& z : r.samples) {
    put(z.real());
    put(z.imag());
  }
}

inline constexpr const char* kMetadataFile = "metadata.json";

/// Writes one file per record plus the metadata sidecar (sample rate, N, label map).
inline void write_signal_directory(const std::filesystem::path& dir, std::span<const SignalRecord> records,
                                   bool binary = false) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create '" + dir.string() + "': " + ec.message());
  nlohmann::json meta;
  meta["sample_rate"] = records.empty() ? kDefaultSampleRate : records.front().sample_rate;
  meta["samples"] = records.empty() ? kDefaultSampleCount : records.front().samples.size();
  meta["labels"] = nlohmann::json::object();
  for (const auto& r : records) {
    const std::string name = r.id + (binary ? ".f32" : ".csv");
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + (dir / name).string() + "'");
    if (binary) write_signal_binary(out, r);
    else write_signal_csv(out, r);
    if (r.label) meta["labels"][name] = *r.label == Label::positive ? "positive" : "negative";
  }
  std::ofstream out(dir / kMetadataFile);
  if (!out) throw Error(ErrorCode::io, "cannot write metadata in '" + dir.string() + "'");
  out << meta.dump(2) << '\n';
}

/// Loads a single .csv/.f32 file, or every such file of a directory in name order with the
/// directory's metadata.json (if present) supplying sample rate, N and labels.
inline std::vector<SignalRecord> load_signals(const std::filesystem::path& source, SignalFormat format = {}) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  nlohmann::json labels = nlohmann::json::object();
  if (fs::is_directory(source)) {
    const auto meta_path = source / kMetadataFile;
    if (fs::exists(meta_path)) {
      std::ifstream in(meta_path);
      nlohmann::json meta;
      try {
        in >> meta;
        if (meta.contains("sample_rate")) format.sample_rate = meta.at("sample_rate").get<double>();
        if (meta.contains("samples")) format.sample_count = meta.at("samples").get<std::size_t>();
        if (meta.contains("labels")) labels = meta.at("labels");
      } catch (const nlohmann::json::exception& e) {
        throw IngestionError(meta_path.string(), 0, std::string("bad metadata: ") + e.what());
      }
    }
    for (const auto& entry : fs::directory_iterator(source)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".csv" || ext == ".f32" || ext == ".bin")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(source)) {
    files.push_back(source);
  } else {
    throw Error(ErrorCode::io, "signal source '" + source.string() + "' does not exist");
  }
  if (!(format.sample_rate > 0.0) || format.sample_count == 0)
    throw Error(ErrorCode::config, "signal format needs positive sample rate and count");

  std::vector<SignalRecord> out;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    const auto name = path.filename().string();
    std::vector<SignalRecord> recs;
    if (path.extension() == ".csv") recs.push_back(read_signal_csv(in, path.string(), path.stem().string(), format));
    else recs = read_signal_binary(in, path.string(), path.stem().string(), format);
    std::optional<Label> label;
    if (labels.contains(name)) {
      label = detail::parse_label(labels.at(name).get<std::string>());
      if (!label) throw IngestionError(path.string(), 0, "unknown label in metadata");
    }
    for (auto& r : recs) {
      r.label = label;
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum

struct Spectrum {
  double sample_rate = kDefaultSampleRate;
  std::vector<double> magnitudes;  // bin k <-> k * Fs / N

  std::size_t size() const noexcept { return magnitudes.size(); }
};

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Full N-point DFT of ch1 + i*ch2 (rectangular window), magnitudes over [0, Fs).
inline std::vector<std::complex<double>> dft(std::span<const std::complex<double>> z) {
  const int n = static_cast<int>(z.size());
  std::vector<std::complex<double>> in(z.begin(), z.end());
  std::vector<std::complex<double>> out(z.size());
  if (z.empty()) return out;
  auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw Error(ErrorCode::config, "FFT planning failed for size " + std::to_string(n));
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

inline Spectrum compute_spectrum(const SignalRecord& r) {
  if (!(r.sample_rate > 0.0)) throw Error(ErrorCode::config, "record '" + r.id + "' has non-positive sample rate");
  Spectrum s;
  s.sample_rate = r.sample_rate;
  const auto coeffs = dft(r.samples);
  s.magnitudes.reserve(coeffs.size());
  for (const auto& c : coeffs) s.magnitudes.push_back(std::abs(c));
  return s;
}

// ---------------------------------------------------------------------------
// Band statistics

struct BandStat {
  double min = 0.0;
  double max = 0.0;
  double average = 0.0;
  double median = 0.0;

  friend bool operator==(const BandStat&, const BandStat&) = default;
};

struct BandStats {
  std::vector<BandStat> bands;
  friend bool operator==(const BandStats&, const BandStats&) = default;
};

/// Band of bin k: floor(k * bands / N), so band b covers [b*Fs/bands, (b+1)*Fs/bands).
inline std::size_t band_of_bin(std::size_t bin, std::size_t bin_count, std::size_t band_count) {
  return bin * band_count / bin_count;
}

/// Half-open bin range [first, last) of band b.
inline std::pair<std::size_t, std::size_t> band_bins(std::size_t band, std::size_t bin_count, std::size_t band_count) {
  auto first_bin = [&](std::size_t b) { return (b * bin_count + band_count - 1) / band_count; };
  return {first_bin(band), first_bin(band + 1)};
}

inline double median_of(std::vector<double> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return (lower + upper) / 2.0;
}

inline BandStats band_statistics(const Spectrum& s, std::size_t band_count = kDefaultBandCount) {
  if (band_count == 0 || s.size() < band_count)
    throw Error(ErrorCode::config, std::to_string(band_count) + " bands over " + std::to_string(s.size()) +
                                       " bins leaves a band empty");
  BandStats out;
  out.bands.reserve(band_count);
  for (std::size_t b = 0; b < band_count; ++b) {
    const auto [first, last] = band_bins(b, s.size(), band_count);
    if (first == last) throw Error(ErrorCode::config, "band " + std::to_string(b) + " has no bins");
    const auto begin = s.magnitudes.begin() + static_cast<std::ptrdiff_t>(first);
    const auto end = s.magnitudes.begin() + static_cast<std::ptrdiff_t>(last);
    BandStat st;
    const auto [lo, hi] = std::minmax_element(begin, end);
    st.min = *lo;
    st.max = *hi;
    double sum = 0.0;
    for (auto it = begin; it != end; ++it) sum += *it;
    st.average = sum / static_cast<double>(last - first);
    st.median = median_of(std::vector<double>(begin, end));
    out.bands.push_back(st);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantizer

struct Quantizer {
  std::vector<double> thresholds;  // strictly increasing

  std::size_t levels() const noexcept { return thresholds.size() + 1; }
  friend bool operator==(const Quantizer&, const Quantizer&) = default;
};

/// Count of thresholds strictly below v.
inline std::size_t quantize(double v, const Quantizer& q) {
  return static_cast<std::size_t>(std::lower_bound(q.thresholds.begin(), q.thresholds.end(), v) -
                                  q.thresholds.begin());
}

namespace detail {

// Fills the 2^depth - 1 thresholds of the sorted slice `values`, whose members all lie in
// (lower, upper], into out[offset ...] in order.
inline void median_split(std::span<const double> values, double lower, double upper, int depth,
                         std::vector<double>& out, std::size_t offset) {
  if (depth == 0) return;
  const std::size_t half = (std::size_t{1} << (depth - 1)) - 1;  // thresholds per child
  double t;
  std::size_t cut;  // values[0, cut) go left (<= t)
  const bool degenerate = values.empty() || values.front() == values.back();
  if (!degenerate) {
    const std::size_t n = values.size();
    t = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    cut = static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), t) - values.begin());
    if (cut == n) {
      // right side empty: split between the largest value and its distinct predecessor
      const auto top = std::lower_bound(values.begin(), values.end(), values.back());
      t = (*(top - 1) + values.back()) / 2.0;
      cut = static_cast<std::size_t>(top - values.begin());
    }
  } else {
    // Nothing to split: place the threshold strictly inside the open bracket so the
    // sequence stays increasing; all values stay on one side.
    double a = lower;
    double b = upper;
    if (!values.empty()) {
      const double c = values.front();
      if (std::isfinite(b) && c < b) a = c;
      else b = c;
    }
    if (!std::isfinite(a)) a = b - std::max(1.0, std::abs(b));
    if (!std::isfinite(b)) b = a + std::max(1.0, std::abs(a));
    t = a + (b - a) / 2.0;
    if (!(t > lower && t < upper)) throw Error(ErrorCode::degenerate_corpus, "cannot place distinct thresholds");
    cut = values.empty() || values.front() > t ? 0 : values.size();
  }
  out[offset + half] = t;
  median_split(values.subspan(0, cut), lower, t, depth - 1, out, offset);
  median_split(values.subspan(cut), t, upper, depth - 1, out, offset + half + 1);
}

}  // namespace detail

/// Recursive median splits: the root threshold is the median of all values, each side is
/// split at its own median, down to log2(levels) levels. `levels` must be a power of two.
inline Quantizer fit_quantizer(std::span<const double> corpus, std::size_t levels = 16) {
  if (levels < 2 || !std::has_single_bit(levels))
    throw Error(ErrorCode::config, "quantizer levels must be a power of two >= 2");
  if (corpus.size() < levels)
    throw Error(ErrorCode::degenerate_corpus, "need at least " + std::to_string(levels) + " values, got " +
                                                  std::to_string(corpus.size()));
  for (double v : corpus)
    if (!std::isfinite(v)) throw Error(ErrorCode::degenerate_corpus, "corpus holds a non-finite value");
  std::vector<double> sorted(corpus.begin(), corpus.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw Error(ErrorCode::degenerate_corpus, "all corpus values are equal");
  Quantizer q;
  q.thresholds.resize(levels - 1);
  const int depth = std::countr_zero(levels);
  detail::median_split(sorted, -INFINITY, INFINITY, depth, q.thresholds, 0);
  for (std::size_t t = 1; t < q.thresholds.size(); ++t)
    if (!(q.thresholds[t - 1] < q.thresholds[t]))
      throw Error(ErrorCode::degenerate_corpus, "thresholds are not strictly increasing");
  return q;
}

// ---------------------------------------------------------------------------
// Encoding model

struct EncodingModel {
  int version = kModelVersion;
  std::size_t sample_count = kDefaultSampleCount;
  double sample_rate = kDefaultSampleRate;
  std::size_t band_count = kDefaultBandCount;
  std::size_t bit_depth = kDefaultBitDepth;
  Quantizer quantizer;

  std::size_t arity() const noexcept { return band_count * bit_depth; }
  friend bool operator==(const EncodingModel&, const EncodingModel&) = default;
};

inline BandStats record_band_statistics(const SignalRecord& r, std::size_t band_count = kDefaultBandCount) {
  return band_statistics(compute_spectrum(r), band_count);
}

/// Fits the global quantizer on every (record, band) average of `records`.
inline EncodingModel fit_encoding_model(std::span<const SignalRecord> records, SignalFormat format = {},
                                        std::size_t band_count = kDefaultBandCount,
                                        std::size_t bit_depth = kDefaultBitDepth) {
  if (bit_depth == 0 || bit_depth > 16) throw Error(ErrorCode::config, "bit depth must be in [1, 16]");
  EncodingModel m;
  m.sample_count = format.sample_count;
  m.sample_rate = format.sample_rate;
  m.band_count = band_count;
  m.bit_depth = bit_depth;
  std::vector<double> averages;
  averages.reserve(records.size() * band_count);
  for (const auto& r : records) {
    validate(r, format);
    for (const auto& b : record_band_statistics(r, band_count).bands) averages.push_back(b.average);
  }
  m.quantizer = fit_quantizer(averages, std::size_t{1} << bit_depth);
  return m;
}

/// Band averages quantised and written as plain binary, MSB first, band 0 first.
inline Instance encode(const BandStats& stats, const EncodingModel& m) {
  if (stats.bands.size() != m.band_count)
    throw Error(ErrorCode::arity, "band statistics have " + std::to_string(stats.bands.size()) +
                                      " bands, model expects " + std::to_string(m.band_count));
  if (m.quantizer.levels() != (std::size_t{1} << m.bit_depth))
    throw Error(ErrorCode::arity, "quantizer levels do not match the model bit depth");
  Instance x;
  x.values.reserve(m.arity());
  for (const auto& band : stats.bands) {
    const std::size_t level = quantize(band.average, m.quantizer);
    for (std::size_t bit = m.bit_depth; bit-- > 0;) x.values.push_back(((level >> bit) & 1u) ? 1.0 : 0.0);
  }
  return x;
}

inline Instance encode_record(const SignalRecord& r, const EncodingModel& m) {
  validate(r, {m.sample_count, m.sample_rate});
  Instance x = encode(record_band_statistics(r, m.band_count), m);
  x.id = r.id;
  x.label = r.label.value_or(Label::negative);
  return x;
}

inline Dataset encode_records(std::span<const SignalRecord> records, const EncodingModel& m) {
  Dataset d(m.arity());
  for (const auto& r : records) {
    if (!r.label) throw Error(ErrorCode::config, "record '" + r.id + "' has no class label");
    d.add(encode_record(r, m));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Model files

inline constexpr const char* kModelFormat = "ubrain-encoding-model";

inline void save_model(std::ostream& out, const EncodingModel& m) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = m.version;
  j["sample_rate"] = m.sample_rate;
  j["samples"] = m.sample_count;
  j["bands"] = m.band_count;
  j["bits"] = m.bit_depth;
  j["thresholds"] = m.quantizer.thresholds;  // shortest round-trip decimal form
  out << j.dump(2) << '\n';
}

inline EncodingModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::corrupt_file, std::string("model file is not valid: ") + e.what());
  }
  EncodingModel m;
  try {
    if (j.at("format").get<std::string>() != kModelFormat)
      throw Error(ErrorCode::corrupt_file, "not an encoding model file");
    m.version = j.at("version").get<int>();
    if (m.version != kModelVersion)
      throw Error(ErrorCode::version, "model version " + std::to_string(m.version) + " is not supported (expected " +
                                          std::to_string(kModelVersion) + ")");
    m.sample_rate = j.at("sample_rate").get<double>();
    m.sample_count = j.at("samples").get<std::size_t>();
    m.band_count = j.at("bands").get<std::size_t>();
    m.bit_depth = j.at("bits").get<std::size_t>();
    m.quantizer.thresholds = j.at("thresholds").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::corrupt_file, std::string("model file is missing fields: ") + e.what());
  }
  if (m.bit_depth == 0 || m.bit_depth > 16 || m.quantizer.thresholds.size() != (std::size_t{1} << m.bit_depth) - 1)
    throw Error(ErrorCode::corrupt_file, "threshold count does not match bit depth");
  for (std::size_t t = 1; t < m.quantizer.thresholds.size(); ++t)
    if (!(m.quantizer.thresholds[t - 1] < m.quantizer.thresholds[t]))
      throw Error(ErrorCode::corrupt_file, "thresholds are not strictly increasing");
  return m;
}

inline void save_model(const std::filesystem::path& path, const EncodingModel& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write model '" + path.string() + "'");
  save_model(out, m);
}

inline EncodingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open model '" + path.string() + "'");
  return load_model(in);
}

}  // namespace ubrain::ec
