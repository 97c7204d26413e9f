#pragma once

// Run manifests, frame files and delimited text.
//
// frames.bin holds the stored frames back to back; each frame is u then v, every array
// nr * ntheta little-endian float64 values in r-major order (index i * ntheta + j).
// manifest.json records the full configuration (every key of config_keys()), the grid, frame
// times, seed, scheme, code version, stage timings and the output files with sizes and CRC-32
// checksums. Re-running from the manifest configuration reproduces frames.bin byte for byte.

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rmdisk/config.hpp"
#include "rmdisk/diagnostics.hpp"
#include "rmdisk/grid.hpp"

namespace rmdisk {

std::string code_version();

std::uint32_t crc32_update(std::uint32_t crc, const void* data, std::size_t bytes);
// Throws ConfigError when the file cannot be read.
std::uint32_t file_crc32(const std::string& path, std::uint64_t* bytes = nullptr);

struct OutputFile {
  std::string path;   // relative to the manifest directory
  std::uint64_t bytes = 0;
  std::uint32_t crc32 = 0;
};

class ManifestBuilder {
 public:
  ManifestBuilder(const std::string& command, const RunConfig& cfg);
  ~ManifestBuilder();
  ManifestBuilder(const ManifestBuilder&) = delete;
  ManifestBuilder& operator=(const ManifestBuilder&) = delete;

  // Dotted paths address nested objects ("grid.nr").
  void set(const std::string& path, double v);
  void set(const std::string& path, long long v);
  void set(const std::string& path, int v) { set(path, static_cast<long long>(v)); }
  void set(const std::string& path, const std::string& v);
  void set(const std::string& path, const char* v) { set(path, std::string(v)); }
  void set(const std::string& path, bool v);
  void set(const std::string& path, const std::vector<double>& v);
  // Parses raw JSON text; throws ConfigError if it is malformed.
  void set_json(const std::string& path, const std::string& json_text);
  void add_timing(const std::string& stage, double seconds);
  // Reads dir/name from disk to record its size and checksum.
  void add_output(const std::string& dir, const std::string& name);
  void add_output(const OutputFile& f);

  [[nodiscard]] std::string dump() const;
  // Writes dir/manifest.json.
  void write(const std::string& dir) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Writes a text file and returns its record.
OutputFile write_text(const std::string& dir, const std::string& name, const std::string& text);

struct ManifestInfo {
  std::string command;
  std::string version;
  RunConfig config;
  std::vector<OutputFile> outputs;
  std::vector<double> times;
  int nr = 0;
  int ntheta = 0;
};

// Throws ConfigError if the file is missing or malformed.
ManifestInfo read_manifest(const std::string& path);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> problems;
};
// Checks that every listed output exists with the recorded size and checksum.
VerifyResult verify_manifest(const std::string& path);

// Loads the frames of a simulate manifest.
FrameWindow read_frames(const std::string& manifest_path);

// Appends frames to a file from a background thread; push blocks while `capacity` frames are queued.
class FrameWriter {
 public:
  FrameWriter(const std::string& path, std::size_t capacity = 8);
  ~FrameWriter();
  FrameWriter(const FrameWriter&) = delete;
  FrameWriter& operator=(const FrameWriter&) = delete;

  void push(const Field& f);
  // Flushes, joins the thread and rethrows a write error.
  void close();
  [[nodiscard]] std::uint64_t bytes() const { return bytes_; }
  [[nodiscard]] std::uint32_t crc32() const { return crc_; }

 private:
  void loop();

  std::ofstream out_;
  std::string path_;
  std::size_t capacity_;
  std::deque<Field> queue_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool done_ = false;
  bool closed_ = false;
  bool failed_ = false;
  std::uint64_t bytes_ = 0;
  std::uint32_t crc_ = 0;
  std::thread worker_;
};

// Delimited text with a header row; numbers at 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row();
  CsvTable& add(double x);
  CsvTable& add(long long x);
  CsvTable& add(int x) { return add(static_cast<long long>(x)); }
  CsvTable& add(const std::string& s);
  CsvTable& add(const char* s) { return add(std::string(s)); }
  [[nodiscard]] std::string str() const;

 private:
  std::size_t width_;
  std::size_t col_ = 0;
  std::string text_;
};

}  // namespace rmdisk
