#include "rmdisk/manifest.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <sstream>

#include <json.hpp>
#include <zlib.h>

#include "rmdisk/errors.hpp"

#ifndef RMDISK_VERSION
#define RMDISK_VERSION "unknown"
#endif

namespace rmdisk {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string code_version() { return RMDISK_VERSION; }

std::uint32_t crc32_update(std::uint32_t crc, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const Bytef*>(data);
  uLong c = crc;
  while (bytes > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes, 1u << 30));
    c = ::crc32(c, p, chunk);
    p += chunk;
    bytes -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

std::uint32_t file_crc32(const std::string& path, std::uint64_t* bytes) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  std::vector<char> buf(1 << 20);
  std::uint32_t crc = 0;
  std::uint64_t total = 0;
  while (f) {
    f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(f.gcount());
    crc = crc32_update(crc, buf.data(), got);
    total += got;
  }
  if (bytes) *bytes = total;
  return crc;
}

namespace {

std::string hex32(std::uint32_t x) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", x);
  return buf;
}

ordered_json& at_path(ordered_json& root, const std::string& path) {
  ordered_json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return *node;
}

void append_le(std::vector<unsigned char>& out, const std::vector<double>& a) {
  const std::size_t off = out.size();
  out.resize(off + a.size() * sizeof(double));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data() + off, a.data(), a.size() * sizeof(double));
  } else {
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto bits = std::bit_cast<std::uint64_t>(a[k]);
      for (int b = 0; b < 8; ++b) out[off + 8 * k + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
  }
}

double read_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

}  // namespace

struct ManifestBuilder::Impl {
  ordered_json root;
};

ManifestBuilder::ManifestBuilder(const std::string& command, const RunConfig& cfg) : impl_(std::make_unique<Impl>()) {
  auto& j = impl_->root;
  j["format"] = "rmdisk-manifest";
  j["version"] = code_version();
  j["command"] = command;
  ordered_json c = ordered_json::object();
  for (const auto& [k, v] : to_pairs(cfg)) c[k] = v;
  j["config"] = c;
  j["timing"] = ordered_json::object();
  j["outputs"] = ordered_json::array();
}

ManifestBuilder::~ManifestBuilder() = default;

void ManifestBuilder::set(const std::string& path, double v) { at_path(impl_->root, path) = v; }
void ManifestBuilder::set(const std::string& path, long long v) { at_path(impl_->root, path) = v; }
void ManifestBuilder::set(const std::string& path, const std::string& v) { at_path(impl_->root, path) = v; }
void ManifestBuilder::set(const std::string& path, bool v) { at_path(impl_->root, path) = v; }
void ManifestBuilder::set(const std::string& path, const std::vector<double>& v) { at_path(impl_->root, path) = v; }

void ManifestBuilder::set_json(const std::string& path, const std::string& json_text) {
  try {
    at_path(impl_->root, path) = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: malformed JSON for ") + path + ": " + e.what());
  }
}

void ManifestBuilder::add_timing(const std::string& stage, double seconds) { impl_->root["timing"][stage] = seconds; }

void ManifestBuilder::add_output(const std::string& dir, const std::string& name) {
  OutputFile f;
  f.path = name;
  f.crc32 = file_crc32((fs::path(dir) / name).string(), &f.bytes);
  add_output(f);
}

void ManifestBuilder::add_output(const OutputFile& f) {
  impl_->root["outputs"].push_back({{"path", f.path}, {"bytes", f.bytes}, {"crc32", hex32(f.crc32)}});
}

std::string ManifestBuilder::dump() const { return impl_->root.dump(2) + "\n"; }

void ManifestBuilder::write(const std::string& dir) const {
  fs::create_directories(dir);
  std::ofstream f(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!f) throw ConfigError("cannot write manifest in '" + dir + "'");
  f << dump();
}

OutputFile write_text(const std::string& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  std::ofstream f(fs::path(dir) / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + (fs::path(dir) / name).string() + "'");
  f << text;
  f.close();
  if (!f) throw ConfigError("write failed for '" + name + "'");
  return {name, text.size(), crc32_update(0, text.data(), text.size())};
}

ManifestInfo read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open manifest '" + path + "'");
  ordered_json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed manifest '" + path + "': " + e.what());
  }
  ManifestInfo m;
  try {
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) set_key(m.config, k, v.get<std::string>());
    for (const auto& o : j.at("outputs")) {
      OutputFile out;
      out.path = o.at("path").get<std::string>();
      out.bytes = o.at("bytes").get<std::uint64_t>();
      out.crc32 = static_cast<std::uint32_t>(std::stoul(o.at("crc32").get<std::string>(), nullptr, 16));
      m.outputs.push_back(out);
    }
    if (j.contains("times")) m.times = j.at("times").get<std::vector<double>>();
    if (j.contains("grid")) {
      m.nr = j.at("grid").value("nr", 0);
      m.ntheta = j.at("grid").value("ntheta", 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest '" + path + "' lacks a field: " + e.what());
  }
  return m;
}

VerifyResult verify_manifest(const std::string& path) {
  VerifyResult r;
  const ManifestInfo m = read_manifest(path);
  const fs::path dir = fs::path(path).parent_path();
  for (const auto& o : m.outputs) {
    const fs::path p = dir / o.path;
    if (!fs::exists(p)) {
      r.ok = false;
      r.problems.push_back("missing " + o.path);
      continue;
    }
    std::uint64_t bytes = 0;
    const std::uint32_t crc = file_crc32(p.string(), &bytes);
    if (bytes != o.bytes) {
      r.ok = false;
      r.problems.push_back(o.path + ": size " + std::to_string(bytes) + " != " + std::to_string(o.bytes));
    } else if (crc != o.crc32) {
      r.ok = false;
      r.problems.push_back(o.path + ": checksum mismatch");
    }
  }
  return r;
}

FrameWindow read_frames(const std::string& manifest_path) {
  const ManifestInfo m = read_manifest(manifest_path);
  if (m.command != "simulate") throw ConfigError("manifest '" + manifest_path + "' is not a simulate manifest");
  const OutputFile* frames = nullptr;
  for (const auto& o : m.outputs) {
    if (o.path == "frames.bin") frames = &o;
  }
  if (!frames) throw ConfigError("manifest lists no frames.bin");
  FrameWindow w;
  w.grid = make_grid(m.nr, m.ntheta, m.config.model.R);
  w.u_star = steady_state(m.config.model).u_star;
  w.tau = m.config.model.tau;
  w.times = m.times;
  const std::size_t cells = w.grid.size();
  const std::uint64_t expect = static_cast<std::uint64_t>(w.times.size()) * 2 * cells * sizeof(double);
  const fs::path p = fs::path(manifest_path).parent_path() / frames->path;
  std::ifstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + p.string() + "'");
  std::vector<unsigned char> buf(2 * cells * sizeof(double));
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(f.gcount()) != buf.size()) throw ConfigError("frames.bin is shorter than the manifest states");
    total += buf.size();
    Field fld{std::vector<double>(cells), std::vector<double>(cells)};
    for (std::size_t q = 0; q < cells; ++q) {
      fld.u[q] = read_le(buf.data() + 8 * q);
      fld.v[q] = read_le(buf.data() + 8 * (cells + q));
    }
    w.frames.push_back(std::move(fld));
  }
  if (total != expect || total != frames->bytes) throw ConfigError("frames.bin size does not match the manifest");
  return w;
}

FrameWriter::FrameWriter(const std::string& path, std::size_t capacity)
    : out_(path, std::ios::binary), path_(path), capacity_(std::max<std::size_t>(capacity, 1)) {
  if (!out_) throw ConfigError("cannot write '" + path + "'");
  worker_ = std::thread([this] { loop(); });
}

FrameWriter::~FrameWriter() {
  try {
    close();
  } catch (...) {
  }
}

void FrameWriter::push(const Field& f) {
  std::unique_lock lk(mu_);
  if (closed_) throw ConfigError("frame writer already closed");
  cv_.wait(lk, [&] { return queue_.size() < capacity_ || failed_; });
  if (failed_) throw ConfigError("write failed for '" + path_ + "'");
  queue_.push_back(f);
  cv_.notify_all();
}

void FrameWriter::loop() {
  std::vector<unsigned char> buf;
  while (true) {
    Field f;
    {
      std::unique_lock lk(mu_);
      cv_.wait(lk, [&] { return !queue_.empty() || done_; });
      if (queue_.empty()) return;
      f = std::move(queue_.front());
      queue_.pop_front();
      cv_.notify_all();
    }
    buf.clear();
    append_le(buf, f.u);
    append_le(buf, f.v);
    out_.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    crc_ = crc32_update(crc_, buf.data(), buf.size());
    bytes_ += buf.size();
    if (!out_) {
      std::lock_guard lk(mu_);
      failed_ = true;
      cv_.notify_all();
      return;
    }
  }
}

void FrameWriter::close() {
  {
    std::lock_guard lk(mu_);
    if (closed_) return;
    closed_ = true;
    done_ = true;
    cv_.notify_all();
  }
  if (worker_.joinable()) worker_.join();
  out_.close();
  if (failed_ || !out_) throw ConfigError("write failed for '" + path_ + "'");
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) text_ += (k ? "," : "") + header[k];
  text_ += "\n";
  col_ = width_;
}

CsvTable& CsvTable::row() {
  if (col_ != width_) throw ConfigError("csv: incomplete row");
  col_ = 0;
  return *this;
}

CsvTable& CsvTable::add(const std::string& s) {
  if (col_ >= width_) throw ConfigError("csv: too many columns");
  text_ += s;
  ++col_;
  text_ += col_ == width_ ? "\n" : ",";
  return *this;
}

CsvTable& CsvTable::add(double x) { return add(format_double(x)); }
CsvTable& CsvTable::add(long long x) { return add(std::to_string(x)); }

std::string CsvTable::str() const {
  if (col_ != width_) throw ConfigError("csv: incomplete row");
  return text_;
}

}  // namespace rmdisk
