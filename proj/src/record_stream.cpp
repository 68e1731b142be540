#include "lpcc/record_stream.hpp"

#include <unistd.h>

#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>

namespace lpcc::stream {

namespace {

constexpr std::size_t kIoBufferRecords = 4096;

void put_u64(unsigned char* p, std::uint64_t x) noexcept {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(x >> (8 * i));
}

std::uint64_t get_u64(const unsigned char* p) noexcept {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= std::uint64_t{p[i]} << (8 * i);
  return x;
}

}  // namespace

void encode_record(const TaggedEdge& record, unsigned char* bytes) noexcept {
  put_u64(bytes, record.edge.v);
  put_u64(bytes + 8, record.edge.u);
  bytes[16] = static_cast<unsigned char>(record.tag);
}

TaggedEdge decode_record(const unsigned char* bytes) {
  if (bytes[16] > 1) throw std::runtime_error("corrupt stream record: bad tag byte");
  return {{get_u64(bytes), get_u64(bytes + 8)}, static_cast<Tag>(bytes[16])};
}

RecordStream RecordStream::memory() { return RecordStream(); }

RecordStream RecordStream::file(std::filesystem::path path) {
  RecordStream s;
  s.backend_ = Backend::File;
  s.path_ = std::move(path);
  s.out_ = std::fopen(s.path_.c_str(), "wb");
  if (s.out_ == nullptr) throw std::runtime_error("cannot create stream file " + s.path_.string());
  s.write_buffer_.reserve(kIoBufferRecords * kRecordBytes);
  return s;
}

RecordStream::RecordStream(RecordStream&& other) noexcept { *this = std::move(other); }

RecordStream& RecordStream::operator=(RecordStream&& other) noexcept {
  if (this != &other) {
    release();
    backend_ = other.backend_;
    size_ = other.size_;
    sealed_ = other.sealed_;
    records_ = std::move(other.records_);
    path_ = std::move(other.path_);
    out_ = std::exchange(other.out_, nullptr);
    write_buffer_ = std::move(other.write_buffer_);
    other.path_.clear();
    other.size_ = 0;
  }
  return *this;
}

RecordStream::~RecordStream() { release(); }

void RecordStream::release() noexcept {
  if (out_ != nullptr) std::fclose(out_);
  out_ = nullptr;
  if (!path_.empty()) {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
    path_.clear();
  }
}

void RecordStream::append(const TaggedEdge& record) {
  if (sealed_) throw std::logic_error("append to a sealed stream");
  ++size_;
  if (backend_ == Backend::Memory) {
    records_.push_back(record);
    return;
  }
  const std::size_t at = write_buffer_.size();
  write_buffer_.resize(at + kRecordBytes);
  encode_record(record, write_buffer_.data() + at);
  if (write_buffer_.size() >= kIoBufferRecords * kRecordBytes) flush_buffer();
}

void RecordStream::flush_buffer() {
  if (write_buffer_.empty()) return;
  if (std::fwrite(write_buffer_.data(), 1, write_buffer_.size(), out_) != write_buffer_.size())
    throw std::runtime_error("write failed on stream file " + path_.string());
  write_buffer_.clear();
}

void RecordStream::seal() {
  if (sealed_) return;
  sealed_ = true;
  if (backend_ == Backend::File) {
    flush_buffer();
    if (std::fclose(out_) != 0) {
      out_ = nullptr;
      throw std::runtime_error("close failed on stream file " + path_.string());
    }
    out_ = nullptr;
  }
}

RecordStream::Reader RecordStream::reader() const {
  if (!sealed_) throw std::logic_error("reading an unsealed stream");
  Reader r;
  if (backend_ == Backend::Memory) {
    r.records_ = &records_;
  } else {
    r.in_ = std::fopen(path_.c_str(), "rb");
    if (r.in_ == nullptr) throw std::runtime_error("cannot open stream file " + path_.string());
    r.buffer_.resize(kIoBufferRecords * kRecordBytes);
  }
  r.advance();
  return r;
}

std::vector<TaggedEdge> RecordStream::to_vector() const {
  if (backend_ == Backend::Memory && sealed_) return records_;
  std::vector<TaggedEdge> out;
  out.reserve(size_);
  for (auto r = reader(); r.peek() != nullptr; r.advance()) out.push_back(*r.peek());
  return out;
}

RecordStream::Reader::Reader(Reader&& other) noexcept { *this = std::move(other); }

RecordStream::Reader& RecordStream::Reader::operator=(Reader&& other) noexcept {
  if (this != &other) {
    if (in_ != nullptr) std::fclose(in_);
    records_ = other.records_;
    index_ = other.index_;
    in_ = std::exchange(other.in_, nullptr);
    buffer_ = std::move(other.buffer_);
    buffer_pos_ = other.buffer_pos_;
    buffer_len_ = other.buffer_len_;
    current_ = other.current_;
    has_current_ = other.has_current_;
  }
  return *this;
}

RecordStream::Reader::~Reader() {
  if (in_ != nullptr) std::fclose(in_);
}

void RecordStream::Reader::advance() {
  if (records_ != nullptr) {
    has_current_ = index_ < records_->size();
    if (has_current_) current_ = (*records_)[index_++];
    return;
  }
  if (in_ == nullptr) {
    has_current_ = false;
    return;
  }
  if (buffer_pos_ == buffer_len_) {
    buffer_len_ = std::fread(buffer_.data(), 1, buffer_.size(), in_);
    buffer_pos_ = 0;
    if (buffer_len_ % kRecordBytes != 0) throw std::runtime_error("truncated stream file");
    if (buffer_len_ == 0) {
      has_current_ = false;
      return;
    }
  }
  current_ = decode_record(buffer_.data() + buffer_pos_);
  buffer_pos_ += kRecordBytes;
  has_current_ = true;
}

ScratchDir::ScratchDir(std::optional<std::filesystem::path> root)
    : base_(root.value_or(std::filesystem::temp_directory_path())) {}

ScratchDir::~ScratchDir() {
  if (owned_) {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
}

std::filesystem::path ScratchDir::next_path(const char* stem) {
  namespace fs = std::filesystem;
  for (int attempt = 0; !owned_; ++attempt) {
    fs::path candidate =
        base_ / ("lpcc-" + std::to_string(::getpid()) + "-" + std::to_string(attempt));
    if (fs::create_directories(candidate)) {
      dir_ = candidate;
      owned_ = true;
    } else if (attempt > 1000) {
      throw std::runtime_error("cannot create scratch directory in " + base_.string());
    }
  }
  return dir_ / (std::string(stem) + "-" + std::to_string(counter_++) + ".bin");
}

RecordStream ScratchDir::make(Backend backend, const char* stem) {
  return backend == Backend::Memory ? RecordStream::memory() : RecordStream::file(next_path(stem));
}

}  // namespace lpcc::stream
