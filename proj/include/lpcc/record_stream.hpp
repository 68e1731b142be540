#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "lpcc/types.hpp"

namespace lpcc::stream {

enum class Backend { Memory, File };

/// Append-only sequence of tagged edge records.
///
/// The file backend stores fixed-width 17-byte records: v (8 bytes LE),
/// u (8 bytes LE), tag (1 byte, 0 = OLD, 1 = NEW). Plain edge streams use tag 1.
class RecordStream {
 public:
  class Reader;

  static RecordStream memory();
  /// Creates (truncates) `path`; the file is removed when the stream is destroyed.
  static RecordStream file(std::filesystem::path path);

  RecordStream(RecordStream&&) noexcept;
  RecordStream& operator=(RecordStream&&) noexcept;
  ~RecordStream();

  void append(const TaggedEdge& record);
  /// Ends the write phase. Appending after seal() is an error.
  void seal();
  std::size_t size() const noexcept { return size_; }
  Backend backend() const noexcept { return backend_; }

  Reader reader() const;
  /// Materializes the stream; for tests and observers.
  std::vector<TaggedEdge> to_vector() const;

  static constexpr std::size_t kRecordBytes = 17;

 private:
  RecordStream() = default;

  Backend backend_ = Backend::Memory;
  std::size_t size_ = 0;
  bool sealed_ = false;
  std::vector<TaggedEdge> records_;
  std::filesystem::path path_;
  std::FILE* out_ = nullptr;
  std::vector<unsigned char> write_buffer_;

  void flush_buffer();
  void release() noexcept;
};

/// Sequential reader. Holds one record of lookahead, nothing else.
class RecordStream::Reader {
 public:
  Reader(Reader&&) noexcept;
  Reader& operator=(Reader&&) noexcept;
  ~Reader();

  const TaggedEdge* peek() const noexcept { return has_current_ ? &current_ : nullptr; }
  void advance();

 private:
  friend class RecordStream;
  Reader() = default;

  const std::vector<TaggedEdge>* records_ = nullptr;
  std::size_t index_ = 0;
  std::FILE* in_ = nullptr;
  std::vector<unsigned char> buffer_;
  std::size_t buffer_pos_ = 0;
  std::size_t buffer_len_ = 0;
  TaggedEdge current_{};
  bool has_current_ = false;
};

void encode_record(const TaggedEdge& record, unsigned char* bytes) noexcept;
TaggedEdge decode_record(const unsigned char* bytes);

/// Scratch area for file-backed streams, created on first use and removed
/// with the object. Each call returns a fresh file path.
class ScratchDir {
 public:
  explicit ScratchDir(std::optional<std::filesystem::path> root = std::nullopt);
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::filesystem::path next_path(const char* stem);
  RecordStream make(Backend backend, const char* stem);

 private:
  std::filesystem::path base_;
  std::filesystem::path dir_;
  std::size_t counter_ = 0;
  bool owned_ = false;
};

}  // namespace lpcc::stream
