#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dynoracle/seq_core.hpp"

namespace dynoracle {

// Malformed input; line is 1-based (0 when not tied to a line).
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

struct TaggedSentence {
  std::vector<std::string> tokens;
  TagSeq tags;
};

// CoNLL columns: blank lines separate sentences, the token is the first
// column and the tag the last, "-DOCSTART-" lines are skipped.
std::vector<TaggedSentence> read_conll(std::string_view document);

// Two columns per line ("token tag"), blank line after each sentence.
std::string write_conll(std::span<const TaggedSentence> sentences);

struct SentencePair {
  TokenSeq source;
  TokenSeq target;
};

// Whitespace tokens of every line. Blank lines yield empty rows.
std::vector<std::vector<std::string>> tokenize_lines(std::string_view document,
                                                     bool lowercase = false);

// Line-aligned parallel text. Both documents share `vocab`.
std::vector<SentencePair> read_parallel(std::string_view src_doc,
                                        std::string_view tgt_doc, Vocab& vocab,
                                        bool lowercase = false);

// ---------------------------------------------------------------------------
// Line-delimited records
//
// One JSON object per line. Keys keep insertion order, doubles are written
// with exactly six decimals, non-finite doubles as null. Output is
// byte-identical for identical input.

using FieldValue =
    std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Record {
  std::vector<std::pair<std::string, FieldValue>> fields;

  Record& add(std::string key, FieldValue value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Record& add(std::string key, bool value) { return add(std::move(key), FieldValue(value)); }
  Record& add(std::string key, int value) {
    return add(std::move(key), FieldValue(static_cast<std::int64_t>(value)));
  }
  Record& add(std::string key, std::int64_t value) {
    return add(std::move(key), FieldValue(value));
  }
  Record& add(std::string key, std::size_t value) {
    return add(std::move(key), FieldValue(static_cast<std::int64_t>(value)));
  }
  Record& add(std::string key, double value) { return add(std::move(key), FieldValue(value)); }
  Record& add(std::string key, std::string value) {
    return add(std::move(key), FieldValue(std::move(value)));
  }
  Record& add(std::string key, const char* value) {
    return add(std::move(key), FieldValue(std::string(value)));
  }
  Record& add(std::string key, std::string_view value) {
    return add(std::move(key), FieldValue(std::string(value)));
  }

  // nullptr if absent.
  const FieldValue* find(std::string_view key) const;
  bool operator==(const Record&) const = default;
};

std::string format_record(const Record& record);

// Throws IoError if the stream fails.
void write_records(std::span<const Record> records, std::ostream& sink);

// Inverse of write_records (numbers containing '.', 'e' or 'E' read back as
// doubles). Throws FormatError with the line number.
std::vector<Record> read_records(std::string_view document);

}  // namespace dynoracle
