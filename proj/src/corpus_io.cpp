#include "dynoracle/corpus_io.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dynoracle {

FormatError::FormatError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                              : what),
      line_(line) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed: '" + path + "'");
}

namespace {

// Splits a document into lines, dropping a trailing '\r'.
std::vector<std::string_view> split_lines(std::string_view doc) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < doc.size()) {
    std::size_t nl = doc.find('\n', pos);
    if (nl == std::string_view::npos) nl = doc.size();
    std::string_view line = doc.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::vector<TaggedSentence> read_conll(std::string_view document) {
  std::vector<TaggedSentence> out;
  TaggedSentence current;
  auto flush = [&] {
    if (!current.tokens.empty()) out.push_back(std::move(current));
    current = {};
  };
  const auto lines = split_lines(document);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto cols = split_ws(lines[n]);
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols.front() == "-DOCSTART-") continue;
    if (cols.size() < 2)
      throw FormatError("expected at least 2 columns, got 1", n + 1);
    try {
      current.tags.push_back(parse_tag(cols.back()));
    } catch (const TagParseError& e) {
      throw FormatError(e.what(), n + 1);
    }
    current.tokens.push_back(cols.front());
  }
  flush();
  return out;
}

std::string write_conll(std::span<const TaggedSentence> sentences) {
  std::string out;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out += s.tokens[i];
      out += ' ';
      out += render_tag(s.tags[i]);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> tokenize_lines(std::string_view document,
                                                     bool lowercase) {
  std::vector<std::vector<std::string>> rows;
  for (std::string_view line : split_lines(document)) {
    auto words = split_ws(line);
    if (lowercase) {
      for (auto& w : words)
        for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    rows.push_back(std::move(words));
  }
  return rows;
}

std::vector<SentencePair> read_parallel(std::string_view src_doc,
                                        std::string_view tgt_doc, Vocab& vocab,
                                        bool lowercase) {
  const auto src = tokenize_lines(src_doc, lowercase);
  const auto tgt = tokenize_lines(tgt_doc, lowercase);
  if (src.size() != tgt.size()) {
    throw FormatError("line count mismatch: source has " +
                          std::to_string(src.size()) + ", target has " +
                          std::to_string(tgt.size()),
                      0);
  }
  std::vector<SentencePair> pairs;
  pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].empty()) throw FormatError("empty source line", i + 1);
    if (tgt[i].empty()) throw FormatError("empty target line", i + 1);
    pairs.push_back({vocab.encode(src[i]), vocab.encode(tgt[i])});
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Records

const FieldValue* Record::find(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

namespace {

void append_value(std::string& out, const FieldValue& v) {
  struct Visitor {
    std::string& out;
    void operator()(std::monostate) const { out += "null"; }
    void operator()(bool b) const { out += b ? "true" : "false"; }
    void operator()(std::int64_t i) const { out += std::to_string(i); }
    void operator()(double d) const {
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", d);
      // Avoid "-0.000000" so equal-looking values print identically.
      if (std::string_view(buf) == "-0.000000") out += "0.000000";
      else out += buf;
    }
    void operator()(const std::string& s) const { out += nlohmann::json(s).dump(); }
  };
  std::visit(Visitor{out}, v);
}

}  // namespace

std::string format_record(const Record& record) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : record.fields) {
    if (!first) out += ',';
    first = false;
    out += nlohmann::json(key).dump();
    out += ':';
    append_value(out, value);
  }
  out += '}';
  return out;
}

void write_records(std::span<const Record> records, std::ostream& sink) {
  for (const auto& r : records) sink << format_record(r) << '\n';
  sink.flush();
  if (!sink) throw IoError("record sink write failed");
}

std::vector<Record> read_records(std::string_view document) {
  std::vector<Record> out;
  const auto lines = split_lines(document);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(lines[n]);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(e.what(), n + 1);
    }
    if (!obj.is_object()) throw FormatError("record is not an object", n + 1);
    Record rec;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const auto& v = it.value();
      if (v.is_null()) rec.add(it.key(), FieldValue{});
      else if (v.is_boolean()) rec.add(it.key(), FieldValue(v.get<bool>()));
      else if (v.is_number_integer()) rec.add(it.key(), FieldValue(v.get<std::int64_t>()));
      else if (v.is_number_float()) rec.add(it.key(), FieldValue(v.get<double>()));
      else if (v.is_string()) rec.add(it.key(), FieldValue(v.get<std::string>()));
      else throw FormatError("unsupported value for key '" + it.key() + "'", n + 1);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace dynoracle
