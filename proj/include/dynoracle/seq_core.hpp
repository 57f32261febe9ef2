#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dynoracle {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;
using TokenView = std::span<const TokenId>;

// Interned surface strings. Ids are dense and assigned in first-seen order.
class Vocab {
 public:
  TokenId intern(std::string_view surface);
  // Returns size() when the surface is unknown.
  TokenId find(std::string_view surface) const;
  const std::string& surface(TokenId id) const { return surfaces_.at(id); }
  std::size_t size() const { return surfaces_.size(); }
  bool empty() const { return surfaces_.empty(); }

  TokenSeq encode(const std::vector<std::string>& words);
  std::vector<std::string> decode(TokenView ids) const;

 private:
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::string> surfaces_;
};

Vocab build_vocab(const std::vector<std::vector<std::string>>& corpus);

enum class TagKind : std::uint8_t { Outside, Begin, Inside };

struct Tag {
  TagKind kind = TagKind::Outside;
  // Empty iff kind == Outside.
  std::string type;

  static Tag outside() { return {}; }
  static Tag begin(std::string t) { return {TagKind::Begin, std::move(t)}; }
  static Tag inside(std::string t) { return {TagKind::Inside, std::move(t)}; }

  bool is_outside() const { return kind == TagKind::Outside; }
  bool operator==(const Tag&) const = default;
};

using TagSeq = std::vector<Tag>;

class TagParseError : public std::invalid_argument {
 public:
  explicit TagParseError(const std::string& text);
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

Tag parse_tag(std::string_view text);
std::string render_tag(const Tag& tag);

TagSeq parse_tags(const std::vector<std::string>& texts);

// Inclusive 0-based token range carrying one entity type.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  bool operator==(const Span&) const = default;
};

// IOB2 reading with lenient repair: an Inside tag that cannot continue the
// open span (after O, after another type, or at position 0) opens a new one.
std::vector<Span> extract_spans(std::span<const Tag> tags);

}  // namespace dynoracle
