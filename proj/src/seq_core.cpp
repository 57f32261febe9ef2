#include "dynoracle/seq_core.hpp"

namespace dynoracle {

TokenId Vocab::intern(std::string_view surface) {
  std::string key(surface);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(surfaces_.size());
  ids_.emplace(key, id);
  surfaces_.push_back(std::move(key));
  return id;
}

TokenId Vocab::find(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  return it == ids_.end() ? static_cast<TokenId>(surfaces_.size()) : it->second;
}

TokenSeq Vocab::encode(const std::vector<std::string>& words) {
  TokenSeq out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(intern(w));
  return out;
}

std::vector<std::string> Vocab::decode(TokenView ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(surface(id));
  return out;
}

Vocab build_vocab(const std::vector<std::vector<std::string>>& corpus) {
  Vocab vocab;
  for (const auto& sentence : corpus)
    for (const auto& w : sentence) vocab.intern(w);
  return vocab;
}

TagParseError::TagParseError(const std::string& text)
    : std::invalid_argument("malformed tag: '" + text + "'"), text_(text) {}

Tag parse_tag(std::string_view text) {
  if (text == "O") return Tag::outside();
  if (text.size() < 3 || text[1] != '-') throw TagParseError(std::string(text));
  std::string type(text.substr(2));
  switch (text[0]) {
    case 'B':
      return Tag::begin(std::move(type));
    case 'I':
      return Tag::inside(std::move(type));
    default:
      throw TagParseError(std::string(text));
  }
}

std::string render_tag(const Tag& tag) {
  switch (tag.kind) {
    case TagKind::Begin:
      return "B-" + tag.type;
    case TagKind::Inside:
      return "I-" + tag.type;
    case TagKind::Outside:
      break;
  }
  return "O";
}

TagSeq parse_tags(const std::vector<std::string>& texts) {
  TagSeq tags;
  tags.reserve(texts.size());
  for (const auto& t : texts) tags.push_back(parse_tag(t));
  return tags;
}

std::vector<Span> extract_spans(std::span<const Tag> tags) {
  std::vector<Span> spans;
  bool open = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Tag& tag = tags[i];
    if (tag.kind == TagKind::Inside && open && spans.back().type == tag.type) {
      spans.back().end = i;
      continue;
    }
    open = !tag.is_outside();
    if (open) spans.push_back({i, i, tag.type});
  }
  return spans;
}

}  // namespace dynoracle
