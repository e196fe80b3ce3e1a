#include "satd_radar/comments.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace satd {

std::string_view to_string(CommentKind kind) {
  switch (kind) {
  case CommentKind::Line:
    return "line";
  case CommentKind::Block:
    return "block";
  case CommentKind::Doc:
    return "doc";
  }
  return "line";
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front()))
    s.remove_prefix(1);
  while (!s.empty() && is_space(s.back()))
    s.remove_suffix(1);
  return s;
}

// Body lines of a block comment, with leading '*' decoration removed.
std::string strip_block_body(const std::vector<std::string> &body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    std::string_view l = body[i];
    if (i > 0) {
      while (!l.empty() && is_space(l.front()))
        l.remove_prefix(1);
      while (!l.empty() && l.front() == '*')
        l.remove_prefix(1);
    }
    if (i)
      out.push_back('\n');
    out.append(trim(l));
  }
  return std::string(trim(out));
}

bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool iequals_at(std::string_view text, std::size_t pos, std::string_view word) {
  if (pos + word.size() > text.size())
    return false;
  for (std::size_t i = 0; i < word.size(); ++i)
    if (lower(text[pos + i]) != lower(word[i]))
      return false;
  return true;
}

// Length of the tag token starting at pos (0 if none) and its index.
std::pair<std::size_t, std::size_t> tag_at(std::string_view text, std::size_t pos) {
  if (pos > 0 && word_char(static_cast<unsigned char>(text[pos - 1])))
    return {0, 0};
  for (std::size_t t = 0; t < std::size(kTaskTags); ++t) {
    auto tag = kTaskTags[t];
    if (!iequals_at(text, pos, tag))
      continue;
    std::size_t end = pos + tag.size();
    if (end < text.size() && word_char(static_cast<unsigned char>(text[end])))
      continue;
    return {tag.size(), t};
  }
  return {0, 0};
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

} // namespace

std::vector<RawComment> extract_comments(const std::vector<std::string> &lines) {
  enum class State { Code, Block, TextBlock };
  std::vector<RawComment> out;
  State state = State::Code;
  RawComment pending;
  std::vector<std::string> block_body;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string &line = lines[ln];
    std::size_t i = 0;
    while (i <= line.size()) {
      if (state == State::Block) {
        auto close = line.find("*/", i);
        if (close == std::string::npos) {
          block_body.push_back(line.substr(i));
          break;
        }
        block_body.push_back(line.substr(i, close - i));
        pending.end_line = ln + 1;
        pending.text = strip_block_body(block_body);
        if (!pending.text.empty())
          out.push_back(pending);
        block_body.clear();
        state = State::Code;
        i = close + 2;
        continue;
      }
      if (state == State::TextBlock) {
        auto close = line.find("\"\"\"", i);
        // Escaped quotes inside text blocks.
        while (close != std::string::npos && close > 0 && line[close - 1] == '\\') {
          std::size_t bs = 0;
          for (std::size_t k = close; k > 0 && line[k - 1] == '\\'; --k)
            ++bs;
          if (bs % 2 == 0)
            break;
          close = line.find("\"\"\"", close + 1);
        }
        if (close == std::string::npos)
          break;
        state = State::Code;
        i = close + 3;
        continue;
      }
      if (i >= line.size())
        break;

      char c = line[i];
      char next = i + 1 < line.size() ? line[i + 1] : '\0';
      if (c == '/' && next == '/') {
        RawComment rc;
        rc.kind = CommentKind::Line;
        rc.start_line = rc.end_line = ln + 1;
        rc.text = std::string(trim(std::string_view(line).substr(i + 2)));
        if (!rc.text.empty())
          out.push_back(std::move(rc));
        break;
      }
      if (c == '/' && next == '*') {
        bool doc = i + 2 < line.size() && line[i + 2] == '*' &&
                   !(i + 3 < line.size() && line[i + 3] == '/');
        pending = RawComment{};
        pending.kind = doc ? CommentKind::Doc : CommentKind::Block;
        pending.start_line = ln + 1;
        block_body.clear();
        state = State::Block;
        i += doc ? 3 : 2;
        continue;
      }
      if (c == '"') {
        if (line.compare(i, 3, "\"\"\"") == 0) {
          state = State::TextBlock;
          i += 3;
          continue;
        }
        ++i;
        while (i < line.size() && line[i] != '"') {
          if (line[i] == '\\')
            ++i;
          ++i;
        }
        ++i;
        continue;
      }
      if (c == '\'') {
        ++i;
        while (i < line.size() && line[i] != '\'') {
          if (line[i] == '\\')
            ++i;
          ++i;
        }
        ++i;
        continue;
      }
      ++i;
    }
  }

  if (state == State::Block) {
    pending.end_line = lines.empty() ? 1 : lines.size();
    pending.unterminated = true;
    pending.text = strip_block_body(block_body);
    if (!pending.text.empty())
      out.push_back(pending);
  }
  return out;
}

std::string to_valid_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    bool ok = len > 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k)
      ok = (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80;
    if (ok && len > 1) {
      // Reject overlong forms, surrogates and code points past U+10FFFF.
      unsigned cp = c & (0xFF >> (len + 1));
      for (std::size_t k = 1; k < len; ++k)
        cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
      static constexpr unsigned kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      ok = cp >= kMin[len] && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    }
    if (!ok) {
      out += "\xEF\xBF\xBD";
      ++i;
      continue;
    }
    out.append(text.substr(i, len));
    i += len;
  }
  return out;
}

SatdMatch is_satd(std::string_view text) {
  SatdMatch m;
  bool seen[std::size(kTaskTags)] = {};
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto [len, idx] = tag_at(text, i);
    if (len) {
      seen[idx] = true;
      i += len - 1;
    }
  }
  for (std::size_t t = 0; t < std::size(kTaskTags); ++t)
    if (seen[t])
      m.tags.emplace_back(kTaskTags[t]);
  m.is_satd = !m.tags.empty();
  return m;
}

CleanSatdText clean(std::string_view text) {
  CleanSatdText out;
  out.raw = std::string(text);
  out.tags_found = is_satd(text).tags;

  std::string stripped;
  stripped.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    auto [len, idx] = tag_at(text, i);
    if (len) {
      i += len;
      if (i < text.size() && text[i] == ':')
        ++i;
      stripped.push_back(' ');
      continue;
    }
    stripped.push_back(text[i]);
    ++i;
  }

  bool in_space = false;
  for (char c : trim(stripped)) {
    if (is_space(c)) {
      in_space = true;
      continue;
    }
    if (in_space)
      out.clean.push_back(' ');
    in_space = false;
    out.clean.push_back(c);
  }
  return out;
}

bool filter_auto_generated(std::string_view clean_text, const AutoGeneratedPatterns &patterns) {
  std::string lowered = to_lower(trim(clean_text));
  for (const auto &p : patterns.phrases)
    if (lowered.find(to_lower(p)) != std::string::npos)
      return false;
  for (const auto &p : patterns.prefixes)
    if (lowered.starts_with(to_lower(p)))
      return false;
  return true;
}

bool filter_trivial(std::string_view clean_text) {
  std::size_t tokens = 0;
  bool any_letter = false;
  bool in_token = false;
  for (char ch : clean_text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_space(ch)) {
      in_token = false;
      continue;
    }
    if (!in_token)
      ++tokens;
    in_token = true;
    if (std::isalpha(c) || c >= 0x80)
      any_letter = true;
  }
  return tokens > 1 && any_letter;
}

std::string_view to_string(FilterOutcome outcome) {
  switch (outcome) {
  case FilterOutcome::Kept:
    return "kept";
  case FilterOutcome::AutoGenerated:
    return "auto_generated";
  case FilterOutcome::Trivial:
    return "trivial";
  }
  return "kept";
}

FilterOutcome filter_outcome_from_string(std::string_view name) {
  if (name == "kept")
    return FilterOutcome::Kept;
  if (name == "auto_generated")
    return FilterOutcome::AutoGenerated;
  if (name == "trivial")
    return FilterOutcome::Trivial;
  throw std::invalid_argument("unknown filter outcome: " + std::string(name));
}

FilterOutcome apply_filters(std::string_view clean_text, const AutoGeneratedPatterns &patterns) {
  if (!filter_auto_generated(clean_text, patterns))
    return FilterOutcome::AutoGenerated;
  if (!filter_trivial(clean_text))
    return FilterOutcome::Trivial;
  return FilterOutcome::Kept;
}

} // namespace satd
