#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace satd {

enum class CommentKind { Line, Block, Doc };

std::string_view to_string(CommentKind kind);

struct RawComment {
  std::string text; // markers stripped, trimmed
  CommentKind kind = CommentKind::Line;
  std::size_t start_line = 1;
  std::size_t end_line = 1;
  bool unterminated = false; // block comment ran to end of input

  bool operator==(const RawComment &) const = default;
};

// Java comment scanner. Understands string, char and text-block literals so
// comment markers inside them are ignored. Comments whose text is empty once
// markers are stripped are dropped.
std::vector<RawComment> extract_comments(const std::vector<std::string> &lines);

// Replaces each byte that is not part of a well-formed UTF-8 sequence with
// U+FFFD, so comment text can be written to JSON and read back unchanged.
std::string to_valid_utf8(std::string_view text);

// Canonical tag names, in this order.
inline constexpr std::string_view kTaskTags[] = {"TODO", "FIXME", "XXX"};

struct SatdMatch {
  bool is_satd = false;
  std::vector<std::string> tags; // subset of kTaskTags, canonical order
};

// Whole-token, case-insensitive search for TODO / FIXME / XXX.
SatdMatch is_satd(std::string_view text);

struct CleanSatdText {
  std::string raw;
  std::string clean;
  std::vector<std::string> tags_found;

  bool operator==(const CleanSatdText &) const = default;
};

// Drops every tag token (plus a colon directly after it) and collapses
// whitespace to single spaces.
CleanSatdText clean(std::string_view text);

// Auto-generated comment patterns (IDE templates). Matching is
// case-insensitive; a text is auto-generated if it contains any phrase or
// starts with any prefix.
struct AutoGeneratedPatterns {
  std::vector<std::string> phrases{"auto-generated method stub", "auto-generated catch block",
                                   "auto-generated constructor stub"};
  std::vector<std::string> prefixes{"auto-generated", "autogenerated", "auto generated"};
};

// true = keep
bool filter_auto_generated(std::string_view clean_text,
                           const AutoGeneratedPatterns &patterns = {});
// Drops single-token texts and texts without any letter.
bool filter_trivial(std::string_view clean_text);

enum class FilterOutcome { Kept, AutoGenerated, Trivial };

std::string_view to_string(FilterOutcome outcome);
FilterOutcome filter_outcome_from_string(std::string_view name);

// Auto-generated filter first, then the trivial filter.
FilterOutcome apply_filters(std::string_view clean_text,
                            const AutoGeneratedPatterns &patterns = {});

} // namespace satd
