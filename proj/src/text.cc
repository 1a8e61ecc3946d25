#include "emoxai/text.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace emoxai {
namespace {

bool is_punctuation(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_P_MASK) != 0; }

// Codepoints that only occur inside emoji sequences.
bool is_emoji_part(UChar32 c) {
  return u_hasBinaryProperty(c, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(c, UCHAR_EMOJI_MODIFIER) ||
         u_hasBinaryProperty(c, UCHAR_REGIONAL_INDICATOR) || c == 0xFE0F || c == 0x20E3 ||
         (c >= 0xE0020 && c <= 0xE007F);
}

constexpr UChar32 kZeroWidthJoiner = 0x200D;

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, c);
  out.append(buf, static_cast<std::size_t>(len));
}

template <class Fn>
void for_each_codepoint(std::string_view text, Fn&& fn) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    fn(c);
  }
}

}  // namespace

std::string preprocess(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  bool in_emoji = false;
  for_each_codepoint(text, [&](UChar32 c) {
    if (is_emoji_part(c) || (c == kZeroWidthJoiner && in_emoji)) {
      in_emoji = true;
      return;
    }
    in_emoji = false;
    if (is_punctuation(c)) return;
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      return;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, c);
  });
  return out;
}

std::vector<std::string> split_sentences(std::string_view raw_text) {
  std::vector<std::string> sentences;
  std::string current;
  auto flush = [&] {
    std::string cleaned = preprocess(current);
    if (!cleaned.empty()) sentences.push_back(std::move(cleaned));
    current.clear();
  };
  for_each_codepoint(raw_text, [&](UChar32 c) {
    if (c == 0x0964 || c == 0x0965 || c == '.' || c == '!' || c == '?') {
      flush();
    } else {
      append_utf8(current, c);
    }
  });
  flush();
  return sentences;
}

}  // namespace emoxai
