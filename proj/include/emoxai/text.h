#ifndef EMOXAI_TEXT_H_
#define EMOXAI_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace emoxai {

// Normalizes a raw comment: drops every Unicode punctuation codepoint
// (general category P*, which covers the Bangla danda and double danda) and
// every emoji codepoint, collapses whitespace runs to one ASCII space and
// trims both ends. Idempotent. Invalid UTF-8 bytes become U+FFFD.
std::string preprocess(std::string_view text);

// Splits raw text into sentence segments on danda, double danda, '.', '!'
// and '?'. Segments that preprocess to nothing are discarded.
std::vector<std::string> split_sentences(std::string_view raw_text);

}  // namespace emoxai

#endif  // EMOXAI_TEXT_H_
