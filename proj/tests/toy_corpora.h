#ifndef EMOXAI_TESTS_TOY_CORPORA_H_
#define EMOXAI_TESTS_TOY_CORPORA_H_

#include <string>
#include <vector>

#include "emoxai/corpus.h"

namespace testing_corpora {

// One keyword per emotion, in canonical order.
inline const std::vector<std::string> kKeywords = {"ভালোবাসা", "আনন্দ", "অবাক", "রাগ", "দুঃখ", "ভয়"};

// Twelve records, two per emotion; only the keyword carries the label.
inline std::vector<emoxai::RawRecord> keyword_records() {
  const std::vector<std::string> fillers = {"আজ খুব", "এই ভিডিও দেখে"};
  std::vector<emoxai::RawRecord> out;
  for (std::size_t l = 0; l < kKeywords.size(); ++l) {
    for (std::size_t j = 0; j < fillers.size(); ++j) {
      emoxai::RawRecord r;
      r.id = "k" + std::to_string(l) + "_" + std::to_string(j);
      r.text = fillers[j] + " " + kKeywords[l] + "।";
      r.labels.values[l] = true;
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace testing_corpora

#endif  // EMOXAI_TESTS_TOY_CORPORA_H_
