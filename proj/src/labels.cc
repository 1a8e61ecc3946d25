#include "emoxai/labels.h"

namespace emoxai {

std::optional<Emotion> parse_emotion(std::string_view name) {
  for (Emotion e : kEmotions) {
    if (emotion_name(e) == name) return e;
  }
  return std::nullopt;
}

}  // namespace emoxai
