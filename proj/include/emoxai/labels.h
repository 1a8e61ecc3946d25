#ifndef EMOXAI_LABELS_H_
#define EMOXAI_LABELS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace emoxai {

inline constexpr std::size_t kNumEmotions = 6;

// Canonical order. Every serialization and aggregation uses it.
enum class Emotion : std::size_t {
  kLove = 0,
  kJoy = 1,
  kSurprise = 2,
  kAnger = 3,
  kSadness = 4,
  kFear = 5,
};

inline constexpr std::array<Emotion, kNumEmotions> kEmotions = {
    Emotion::kLove,  Emotion::kJoy,     Emotion::kSurprise,
    Emotion::kAnger, Emotion::kSadness, Emotion::kFear};

inline constexpr std::array<std::string_view, kNumEmotions> kEmotionNames = {
    "love", "joy", "surprise", "anger", "sadness", "fear"};

constexpr std::size_t index_of(Emotion e) { return static_cast<std::size_t>(e); }

constexpr std::string_view emotion_name(Emotion e) {
  return kEmotionNames[index_of(e)];
}

// Case-sensitive lookup of a lowercase emotion name.
std::optional<Emotion> parse_emotion(std::string_view name);

struct LabelVector {
  std::array<bool, kNumEmotions> values{};

  bool operator[](Emotion e) const { return values[index_of(e)]; }
  bool& operator[](Emotion e) { return values[index_of(e)]; }

  std::size_t count() const {
    std::size_t n = 0;
    for (bool v : values) n += v ? 1 : 0;
    return n;
  }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;
};

}  // namespace emoxai

#endif  // EMOXAI_LABELS_H_
