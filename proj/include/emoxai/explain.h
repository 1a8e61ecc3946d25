#ifndef EMOXAI_EXPLAIN_H_
#define EMOXAI_EXPLAIN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emoxai/labels.h"

namespace emoxai {

class MultiLabelModel;

struct LimeConfig {
  std::size_t num_samples = 5000;
  std::size_t num_features = 10;
  // Unset: 0.75 * sqrt(number of distinct words).
  std::optional<double> kernel_width;
  double ridge = 1.0;
  std::uint64_t seed = 0;
};

// Decision score of some model for one label, given raw text.
using TextScorer = std::function<double(const std::string&)>;

struct InterpretableInstance {
  std::string text;
  std::vector<std::string> tokens;          // preprocessed tokens, in order
  std::vector<std::string> distinct_words;  // first-occurrence order
  double original_score = 0.0;
};

// Throws DataError when the text is empty after preprocessing.
InterpretableInstance make_instance(std::string_view text, const TextScorer& scorer);

// mask[j] == true keeps distinct word j. The first mask keeps everything;
// each other mask removes a count drawn uniformly from [1, words], then a
// uniform subset of that size.
using Mask = std::vector<bool>;
std::vector<Mask> sample_masks(std::size_t words, std::size_t num_samples, std::uint64_t seed);

// Drops every occurrence of each masked word.
std::string apply_mask(const InterpretableInstance& instance, const Mask& mask);

// Cosine distance to the all-ones mask; 1 for the empty mask.
double mask_distance(const Mask& mask);

struct RidgeFit {
  std::vector<double> coefficients;
  double intercept = 0.0;
  double r_squared = 0.0;   // weighted, clamped to [0, 1]; 1 for a constant target
  double residual = 0.0;    // max-norm residual of the normal equations
};

// Weighted ridge with an unpenalized intercept. design is row-major,
// samples x features. Requires alpha > 0.
RidgeFit weighted_ridge(const std::vector<std::vector<double>>& design, const std::vector<double>& target,
                        const std::vector<double>& weights, double alpha);

struct FeatureWeight {
  std::string word;
  double weight = 0.0;
};

struct Explanation {
  std::optional<Emotion> label;
  std::string text;
  double original_score = 0.0;
  // Ranked by |weight|, ties in first-occurrence order.
  std::vector<FeatureWeight> features;
  double intercept = 0.0;
  double local_fit_score = 0.0;
  std::size_t num_samples = 0;
  std::size_t distinct_words = 0;
  double kernel_width = 0.0;
  LimeConfig config;
};

Explanation explain_instance(const TextScorer& scorer, std::string_view text, const LimeConfig& config);
// Throws DataError on empty preprocessed text.
Explanation explain_instance(const MultiLabelModel& model, std::string_view text, Emotion label,
                             const LimeConfig& config);

nlohmann::json explanation_to_json(const Explanation& e);

}  // namespace emoxai

#endif  // EMOXAI_EXPLAIN_H_
