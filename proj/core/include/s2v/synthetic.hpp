#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "s2v/corpus.hpp"
#include "s2v/homophone.hpp"

namespace s2v {

/// Desk-scale stand-in for an aligned spoken corpus. Every word type gets a
/// deterministic base MFCC sequence; homophone pairs are two labels sharing
/// one base sequence; each occurrence adds seeded Gaussian frame noise.
/// Sentences follow a topic mixture so words grouped by topic share
/// contexts, while homophone partners always land in different topics.
struct SyntheticConfig {
  std::size_t vocab_size = 100;      // >= 4
  double homophone_fraction = 0.1;   // in [0, 0.5]; pair count = floor(vocab * fraction)
  std::size_t sentences = 5000;
  std::size_t sentence_len = 8;
  double noise_std = 0.1;
  std::uint64_t seed = 0;
  int min_frames = 4;                // base sequence length range
  int max_frames = 20;
  std::size_t n_topics = 5;
  double in_topic_prob = 0.8;
};

struct SyntheticCorpus {
  SpokenCorpus corpus;
  HomophonePairSet homophones;
  std::vector<std::string> word_list;    // index order used by the generator
  std::vector<double> target_unigram;    // exact sampling distribution per word
};

SyntheticCorpus make_synthetic_corpus(const SyntheticConfig& config);

/// Convenience overload mirroring the config knobs that experiments vary.
SyntheticCorpus make_synthetic_corpus(std::size_t vocab_size, double homophone_fraction,
                                      std::size_t sentences, std::size_t sentence_len,
                                      double noise_std, std::uint64_t seed);

}  // namespace s2v
