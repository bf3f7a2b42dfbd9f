#include "s2v/synthetic.hpp"

#include <algorithm>

#include "s2v/errors.hpp"
#include "s2v/rng.hpp"

namespace s2v {

SyntheticCorpus make_synthetic_corpus(const SyntheticConfig& config) {
  if (config.vocab_size < 4) throw InvalidConfig("vocab_size must be >= 4");
  if (config.homophone_fraction < 0.0 || config.homophone_fraction > 0.5) {
    throw InvalidConfig("homophone_fraction must be in [0, 0.5]");
  }
  if (config.sentence_len < 1) throw InvalidConfig("sentence_len must be >= 1");
  if (config.noise_std < 0.0) throw InvalidConfig("noise_std must be >= 0");
  if (config.min_frames < 1 || config.max_frames < config.min_frames) {
    throw InvalidConfig("need 1 <= min_frames <= max_frames");
  }
  if (config.in_topic_prob < 0.0 || config.in_topic_prob > 1.0) {
    throw InvalidConfig("in_topic_prob must be in [0, 1]");
  }

  const std::size_t vocab = config.vocab_size;
  const auto n_pairs =
      static_cast<std::size_t>(static_cast<double>(vocab) * config.homophone_fraction);
  const std::size_t n_topics = std::max<std::size_t>(2, std::min(config.n_topics, vocab));

  SyntheticCorpus out;
  Rng rng(config.seed);

  // Labels: homophone pairs first (two labels per shared base), then singles.
  // Pair members get adjacent indices, which puts them in different topics
  // under the index % n_topics assignment below.
  std::vector<std::string> labels;
  labels.reserve(vocab);
  std::vector<std::size_t> base_of;  // word index -> base sequence index
  base_of.reserve(vocab);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    labels.push_back("hom" + std::to_string(k) + "a");
    base_of.push_back(k);
    labels.push_back("hom" + std::to_string(k) + "b");
    base_of.push_back(k);
  }
  for (std::size_t i = labels.size(); i < vocab; ++i) {
    labels.push_back("w" + std::to_string(i));
    base_of.push_back(n_pairs + (i - 2 * n_pairs));
  }
  const std::size_t n_bases = n_pairs + (vocab - 2 * n_pairs);

  // One deterministic base sequence per base index.
  std::vector<MfccSequence> bases;
  bases.reserve(n_bases);
  const auto frame_span =
      static_cast<std::uint64_t>(config.max_frames - config.min_frames + 1);
  for (std::size_t b = 0; b < n_bases; ++b) {
    const int t = config.min_frames + static_cast<int>(rng.next_below(frame_span));
    MfccSequence seq(t, kMfccDim);
    for (int r = 0; r < t; ++r) {
      for (int c = 0; c < kMfccDim; ++c) seq(r, c) = rng.next_normal();
    }
    bases.push_back(std::move(seq));
  }

  // Topic membership and the exact unigram distribution it induces.
  std::vector<std::vector<std::size_t>> topic_words(n_topics);
  for (std::size_t i = 0; i < vocab; ++i) topic_words[i % n_topics].push_back(i);
  out.target_unigram.assign(vocab, 0.0);
  for (std::size_t i = 0; i < vocab; ++i) {
    const auto& topic = topic_words[i % n_topics];
    out.target_unigram[i] =
        (1.0 - config.in_topic_prob) / static_cast<double>(vocab) +
        config.in_topic_prob / (static_cast<double>(n_topics) * static_cast<double>(topic.size()));
  }

  out.corpus.sentences.reserve(config.sentences);
  for (std::size_t s = 0; s < config.sentences; ++s) {
    const std::size_t topic = rng.next_below(n_topics);
    Sentence sentence;
    sentence.reserve(config.sentence_len);
    for (std::size_t p = 0; p < config.sentence_len; ++p) {
      std::size_t word_idx;
      if (rng.next_double() < config.in_topic_prob) {
        const auto& members = topic_words[topic];
        word_idx = members[rng.next_below(members.size())];
      } else {
        word_idx = rng.next_below(vocab);
      }
      SpokenWord word;
      word.label = labels[word_idx];
      word.audio = bases[base_of[word_idx]];
      if (config.noise_std > 0.0) {
        for (Eigen::Index r = 0; r < word.audio.rows(); ++r) {
          for (int c = 0; c < kMfccDim; ++c) {
            word.audio(r, c) += config.noise_std * rng.next_normal();
          }
        }
      }
      sentence.push_back(std::move(word));
    }
    out.corpus.sentences.push_back(std::move(sentence));
  }

  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(n_pairs);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    pairs.emplace_back(labels[2 * k], labels[2 * k + 1]);
  }
  out.homophones = HomophonePairSet::from_pairs(std::move(pairs));
  out.word_list = std::move(labels);
  return out;
}

SyntheticCorpus make_synthetic_corpus(std::size_t vocab_size, double homophone_fraction,
                                      std::size_t sentences, std::size_t sentence_len,
                                      double noise_std, std::uint64_t seed) {
  SyntheticConfig config;
  config.vocab_size = vocab_size;
  config.homophone_fraction = homophone_fraction;
  config.sentences = sentences;
  config.sentence_len = sentence_len;
  config.noise_std = noise_std;
  config.seed = seed;
  return make_synthetic_corpus(config);
}

}  // namespace s2v
