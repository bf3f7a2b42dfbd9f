#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "s2v/corpus.hpp"
#include "s2v/embedding_table.hpp"
#include "s2v/model.hpp"
#include "s2v/simbench.hpp"

namespace s2v {

enum class Optimizer { SGD, Adam };

struct TrainConfig {
  int window = 3;
  int fixed_frames = 20;
  std::size_t batch_size = 4096;   // desk runs use 64
  std::size_t epochs = 500;        // desk runs use 50
  Optimizer optimizer = Optimizer::SGD;
  double learning_rate = 0.001;    // 0 is accepted so tests can assert no-ops
  std::uint64_t min_count = 4;     // drop words occurring fewer than this many times
  std::uint64_t seed = 0;
  int hidden = 50;
  int embedding = 50;
  bool mean_pool = false;
  bool shared_decoder = false;
  bool feed_embedding = false;
  std::size_t eval_every = 0;      // run the benchmark suite every N epochs; 0 = never

  ModelDims dims() const;
};

/// Corpus after min-count filtering and fixed-length padding. Words below
/// the threshold are removed from their sentences (the remaining words
/// close ranks); sentences may become empty and then contribute nothing.
struct PreparedCorpus {
  std::vector<std::vector<PaddedWord>> sentences;
  std::vector<std::vector<std::string>> labels;  // aligned with sentences
  std::map<std::string, std::uint64_t> retained_vocab;
};

PreparedCorpus prepare_corpus(const SpokenCorpus& corpus, int fixed_frames,
                              std::uint64_t min_count);

struct EpochMetrics {
  std::size_t epoch = 0;   // 1-based; epoch 0 is the initial state
  double mean_loss = 0.0;  // mean sentence loss over the epoch
  std::vector<BenchmarkResult> bench;  // present on eval epochs
};

struct TrainHooks {
  // Called with the initial parameters (epoch 0) and after every epoch.
  std::function<void(std::size_t epoch, const ModelParams&)> on_checkpoint;
  // Called after every epoch with that epoch's metrics.
  std::function<void(const EpochMetrics&)> on_epoch;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochMetrics> metrics;
};

/// Trains the skip-gram encoder-decoder: seeded init, seeded per-epoch
/// sentence shuffle, SGD or Adam (beta1 0.9, beta2 0.999, eps 1e-8) per
/// batch. Identical config + seed + corpus reproduce bit-identical
/// parameters on the same platform. Throws NumericalError on a non-finite
/// loss; checkpoints already handed to the hook stay valid.
TrainResult train(const TrainConfig& config, const SpokenCorpus& corpus,
                  const std::vector<WordPairBenchmark>& benchmarks = {},
                  const TrainHooks& hooks = {});

/// Encodes every occurrence of every retained word in corpus order and
/// averages per word; table entry order is first-occurrence order.
EmbeddingTable extract_word_embeddings(const ModelParams& params, const SpokenCorpus& corpus,
                                       int fixed_frames, std::uint64_t min_count);
EmbeddingTable extract_word_embeddings(const ModelParams& params,
                                       const PreparedCorpus& prepared);

/// Versioned binary checkpoint: dims header plus every parameter array with
/// its shape, raw little-endian doubles. Round-trips bit-exactly.
void save_checkpoint(const ModelParams& params, std::ostream& out);
ModelParams load_checkpoint(std::istream& in);
void save_checkpoint_file(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint_file(const std::string& path);

}  // namespace s2v
