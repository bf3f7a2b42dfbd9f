#include "s2v/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "s2v/errors.hpp"
#include "s2v/rng.hpp"

namespace s2v {

ModelDims TrainConfig::dims() const {
  ModelDims d;
  d.hidden = hidden;
  d.embedding = embedding;
  d.window = window;
  d.mean_pool = mean_pool;
  d.shared_decoder = shared_decoder;
  d.feed_embedding = feed_embedding;
  return d;
}

PreparedCorpus prepare_corpus(const SpokenCorpus& corpus, int fixed_frames,
                              std::uint64_t min_count) {
  if (fixed_frames < 1) throw InvalidConfig("fixed_frames must be >= 1");
  const auto vocab = corpus.vocabulary();
  PreparedCorpus prepared;
  for (const auto& [word, count] : vocab) {
    if (count >= min_count) prepared.retained_vocab.emplace(word, count);
  }
  prepared.sentences.reserve(corpus.sentences.size());
  prepared.labels.reserve(corpus.sentences.size());
  for (const auto& sentence : corpus.sentences) {
    std::vector<PaddedWord> padded;
    std::vector<std::string> labels;
    for (const auto& word : sentence) {
      if (!prepared.retained_vocab.contains(word.label)) continue;
      padded.push_back(pad_or_truncate(word.audio, fixed_frames));
      labels.push_back(word.label);
    }
    prepared.sentences.push_back(std::move(padded));
    prepared.labels.push_back(std::move(labels));
  }
  return prepared;
}

namespace {

struct AdamState {
  std::vector<Eigen::VectorXd> m;
  std::vector<Eigen::VectorXd> v;
  std::size_t t = 0;
};

void apply_update(std::vector<ArrayView>& params, std::vector<ArrayView>& grads,
                  const TrainConfig& config, AdamState& adam) {
  const double lr = config.learning_rate;
  if (config.optimizer == Optimizer::SGD) {
    for (std::size_t a = 0; a < params.size(); ++a) {
      for (std::ptrdiff_t i = 0; i < params[a].size; ++i) {
        params[a].data[i] -= lr * grads[a].data[i];
      }
    }
    return;
  }
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  ++adam.t;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.t));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.t));
  for (std::size_t a = 0; a < params.size(); ++a) {
    auto& m = adam.m[a];
    auto& v = adam.v[a];
    for (std::ptrdiff_t i = 0; i < params[a].size; ++i) {
      const double g = grads[a].data[i];
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      params[a].data[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
    }
  }
}

}  // namespace

TrainResult train(const TrainConfig& config, const SpokenCorpus& corpus,
                  const std::vector<WordPairBenchmark>& benchmarks, const TrainHooks& hooks) {
  if (config.window < 1) throw InvalidConfig("window must be >= 1");
  if (config.learning_rate < 0.0) throw InvalidConfig("learning_rate must be >= 0");
  if (config.batch_size < 1) throw InvalidConfig("batch_size must be >= 1");

  PreparedCorpus prepared = prepare_corpus(corpus, config.fixed_frames, config.min_count);
  if (prepared.retained_vocab.empty()) {
    throw InvalidConfig("no words remain after min-count filtering");
  }

  Rng master(config.seed);
  const std::uint64_t init_seed = master.next_u64();
  const std::uint64_t shuffle_seed = master.next_u64();

  TrainResult result;
  result.params = ModelParams::init(config.dims(), init_seed);
  if (hooks.on_checkpoint) hooks.on_checkpoint(0, result.params);

  ModelParams grads = ModelParams::zeros(config.dims());
  auto param_views = array_views(result.params);
  auto grad_views = array_views(grads);
  AdamState adam;
  if (config.optimizer == Optimizer::Adam) {
    adam.m.reserve(param_views.size());
    adam.v.reserve(param_views.size());
    for (const auto& view : param_views) {
      adam.m.emplace_back(Eigen::VectorXd::Zero(view.size));
      adam.v.emplace_back(Eigen::VectorXd::Zero(view.size));
    }
  }

  std::vector<std::size_t> order(prepared.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(shuffle_seed);

  const std::size_t n_sentences = prepared.sentences.size();
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    // Seeded Fisher-Yates shuffle of the sentence order.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = shuffle_rng.next_below(i);
      std::swap(order[i - 1], order[j]);
    }

    double loss_sum = 0.0;
    std::size_t cursor = 0;
    while (cursor < n_sentences) {
      const std::size_t batch_end = std::min(cursor + config.batch_size, n_sentences);
      std::vector<const std::vector<PaddedWord>*> batch;
      batch.reserve(batch_end - cursor);
      for (std::size_t i = cursor; i < batch_end; ++i) {
        batch.push_back(&prepared.sentences[order[i]]);
      }
      const double batch_loss = skipgram_grad(result.params, batch, config.window, grads);
      loss_sum += batch_loss * static_cast<double>(batch.size());
      apply_update(param_views, grad_views, config, adam);
      cursor = batch_end;
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.mean_loss = n_sentences ? loss_sum / static_cast<double>(n_sentences) : 0.0;
    if (!std::isfinite(metrics.mean_loss)) throw NumericalError("non-finite epoch loss");
    if (config.eval_every > 0 && !benchmarks.empty() && epoch % config.eval_every == 0) {
      const EmbeddingTable table = extract_word_embeddings(result.params, prepared);
      metrics.bench = evaluate_suite(table, benchmarks);
    }
    if (hooks.on_checkpoint) hooks.on_checkpoint(epoch, result.params);
    if (hooks.on_epoch) hooks.on_epoch(metrics);
    result.metrics.push_back(std::move(metrics));
  }
  return result;
}

EmbeddingTable extract_word_embeddings(const ModelParams& params,
                                       const PreparedCorpus& prepared) {
  std::vector<std::string> order;
  std::map<std::string, Eigen::VectorXd> sums;
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t s = 0; s < prepared.sentences.size(); ++s) {
    for (std::size_t w = 0; w < prepared.sentences[s].size(); ++w) {
      const std::string& label = prepared.labels[s][w];
      const Eigen::VectorXd z = encode(params, prepared.sentences[s][w]);
      auto [it, inserted] = sums.try_emplace(label, z);
      if (inserted) {
        order.push_back(label);
        counts[label] = 1;
      } else {
        it->second += z;
        ++counts[label];
      }
    }
  }
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  entries.reserve(order.size());
  for (const auto& label : order) {
    Eigen::VectorXd mean = sums[label] / static_cast<double>(counts[label]);
    entries.emplace_back(label, std::vector<double>(mean.data(), mean.data() + mean.size()));
  }
  return EmbeddingTable(static_cast<std::size_t>(params.dims.embedding), std::move(entries));
}

EmbeddingTable extract_word_embeddings(const ModelParams& params, const SpokenCorpus& corpus,
                                       int fixed_frames, std::uint64_t min_count) {
  return extract_word_embeddings(params, prepare_corpus(corpus, fixed_frames, min_count));
}

namespace {

constexpr char kMagic[8] = {'S', '2', 'V', 'C', 'K', 'P', 'T', '1'};

void write_u32(std::ostream& out, std::uint32_t value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t value = 0;
  in.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!in) throw Error("truncated checkpoint");
  return value;
}

}  // namespace

void save_checkpoint(const ModelParams& params, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, static_cast<std::uint32_t>(params.dims.hidden));
  write_u32(out, static_cast<std::uint32_t>(params.dims.embedding));
  write_u32(out, static_cast<std::uint32_t>(params.dims.window));
  std::uint32_t flags = 0;
  if (params.dims.mean_pool) flags |= 1u;
  if (params.dims.shared_decoder) flags |= 2u;
  if (params.dims.feed_embedding) flags |= 4u;
  write_u32(out, flags);
  for_each_array(params, [&out](const auto& array) {
    write_u32(out, static_cast<std::uint32_t>(array.rows()));
    write_u32(out, static_cast<std::uint32_t>(array.cols()));
    out.write(reinterpret_cast<const char*>(array.data()),
              static_cast<std::streamsize>(sizeof(double) * array.size()));
  });
  if (!out) throw Error("failed writing checkpoint");
}

ModelParams load_checkpoint(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("not a checkpoint file (bad magic)");
  }
  ModelDims dims;
  dims.hidden = static_cast<int>(read_u32(in));
  dims.embedding = static_cast<int>(read_u32(in));
  dims.window = static_cast<int>(read_u32(in));
  const std::uint32_t flags = read_u32(in);
  dims.mean_pool = (flags & 1u) != 0;
  dims.shared_decoder = (flags & 2u) != 0;
  dims.feed_embedding = (flags & 4u) != 0;
  ModelParams params = ModelParams::zeros(dims);
  for_each_array(params, [&in](auto& array) {
    const auto rows = read_u32(in);
    const auto cols = read_u32(in);
    if (rows != static_cast<std::uint32_t>(array.rows()) ||
        cols != static_cast<std::uint32_t>(array.cols())) {
      throw Error("checkpoint shape mismatch");
    }
    in.read(reinterpret_cast<char*>(array.data()),
            static_cast<std::streamsize>(sizeof(double) * array.size()));
    if (!in) throw Error("truncated checkpoint");
  });
  return params;
}

void save_checkpoint_file(const ModelParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open checkpoint file: " + path);
  save_checkpoint(params, out);
}

ModelParams load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint file: " + path);
  return load_checkpoint(in);
}

}  // namespace s2v
