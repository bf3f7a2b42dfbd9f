#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "s2v/corpus.hpp"

namespace s2v {

/// Single LSTM cell. Gate order in the stacked weight rows is
/// input, forget, candidate, output.
struct LstmCell {
  Eigen::MatrixXd w_ih;  // 4h x in
  Eigen::MatrixXd w_hh;  // 4h x h
  Eigen::VectorXd b;     // 4h

  int hidden() const { return static_cast<int>(w_hh.cols()); }
  int input() const { return static_cast<int>(w_ih.cols()); }
};

/// One context-offset decoder: a unidirectional LSTM whose initial state is
/// mapped from the word embedding, with bilinear attention over the encoder
/// outputs and an affine frame emitter.
struct DecoderParams {
  Eigen::MatrixXd w_h0;  // h x emb
  Eigen::VectorXd b_h0;  // h
  Eigen::MatrixXd w_c0;  // h x emb
  Eigen::VectorXd b_c0;  // h
  LstmCell cell;         // input 13, or 13+emb when the embedding is fed per step
  Eigen::MatrixXd w_att; // h x 2h, score = dec_h' * w_att * enc_out
  Eigen::MatrixXd w_out; // 13 x 3h, emits a frame from [dec_h; context]
  Eigen::VectorXd b_out; // 13
};

struct ModelDims {
  int hidden = 50;
  int embedding = 50;
  int window = 3;
  bool mean_pool = false;       // embed from mean-pooled encoder outputs
                                // instead of the final fwd/bwd states
  bool shared_decoder = false;  // one decoder shared across all offsets
  bool feed_embedding = false;  // append the embedding to every decoder input
};

/// All weights of the skip-gram encoder-decoder. The encoder is a
/// bidirectional LSTM over 13-dim frames; the embedding is an affine
/// projection of the concatenated final forward/backward hidden states
/// (or of the mean-pooled encoder outputs); one decoder per context offset
/// reconstructs that neighbor's frames.
struct ModelParams {
  ModelDims dims;
  LstmCell enc_fwd;         // input 13
  LstmCell enc_bwd;         // input 13
  Eigen::MatrixXd w_proj;   // emb x 2h
  Eigen::VectorXd b_proj;   // emb
  std::vector<DecoderParams> decoders;  // size 1 when shared, else 2*window

  // Uniform(-0.08, 0.08) initialization, seeded.
  static ModelParams init(const ModelDims& dims, std::uint64_t seed);

  // Zero-valued parameters with the given shapes (gradient accumulators).
  static ModelParams zeros(const ModelDims& dims);

  const DecoderParams& decoder_for(int offset) const;
  DecoderParams& decoder_for(int offset);

  std::size_t n_parameters() const;
};

/// Fixed-order visitation of every parameter array. The order defines the
/// flattened parameter layout used by the optimizer, the checkpoint format,
/// and the finite-difference harness.
template <typename Params, typename Fn>
void for_each_array(Params& p, Fn&& fn) {
  fn(p.enc_fwd.w_ih);
  fn(p.enc_fwd.w_hh);
  fn(p.enc_fwd.b);
  fn(p.enc_bwd.w_ih);
  fn(p.enc_bwd.w_hh);
  fn(p.enc_bwd.b);
  fn(p.w_proj);
  fn(p.b_proj);
  for (auto& dec : p.decoders) {
    fn(dec.w_h0);
    fn(dec.b_h0);
    fn(dec.w_c0);
    fn(dec.b_c0);
    fn(dec.cell.w_ih);
    fn(dec.cell.w_hh);
    fn(dec.cell.b);
    fn(dec.w_att);
    fn(dec.w_out);
    fn(dec.b_out);
  }
}

struct ArrayView {
  double* data;
  std::ptrdiff_t size;
};

std::vector<ArrayView> array_views(ModelParams& p);
std::vector<double> flatten(const ModelParams& p);

/// Encodes one padded spoken word into an embedding vector. Only frames
/// 1..valid_length enter the recurrences; padding rows never do, so any
/// change confined to padding leaves the output bit-identical.
Eigen::VectorXd encode(const ModelParams& params, const PaddedWord& word);

/// Skip-gram reconstruction loss of one sentence: each position is encoded
/// and every in-window neighbor is decoded from it with teacher forcing.
/// Per-target loss is the mean squared error over that target's valid
/// frames only; the total is the mean over all (position, offset) targets.
/// Throws EmptyInput for an empty sentence.
double skipgram_loss(const ModelParams& params, const std::vector<PaddedWord>& sentence,
                     int window, std::size_t* n_targets = nullptr);

/// Mean skipgram_loss over the batch and its exact reverse-mode gradient.
/// Accumulation runs in a fixed order, so results are reproducible.
/// `grads` must have the same shapes as `params` (it is zeroed first).
/// Throws NumericalError when the loss is not finite.
double skipgram_grad(const ModelParams& params,
                     const std::vector<const std::vector<PaddedWord>*>& batch, int window,
                     ModelParams& grads);

/// Central-difference gradient of the single-sentence loss, one entry per
/// parameter in flattened order.
std::vector<double> numeric_gradient(const ModelParams& params,
                                     const std::vector<PaddedWord>& sentence, int window,
                                     double epsilon);

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, 1e-8)
double max_relative_error(const std::vector<double>& a, const std::vector<double>& b);

/// Analytic-vs-central-difference comparison over every parameter; returns
/// the maximum relative error.
double grad_check(const ModelParams& params, const std::vector<PaddedWord>& sentence,
                  int window, double epsilon);

}  // namespace s2v
