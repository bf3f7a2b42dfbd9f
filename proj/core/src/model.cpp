#include "s2v/model.hpp"

#include <cmath>

#include "s2v/errors.hpp"
#include "s2v/rng.hpp"

namespace s2v {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

// Activations of one LSTM step, kept for the backward pass.
struct StepTrace {
  Eigen::VectorXd x;   // input
  Eigen::VectorXd i, f, g, o;
  Eigen::VectorXd c;   // cell state
  Eigen::VectorXd tc;  // tanh(c)
  Eigen::VectorXd h;   // hidden state
};

StepTrace lstm_step(const LstmCell& cell, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev) {
  const int h = cell.hidden();
  StepTrace tr;
  tr.x = x;
  Eigen::VectorXd a = cell.w_ih * x + cell.w_hh * h_prev + cell.b;
  tr.i = sigmoid(a.segment(0, h));
  tr.f = sigmoid(a.segment(h, h));
  tr.g = a.segment(2 * h, h).array().tanh().matrix();
  tr.o = sigmoid(a.segment(3 * h, h));
  tr.c = (tr.f.array() * c_prev.array() + tr.i.array() * tr.g.array()).matrix();
  tr.tc = tr.c.array().tanh().matrix();
  tr.h = (tr.o.array() * tr.tc.array()).matrix();
  return tr;
}

// Reverse-mode step. dh/dc are the gradients flowing into this step's h and
// c outputs (recurrent carries already added by the caller). Returns the
// gradients for the step input and the previous state; accumulates weight
// gradients into `grad`.
struct StepBack {
  Eigen::VectorXd dx, dh_prev, dc_prev;
};

StepBack lstm_back(const LstmCell& cell, const StepTrace& tr, const Eigen::VectorXd& h_prev,
                   const Eigen::VectorXd& c_prev, const Eigen::VectorXd& dh,
                   const Eigen::VectorXd& dc, LstmCell& grad) {
  const int h = cell.hidden();
  const Eigen::ArrayXd do_ = dh.array() * tr.tc.array();
  const Eigen::ArrayXd dct = dc.array() + dh.array() * tr.o.array() * (1.0 - tr.tc.array().square());
  const Eigen::ArrayXd di = dct * tr.g.array();
  const Eigen::ArrayXd dg = dct * tr.i.array();
  const Eigen::ArrayXd df = dct * c_prev.array();

  Eigen::VectorXd da(4 * h);
  da.segment(0, h) = (di * tr.i.array() * (1.0 - tr.i.array())).matrix();
  da.segment(h, h) = (df * tr.f.array() * (1.0 - tr.f.array())).matrix();
  da.segment(2 * h, h) = (dg * (1.0 - tr.g.array().square())).matrix();
  da.segment(3 * h, h) = (do_ * tr.o.array() * (1.0 - tr.o.array())).matrix();

  grad.w_ih.noalias() += da * tr.x.transpose();
  grad.w_hh.noalias() += da * h_prev.transpose();
  grad.b += da;

  StepBack back;
  back.dx.noalias() = cell.w_ih.transpose() * da;
  back.dh_prev.noalias() = cell.w_hh.transpose() * da;
  back.dc_prev = (dct * tr.f.array()).matrix();
  return back;
}

struct EncoderTrace {
  std::vector<StepTrace> fwd;  // fwd[t]: state after frame t (forward time)
  std::vector<StepTrace> bwd;  // bwd[t]: state after frame t (backward time)
  Eigen::MatrixXd enc_out;     // 2h x Tv, col t = [fwd[t].h; bwd[t].h]
  Eigen::VectorXd feat;        // 2h feature the embedding projects from
  Eigen::VectorXd z;           // embedding
};

EncoderTrace encode_with_trace(const ModelParams& p, const PaddedWord& word) {
  const int h = p.dims.hidden;
  if (word.frames.cols() != kMfccDim) throw ShapeError("padded word must have 13 columns");
  const int tv = word.valid_length;
  if (tv < 1 || tv > word.frames.rows()) throw ShapeError("valid_length out of range");

  EncoderTrace tr;
  tr.fwd.reserve(tv);
  tr.bwd.resize(tv);
  const Eigen::VectorXd zero_h = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd h_prev = zero_h, c_prev = zero_h;
  for (int t = 0; t < tv; ++t) {
    tr.fwd.push_back(lstm_step(p.enc_fwd, word.frames.row(t).transpose(), h_prev, c_prev));
    h_prev = tr.fwd.back().h;
    c_prev = tr.fwd.back().c;
  }
  h_prev = zero_h;
  c_prev = zero_h;
  for (int t = tv - 1; t >= 0; --t) {
    tr.bwd[t] = lstm_step(p.enc_bwd, word.frames.row(t).transpose(), h_prev, c_prev);
    h_prev = tr.bwd[t].h;
    c_prev = tr.bwd[t].c;
  }

  tr.enc_out.resize(2 * h, tv);
  for (int t = 0; t < tv; ++t) {
    tr.enc_out.col(t).head(h) = tr.fwd[t].h;
    tr.enc_out.col(t).tail(h) = tr.bwd[t].h;
  }
  tr.feat = p.dims.mean_pool ? Eigen::VectorXd(tr.enc_out.rowwise().mean())
                             : Eigen::VectorXd(2 * h);
  if (!p.dims.mean_pool) {
    tr.feat.head(h) = tr.fwd[tv - 1].h;
    tr.feat.tail(h) = tr.bwd[0].h;
  }
  tr.z = p.w_proj * tr.feat + p.b_proj;
  return tr;
}

// Runs the encoder backward pass given the gradients of the per-step
// encoder outputs and of the embedding.
void encoder_backward(const ModelParams& p, const EncoderTrace& tr, Eigen::MatrixXd denc_out,
                      const Eigen::VectorXd& dz, ModelParams& g) {
  const int h = p.dims.hidden;
  const int tv = static_cast<int>(tr.fwd.size());

  g.w_proj.noalias() += dz * tr.feat.transpose();
  g.b_proj += dz;
  const Eigen::VectorXd dfeat = p.w_proj.transpose() * dz;
  if (p.dims.mean_pool) {
    denc_out.colwise() += Eigen::VectorXd(dfeat / static_cast<double>(tv));
  } else {
    denc_out.col(tv - 1).head(h) += dfeat.head(h);
    denc_out.col(0).tail(h) += dfeat.tail(h);
  }

  const Eigen::VectorXd zero_h = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd dh_carry = zero_h, dc_carry = zero_h;
  for (int t = tv - 1; t >= 0; --t) {
    const Eigen::VectorXd dh = denc_out.col(t).head(h) + dh_carry;
    const Eigen::VectorXd& h_prev = t > 0 ? tr.fwd[t - 1].h : zero_h;
    const Eigen::VectorXd& c_prev = t > 0 ? tr.fwd[t - 1].c : zero_h;
    auto back = lstm_back(p.enc_fwd, tr.fwd[t], h_prev, c_prev, dh, dc_carry, g.enc_fwd);
    dh_carry = back.dh_prev;
    dc_carry = back.dc_prev;
  }
  dh_carry = zero_h;
  dc_carry = zero_h;
  // The backward direction consumes frames Tv..1, so its reverse pass walks
  // the frames in ascending order.
  for (int t = 0; t < tv; ++t) {
    const Eigen::VectorXd dh = denc_out.col(t).tail(h) + dh_carry;
    const Eigen::VectorXd& h_prev = t + 1 < tv ? tr.bwd[t + 1].h : zero_h;
    const Eigen::VectorXd& c_prev = t + 1 < tv ? tr.bwd[t + 1].c : zero_h;
    auto back = lstm_back(p.enc_bwd, tr.bwd[t], h_prev, c_prev, dh, dc_carry, g.enc_bwd);
    dh_carry = back.dh_prev;
    dc_carry = back.dc_prev;
  }
}

struct DecoderTrace {
  Eigen::VectorXd h0, c0;
  std::vector<StepTrace> steps;       // s = 0..Sv-1
  std::vector<Eigen::VectorXd> alpha; // attention weights over encoder steps
  std::vector<Eigen::VectorXd> ctx;   // attention context per step
  std::vector<Eigen::VectorXd> yhat;  // emitted frame per step
};

// Teacher-forced decoding of one context target. Returns the accumulated
// squared error over the target's valid frames.
double decode_target(const ModelParams& p, const DecoderParams& dec, const EncoderTrace& enc,
                     const PaddedWord& target, DecoderTrace* tr) {
  const int h = p.dims.hidden;
  const int sv = target.valid_length;
  const int tv = static_cast<int>(enc.enc_out.cols());

  Eigen::VectorXd h_prev = (dec.w_h0 * enc.z + dec.b_h0).array().tanh().matrix();
  Eigen::VectorXd c_prev = (dec.w_c0 * enc.z + dec.b_c0).array().tanh().matrix();
  if (tr) {
    tr->h0 = h_prev;
    tr->c0 = c_prev;
    tr->steps.reserve(sv);
    tr->alpha.reserve(sv);
    tr->ctx.reserve(sv);
    tr->yhat.reserve(sv);
  }

  double sq_err = 0.0;
  const int in_dim = p.dims.feed_embedding ? kMfccDim + p.dims.embedding : kMfccDim;
  Eigen::VectorXd input(in_dim);
  for (int s = 0; s < sv; ++s) {
    input.head(kMfccDim) = s == 0 ? Eigen::VectorXd::Zero(kMfccDim)
                                  : Eigen::VectorXd(target.frames.row(s - 1).transpose());
    if (p.dims.feed_embedding) input.tail(p.dims.embedding) = enc.z;
    StepTrace step = lstm_step(dec.cell, input, h_prev, c_prev);

    // Bilinear attention over the valid encoder steps.
    const Eigen::VectorXd v = dec.w_att.transpose() * step.h;  // 2h
    Eigen::VectorXd scores = enc.enc_out.transpose() * v;      // Tv
    const double max_score = scores.maxCoeff();
    Eigen::VectorXd alpha = (scores.array() - max_score).exp().matrix();
    alpha /= alpha.sum();
    const Eigen::VectorXd ctx = enc.enc_out * alpha;  // 2h

    Eigen::VectorXd hc(3 * h);
    hc.head(h) = step.h;
    hc.tail(2 * h) = ctx;
    Eigen::VectorXd yhat = dec.w_out * hc + dec.b_out;
    sq_err += (yhat - target.frames.row(s).transpose()).squaredNorm();

    h_prev = step.h;
    c_prev = step.c;
    if (tr) {
      tr->steps.push_back(std::move(step));
      tr->alpha.push_back(std::move(alpha));
      tr->ctx.push_back(std::move(ctx));
      tr->yhat.push_back(std::move(yhat));
    }
    (void)tv;
  }
  return sq_err;
}

// Backward pass of one decoded target. `weight` scales every per-frame
// squared error (it folds the per-target mean, the target count, and the
// batch mean). Accumulates into the decoder gradient, the per-word encoder
// output gradient, and the embedding gradient.
void decode_target_backward(const ModelParams& p, const DecoderParams& dec,
                            const EncoderTrace& enc, const PaddedWord& target,
                            const DecoderTrace& tr, double weight, DecoderParams& gdec,
                            Eigen::MatrixXd& denc_out, Eigen::VectorXd& dz) {
  const int h = p.dims.hidden;
  const int sv = target.valid_length;

  const Eigen::VectorXd zero_h = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd dh_carry = zero_h, dc_carry = zero_h;
  for (int s = sv - 1; s >= 0; --s) {
    const Eigen::VectorXd dyhat =
        2.0 * weight * (tr.yhat[s] - target.frames.row(s).transpose());

    Eigen::VectorXd hc(3 * h);
    hc.head(h) = tr.steps[s].h;
    hc.tail(2 * h) = tr.ctx[s];
    gdec.w_out.noalias() += dyhat * hc.transpose();
    gdec.b_out += dyhat;

    const Eigen::VectorXd dhc = dec.w_out.transpose() * dyhat;
    Eigen::VectorXd dh = dhc.head(h);
    const Eigen::VectorXd dctx = dhc.tail(2 * h);

    // context = enc_out * alpha
    const Eigen::VectorXd dalpha = enc.enc_out.transpose() * dctx;
    denc_out.noalias() += dctx * tr.alpha[s].transpose();
    // softmax
    const double inner = tr.alpha[s].dot(dalpha);
    const Eigen::VectorXd de = (tr.alpha[s].array() * (dalpha.array() - inner)).matrix();
    // scores = enc_out' * (w_att' * dec_h)
    const Eigen::VectorXd dv = enc.enc_out * de;  // 2h
    dh.noalias() += dec.w_att * dv;
    gdec.w_att.noalias() += tr.steps[s].h * dv.transpose();
    denc_out.noalias() += (dec.w_att.transpose() * tr.steps[s].h) * de.transpose();

    dh += dh_carry;
    const Eigen::VectorXd& h_prev = s > 0 ? tr.steps[s - 1].h : tr.h0;
    const Eigen::VectorXd& c_prev = s > 0 ? tr.steps[s - 1].c : tr.c0;
    auto back = lstm_back(dec.cell, tr.steps[s], h_prev, c_prev, dh, dc_carry, gdec.cell);
    if (p.dims.feed_embedding) dz += back.dx.tail(p.dims.embedding);
    dh_carry = back.dh_prev;
    dc_carry = back.dc_prev;
  }

  // Initial states h0 = tanh(w_h0 z + b_h0), c0 = tanh(w_c0 z + b_c0).
  const Eigen::VectorXd dpre_h = (dh_carry.array() * (1.0 - tr.h0.array().square())).matrix();
  const Eigen::VectorXd dpre_c = (dc_carry.array() * (1.0 - tr.c0.array().square())).matrix();
  gdec.w_h0.noalias() += dpre_h * enc.z.transpose();
  gdec.b_h0 += dpre_h;
  gdec.w_c0.noalias() += dpre_c * enc.z.transpose();
  gdec.b_c0 += dpre_c;
  dz.noalias() += dec.w_h0.transpose() * dpre_h;
  dz.noalias() += dec.w_c0.transpose() * dpre_c;
}

// Forward (and optionally backward) pass over one sentence. Returns the
// sentence loss; when `grads` is set, accumulates grad_scale * d(loss)/d(p).
double sentence_pass(const ModelParams& p, const std::vector<PaddedWord>& sentence, int window,
                     double grad_scale, ModelParams* grads, std::size_t* n_targets_out) {
  if (sentence.empty()) throw EmptyInput("empty sentence");
  if (window < 1) throw InvalidConfig("window must be >= 1");
  const auto len = static_cast<int>(sentence.size());

  // Total number of (position, offset) targets, known up front because the
  // per-target weight depends on it.
  std::size_t n_targets = 0;
  for (int i = 0; i < len; ++i) {
    for (int o = -window; o <= window; ++o) {
      if (o == 0) continue;
      const int j = i + o;
      if (j >= 0 && j < len) ++n_targets;
    }
  }
  if (n_targets_out) *n_targets_out = n_targets;
  if (n_targets == 0) return 0.0;

  double loss = 0.0;
  for (int i = 0; i < len; ++i) {
    EncoderTrace enc = encode_with_trace(p, sentence[i]);
    Eigen::MatrixXd denc_out;
    Eigen::VectorXd dz;
    if (grads) {
      denc_out = Eigen::MatrixXd::Zero(enc.enc_out.rows(), enc.enc_out.cols());
      dz = Eigen::VectorXd::Zero(p.dims.embedding);
    }
    for (int o = -window; o <= window; ++o) {
      if (o == 0) continue;
      const int j = i + o;
      if (j < 0 || j >= len) continue;
      const PaddedWord& target = sentence[j];
      const DecoderParams& dec = p.decoder_for(o);
      const double frame_norm = static_cast<double>(target.valid_length) * kMfccDim;
      DecoderTrace tr;
      const double sq = decode_target(p, dec, enc, target, grads ? &tr : nullptr);
      loss += sq / frame_norm / static_cast<double>(n_targets);
      if (grads) {
        const double weight = grad_scale / frame_norm / static_cast<double>(n_targets);
        decode_target_backward(p, dec, enc, target, tr, weight, grads->decoder_for(o),
                               denc_out, dz);
      }
    }
    if (grads) encoder_backward(p, enc, std::move(denc_out), grad_scale * dz, *grads);
  }
  return loss;
}

void check_cell_shapes(const LstmCell& cell, int in, int h, const char* name) {
  if (cell.w_ih.rows() != 4 * h || cell.w_ih.cols() != in || cell.w_hh.rows() != 4 * h ||
      cell.w_hh.cols() != h || cell.b.size() != 4 * h) {
    throw ShapeError(std::string(name) + ": inconsistent LSTM shapes");
  }
}

}  // namespace

ModelParams ModelParams::zeros(const ModelDims& dims) {
  if (dims.hidden < 1 || dims.embedding < 1 || dims.window < 1) {
    throw InvalidConfig("hidden, embedding and window must be >= 1");
  }
  const int h = dims.hidden;
  const int e = dims.embedding;
  const int dec_in = dims.feed_embedding ? kMfccDim + e : kMfccDim;
  ModelParams p;
  p.dims = dims;
  auto zero_cell = [](int in, int hidden) {
    LstmCell cell;
    cell.w_ih = Eigen::MatrixXd::Zero(4 * hidden, in);
    cell.w_hh = Eigen::MatrixXd::Zero(4 * hidden, hidden);
    cell.b = Eigen::VectorXd::Zero(4 * hidden);
    return cell;
  };
  p.enc_fwd = zero_cell(kMfccDim, h);
  p.enc_bwd = zero_cell(kMfccDim, h);
  p.w_proj = Eigen::MatrixXd::Zero(e, 2 * h);
  p.b_proj = Eigen::VectorXd::Zero(e);
  const std::size_t n_dec = dims.shared_decoder ? 1 : 2 * static_cast<std::size_t>(dims.window);
  p.decoders.resize(n_dec);
  for (auto& dec : p.decoders) {
    dec.w_h0 = Eigen::MatrixXd::Zero(h, e);
    dec.b_h0 = Eigen::VectorXd::Zero(h);
    dec.w_c0 = Eigen::MatrixXd::Zero(h, e);
    dec.b_c0 = Eigen::VectorXd::Zero(h);
    dec.cell = zero_cell(dec_in, h);
    dec.w_att = Eigen::MatrixXd::Zero(h, 2 * h);
    dec.w_out = Eigen::MatrixXd::Zero(kMfccDim, 3 * h);
    dec.b_out = Eigen::VectorXd::Zero(kMfccDim);
  }
  return p;
}

ModelParams ModelParams::init(const ModelDims& dims, std::uint64_t seed) {
  ModelParams p = zeros(dims);
  Rng rng(seed);
  for_each_array(p, [&rng](auto& array) {
    for (Eigen::Index i = 0; i < array.size(); ++i) {
      array.data()[i] = rng.next_double(-0.08, 0.08);
    }
  });
  return p;
}

const DecoderParams& ModelParams::decoder_for(int offset) const {
  return const_cast<ModelParams*>(this)->decoder_for(offset);
}

DecoderParams& ModelParams::decoder_for(int offset) {
  if (offset == 0 || offset < -dims.window || offset > dims.window) {
    throw InvalidConfig("offset out of window");
  }
  if (dims.shared_decoder) return decoders[0];
  const std::size_t idx = offset < 0 ? static_cast<std::size_t>(offset + dims.window)
                                     : static_cast<std::size_t>(dims.window + offset - 1);
  return decoders[idx];
}

std::size_t ModelParams::n_parameters() const {
  std::size_t n = 0;
  for_each_array(*this, [&n](const auto& array) { n += static_cast<std::size_t>(array.size()); });
  return n;
}

std::vector<ArrayView> array_views(ModelParams& p) {
  std::vector<ArrayView> views;
  for_each_array(p, [&views](auto& array) {
    views.push_back({array.data(), array.size()});
  });
  return views;
}

std::vector<double> flatten(const ModelParams& p) {
  std::vector<double> flat;
  flat.reserve(p.n_parameters());
  for_each_array(p, [&flat](const auto& array) {
    flat.insert(flat.end(), array.data(), array.data() + array.size());
  });
  return flat;
}

Eigen::VectorXd encode(const ModelParams& params, const PaddedWord& word) {
  check_cell_shapes(params.enc_fwd, kMfccDim, params.dims.hidden, "enc_fwd");
  check_cell_shapes(params.enc_bwd, kMfccDim, params.dims.hidden, "enc_bwd");
  return encode_with_trace(params, word).z;
}

double skipgram_loss(const ModelParams& params, const std::vector<PaddedWord>& sentence,
                     int window, std::size_t* n_targets) {
  return sentence_pass(params, sentence, window, 0.0, nullptr, n_targets);
}

double skipgram_grad(const ModelParams& params,
                     const std::vector<const std::vector<PaddedWord>*>& batch, int window,
                     ModelParams& grads) {
  if (batch.empty()) throw EmptyInput("empty batch");
  for_each_array(grads, [](auto& array) { array.setZero(); });
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss_sum = 0.0;
  for (const auto* sentence : batch) {
    loss_sum += sentence_pass(params, *sentence, window, inv_batch, &grads, nullptr);
  }
  const double mean_loss = loss_sum * inv_batch;
  if (!std::isfinite(mean_loss)) throw NumericalError("non-finite loss");
  return mean_loss;
}

std::vector<double> numeric_gradient(const ModelParams& params,
                                     const std::vector<PaddedWord>& sentence, int window,
                                     double epsilon) {
  if (epsilon <= 0.0) throw InvalidConfig("epsilon must be positive");
  ModelParams probe = params;
  auto views = array_views(probe);
  std::vector<double> numeric;
  numeric.reserve(params.n_parameters());
  for (auto& view : views) {
    for (std::ptrdiff_t i = 0; i < view.size; ++i) {
      const double saved = view.data[i];
      view.data[i] = saved + epsilon;
      const double plus = skipgram_loss(probe, sentence, window);
      view.data[i] = saved - epsilon;
      const double minus = skipgram_loss(probe, sentence, window);
      view.data[i] = saved;
      numeric.push_back((plus - minus) / (2.0 * epsilon));
    }
  }
  return numeric;
}

double max_relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("gradient lengths differ");
  double max_err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), 1e-8});
    max_err = std::max(max_err, std::abs(a[i] - b[i]) / denom);
  }
  return max_err;
}

double grad_check(const ModelParams& params, const std::vector<PaddedWord>& sentence,
                  int window, double epsilon) {
  ModelParams grads = ModelParams::zeros(params.dims);
  skipgram_grad(params, {&sentence}, window, grads);
  return max_relative_error(flatten(grads), numeric_gradient(params, sentence, window, epsilon));
}

}  // namespace s2v
