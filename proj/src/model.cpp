#include "simseg/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "simseg/errors.hpp"
#include "simseg/kernels.hpp"
#include "simseg/rng.hpp"

namespace simseg {

std::string to_string(Nonlinearity n) {
  return n == Nonlinearity::RELU ? "relu" : "leaky_relu";
}

Nonlinearity nonlinearity_from_string(const std::string& s) {
  if (s == "relu") return Nonlinearity::RELU;
  if (s == "leaky_relu") return Nonlinearity::LEAKY_RELU;
  throw ParamError("unknown nonlinearity: " + s);
}

void ModelConfig::validate() const {
  if (in_channels <= 0) throw ParamError("ModelConfig: in_channels must be positive");
  if (num_classes < 2) throw ParamError("ModelConfig: num_classes must be >= 2");
  if (encoder_widths.size() < 2 || encoder_widths.size() > 7)
    throw ParamError("ModelConfig: depth must be in [2, 7]");
  for (int w : encoder_widths)
    if (w <= 0) throw ParamError("ModelConfig: encoder widths must be positive");
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
  return a.in_channels == b.in_channels && a.num_classes == b.num_classes &&
         a.encoder_widths == b.encoder_widths && a.nonlinearity == b.nonlinearity &&
         a.init_seed == b.init_seed;
}

namespace {

struct ConvDesc {
  int in_ch = 0, out_ch = 0, k = 3;
  size_t w_off = 0, b_off = 0;
  size_t weight_count() const { return size_t(out_ch) * in_ch * k * k; }
};

constexpr double kLeakySlope = 0.01;

}  // namespace

// Layer table: encoder convs level 0..d-1, decoder convs level d-2..0
// (params stored in that order), then the 1x1 head.
struct SegModel::Layers {
  std::vector<ConvDesc> enc;  // index = level
  std::vector<ConvDesc> dec;  // index = level (0..d-2)
  ConvDesc head;
  size_t total = 0;
};

static SegModel::Layers build_layers(const ModelConfig& cfg) {
  SegModel::Layers L;
  const int d = cfg.depth();
  const auto& w = cfg.encoder_widths;
  size_t off = 0;
  auto add = [&off](int in_ch, int out_ch, int k) {
    ConvDesc c;
    c.in_ch = in_ch;
    c.out_ch = out_ch;
    c.k = k;
    c.w_off = off;
    off += c.weight_count();
    c.b_off = off;
    off += size_t(out_ch);
    return c;
  };
  for (int i = 0; i < d; ++i) add(0, 0, 0), off = 0;  // reset; sizes below
  // recompute cleanly
  L.enc.clear();
  off = 0;
  for (int i = 0; i < d; ++i)
    L.enc.push_back(add(i == 0 ? cfg.in_channels : w[i - 1], w[i], 3));
  L.dec.resize(size_t(d - 1));
  for (int i = d - 2; i >= 0; --i) L.dec[size_t(i)] = add(w[i + 1] + w[i], w[i], 3);
  L.head = add(w[0], cfg.num_classes, 1);
  L.total = off;
  return L;
}

size_t model_param_count(const ModelConfig& cfg) {
  cfg.validate();
  return build_layers(cfg).total;
}

struct ForwardCache {
  int h = 0, w = 0;
  std::vector<double> input;
  std::vector<std::vector<double>> enc_act;  // post-activation per level
  std::vector<std::vector<double>> pooled;   // level i -> pooled enc_act[i]
  std::vector<std::vector<uint8_t>> argmax;
  std::vector<std::vector<double>> cat;      // decoder concat input per level
  std::vector<std::vector<double>> dec_act;  // decoder post-activation per level
  std::vector<double> probs;
};

ForwardCache* new_forward_cache() { return new ForwardCache(); }
void free_forward_cache(ForwardCache* c) { delete c; }

SegModel::SegModel(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  layers_ = new Layers(build_layers(cfg_));
  params_.assign(layers_->total, 0.0);
  init_params(cfg_.init_seed);
}

SegModel::~SegModel() { delete layers_; }

SegModel::SegModel(SegModel&& o) noexcept
    : cfg_(std::move(o.cfg_)), params_(std::move(o.params_)), layers_(o.layers_) {
  o.layers_ = nullptr;
}

SegModel& SegModel::operator=(SegModel&& o) noexcept {
  if (this != &o) {
    delete layers_;
    cfg_ = std::move(o.cfg_);
    params_ = std::move(o.params_);
    layers_ = o.layers_;
    o.layers_ = nullptr;
  }
  return *this;
}

void SegModel::init_params(uint64_t seed) {
  Rng rng(derive_seed(seed, {0x1717u}));
  auto init_conv = [&](const ConvDesc& c) {
    const double fan_in = double(c.in_ch) * c.k * c.k;
    const double limit = std::sqrt(6.0 / fan_in);
    const size_t nw = c.weight_count();
    for (size_t i = 0; i < nw; ++i) params_[c.w_off + i] = rng.uniform(-limit, limit);
    for (int i = 0; i < c.out_ch; ++i) params_[c.b_off + i] = 0.0;
  };
  for (const auto& c : layers_->enc) init_conv(c);
  for (int i = int(layers_->dec.size()) - 1; i >= 0; --i) init_conv(layers_->dec[size_t(i)]);
  init_conv(layers_->head);
}

namespace {

inline void activate(std::vector<double>& v, Nonlinearity n) {
  if (n == Nonlinearity::RELU) {
    for (double& x : v) x = x > 0.0 ? x : 0.0;
  } else {
    for (double& x : v) x = x > 0.0 ? x : kLeakySlope * x;
  }
}

// dz = dа * act'(z), using the sign of the stored post-activation.
inline void activate_backward(const std::vector<double>& act, std::vector<double>& d,
                              Nonlinearity n) {
  const double slope = n == Nonlinearity::RELU ? 0.0 : kLeakySlope;
  for (size_t i = 0; i < d.size(); ++i)
    if (!(act[i] > 0.0)) d[i] *= slope;
}

}  // namespace

ProbMap SegModel::forward(const Image& img) const {
  ForwardCacheHandle cache;
  return forward_cached(img, *cache);
}

ProbMap SegModel::forward_cached(const Image& img, ForwardCache& cc) const {
  const int d = cfg_.depth();
  const int h = img.height, w = img.width;
  const int div = 1 << d;
  if (h % div != 0 || w % div != 0)
    throw ParamError("forward: image dims must be divisible by 2^depth");
  if (cfg_.in_channels != 3) throw ParamError("forward: expects 3-channel input");

  cc.h = h;
  cc.w = w;
  const size_t plane = size_t(h) * w;
  cc.input.resize(3 * plane);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        cc.input[size_t(c) * plane + size_t(y) * w + x] = img.at(y, x, c);

  cc.enc_act.resize(size_t(d));
  cc.pooled.resize(size_t(d - 1));
  cc.argmax.resize(size_t(d - 1));

  const double* wts = params_.data();
  const std::vector<double>* cur_in = &cc.input;
  int ch = h, cw = w;
  for (int i = 0; i < d; ++i) {
    const ConvDesc& c = layers_->enc[size_t(i)];
    cc.enc_act[size_t(i)].resize(size_t(c.out_ch) * ch * cw);
    kernels::conv2d_forward(cur_in->data(), c.in_ch, ch, cw, wts + c.w_off,
                            wts + c.b_off, c.out_ch, c.k, cc.enc_act[size_t(i)].data());
    activate(cc.enc_act[size_t(i)], cfg_.nonlinearity);
    if (i < d - 1) {
      cc.pooled[size_t(i)].resize(size_t(c.out_ch) * (ch / 2) * (cw / 2));
      cc.argmax[size_t(i)].resize(cc.pooled[size_t(i)].size());
      kernels::maxpool2_forward(cc.enc_act[size_t(i)].data(), c.out_ch, ch, cw,
                                cc.pooled[size_t(i)].data(), cc.argmax[size_t(i)].data());
      cur_in = &cc.pooled[size_t(i)];
      ch /= 2;
      cw /= 2;
    }
  }

  cc.cat.resize(size_t(d - 1));
  cc.dec_act.resize(size_t(d - 1));
  const std::vector<double>* cur = &cc.enc_act[size_t(d - 1)];
  for (int i = d - 2; i >= 0; --i) {
    const int uh = ch * 2, uw = cw * 2;
    const int up_ch = cfg_.encoder_widths[size_t(i + 1)];
    const int skip_ch = cfg_.encoder_widths[size_t(i)];
    auto& cat = cc.cat[size_t(i)];
    cat.resize(size_t(up_ch + skip_ch) * uh * uw);
    kernels::upsample2_forward(cur->data(), up_ch, ch, cw, cat.data());
    std::memcpy(cat.data() + size_t(up_ch) * uh * uw, cc.enc_act[size_t(i)].data(),
                sizeof(double) * size_t(skip_ch) * uh * uw);
    const ConvDesc& c = layers_->dec[size_t(i)];
    cc.dec_act[size_t(i)].resize(size_t(c.out_ch) * uh * uw);
    kernels::conv2d_forward(cat.data(), c.in_ch, uh, uw, wts + c.w_off, wts + c.b_off,
                            c.out_ch, c.k, cc.dec_act[size_t(i)].data());
    activate(cc.dec_act[size_t(i)], cfg_.nonlinearity);
    cur = &cc.dec_act[size_t(i)];
    ch = uh;
    cw = uw;
  }

  const ConvDesc& hd = layers_->head;
  std::vector<double> logits(size_t(hd.out_ch) * h * w);
  kernels::conv2d_forward(cur->data(), hd.in_ch, h, w, wts + hd.w_off, wts + hd.b_off,
                          hd.out_ch, hd.k, logits.data());

  // per-pixel softmax with max subtraction
  const int C = cfg_.num_classes;
  ProbMap pm(C, h, w);
  for (size_t i = 0; i < plane; ++i) {
    double mx = logits[i];
    for (int c = 1; c < C; ++c) mx = std::max(mx, logits[size_t(c) * plane + i]);
    double sum = 0.0;
    for (int c = 0; c < C; ++c) {
      double e = std::exp(logits[size_t(c) * plane + i] - mx);
      pm.probs[size_t(c) * plane + i] = e;
      sum += e;
    }
    const double inv = 1.0 / sum;
    for (int c = 0; c < C; ++c) pm.probs[size_t(c) * plane + i] *= inv;
  }
  cc.probs = pm.probs;
  return pm;
}

void SegModel::backward(const ForwardCache& cc, const ProbMap& grad_probs,
                        std::vector<double>& grad) const {
  const int d = cfg_.depth();
  const int h = cc.h, w = cc.w;
  const size_t plane = size_t(h) * w;
  const int C = cfg_.num_classes;
  if (grad_probs.channels != C || grad_probs.height != h || grad_probs.width != w)
    throw ParamError("backward: grad shape mismatch");
  if (grad.size() != params_.size()) throw ParamError("backward: grad buffer size mismatch");

  // softmax jacobian: dz_c = p_c * (dp_c - sum_k dp_k p_k)
  std::vector<double> dlogits(size_t(C) * plane);
  for (size_t i = 0; i < plane; ++i) {
    double dot = 0.0;
    for (int c = 0; c < C; ++c)
      dot += grad_probs.probs[size_t(c) * plane + i] * cc.probs[size_t(c) * plane + i];
    for (int c = 0; c < C; ++c) {
      const size_t idx = size_t(c) * plane + i;
      dlogits[idx] = cc.probs[idx] * (grad_probs.probs[idx] - dot);
    }
  }

  const double* wts = params_.data();
  const ConvDesc& hd = layers_->head;
  const std::vector<double>& head_in = d >= 2 ? cc.dec_act[0] : cc.enc_act[0];
  kernels::conv2d_backward_weights(head_in.data(), hd.in_ch, h, w, dlogits.data(),
                                   hd.out_ch, hd.k, grad.data() + hd.w_off,
                                   grad.data() + hd.b_off);
  std::vector<double> dcur(size_t(hd.in_ch) * plane);
  kernels::conv2d_backward_data(dlogits.data(), hd.out_ch, h, w, wts + hd.w_off,
                                hd.in_ch, hd.k, dcur.data());

  // decoder chain, level 0 upward
  std::vector<std::vector<double>> d_skip(size_t(d - 1));
  int ch = h, cw = w;
  for (int i = 0; i <= d - 2; ++i) {
    const ConvDesc& c = layers_->dec[size_t(i)];
    activate_backward(cc.dec_act[size_t(i)], dcur, cfg_.nonlinearity);
    kernels::conv2d_backward_weights(cc.cat[size_t(i)].data(), c.in_ch, ch, cw,
                                     dcur.data(), c.out_ch, c.k, grad.data() + c.w_off,
                                     grad.data() + c.b_off);
    std::vector<double> dcat(size_t(c.in_ch) * ch * cw);
    kernels::conv2d_backward_data(dcur.data(), c.out_ch, ch, cw, wts + c.w_off, c.in_ch,
                                  c.k, dcat.data());
    const int up_ch = cfg_.encoder_widths[size_t(i + 1)];
    const int skip_ch = cfg_.encoder_widths[size_t(i)];
    d_skip[size_t(i)].assign(dcat.begin() + ptrdiff_t(size_t(up_ch) * ch * cw),
                             dcat.begin() + ptrdiff_t(size_t(up_ch + skip_ch) * ch * cw));
    dcur.resize(size_t(up_ch) * (ch / 2) * (cw / 2));
    kernels::upsample2_backward(dcat.data(), up_ch, ch / 2, cw / 2, dcur.data());
    ch /= 2;
    cw /= 2;
  }

  // encoder chain, bottleneck downward; dcur now holds d(enc_act[d-1])
  for (int i = d - 1; i >= 0; --i) {
    const ConvDesc& c = layers_->enc[size_t(i)];
    if (i < d - 1) {
      // gradient through the pooling path joins the skip gradient
      std::vector<double> dpool(size_t(c.out_ch) * ch * cw);
      kernels::maxpool2_backward(dcur.data(), cc.argmax[size_t(i)].data(), c.out_ch,
                                 ch * 2, cw * 2, dpool.data());
      ch *= 2;
      cw *= 2;
      dcur = std::move(d_skip[size_t(i)]);
      for (size_t j = 0; j < dcur.size(); ++j) dcur[j] += dpool[j];
    }
    activate_backward(cc.enc_act[size_t(i)], dcur, cfg_.nonlinearity);
    const std::vector<double>& in = i == 0 ? cc.input : cc.pooled[size_t(i - 1)];
    kernels::conv2d_backward_weights(in.data(), c.in_ch, ch, cw, dcur.data(), c.out_ch,
                                     c.k, grad.data() + c.w_off, grad.data() + c.b_off);
    if (i > 0) {
      std::vector<double> din(size_t(c.in_ch) * ch * cw);
      kernels::conv2d_backward_data(dcur.data(), c.out_ch, ch, cw, wts + c.w_off,
                                    c.in_ch, c.k, din.data());
      dcur = std::move(din);
      ch /= 2;
      cw /= 2;
    }
  }
}

Mask predict_mask(const ProbMap& pm) {
  if (pm.channels != 2) throw ParamError("predict_mask: expects a 2-class ProbMap");
  Mask mask(pm.height, pm.width);
  const size_t px = pm.pixel_count();
  for (size_t i = 0; i < px; ++i)
    mask.labels[i] = pm.probs[px + i] > pm.probs[i] ? 1 : 0;
  return mask;
}

}  // namespace simseg
