#include "simseg/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace simseg::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Fixed-order 8-lane dot product. The lane split keeps the summation order
// pinned while still letting the compiler vectorize; serial and parallel
// kernels share it, so their outputs are bit-identical.
inline double dot_n(const double* a, const double* b, int n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0, s6 = 0, s7 = 0;
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
    s4 += a[i + 4] * b[i + 4];
    s5 += a[i + 5] * b[i + 5];
    s6 += a[i + 6] * b[i + 6];
    s7 += a[i + 7] * b[i + 7];
  }
  double s = ((s0 + s1) + (s2 + s3)) + ((s4 + s5) + (s6 + s7));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

// One output row of the forward convolution: all output channels at row y.
// Accumulation order per element: ic, then ky, then kx.
inline void conv_fwd_row(const double* in, int c_in, int h, int w,
                         const double* weights, const double* bias, int c_out, int k,
                         int y, double* out, double* acc) {
  const int r = k / 2;
  const size_t plane = size_t(h) * w;
  for (int oc = 0; oc < c_out; ++oc) {
    const double b = bias[oc];
    for (int x = 0; x < w; ++x) acc[x] = b;
    const double* wbase = weights + size_t(oc) * c_in * k * k;
    for (int ic = 0; ic < c_in; ++ic) {
      const double* ip = in + size_t(ic) * plane;
      const double* wp = wbase + size_t(ic) * k * k;
      for (int ky = 0; ky < k; ++ky) {
        const int sy = y + ky - r;
        if (sy < 0 || sy >= h) continue;
        const double* irow = ip + size_t(sy) * w;
        for (int kx = 0; kx < k; ++kx) {
          const double wv = wp[ky * k + kx];
          const int dx = kx - r;
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          const double* src = irow + dx;
          for (int x = x0; x < x1; ++x) acc[x] += wv * src[x];
        }
      }
    }
    std::copy(acc, acc + w, out + size_t(oc) * plane + size_t(y) * w);
  }
}

// One input-gradient row: all input channels at row y. Accumulation order
// per element: oc, then ky, then kx.
inline void conv_bwd_data_row(const double* dout, int c_out, int h, int w,
                              const double* weights, int c_in, int k, int y,
                              double* din, double* acc) {
  const int r = k / 2;
  const size_t plane = size_t(h) * w;
  for (int ic = 0; ic < c_in; ++ic) {
    for (int x = 0; x < w; ++x) acc[x] = 0.0;
    for (int oc = 0; oc < c_out; ++oc) {
      const double* dp = dout + size_t(oc) * plane;
      const double* wp = weights + (size_t(oc) * c_in + ic) * k * k;
      for (int ky = 0; ky < k; ++ky) {
        const int sy = y - ky + r;
        if (sy < 0 || sy >= h) continue;
        const double* drow = dp + size_t(sy) * w;
        for (int kx = 0; kx < k; ++kx) {
          const double wv = wp[ky * k + kx];
          const int dx = r - kx;
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          const double* src = drow + dx;
          for (int x = x0; x < x1; ++x) acc[x] += wv * src[x];
        }
      }
    }
    std::copy(acc, acc + w, din + size_t(ic) * plane + size_t(y) * w);
  }
}

// All weight/bias gradients for one output channel. Per-weight sum runs
// rows in ascending y with the pinned dot_n order along x.
inline void conv_bwd_weights_oc(const double* in, int c_in, int h, int w,
                                const double* dout, int c_out, int k, int oc,
                                double* dweights, double* dbias) {
  (void)c_out;
  const int r = k / 2;
  const size_t plane = size_t(h) * w;
  const double* dp = dout + size_t(oc) * plane;
  {
    double s = 0.0;
    for (int y = 0; y < h; ++y) {
      const double* drow = dp + size_t(y) * w;
      double rs0 = 0, rs1 = 0, rs2 = 0, rs3 = 0;
      int x = 0;
      for (; x + 4 <= w; x += 4) {
        rs0 += drow[x];
        rs1 += drow[x + 1];
        rs2 += drow[x + 2];
        rs3 += drow[x + 3];
      }
      double rsum = (rs0 + rs1) + (rs2 + rs3);
      for (; x < w; ++x) rsum += drow[x];
      s += rsum;
    }
    dbias[oc] += s;
  }
  for (int ic = 0; ic < c_in; ++ic) {
    const double* ip = in + size_t(ic) * plane;
    for (int ky = 0; ky < k; ++ky) {
      const int dy = ky - r;
      const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
      for (int kx = 0; kx < k; ++kx) {
        const int dx = kx - r;
        const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
        const int n = x1 - x0;
        double acc = 0.0;
        for (int y = y0; y < y1; ++y) {
          const double* drow = dp + size_t(y) * w + x0;
          const double* irow = ip + size_t(y + dy) * w + x0 + dx;
          acc += dot_n(drow, irow, n);
        }
        dweights[((size_t(oc) * c_in + ic) * k + ky) * k + kx] += acc;
      }
    }
  }
}

inline void pool_fwd_row(const double* in, int h, int w, int c, int oy, double* out,
                         uint8_t* argmax) {
  const int oh = h / 2, ow = w / 2;
  const size_t in_plane = size_t(h) * w, out_plane = size_t(oh) * ow;
  for (int ch = 0; ch < c; ++ch) {
    const double* ip = in + size_t(ch) * in_plane + size_t(2 * oy) * w;
    double* op = out + size_t(ch) * out_plane + size_t(oy) * ow;
    uint8_t* ap = argmax + size_t(ch) * out_plane + size_t(oy) * ow;
    for (int ox = 0; ox < ow; ++ox) {
      const double v00 = ip[2 * ox], v01 = ip[2 * ox + 1];
      const double v10 = ip[w + 2 * ox], v11 = ip[w + 2 * ox + 1];
      double best = v00;
      uint8_t arg = 0;
      if (v01 > best) { best = v01; arg = 1; }
      if (v10 > best) { best = v10; arg = 2; }
      if (v11 > best) { best = v11; arg = 3; }
      op[ox] = best;
      ap[ox] = arg;
    }
  }
}

inline void pool_bwd_row(const double* dout, const uint8_t* argmax, int h, int w, int c,
                         int oy, double* din) {
  const int oh = h / 2, ow = w / 2;
  const size_t in_plane = size_t(h) * w, out_plane = size_t(oh) * ow;
  for (int ch = 0; ch < c; ++ch) {
    const double* dp = dout + size_t(ch) * out_plane + size_t(oy) * ow;
    const uint8_t* ap = argmax + size_t(ch) * out_plane + size_t(oy) * ow;
    double* ip = din + size_t(ch) * in_plane + size_t(2 * oy) * w;
    for (int x = 0; x < w; ++x) { ip[x] = 0.0; ip[w + x] = 0.0; }
    for (int ox = 0; ox < ow; ++ox) {
      const uint8_t a = ap[ox];
      const int ry = a >> 1, rx = a & 1;
      ip[size_t(ry) * w + 2 * ox + rx] = dp[ox];
    }
  }
}

inline void upsample_fwd_row(const double* in, int h, int w, int c, int y, double* out) {
  const int oh = h * 2, ow = w * 2;
  const size_t in_plane = size_t(h) * w, out_plane = size_t(oh) * ow;
  for (int ch = 0; ch < c; ++ch) {
    const double* irow = in + size_t(ch) * in_plane + size_t(y) * w;
    double* o0 = out + size_t(ch) * out_plane + size_t(2 * y) * ow;
    double* o1 = o0 + ow;
    for (int x = 0; x < w; ++x) {
      const double v = irow[x];
      o0[2 * x] = v;
      o0[2 * x + 1] = v;
      o1[2 * x] = v;
      o1[2 * x + 1] = v;
    }
  }
}

inline void upsample_bwd_row(const double* dout, int h, int w, int c, int y, double* din) {
  const int oh = h * 2, ow = w * 2;
  const size_t in_plane = size_t(h) * w, out_plane = size_t(oh) * ow;
  for (int ch = 0; ch < c; ++ch) {
    const double* d0 = dout + size_t(ch) * out_plane + size_t(2 * y) * ow;
    const double* d1 = d0 + ow;
    double* irow = din + size_t(ch) * in_plane + size_t(y) * w;
    for (int x = 0; x < w; ++x)
      irow[x] = (d0[2 * x] + d0[2 * x + 1]) + (d1[2 * x] + d1[2 * x + 1]);
  }
}

}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel_enabled(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

namespace serial {

void conv2d_forward(const double* in, int c_in, int h, int w, const double* weights,
                    const double* bias, int c_out, int k, double* out) {
  std::vector<double> acc(w);
  for (int y = 0; y < h; ++y)
    conv_fwd_row(in, c_in, h, w, weights, bias, c_out, k, y, out, acc.data());
}

void conv2d_backward_data(const double* dout, int c_out, int h, int w,
                          const double* weights, int c_in, int k, double* din) {
  std::vector<double> acc(w);
  for (int y = 0; y < h; ++y)
    conv_bwd_data_row(dout, c_out, h, w, weights, c_in, k, y, din, acc.data());
}

void conv2d_backward_weights(const double* in, int c_in, int h, int w,
                             const double* dout, int c_out, int k, double* dweights,
                             double* dbias) {
  for (int oc = 0; oc < c_out; ++oc)
    conv_bwd_weights_oc(in, c_in, h, w, dout, c_out, k, oc, dweights, dbias);
}

void maxpool2_forward(const double* in, int c, int h, int w, double* out,
                      uint8_t* argmax) {
  for (int oy = 0; oy < h / 2; ++oy) pool_fwd_row(in, h, w, c, oy, out, argmax);
}

void maxpool2_backward(const double* dout, const uint8_t* argmax, int c, int h, int w,
                       double* din) {
  for (int oy = 0; oy < h / 2; ++oy) pool_bwd_row(dout, argmax, h, w, c, oy, din);
}

void upsample2_forward(const double* in, int c, int h, int w, double* out) {
  for (int y = 0; y < h; ++y) upsample_fwd_row(in, h, w, c, y, out);
}

void upsample2_backward(const double* dout, int c, int h, int w, double* din) {
  for (int y = 0; y < h; ++y) upsample_bwd_row(dout, h, w, c, y, din);
}

}  // namespace serial

namespace par {

void conv2d_forward(const double* in, int c_in, int h, int w, const double* weights,
                    const double* bias, int c_out, int k, double* out) {
#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<double> acc(w);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y)
      conv_fwd_row(in, c_in, h, w, weights, bias, c_out, k, y, out, acc.data());
  }
#else
  serial::conv2d_forward(in, c_in, h, w, weights, bias, c_out, k, out);
#endif
}

void conv2d_backward_data(const double* dout, int c_out, int h, int w,
                          const double* weights, int c_in, int k, double* din) {
#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<double> acc(w);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y)
      conv_bwd_data_row(dout, c_out, h, w, weights, c_in, k, y, din, acc.data());
  }
#else
  serial::conv2d_backward_data(dout, c_out, h, w, weights, c_in, k, din);
#endif
}

void conv2d_backward_weights(const double* in, int c_in, int h, int w,
                             const double* dout, int c_out, int k, double* dweights,
                             double* dbias) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < c_out; ++oc)
    conv_bwd_weights_oc(in, c_in, h, w, dout, c_out, k, oc, dweights, dbias);
#else
  serial::conv2d_backward_weights(in, c_in, h, w, dout, c_out, k, dweights, dbias);
#endif
}

void maxpool2_forward(const double* in, int c, int h, int w, double* out,
                      uint8_t* argmax) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int oy = 0; oy < h / 2; ++oy) pool_fwd_row(in, h, w, c, oy, out, argmax);
#else
  serial::maxpool2_forward(in, c, h, w, out, argmax);
#endif
}

void maxpool2_backward(const double* dout, const uint8_t* argmax, int c, int h, int w,
                       double* din) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int oy = 0; oy < h / 2; ++oy) pool_bwd_row(dout, argmax, h, w, c, oy, din);
#else
  serial::maxpool2_backward(dout, argmax, c, h, w, din);
#endif
}

void upsample2_forward(const double* in, int c, int h, int w, double* out) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) upsample_fwd_row(in, h, w, c, y, out);
#else
  serial::upsample2_forward(in, c, h, w, out);
#endif
}

void upsample2_backward(const double* dout, int c, int h, int w, double* din) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) upsample_bwd_row(dout, h, w, c, y, din);
#else
  serial::upsample2_backward(dout, c, h, w, din);
#endif
}

}  // namespace par

void conv2d_forward(const double* in, int c_in, int h, int w, const double* weights,
                    const double* bias, int c_out, int k, double* out) {
  if (parallel_enabled())
    par::conv2d_forward(in, c_in, h, w, weights, bias, c_out, k, out);
  else
    serial::conv2d_forward(in, c_in, h, w, weights, bias, c_out, k, out);
}

void conv2d_backward_data(const double* dout, int c_out, int h, int w,
                          const double* weights, int c_in, int k, double* din) {
  if (parallel_enabled())
    par::conv2d_backward_data(dout, c_out, h, w, weights, c_in, k, din);
  else
    serial::conv2d_backward_data(dout, c_out, h, w, weights, c_in, k, din);
}

void conv2d_backward_weights(const double* in, int c_in, int h, int w,
                             const double* dout, int c_out, int k, double* dweights,
                             double* dbias) {
  if (parallel_enabled())
    par::conv2d_backward_weights(in, c_in, h, w, dout, c_out, k, dweights, dbias);
  else
    serial::conv2d_backward_weights(in, c_in, h, w, dout, c_out, k, dweights, dbias);
}

void maxpool2_forward(const double* in, int c, int h, int w, double* out,
                      uint8_t* argmax) {
  if (parallel_enabled())
    par::maxpool2_forward(in, c, h, w, out, argmax);
  else
    serial::maxpool2_forward(in, c, h, w, out, argmax);
}

void maxpool2_backward(const double* dout, const uint8_t* argmax, int c, int h, int w,
                       double* din) {
  if (parallel_enabled())
    par::maxpool2_backward(dout, argmax, c, h, w, din);
  else
    serial::maxpool2_backward(dout, argmax, c, h, w, din);
}

void upsample2_forward(const double* in, int c, int h, int w, double* out) {
  if (parallel_enabled())
    par::upsample2_forward(in, c, h, w, out);
  else
    serial::upsample2_forward(in, c, h, w, out);
}

void upsample2_backward(const double* dout, int c, int h, int w, double* din) {
  if (parallel_enabled())
    par::upsample2_backward(dout, c, h, w, din);
  else
    serial::upsample2_backward(dout, c, h, w, din);
}

}  // namespace simseg::kernels
