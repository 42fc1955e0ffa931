#pragma once

#include <cstddef>
#include <cstdint>

namespace simseg::kernels {

// Global switch between the OpenMP kernels and the serial reference.
// Both produce bit-identical results: the parallel versions only split
// loops whose iterations write disjoint outputs, so per-element arithmetic
// order never changes with thread count.
bool parallel_enabled();
void set_parallel_enabled(bool on);

// Feature maps are planar C x H x W doubles. Convolutions are odd-sized
// square kernels with zero padding k/2 (same spatial dims), weights laid
// out [oc][ic][ky][kx], one bias per output channel.

namespace serial {

void conv2d_forward(const double* in, int c_in, int h, int w, const double* weights,
                    const double* bias, int c_out, int k, double* out);
void conv2d_backward_data(const double* dout, int c_out, int h, int w,
                          const double* weights, int c_in, int k, double* din);
// Accumulates into dweights / dbias.
void conv2d_backward_weights(const double* in, int c_in, int h, int w,
                             const double* dout, int c_out, int k, double* dweights,
                             double* dbias);

// 2x2 stride-2 max pooling; ties keep the first element in scan order
// (top-left first). argmax stores the 2-bit position per output element.
void maxpool2_forward(const double* in, int c, int h, int w, double* out,
                      uint8_t* argmax);
void maxpool2_backward(const double* dout, const uint8_t* argmax, int c, int h, int w,
                       double* din);

// Nearest-neighbour 2x upsampling and its adjoint.
void upsample2_forward(const double* in, int c, int h, int w, double* out);
void upsample2_backward(const double* dout, int c, int h, int w, double* din);

}  // namespace serial

namespace par {

void conv2d_forward(const double* in, int c_in, int h, int w, const double* weights,
                    const double* bias, int c_out, int k, double* out);
void conv2d_backward_data(const double* dout, int c_out, int h, int w,
                          const double* weights, int c_in, int k, double* din);
void conv2d_backward_weights(const double* in, int c_in, int h, int w,
                             const double* dout, int c_out, int k, double* dweights,
                             double* dbias);
void maxpool2_forward(const double* in, int c, int h, int w, double* out,
                      uint8_t* argmax);
void maxpool2_backward(const double* dout, const uint8_t* argmax, int c, int h, int w,
                       double* din);
void upsample2_forward(const double* in, int c, int h, int w, double* out);
void upsample2_backward(const double* dout, int c, int h, int w, double* din);

}  // namespace par

// Dispatching entry points used by the model.
void conv2d_forward(const double* in, int c_in, int h, int w, const double* weights,
                    const double* bias, int c_out, int k, double* out);
void conv2d_backward_data(const double* dout, int c_out, int h, int w,
                          const double* weights, int c_in, int k, double* din);
void conv2d_backward_weights(const double* in, int c_in, int h, int w,
                             const double* dout, int c_out, int k, double* dweights,
                             double* dbias);
void maxpool2_forward(const double* in, int c, int h, int w, double* out,
                      uint8_t* argmax);
void maxpool2_backward(const double* dout, const uint8_t* argmax, int c, int h, int w,
                       double* din);
void upsample2_forward(const double* in, int c, int h, int w, double* out);
void upsample2_backward(const double* dout, int c, int h, int w, double* din);

}  // namespace simseg::kernels
