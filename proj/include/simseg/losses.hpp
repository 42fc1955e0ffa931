#pragma once

#include <cstdint>
#include <string>

#include "simseg/image.hpp"

namespace simseg {

enum class ConsistencyKind { SCL, MSE };
enum class GradPolicy { FLOW, STOP };
std::string to_string(ConsistencyKind k);
ConsistencyKind consistency_kind_from_string(const std::string& s);
std::string to_string(GradPolicy p);
GradPolicy grad_policy_from_string(const std::string& s);

struct LossConfig {
  double epsilon = 1e-6;
  ConsistencyKind kind = ConsistencyKind::SCL;
  GradPolicy policy = GradPolicy::FLOW;
};

// Numeric guard: the soft-Jaccard ratio is clamped here before the log.
inline constexpr double kJaccardRatioClamp = 1e8;

// Cross-entropy + log-Jaccard loss for one image:
//   0.5 * [ -(1/P) sum_px sum_c y_t log(max(y_p, eps)) ]          (CE, mean over pixels)
// + 0.5 * [ -log((I + eps) / (U - I + eps)) ]                     (global, foreground channel)
// with soft sets I = sum y_t*y_p and U = sum(y_t + y_p - y_t*y_p).
// y_t may be a one-hot target (supervised) or a soft map (consistency).
double ce_jaccard_loss(const ProbMap& y_p, const ProbMap& y_t, double eps = 1e-6);
double ce_jaccard_loss(const ProbMap& y_p, const Mask& y_t, double eps = 1e-6);

// Value plus analytic gradients; either output may be null.
double ce_jaccard_loss_grad(const ProbMap& y_p, const ProbMap& y_t, double eps,
                            ProbMap* d_yp, ProbMap* d_yt);

// Mean over pixels and channels of squared differences.
double mse_consistency(const ProbMap& y_p, const ProbMap& y_t);
double mse_consistency_grad(const ProbMap& y_p, const ProbMap& y_t, ProbMap* d_yp,
                            ProbMap* d_yt);

// Dispatches on cfg.kind with clean as the target branch (y_t) and perturbed
// as the prediction branch (y_p). Under STOP the clean branch gets no
// gradient (d_clean is zero-filled when requested).
double consistency_loss(const LossConfig& cfg, const ProbMap& clean,
                        const ProbMap& perturbed);
double consistency_loss_grad(const LossConfig& cfg, const ProbMap& clean,
                             const ProbMap& perturbed, ProbMap* d_clean,
                             ProbMap* d_pert);

// Time-dependent consistency weight.
struct AlphaSchedule {
  enum class Kind { CONSTANT, TEMPORAL_LINEAR };
  Kind kind = Kind::TEMPORAL_LINEAR;
  double value = 1.0;        // CONSTANT only
  int64_t total_steps = 0;   // TEMPORAL_LINEAR: alpha(s) = s / total_steps
};
std::string to_string(AlphaSchedule::Kind k);
AlphaSchedule::Kind alpha_kind_from_string(const std::string& s);

// step must lie in [0, total_steps] for TEMPORAL_LINEAR; CONSTANT accepts
// any step >= 0.
double alpha(const AlphaSchedule& sched, int64_t step);

// L_sl + alpha(step) * L_cl.
double joint_loss(double l_sl, double l_cl, const AlphaSchedule& sched, int64_t step);

}  // namespace simseg
