// SPDX-License-Identifier: Apache-2.0
//
// Access latency under the HDD model: node i is ready after a positioning
// time X_i ~ Uniform(0, t_pos) and reads l symbols in l * t_trans, so the
// fixed (R, l) code finishes at U_R + l t_trans (U_R the R-th order
// statistic) and a flexible code at min_j T_j.

#pragma once

#include "flexcode/layered.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace flexcode {

struct LatencyModel {
    std::size_t n = 0;
    double t_pos = 1.0;
    double t_trans = 0.0;
};

/// (R, l) pair of one layer.
struct AccessLayer {
    std::size_t R = 0;
    std::size_t ell = 0;
};

/// Regularized incomplete beta I_x(a, b). Throws std::domain_error outside
/// 0 <= x <= 1, a, b > 0.
double reg_inc_beta(double x, double a, double b);

/// Complete beta function B(a, b).
double beta_fn(double a, double b);

/// R/(n+1) t_pos + l t_trans.
double expected_fixed(std::size_t R, std::size_t ell, const LatencyModel& model);

struct TwoLayerLatency {
    double e_fixed1 = 0; // E[T_1]
    double e_fixed2 = 0; // E[T_2]
    double e_flexible = 0;
    double saving_vs1 = 0; // E[T_1 - T_12]
    double saving_vs2 = 0; // E[T_2 - T_12]
    double x = 0;          // (l_2 - l_1) t_trans / t_pos
    bool degenerate = false; // x >= 1: T_12 = T_1 always

    double best_fixed() const { return e_fixed1 < e_fixed2 ? e_fixed1 : e_fixed2; }
    /// Relative saving against the better fixed code, in percent.
    double savings_pct() const { return 100.0 * (best_fixed() - e_flexible) / best_fixed(); }
};

/// Closed form for R_1 > R_2, l_1 < l_2 with dU = U_{R_1} - U_{R_2} ~ t_pos Beta(a, n+1-a), a = R_1 - R_2.
TwoLayerLatency expected_flexible_2layer(AccessLayer first, AccessLayer second, const LatencyModel& model);

struct MonteCarloResult {
    std::vector<double> mean_fixed;  // per layer
    std::vector<double> se_fixed;
    double mean_flexible = 0;
    double se_flexible = 0;
    std::vector<double> mean_saving; // E[T_j - T_flex]
    std::vector<double> se_saving;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t streams = 1;
    std::size_t dominance_violations = 0; // trials where T_flex > some T_j
};

/// Shared positioning draws per trial across all layers. Trials are split
/// into `streams` Philox streams keyed by (seed, stream); results depend
/// only on (seed, trials, streams).
MonteCarloResult monte_carlo(const std::vector<AccessLayer>& layers, const LatencyModel& model, std::size_t trials,
                             std::uint64_t seed, std::size_t streams = 1);

/// Same draws reused for every t_trans in `t_values`: one result per value.
std::vector<MonteCarloResult> monte_carlo_sweep(const std::vector<AccessLayer>& layers, std::size_t n, double t_pos,
                                                const std::vector<double>& t_values, std::size_t trials,
                                                std::uint64_t seed, std::size_t streams = 1);

struct SweepRow {
    double t_trans = 0;
    double e_fixed1 = 0;
    double e_fixed2 = 0;
    double e_flexible = 0;
    double savings_pct = 0;
};

std::vector<SweepRow> latency_sweep(AccessLayer first, AccessLayer second, std::size_t n, double t_pos,
                                    const std::vector<double>& t_values);

/// Columns t_trans,E_fixed_1,E_fixed_2,E_flexible,savings_pct_vs_best_fixed.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct DelayDistribution {
    enum class Kind { Uniform, Exponential, ShiftedExponential, Discrete };
    Kind kind = Kind::Exponential;
    double a = 1.0; // uniform low / rate / shift
    double b = 1.0; // uniform high / - / rate
    std::vector<double> values; // discrete support
    std::vector<double> probs;

    static DelayDistribution uniform(double lo, double hi);
    static DelayDistribution exponential(double rate);
    static DelayDistribution shifted_exponential(double shift, double rate);
    static DelayDistribution discrete(std::vector<double> values, std::vector<double> probs);

    double sample(double u) const; // inverse CDF at u in (0, 1)
};

struct ComputeResult {
    std::vector<double> mean_fixed;
    std::vector<double> se_fixed;
    double mean_flexible = 0;
    double se_flexible = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t dominance_violations = 0;
};

/// Coded matrix-vector multiplication: worker i starts after D_i and needs
/// task_time per task, so R_j workers have l_j tasks done at the R_j-th
/// smallest D_i + l_j task_time. Flexible completion is the min over j.
ComputeResult simulate_coded_compute(const std::vector<AccessLayer>& layers, std::size_t n,
                                     const DelayDistribution& delay, double task_time, std::size_t trials,
                                     std::uint64_t seed);

} // namespace flexcode
