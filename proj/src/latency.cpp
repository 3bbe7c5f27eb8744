// SPDX-License-Identifier: Apache-2.0
#include "flexcode/latency.hpp"

#include "flexcode/philox.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace flexcode {

namespace {

struct Acc {
    long double sum = 0;
    long double sumsq = 0;
    void add(double v) {
        sum += v;
        sumsq += static_cast<long double>(v) * v;
    }
    void merge(const Acc& o) {
        sum += o.sum;
        sumsq += o.sumsq;
    }
    double mean(std::size_t n) const { return static_cast<double>(sum / n); }
    double se(std::size_t n) const {
        if (n < 2) return 0.0;
        const long double m = sum / n;
        const long double var = std::max<long double>(0, (sumsq - n * m * m) / (n - 1));
        return static_cast<double>(std::sqrt(var / n));
    }
};

void check_layers(const std::vector<AccessLayer>& layers, std::size_t n) {
    if (layers.empty()) throw std::invalid_argument("at least one layer required");
    for (const auto& l : layers)
        if (l.R < 1 || l.R > n) throw std::invalid_argument("R must lie in [1, n]");
}

// Splits `trials` over `streams` and calls body(stream, count, rng) in stream order.
template <class Body>
void for_streams(std::size_t trials, std::uint64_t seed, std::size_t streams, Body&& body) {
    if (streams == 0) throw std::invalid_argument("streams must be positive");
    for (std::size_t s = 0; s < streams; ++s) {
        const std::size_t count = trials / streams + (s < trials % streams ? 1 : 0);
        Philox4x32 rng(seed, s);
        body(s, count, rng);
    }
}

} // namespace

double reg_inc_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("reg_inc_beta: a and b must be positive");
    return boost::math::ibeta(a, b, x);
}

double beta_fn(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("beta: a and b must be positive");
    return boost::math::beta(a, b);
}

double expected_fixed(std::size_t R, std::size_t ell, const LatencyModel& model) {
    if (R < 1 || R > model.n) throw std::invalid_argument("R must lie in [1, n]");
    if (!(model.t_pos > 0.0) || model.t_trans < 0.0) throw std::invalid_argument("need t_pos > 0, t_trans >= 0");
    return static_cast<double>(R) / static_cast<double>(model.n + 1) * model.t_pos +
           static_cast<double>(ell) * model.t_trans;
}

TwoLayerLatency expected_flexible_2layer(AccessLayer first, AccessLayer second, const LatencyModel& model) {
    if (first.R <= second.R || first.ell >= second.ell)
        throw std::invalid_argument("two-layer latency needs R_1 > R_2 and l_1 < l_2");
    TwoLayerLatency out;
    out.e_fixed1 = expected_fixed(first.R, first.ell, model);
    out.e_fixed2 = expected_fixed(second.R, second.ell, model);
    const double n1 = static_cast<double>(model.n + 1);
    const double a = static_cast<double>(first.R - second.R);
    const double b = n1 - a;
    out.x = static_cast<double>(second.ell - first.ell) * model.t_trans / model.t_pos;
    if (out.x >= 1.0) {
        out.degenerate = true;
        out.saving_vs1 = 0.0;
        out.saving_vs2 = out.e_fixed2 - out.e_fixed1;
        out.e_flexible = out.e_fixed1;
        return out;
    }
    const double x = out.x;
    const double term = model.t_pos * (a / n1) * std::pow(x, a) * std::pow(1.0 - x, b) / (a * beta_fn(a, b));
    out.saving_vs1 = (out.e_fixed1 - out.e_fixed2) * reg_inc_beta(1.0 - x, b, a) + term;
    out.saving_vs2 = (out.e_fixed2 - out.e_fixed1) * reg_inc_beta(x, a, b) + term;
    out.e_flexible = out.e_fixed1 - out.saving_vs1;
    return out;
}

std::vector<MonteCarloResult> monte_carlo_sweep(const std::vector<AccessLayer>& layers, std::size_t n, double t_pos,
                                                const std::vector<double>& t_values, std::size_t trials,
                                                std::uint64_t seed, std::size_t streams) {
    check_layers(layers, n);
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    const std::size_t a = layers.size();
    const std::size_t nt = t_values.size();
    std::vector<std::vector<Acc>> fixed(nt, std::vector<Acc>(a)), saving(nt, std::vector<Acc>(a));
    std::vector<Acc> flex(nt);
    std::vector<std::size_t> violations(nt, 0);
    std::vector<double> pos(n), order(a), tj(a);

    for_streams(trials, seed, streams, [&](std::size_t, std::size_t count, Philox4x32& rng) {
        for (std::size_t trial = 0; trial < count; ++trial) {
            for (auto& p : pos) p = rng.uniform() * t_pos;
            std::sort(pos.begin(), pos.end());
            for (std::size_t j = 0; j < a; ++j) order[j] = pos[layers[j].R - 1];
            for (std::size_t t = 0; t < nt; ++t) {
                double best = 0;
                for (std::size_t j = 0; j < a; ++j) {
                    tj[j] = order[j] + static_cast<double>(layers[j].ell) * t_values[t];
                    best = j == 0 ? tj[j] : std::min(best, tj[j]);
                }
                flex[t].add(best);
                bool dominated = true;
                for (std::size_t j = 0; j < a; ++j) {
                    fixed[t][j].add(tj[j]);
                    saving[t][j].add(tj[j] - best);
                    dominated = dominated && best <= tj[j];
                }
                if (!dominated) ++violations[t];
            }
        }
    });

    std::vector<MonteCarloResult> out(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        auto& r = out[t];
        r.trials = trials;
        r.seed = seed;
        r.streams = streams;
        r.mean_flexible = flex[t].mean(trials);
        r.se_flexible = flex[t].se(trials);
        r.dominance_violations = violations[t];
        for (std::size_t j = 0; j < a; ++j) {
            r.mean_fixed.push_back(fixed[t][j].mean(trials));
            r.se_fixed.push_back(fixed[t][j].se(trials));
            r.mean_saving.push_back(saving[t][j].mean(trials));
            r.se_saving.push_back(saving[t][j].se(trials));
        }
    }
    return out;
}

MonteCarloResult monte_carlo(const std::vector<AccessLayer>& layers, const LatencyModel& model, std::size_t trials,
                             std::uint64_t seed, std::size_t streams) {
    return monte_carlo_sweep(layers, model.n, model.t_pos, {model.t_trans}, trials, seed, streams).front();
}

std::vector<SweepRow> latency_sweep(AccessLayer first, AccessLayer second, std::size_t n, double t_pos,
                                    const std::vector<double>& t_values) {
    std::vector<SweepRow> rows;
    for (double t : t_values) {
        const auto r = expected_flexible_2layer(first, second, {n, t_pos, t});
        rows.push_back({t, r.e_fixed1, r.e_fixed2, r.e_flexible, r.savings_pct()});
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "t_trans,E_fixed_1,E_fixed_2,E_flexible,savings_pct_vs_best_fixed\n";
    const auto old = os.precision(12);
    for (const auto& r : rows)
        os << r.t_trans << ',' << r.e_fixed1 << ',' << r.e_fixed2 << ',' << r.e_flexible << ',' << r.savings_pct
           << '\n';
    os.precision(old);
}

DelayDistribution DelayDistribution::uniform(double lo, double hi) {
    if (!(hi >= lo)) throw std::invalid_argument("uniform delay needs hi >= lo");
    DelayDistribution d;
    d.kind = Kind::Uniform;
    d.a = lo;
    d.b = hi;
    return d;
}

DelayDistribution DelayDistribution::exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("exponential rate must be positive");
    DelayDistribution d;
    d.kind = Kind::Exponential;
    d.a = rate;
    return d;
}

DelayDistribution DelayDistribution::shifted_exponential(double shift, double rate) {
    if (!(rate > 0) || shift < 0) throw std::invalid_argument("shifted exponential needs rate > 0, shift >= 0");
    DelayDistribution d;
    d.kind = Kind::ShiftedExponential;
    d.a = shift;
    d.b = rate;
    return d;
}

DelayDistribution DelayDistribution::discrete(std::vector<double> values, std::vector<double> probs) {
    if (values.empty() || values.size() != probs.size()) throw std::invalid_argument("discrete delay: bad support");
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("discrete delay: probabilities must sum to 1");
    DelayDistribution d;
    d.kind = Kind::Discrete;
    d.values = std::move(values);
    d.probs = std::move(probs);
    return d;
}

double DelayDistribution::sample(double u) const {
    switch (kind) {
    case Kind::Uniform: return a + (b - a) * u;
    case Kind::Exponential: return -std::log1p(-u) / a;
    case Kind::ShiftedExponential: return a - std::log1p(-u) / b;
    case Kind::Discrete: {
        double c = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            c += probs[i];
            if (u < c) return values[i];
        }
        return values.back();
    }
    }
    return 0.0;
}

ComputeResult simulate_coded_compute(const std::vector<AccessLayer>& layers, std::size_t n,
                                     const DelayDistribution& delay, double task_time, std::size_t trials,
                                     std::uint64_t seed) {
    check_layers(layers, n);
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    const std::size_t a = layers.size();
    std::vector<Acc> fixed(a);
    Acc flex;
    ComputeResult out;
    std::vector<double> d(n);
    Philox4x32 rng(seed, 0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (auto& v : d) v = delay.sample(rng.uniform());
        std::sort(d.begin(), d.end());
        double best = 0;
        std::vector<double> tj(a);
        for (std::size_t j = 0; j < a; ++j) {
            tj[j] = d[layers[j].R - 1] + static_cast<double>(layers[j].ell) * task_time;
            best = j == 0 ? tj[j] : std::min(best, tj[j]);
        }
        flex.add(best);
        for (std::size_t j = 0; j < a; ++j) {
            fixed[j].add(tj[j]);
            if (best > tj[j]) {
                ++out.dominance_violations;
                break;
            }
        }
    }
    out.trials = trials;
    out.seed = seed;
    out.mean_flexible = flex.mean(trials);
    out.se_flexible = flex.se(trials);
    for (std::size_t j = 0; j < a; ++j) {
        out.mean_fixed.push_back(fixed[j].mean(trials));
        out.se_fixed.push_back(fixed[j].se(trials));
    }
    return out;
}

} // namespace flexcode
