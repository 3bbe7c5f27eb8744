// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. `acceptance` runs all of them; `acceptance N` runs one.
// Each prints a single PASS/FAIL line, followed by indented detail lines.
#include "flexcode/errors.hpp"
#include "flexcode/latency.hpp"
#include "flexcode/lrc.hpp"
#include "flexcode/mds.hpp"
#include "flexcode/msr.hpp"
#include "flexcode/philox.hpp"
#include "flexcode/pmds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace flexcode;

namespace {

struct Outcome {
    bool ok = true;
    std::vector<std::string> details;
    void check(bool cond, const std::string& what) {
        if (!cond) ok = false;
        details.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(r), true);
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask[i]) s.push_back(i);
        out.push_back(s);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

std::vector<Symbol> random_info(Philox4x32& rng, std::size_t count, std::size_t width, const Field& f) {
    std::vector<Symbol> info(count, Symbol(width));
    for (auto& s : info)
        for (auto& e : s) e = (std::uint64_t{rng()} << 32 | rng()) % f.order();
    return info;
}

/// Decodes every R_j-subset at every layer; returns the number of failures.
std::size_t exhaustive_layers(const LayeredCode& code, const std::vector<Symbol>& info, std::size_t& checked) {
    const auto arr = layered_encode(info, code);
    const auto& p = code.plan.profile;
    std::size_t bad = 0;
    for (std::size_t j = 1; j <= p.tuples.size(); ++j) {
        const auto& t = p.tuples[j - 1];
        for (const auto& s : subsets(p.n, t.R)) {
            ++checked;
            try {
                if (layered_decode(read_nodes(arr, s, t.ell), j, code) != info) ++bad;
            } catch (const std::exception&) {
                ++bad;
            }
        }
    }
    return bad;
}

Outcome criterion1() {
    Outcome o;
    Philox4x32 rng(101, 0);
    {
        const auto code = make_fig1_code();
        std::size_t checked = 0;
        const auto bad = exhaustive_layers(code, random_info(rng, 6, 1, *Field::make(5, 1)), checked);
        o.check(bad == 0, "Fig. 1 fixture (4,2,3) over GF(5): " + std::to_string(checked) + " subsets, " +
                              std::to_string(bad) + " failures");
        const std::vector<Symbol> zeros(6, Symbol{0}), fours(6, Symbol{4});
        std::size_t c2 = 0;
        o.check(exhaustive_layers(code, zeros, c2) == 0 && exhaustive_layers(code, fours, c2) == 0,
                "Fig. 1 fixture: all-zero and all-four messages");
    }
    {
        const auto p = make_profile(Family::Mds, 4, {{3, 2}, {2, 3}});
        const auto field = default_mds_field(p);
        const auto code = make_flex_mds(p, field);
        std::size_t checked = 0;
        const auto bad = exhaustive_layers(code, random_info(rng, 6, 1, *field), checked);
        o.check(bad == 0, "(4,2,3) over " + field->name() + ": " + std::to_string(checked) + " subsets, " +
                              std::to_string(bad) + " failures");
    }
    {
        const auto p = make_profile(Family::Mds, 6, {{4, 3}, {3, 4}, {2, 6}});
        const auto field = default_mds_field(p);
        const auto code = make_flex_mds(p, field);
        std::size_t checked = 0, bad = 0;
        for (int t = 0; t < 10; ++t) bad += exhaustive_layers(code, random_info(rng, 12, 1, *field), checked);
        o.check(bad == 0, "(6,2,6) over " + field->name() + ", 10 messages: " + std::to_string(checked) +
                              " subset decodes, " + std::to_string(bad) + " failures");
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto code = make_example3_code();
    o.check(code.layout.field->order() == 16 && code.layout.r == 2, "(12,4,3,2) code over GF(2^4), r = 2");
    Philox4x32 rng(102, 0);
    const auto info = random_info(rng, 12, 1, *code.layout.field);
    const auto arr = layered_encode(info, code.layered);
    std::size_t local_ok = 0;
    for (std::size_t node = 0; node < 12; ++node) {
        const auto rep = local_repair(arr, node, code);
        std::vector<Elem> want;
        for (const auto& s : arr.node(node)) want.push_back(s[0]);
        bool in_group = rep.helpers.size() == 2;
        for (auto h : rep.helpers) in_group = in_group && code.layout.group_of_node(h) == code.layout.group_of_node(node);
        if (in_group && rep.symbols == want) ++local_ok;
    }
    o.check(local_ok == 12, "locality: " + std::to_string(local_ok) + "/12 nodes repaired from exactly 2 in-group nodes");
    for (std::size_t j = 1; j <= 2; ++j) {
        const auto& t = code.layered.plan.profile.tuples[j - 1];
        std::size_t count = 0, bad = 0;
        for (const auto& s : subsets(12, t.R)) {
            ++count;
            try {
                if (layered_decode(read_nodes(arr, s, t.ell), j, code.layered) != info) ++bad;
            } catch (const std::exception&) {
                ++bad;
            }
        }
        o.check(bad == 0, "(R,l) = (" + std::to_string(t.R) + "," + std::to_string(t.ell) + "): " +
                              std::to_string(count) + " subsets, " + std::to_string(bad) + " failures");
    }
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto code = make_table3_code();
    const auto& p = code.plan.profile;
    o.note("Gabidulin (N, K) = (" + std::to_string(code.gab.N) + ", " + std::to_string(code.K()) + ") over " +
           code.gab.field->name() + ", row codes over " + code.fq->name());
    Philox4x32 rng(103, 0);
    std::vector<Elem> u;
    for (const auto& s : random_info(rng, code.K(), 1, *code.gab.field)) u.push_back(s[0]);
    const auto arr = flex_pmds_encode(u, code);
    for (std::size_t J = 1; J <= 2; ++J) {
        const std::size_t rows = p.tuples[J - 1].ell;
        const std::size_t max_nodes = p.n - p.tuples[J - 1].k;
        const std::size_t cells = rows * p.n;
        auto reads_without = [&](const std::vector<bool>& erased) {
            SymbolReads s;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < p.n; ++c)
                    if (!erased[r * p.n + c]) s[{r, c}] = arr.at(r, c)[0];
            return s;
        };
        std::size_t within = 0, within_bad = 0, over = 0, over_bad = 0;
        for (std::size_t m = 0; m <= max_nodes; ++m)
            for (const auto& nodes : subsets(p.n, m)) {
                std::vector<bool> base(cells, false);
                for (auto c : nodes)
                    for (std::size_t r = 0; r < rows; ++r) base[r * p.n + c] = true;
                std::vector<std::size_t> rest;
                for (std::size_t i = 0; i < cells; ++i)
                    if (!base[i]) rest.push_back(i);
                for (std::size_t extra = 0; extra <= p.symbol_erasures + 1; ++extra)
                    for (const auto& pick : subsets(rest.size(), extra)) {
                        auto erased = base;
                        for (auto i : pick) erased[rest[i]] = true;
                        const bool in_budget = extra <= p.symbol_erasures;
                        // One extra symbol is only over budget when every node erasure is used.
                        if (!in_budget && m != max_nodes) continue;
                        bool decoded = false, correct = false;
                        try {
                            correct = flex_pmds_decode(reads_without(erased), J, code) == u;
                            decoded = true;
                        } catch (const DecodeError&) {
                        }
                        if (in_budget) {
                            ++within;
                            if (!correct) ++within_bad;
                        } else {
                            ++over;
                            if (decoded) ++over_bad;
                        }
                    }
            }
        // A whole extra node is also over budget.
        for (const auto& nodes : subsets(p.n, max_nodes + 1)) {
            std::vector<bool> erased(cells, false);
            for (auto c : nodes)
                for (std::size_t r = 0; r < rows; ++r) erased[r * p.n + c] = true;
            ++over;
            try {
                flex_pmds_decode(reads_without(erased), J, code);
                ++over_bad;
            } catch (const DecodeError&) {
            }
        }
        o.check(within_bad == 0, "J = " + std::to_string(J) + ": " + std::to_string(within) +
                                     " patterns within budget, " + std::to_string(within_bad) + " failures");
        o.check(over_bad == 0, "J = " + std::to_string(J) + ": " + std::to_string(over) +
                                   " patterns one erasure over budget, " + std::to_string(over_bad) + " not rejected");
        // Arbitrary heavier patterns: a result, when returned, must be exact.
        Philox4x32 prng(104, J);
        std::size_t wrong = 0, sampled = 0;
        for (int t = 0; t < 3000; ++t) {
            std::vector<bool> erased(cells, false);
            const std::size_t e = max_nodes * rows + p.symbol_erasures + 1 + prng() % 4;
            for (std::size_t k = 0; k < e;) {
                const std::size_t i = prng() % cells;
                if (!erased[i]) erased[i] = true, ++k;
            }
            ++sampled;
            try {
                if (flex_pmds_decode(reads_without(erased), J, code) != u) ++wrong;
            } catch (const DecodeError&) {
            }
        }
        o.check(wrong == 0, "J = " + std::to_string(J) + ": " + std::to_string(sampled) +
                                " random over-budget patterns, " + std::to_string(wrong) + " silent mis-decodes");
    }
    return o;
}

Outcome criterion4() {
    Outcome o;
    const auto code = make_example4_code();
    const auto rep = audit_msr(code);
    o.check(rep.rank_condition, "rank condition on H_1, H_2, H_3 with S_1..S_4 (L = 2 at i = *, 1 otherwise)");
    o.check(rep.mds_exhaustive, "every inner code H_g is MDS");
    o.check(rep.condition1, "Condition 1 (distinct coefficients per diagonal)");
    for (std::size_t i = 0; i < rep.violations.size() && i < 8; ++i) o.note(rep.violations[i]);
    if (rep.violations.size() > 8) o.note("... " + std::to_string(rep.violations.size() - 8) + " more violations");

    Philox4x32 rng(105, 0);
    const auto info = random_info(rng, 6, 2, *code.field);
    const auto arr = layered_encode(info, code.layered);
    for (std::size_t star = 0; star < 4; ++star) {
        std::string what = "repair of node " + std::to_string(star + 1) + ": ";
        try {
            const auto r = msr_repair(arr, star, code);
            const bool exact = r.symbols == arr.node(star);
            o.check(exact && r.symbols_transferred == 9,
                    what + std::to_string(r.symbols_transferred) + " sub-symbols transferred (naive " +
                        std::to_string(r.naive_symbols) + ", bound 9)" + (exact ? "" : ", wrong contents"));
        } catch (const std::exception& e) {
            o.check(false, what + e.what());
        }
    }
    for (std::size_t j = 1; j <= 2; ++j) {
        const auto& t = code.layered.plan.profile.tuples[j - 1];
        std::size_t count = 0, bad = 0;
        for (const auto& s : subsets(4, t.R)) {
            ++count;
            try {
                if (layered_decode(read_nodes(arr, s, t.ell), j, code.layered) != info) ++bad;
            } catch (const std::exception&) {
                ++bad;
            }
        }
        o.check(bad == 0, "flexible decode at (k,l) = (" + std::to_string(t.R) + "," + std::to_string(t.ell) + "): " +
                              std::to_string(count) + " subsets, " + std::to_string(bad) + " failures");
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    const auto code = make_flex_msr(make_profile(Family::Msr, 4, {{3, 2}, {2, 3}}), CoefficientStrategy::PerLayer);
    o.note("E = " + code.spec->E->name() + ", F = " + code.field->name() + ", L = " + std::to_string(code.L) + ", " +
           std::to_string(code.table->count) + " coset representatives");
    const auto rep = audit_msr(code);
    o.check(rep.vandermonde_distinct, "MDS by Vandermonde distinctness");
    o.check(rep.mds_exhaustive, "MDS by exhaustive erasure decoding (" + std::to_string(rep.subsets_checked) + " erasure sets)");
    o.check(rep.rank_condition, "rank condition for all columns");
    o.check(rep.condition1, "Condition 1");
    o.check(rep.structure, "extra-parity columns copy their targets");
    return o;
}

Outcome criterion6() {
    Outcome o;
    const std::vector<AccessLayer> layers{{15, 4}, {12, 5}};
    std::vector<double> ts;
    for (int i = 0; i <= 10; ++i) ts.push_back(0.005 * i);
    const std::size_t trials = 1000000;
    const auto mc = monte_carlo_sweep(layers, 16, 1.0, ts, trials, 2024, 8);
    double worst_z = 0, peak = -1, peak_t = 0;
    bool dominates = true;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto c = expected_flexible_2layer(layers[0], layers[1], LatencyModel{16, 1.0, ts[i]});
        worst_z = std::max(worst_z, std::abs(mc[i].mean_flexible - c.e_flexible) / mc[i].se_flexible);
        worst_z = std::max(worst_z, std::abs(mc[i].mean_fixed[0] - c.e_fixed1) / mc[i].se_fixed[0]);
        worst_z = std::max(worst_z, std::abs(mc[i].mean_fixed[1] - c.e_fixed2) / mc[i].se_fixed[1]);
        if (mc[i].dominance_violations || c.e_flexible > c.e_fixed1 || c.e_flexible > c.e_fixed2) dominates = false;
        if (c.savings_pct() > peak) peak = c.savings_pct(), peak_t = ts[i];
    }
    o.check(worst_z <= 4, fmt("closed form vs Monte Carlo (10^6 trials, 11 points): max |diff| = %.2f SE", worst_z));
    o.check(dominates, "flexible curve dominates both fixed curves pointwise (closed form and every trial)");
    o.check(peak >= 2 && peak <= 5,
            fmt("peak savings vs better fixed code on [0, 0.05]: %.4f%% at t_trans = %.3f (band 2%%..5%%)", peak, peak_t));
    // Where the band is reached, for the record.
    double wide_peak = 0, wide_t = 0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = 0.0005 * i;
        const auto c = expected_flexible_2layer(layers[0], layers[1], LatencyModel{16, 1.0, t});
        if (c.savings_pct() > wide_peak) wide_peak = c.savings_pct(), wide_t = t;
    }
    o.note(fmt("over t_trans in [0, 0.5] the peak is %.3f%% at t_trans = %.4f", wide_peak, wide_t));
    return o;
}

Outcome criterion7() {
    Outcome o;
    const std::vector<AccessLayer> layers{{5, 12}, {4, 15}};
    const std::size_t trials = 100000;
    struct Case {
        std::string name;
        DelayDistribution d;
        double task;
    };
    const std::vector<Case> cases{{"exponential(1)", DelayDistribution::exponential(1.0), 0.08},
                                  {"shifted exponential(1, 1)", DelayDistribution::shifted_exponential(1.0, 1.0), 0.08}};
    for (const auto& c : cases) {
        const auto r = simulate_coded_compute(layers, 8, c.d, c.task, trials, 7);
        o.check(r.dominance_violations == 0 && r.trials == trials,
                c.name + ": flexible <= both fixed in " + std::to_string(trials - r.dominance_violations) + "/" +
                    std::to_string(trials) + " trials");
        const double best = std::min(r.mean_fixed[0], r.mean_fixed[1]);
        o.check(r.mean_flexible < best,
                c.name + fmt(": mean completion fixed %.4f / %.4f, flexible %.4f (%.2f%% better)", r.mean_fixed[0],
                             r.mean_fixed[1], r.mean_flexible, 100 * (best - r.mean_flexible) / best));
    }
    o.note("the 6% cluster measurement is not reproducible here; dominance and a positive gain stand in for it");
    return o;
}

Outcome criterion8() {
    Outcome o;
    double worst = 0;
    std::size_t points = 0;
    for (double x : {0.01, 0.2, 0.5, 0.8, 0.99})
        for (double a : {0.5, 1.0, 3.0, 7.5, 20.0})
            for (double b : {0.7, 2.0, 5.0, 16.0}) {
                const double lhs = reg_inc_beta(x, b, a + 1);
                const double rhs = reg_inc_beta(x, b, a) + std::pow(x, b) * std::pow(1 - x, a) / (a * beta_fn(b, a));
                worst = std::max(worst, std::abs(lhs - rhs));
                ++points;
            }
    o.check(points == 100 && worst <= 1e-9, fmt("I_x(b,a+1) = I_x(b,a) + x^b(1-x)^a/(a B(b,a)) on %.0f points: max error %.2e",
                                                 static_cast<double>(points), worst));
    return o;
}

struct Criterion {
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria{
    {"flexible MDS exhaustive decoding", 10, criterion1},
    {"flexible LRC Example 3", 60, criterion2},
    {"flexible PMDS Table III erasure patterns", 120, criterion3},
    {"MSR Example 4 fixture", 5, criterion4},
    {"MSR Ye-Barg audit n=4 k=2", 60, criterion5},
    {"latency closed form vs Monte Carlo", 60, criterion6},
    {"coded-compute dominance", 30, criterion7},
    {"incomplete beta identity", 1, criterion8},
};

bool run_one(std::size_t i) {
    const auto& c = kCriteria[i - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(secs < c.budget_s, fmt("runtime %.2f s (limit %.0f s)", secs, c.budget_s));
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << i << ": " << c.title << "\n";
    for (const auto& d : o.details) std::cout << "  " << d << "\n";
    std::cout.flush();
    return o.ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::cerr << "usage: acceptance [criterion 1-8]\n";
        return 2;
    }
    if (argc == 2) {
        const int i = std::atoi(argv[1]);
        if (i < 1 || i > static_cast<int>(kCriteria.size())) {
            std::cerr << "criterion must be 1-" << kCriteria.size() << "\n";
            return 2;
        }
        return run_one(static_cast<std::size_t>(i)) ? 0 : 1;
    }
    bool all = true;
    for (std::size_t i = 1; i <= kCriteria.size(); ++i) all = run_one(i) && all;
    return all ? 0 : 1;
}
