// SPDX-License-Identifier: Apache-2.0
#include "flexcode/cli.hpp"

#include "flexcode/codec.hpp"
#include "flexcode/errors.hpp"
#include "flexcode/latency.hpp"
#include "flexcode/philox.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace flexcode {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "flexcode-manifest";
constexpr const char* kManifestName = "manifest.json";

json read_json(const fs::path& path) {
    const auto bytes = read_file(path);
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const json& doc) {
    const std::string text = doc.dump(2) + "\n";
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string join(const std::vector<std::size_t>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

struct Stored {
    fs::path dir;
    json manifest;
    FlexCode code;
    std::size_t stripes = 0;
};

Stored load_manifest(const fs::path& path) {
    Stored s{path.parent_path(), read_json(path), {}, 0};
    const auto& m = s.manifest;
    if (!m.is_object() || m.value("format", "") != kManifestFormat) throw IoError(path.string() + ": not a manifest");
    s.code = FlexCode::build(config_from_json(m.at("config")));
    if (field_from_json(m.at("field")) != s.code.field_spec())
        throw IoError(path.string() + ": field in manifest does not match the rebuilt code");
    s.stripes = m.at("stripes").get<std::size_t>();
    return s;
}

/// node -> all symbols of that node (stripes x ell).
using Columns = std::map<std::size_t, std::vector<Symbol>>;

Shard make_shard(const FlexCode& code, std::size_t node, std::size_t stripes, const std::vector<Symbol>& column) {
    Shard sh;
    sh.header.profile = code.plan().profile;
    sh.header.field = code.field_spec();
    sh.header.node = static_cast<std::uint32_t>(node);
    sh.header.block = static_cast<std::uint32_t>(code.block());
    sh.header.stripes = static_cast<std::uint32_t>(stripes);
    sh.payload = pack_symbols(column, *code.field());
    return sh;
}

/// Loads shards, checking they belong to the manifest's code. `want`
/// filters by node index; `exclude` is never loaded.
Columns load_shards(const Stored& st, const std::vector<fs::path>& explicit_paths, bool skip_corrupt,
                    const std::function<bool(std::size_t)>& want, std::ostream& out) {
    const auto& plan = st.code.plan();
    std::vector<std::pair<std::optional<std::size_t>, fs::path>> candidates;
    if (explicit_paths.empty()) {
        for (const auto& e : st.manifest.at("shards")) {
            const auto node = e.at("node").get<std::size_t>();
            const fs::path p = st.dir / e.at("file").get<std::string>();
            if (want(node) && fs::exists(p)) candidates.emplace_back(node, p);
        }
    } else {
        for (const auto& p : explicit_paths) candidates.emplace_back(std::nullopt, p);
    }
    Columns cols;
    for (const auto& [hint, path] : candidates) {
        Shard sh;
        try {
            sh = read_shard(path);
        } catch (const IoError& e) {
            if (!skip_corrupt) throw;
            out << "skipping corrupt shard: " << e.what() << "\n";
            continue;
        }
        const auto& h = sh.header;
        if (!(h.profile == plan.profile) || !(h.field == st.code.field_spec()) || h.block != st.code.block() ||
            h.stripes != st.stripes)
            throw IoError(path.string() + ": shard belongs to a different code or file");
        if (h.node >= plan.n()) throw IoError(path.string() + ": node index out of range");
        if ((hint && *hint != h.node) || !want(h.node)) continue;
        if (cols.count(h.node)) throw std::invalid_argument("node " + std::to_string(h.node) + " given twice");
        auto syms = unpack_symbols(sh.payload, st.code.block(), *st.code.field());
        if (syms.size() != st.stripes * plan.total_rows()) throw IoError(path.string() + ": wrong payload size");
        cols.emplace(h.node, std::move(syms));
    }
    return cols;
}

NodeReads stripe_reads(const Columns& cols, const std::vector<std::size_t>& nodes, std::size_t stripe,
                       std::size_t ell, std::size_t rows) {
    NodeReads reads;
    for (auto node : nodes) {
        const auto& c = cols.at(node);
        reads[node] = std::vector<Symbol>(c.begin() + static_cast<std::ptrdiff_t>(stripe * ell),
                                          c.begin() + static_cast<std::ptrdiff_t>(stripe * ell + rows));
    }
    return reads;
}

/// Decodes every stripe from the first R_j available nodes.
std::vector<std::vector<Elem>> decode_stripes(const Stored& st, const Columns& cols, std::size_t j,
                                              std::vector<std::size_t>& used) {
    const auto& plan = st.code.plan();
    const auto& t = plan.profile.tuples.at(j - 1);
    used.clear();
    for (const auto& [node, _] : cols) {
        if (used.size() == t.R) break;
        used.push_back(node);
    }
    if (used.size() < t.R)
        throw DecodeError("layer " + std::to_string(j) + " needs " + std::to_string(t.R) + " shards, have " +
                          std::to_string(cols.size()));
    std::vector<std::vector<Elem>> stripes;
    for (std::size_t s = 0; s < st.stripes; ++s)
        stripes.push_back(st.code.decode(stripe_reads(cols, used, s, plan.total_rows(), t.ell), j));
    return stripes;
}

std::size_t pick_layer(const LayerPlan& plan, std::size_t available, std::optional<std::size_t> forced) {
    if (forced) {
        if (*forced < 1 || *forced > plan.layer_count())
            throw std::invalid_argument("layer must lie in [1, " + std::to_string(plan.layer_count()) + "]");
        return *forced;
    }
    const auto j = choose_layer(plan, available);
    if (!j) throw DecodeError("no layer is satisfiable with " + std::to_string(available) + " shards");
    return *j;
}

std::uint64_t random_element(Philox4x32& rng, const Field& f) {
    const std::uint64_t v = (std::uint64_t{rng()} << 32) | rng();
    return v % f.order();
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

/// Every R-subset of [0, n) when there are at most `limit`, else `limit`
/// seeded random subsets.
std::vector<std::vector<std::size_t>> node_subsets(std::size_t n, std::size_t R, std::size_t limit,
                                                   Philox4x32& rng) {
    std::vector<std::vector<std::size_t>> out;
    if (binomial(n, R) <= limit) {
        std::vector<bool> mask(n, false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(R), true);
        do {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < n; ++i)
                if (mask[i]) s.push_back(i);
            out.push_back(std::move(s));
        } while (std::prev_permutation(mask.begin(), mask.end()));
        return out;
    }
    for (std::size_t t = 0; t < limit; ++t) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 0; i < R; ++i) std::swap(perm[i], perm[i + rng() % (n - i)]);
        perm.resize(R);
        std::sort(perm.begin(), perm.end());
        out.push_back(std::move(perm));
    }
    return out;
}

void report(std::ostream& out, bool ok, const std::string& what, bool& all) {
    out << (ok ? "PASS " : "FAIL ") << what << "\n";
    all = all && ok;
}

} // namespace

int run_guarded(const std::function<int()>& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const DecodeError& e) {
        err << "decode error: " << e.what() << "\n";
        return kExitDecode;
    } catch (const SingularMatrixError& e) {
        err << "decode error: " << e.what() << "\n";
        return kExitDecode;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ProfileError& e) {
        err << "invalid profile: " << e.what() << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        err << "invalid document: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::logic_error& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitAuditFailed;
    }
}

std::string shard_file_name(std::size_t node) { return "shard_" + std::to_string(node) + ".flxc"; }

int cmd_encode(const EncodeArgs& args, std::ostream& out) {
    const CodeConfig cfg = config_from_json(read_json(args.profile));
    const FlexCode code = FlexCode::build(cfg);
    const auto& plan = code.plan();
    const auto input = read_file(args.input);
    const auto stripes = bytes_to_stripes(input, code.info_elements(), code.bits_per_element());

    std::vector<std::vector<Symbol>> columns(plan.n());
    for (const auto& info : stripes) {
        const auto arr = code.encode(info);
        for (std::size_t c = 0; c < plan.n(); ++c) {
            auto col = arr.node(c);
            columns[c].insert(columns[c].end(), col.begin(), col.end());
        }
    }
    fs::create_directories(args.out_dir);
    json shards = json::array();
    for (std::size_t c = 0; c < plan.n(); ++c) {
        const Shard sh = make_shard(code, c, stripes.size(), columns[c]);
        write_shard(args.out_dir / shard_file_name(c), sh);
        shards.push_back({{"node", c}, {"file", shard_file_name(c)}, {"payload_crc32", crc32(sh.payload)}});
    }
    json manifest{{"format", kManifestFormat},
                  {"version", kShardVersion},
                  {"config", config_to_json(cfg)},
                  {"profile", profile_to_json(plan.profile)},
                  {"field", field_to_json(code.field_spec())},
                  {"block", code.block()},
                  {"bits_per_element", code.bits_per_element()},
                  {"info_elements", code.info_elements()},
                  {"stripes", stripes.size()},
                  {"input_length", input.size()},
                  {"input_crc32", crc32(input)},
                  {"shards", shards}};
    if (args.seed) manifest["seed"] = *args.seed;
    write_json(args.out_dir / kManifestName, manifest);
    out << "encoded " << input.size() << " bytes as " << to_string(plan.profile.family) << " over "
        << code.field()->name() << ": " << stripes.size() << " stripe(s), " << plan.n() << " shards of "
        << stripes.size() * plan.total_rows() << " symbols in " << args.out_dir.string() << "\n";
    return kExitOk;
}

int cmd_decode(const DecodeArgs& args, std::ostream& out) {
    const Stored st = load_manifest(args.manifest);
    const auto& plan = st.code.plan();
    const Columns cols = load_shards(st, args.shards, args.skip_corrupt, [](std::size_t) { return true; }, out);
    const std::size_t j = pick_layer(plan, cols.size(), args.layer);
    std::vector<std::size_t> used;
    const auto stripes = decode_stripes(st, cols, j, used);
    const auto bytes =
        stripes_to_bytes(stripes, st.manifest.at("bits_per_element").get<std::size_t>(),
                         st.manifest.at("input_length").get<std::size_t>());
    if (crc32(bytes) != st.manifest.at("input_crc32").get<std::uint32_t>())
        throw DecodeError("decoded bytes do not match the recorded checksum");
    write_file(args.output, bytes);
    const auto& t = plan.profile.tuples[j - 1];
    out << "decoded layer " << j << " (R=" << t.R << ", ell=" << t.ell << ") from nodes " << join(used)
        << "; symbols read: " << t.R * t.ell * st.stripes << " (" << t.R * t.ell * st.stripes * st.code.block()
        << " field elements)\n";
    return kExitOk;
}

int cmd_repair(const RepairArgs& args, std::ostream& out) {
    const Stored st = load_manifest(args.manifest);
    const auto& plan = st.code.plan();
    const auto& p = plan.profile;
    if (args.node >= p.n) throw std::invalid_argument("node must lie in [0, " + std::to_string(p.n) + ")");
    const std::size_t star = args.node;
    const std::size_t ell = plan.total_rows();
    std::vector<Symbol> column;

    bool done = false;
    if (const auto* lrc = st.code.lrc()) {
        const std::size_t g = lrc->layout.group_of_node(star);
        auto peer = [&](std::size_t node) { return node != star && lrc->layout.group_of_node(node) == g; };
        const Columns cols = load_shards(st, args.shards, false, peer, out);
        if (cols.size() == lrc->layout.r) {
            std::size_t read = 0;
            for (std::size_t s = 0; s < st.stripes; ++s) {
                std::map<std::size_t, std::vector<Elem>> avail;
                for (const auto& [node, syms] : cols)
                    for (std::size_t r = 0; r < ell; ++r) avail[node].push_back(syms[s * ell + r][0]);
                const auto rep = local_repair(avail, star, *lrc);
                for (Elem e : rep.symbols) column.push_back({e});
                read += rep.symbols_read;
            }
            std::vector<std::size_t> helpers;
            for (const auto& [node, _] : cols) helpers.push_back(node);
            out << "local repair of node " << star << " from group peers " << join(helpers)
                << "; shards read: " << cols.size() << ", symbols read: " << read << "\n";
            done = true;
        } else {
            out << "group of node " << star << " is incomplete; falling back to a full decode\n";
        }
    } else if (const auto* msr = st.code.msr()) {
        const Columns cols = load_shards(st, args.shards, false, [&](std::size_t n) { return n != star; }, out);
        if (cols.size() + 1 != p.n)
            throw DecodeError("MSR repair needs all " + std::to_string(p.n - 1) + " other nodes, have " +
                              std::to_string(cols.size()));
        std::size_t sent = 0, naive = 0;
        for (std::size_t s = 0; s < st.stripes; ++s) {
            CodewordArray arr(ell, p.n, st.code.block());
            for (const auto& [node, syms] : cols)
                for (std::size_t r = 0; r < ell; ++r) arr.at(r, node) = syms[s * ell + r];
            const auto rep = msr_repair(arr, star, *msr);
            column.insert(column.end(), rep.symbols.begin(), rep.symbols.end());
            sent += rep.symbols_transferred;
            naive += rep.naive_symbols;
        }
        const double bound = static_cast<double>(ell * st.code.block() * (p.n - 1) * st.stripes) /
                             static_cast<double>(p.n - p.k);
        out << "MSR repair of node " << star << " from " << cols.size() << " helpers; field symbols transferred: "
            << sent << " (cut-set bound " << bound << ", naive " << naive << ")\n";
        done = true;
    }

    if (!done) {
        const Columns cols = load_shards(st, args.shards, false, [&](std::size_t n) { return n != star; }, out);
        const std::size_t j = pick_layer(plan, cols.size(), std::nullopt);
        std::vector<std::size_t> used;
        const auto stripes = decode_stripes(st, cols, j, used);
        for (const auto& info : stripes) {
            const auto col = st.code.encode(info).node(star);
            column.insert(column.end(), col.begin(), col.end());
        }
        const auto& t = p.tuples[j - 1];
        out << "repaired node " << star << " by decoding layer " << j << " from nodes " << join(used)
            << "; symbols read: " << t.R * t.ell * st.stripes << "\n";
    }

    const fs::path dir = args.out_dir.value_or(st.dir);
    fs::create_directories(dir);
    write_shard(dir / shard_file_name(star), make_shard(st.code, star, st.stripes, column));
    out << "wrote " << (dir / shard_file_name(star)).string() << "\n";
    return kExitOk;
}

int cmd_audit(const AuditArgs& args, std::ostream& out) {
    const CodeConfig cfg = config_from_json(read_json(args.profile));
    const FlexCode code = FlexCode::build(cfg);
    const auto& plan = code.plan();
    const auto& p = plan.profile;
    const Field& f = *code.field();
    Philox4x32 rng(args.seed, 0);
    bool all = true;
    out << "audit of " << to_string(p.family) << " (n=" << p.n << ", k=" << p.k << ", ell=" << p.ell << ") over "
        << f.name() << ", seed " << args.seed << "\n";

    std::vector<Elem> info(code.info_elements());
    for (auto& e : info) e = random_element(rng, f);
    const CodewordArray arr = code.encode(info);

    if (const auto* msr = code.msr()) {
        const auto rep = audit_msr(*msr);
        report(out, rep.vandermonde_distinct, "Vandermonde distinctness", all);
        report(out, rep.mds_exhaustive, "MDS by exhaustive erasure decoding", all);
        report(out, rep.rank_condition, "repair rank condition", all);
        report(out, rep.condition1, "distinct coefficients per parity-check diagonal", all);
        report(out, rep.structure, "extra-parity structure", all);
        for (std::size_t i = 0; i < rep.violations.size() && i < 20; ++i) out << "  " << rep.violations[i] << "\n";
        if (rep.violations.size() > 20) out << "  ... " << rep.violations.size() - 20 << " more\n";
        const double bound = static_cast<double>(p.ell * msr->L * (p.n - 1)) / static_cast<double>(p.n - p.k);
        for (std::size_t star = 0; star < p.n; ++star) {
            std::ostringstream what;
            bool ok = false;
            try {
                const auto r = msr_repair(arr, star, *msr);
                ok = r.symbols == arr.node(star) && static_cast<double>(r.symbols_transferred) <= bound;
                what << "repair node " << star << ": " << r.symbols_transferred << " symbols (bound " << bound
                     << ", naive " << r.naive_symbols << ")";
            } catch (const std::exception& e) {
                what << "repair node " << star << ": " << e.what();
            }
            report(out, ok, what.str(), all);
        }
        return all ? kExitOk : kExitAuditFailed;
    }

    if (const auto* lrc = code.lrc()) {
        bool ok = true;
        for (std::size_t node = 0; node < p.n; ++node) {
            const auto r = local_repair(arr, node, *lrc);
            std::vector<Elem> want;
            for (const auto& s : arr.node(node)) want.push_back(s[0]);
            ok = ok && r.symbols == want && r.helpers.size() == lrc->layout.r;
        }
        report(out, ok, "locality: every node rebuilt from " + std::to_string(lrc->layout.r) + " group peers", all);
    }

    for (std::size_t j = 1; j <= plan.layer_count(); ++j) {
        const auto& t = p.tuples[j - 1];
        const std::size_t rows = plan.layer(j).row_end;
        const auto subsets = node_subsets(p.n, t.R, args.max_subsets, rng);
        std::size_t failures = 0;
        std::size_t rejected_ok = 0;
        for (const auto& nodes : subsets) {
            NodeReads reads = read_nodes(arr, nodes, rows);
            if (const auto* pm = code.pmds()) {
                // Up to s symbol erasures inside the read prefix must decode; one more must be rejected.
                std::vector<std::pair<std::size_t, std::size_t>> cells;
                for (auto node : nodes)
                    for (std::size_t r = 0; r < rows; ++r) cells.emplace_back(r, node);
                for (std::size_t i = 0; i < cells.size(); ++i) std::swap(cells[i], cells[i + rng() % (cells.size() - i)]);
                SymbolReads sr;
                for (const auto& [node, syms] : reads)
                    for (std::size_t r = 0; r < rows; ++r) sr[{r, node}] = syms[r][0];
                for (std::size_t e = 0; e < p.symbol_erasures && e < cells.size(); ++e) sr.erase(cells[e]);
                bool ok = false;
                try {
                    ok = flex_pmds_decode(sr, j, *pm) == info;
                } catch (const DecodeError&) {
                }
                if (!ok) ++failures;
                if (p.symbol_erasures < cells.size()) {
                    sr.erase(cells[p.symbol_erasures]);
                    try {
                        flex_pmds_decode(sr, j, *pm);
                    } catch (const DecodeError&) {
                        ++rejected_ok;
                    }
                }
                continue;
            }
            bool ok = false;
            try {
                ok = code.decode(reads, j) == info;
            } catch (const DecodeError&) {
            }
            if (!ok) ++failures;
        }
        std::ostringstream what;
        what << "layer " << j << " (R=" << t.R << ", ell=" << t.ell << "): " << subsets.size() - failures << "/"
             << subsets.size() << " node subsets decode";
        if (code.pmds()) what << " with " << p.symbol_erasures << " symbol erasures";
        report(out, failures == 0, what.str(), all);
        if (code.pmds())
            report(out, rejected_ok == subsets.size(),
                   "layer " + std::to_string(j) + ": " + std::to_string(rejected_ok) + "/" +
                       std::to_string(subsets.size()) + " over-budget patterns rejected",
                   all);
    }
    return all ? kExitOk : kExitAuditFailed;
}

int cmd_latency(const LatencyArgs& args, std::ostream& out) {
    std::size_t n = args.n;
    std::vector<AccessLayer> layers;
    if (args.profile) {
        const FlexProfile p = profile_from_json(read_json(*args.profile));
        validate_profile(p);
        n = p.n;
        for (const auto& t : p.tuples) layers.push_back({t.R, t.ell});
    } else {
        for (const auto& [R, ell] : args.tuples) layers.push_back({R, ell});
    }
    if (n == 0 || layers.empty()) throw std::invalid_argument("latency needs --profile or --n with --tuple R,ell");
    if (args.steps == 0) throw std::invalid_argument("steps must be positive");
    std::vector<double> ts;
    for (std::size_t i = 0; i < args.steps; ++i)
        ts.push_back(args.steps == 1 ? args.t_min
                                     : args.t_min + (args.t_max - args.t_min) * static_cast<double>(i) /
                                                        static_cast<double>(args.steps - 1));

    std::ofstream file;
    if (args.output) {
        file.open(*args.output);
        if (!file) throw IoError("cannot create " + args.output->string());
    }
    std::ostream& os = args.output ? static_cast<std::ostream&>(file) : out;

    std::vector<MonteCarloResult> mc;
    if (args.mc_trials > 0) mc = monte_carlo_sweep(layers, n, args.t_pos, ts, args.mc_trials, args.seed, args.streams);

    if (layers.size() == 2) {
        const auto rows = latency_sweep(layers[0], layers[1], n, args.t_pos, ts);
        if (mc.empty()) {
            write_sweep_csv(os, rows);
        } else {
            os << "t_trans,E_fixed_1,E_fixed_2,E_flexible,savings_pct_vs_best_fixed,mc_E_flexible,mc_se_flexible,"
                  "mc_trials,mc_seed,mc_streams\n";
            os << std::setprecision(12);
            for (std::size_t i = 0; i < rows.size(); ++i)
                os << rows[i].t_trans << ',' << rows[i].e_fixed1 << ',' << rows[i].e_fixed2 << ','
                   << rows[i].e_flexible << ',' << rows[i].savings_pct << ',' << mc[i].mean_flexible << ','
                   << mc[i].se_flexible << ',' << mc[i].trials << ',' << mc[i].seed << ',' << mc[i].streams << '\n';
        }
    } else {
        if (mc.empty()) throw std::invalid_argument("the closed form covers two layers; pass --mc-trials");
        os << "t_trans";
        for (std::size_t j = 1; j <= layers.size(); ++j) os << ",E_fixed_" << j;
        os << ",E_flexible,savings_pct_vs_best_fixed,se_flexible,mc_trials,mc_seed,mc_streams\n";
        os << std::setprecision(12);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            os << ts[i];
            double best = 0;
            for (std::size_t j = 0; j < layers.size(); ++j) {
                const double e = expected_fixed(layers[j].R, layers[j].ell, {n, args.t_pos, ts[i]});
                best = j == 0 ? e : std::min(best, e);
                os << ',' << e;
            }
            os << ',' << mc[i].mean_flexible << ',' << 100.0 * (best - mc[i].mean_flexible) / best << ','
               << mc[i].se_flexible << ',' << mc[i].trials << ',' << mc[i].seed << ',' << mc[i].streams << '\n';
        }
    }
    if (args.output) out << "wrote " << args.output->string() << "\n";
    return kExitOk;
}

} // namespace flexcode
