// SPDX-License-Identifier: Apache-2.0
#include "flexcode/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::pair<std::size_t, std::size_t> parse_tuple(const std::string& s) {
    std::istringstream is(s);
    std::size_t R = 0, ell = 0;
    char comma = 0;
    if (!(is >> R >> comma >> ell) || comma != ',' || !is.eof())
        throw CLI::ValidationError("--tuple", "expected R,ell but got '" + s + "'");
    return {R, ell};
}

} // namespace

int main(int argc, char** argv) {
    using namespace flexcode;
    CLI::App app{"Flexible storage codes: encode, decode, repair, audit, latency"};
    app.require_subcommand(1);

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "Encode a file into n shards plus a manifest");
    encode->add_option("input", enc.input, "Input file")->required();
    encode->add_option("--profile", enc.profile, "Profile config (JSON)")->required();
    encode->add_option("--out-dir", enc.out_dir, "Directory for shards and manifest")->required();
    encode->add_option("--seed", enc.seed, "Seed recorded in the manifest");

    DecodeArgs dec;
    std::optional<std::filesystem::path> dec_dir;
    auto* decode = app.add_subcommand("decode", "Rebuild the file from a subset of shards");
    decode->add_option("shards", dec.shards, "Shard files (default: all present next to the manifest)");
    decode->add_option("--manifest", dec.manifest, "Manifest written by encode");
    decode->add_option("--in-dir", dec_dir, "Directory holding manifest.json and shards");
    decode->add_option("--layer", dec.layer, "Layer j to decode (default: fewest symbols read)");
    decode->add_option("-o,--output", dec.output, "Output file")->required();
    decode->add_flag("--skip-corrupt", dec.skip_corrupt, "Treat shards failing their checksum as erased");

    RepairArgs rep;
    std::optional<std::filesystem::path> rep_dir;
    auto* repair = app.add_subcommand("repair", "Rebuild one node's shard");
    repair->add_option("shards", rep.shards, "Shard files (default: all present next to the manifest)");
    repair->add_option("--manifest", rep.manifest, "Manifest written by encode");
    repair->add_option("--in-dir", rep_dir, "Directory holding manifest.json and shards");
    repair->add_option("--node", rep.node, "Node to rebuild (0-based)")->required();
    repair->add_option("--out-dir", rep.out_dir, "Where to write the rebuilt shard");

    AuditArgs aud;
    auto* audit = app.add_subcommand("audit", "Check code properties for a profile");
    audit->add_option("--profile", aud.profile, "Profile config (JSON)")->required();
    audit->add_option("--seed", aud.seed, "Seed for the test stripe and sampled patterns");
    audit->add_option("--max-subsets", aud.max_subsets, "Exhaustive up to this many node subsets per layer");

    LatencyArgs lat;
    std::vector<std::string> tuples;
    auto* latency = app.add_subcommand("latency", "Expected access latency sweep as CSV");
    latency->add_option("--profile", lat.profile, "Profile config giving n and (R_j, l_j)");
    latency->add_option("--n", lat.n, "Number of nodes");
    latency->add_option("--tuple", tuples, "Layer as R,ell (repeat per layer)");
    latency->add_option("--t-pos", lat.t_pos, "Positioning time scale");
    latency->add_option("--t-min", lat.t_min, "First t_trans");
    latency->add_option("--t-max", lat.t_max, "Last t_trans");
    latency->add_option("--steps", lat.steps, "Number of t_trans values");
    latency->add_option("--mc-trials", lat.mc_trials, "Monte Carlo trials per point (0: closed form only)");
    latency->add_option("--seed", lat.seed, "Monte Carlo seed");
    latency->add_option("--streams", lat.streams, "Monte Carlo streams");
    latency->add_option("-o,--output", lat.output, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
        for (const auto& t : tuples) lat.tuples.push_back(parse_tuple(t));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    auto manifest_of = [](std::filesystem::path& manifest, const std::optional<std::filesystem::path>& dir) {
        if (manifest.empty() && dir) manifest = *dir / "manifest.json";
        if (manifest.empty()) throw std::invalid_argument("pass --manifest or --in-dir");
    };

    return run_guarded(
        [&]() -> int {
            if (*encode) return cmd_encode(enc, std::cout);
            if (*decode) {
                manifest_of(dec.manifest, dec_dir);
                return cmd_decode(dec, std::cout);
            }
            if (*repair) {
                manifest_of(rep.manifest, rep_dir);
                return cmd_repair(rep, std::cout);
            }
            if (*audit) return cmd_audit(aud, std::cout);
            return cmd_latency(lat, std::cout);
        },
        std::cerr);
}
