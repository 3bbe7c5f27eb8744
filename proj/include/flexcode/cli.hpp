// SPDX-License-Identifier: Apache-2.0
//
// Subcommands of the flexcode tool. Each returns a process exit code:
// 0 success, 2 invalid profile or arguments, 3 decode infeasible, 4 I/O or
// integrity failure, 1 audit found violations.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flexcode {

enum ExitCode : int { kExitOk = 0, kExitAuditFailed = 1, kExitValidation = 2, kExitDecode = 3, kExitIo = 4 };

/// Runs `fn`, mapping exceptions to exit codes and printing them to `err`.
int run_guarded(const std::function<int()>& fn, std::ostream& err);

std::string shard_file_name(std::size_t node);

struct EncodeArgs {
    std::filesystem::path profile;
    std::filesystem::path input;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
};
int cmd_encode(const EncodeArgs& args, std::ostream& out);

struct DecodeArgs {
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> shards; // empty: every listed shard present next to the manifest
    std::optional<std::size_t> layer;          // 1-based
    std::filesystem::path output;
    bool skip_corrupt = false;
};
int cmd_decode(const DecodeArgs& args, std::ostream& out);

struct RepairArgs {
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> shards;
    std::size_t node = 0;
    std::optional<std::filesystem::path> out_dir; // default: manifest directory
};
int cmd_repair(const RepairArgs& args, std::ostream& out);

struct AuditArgs {
    std::filesystem::path profile;
    std::uint64_t seed = 1;
    std::size_t max_subsets = 20000; // above this, a seeded sample of node subsets is checked
};
int cmd_audit(const AuditArgs& args, std::ostream& out);

struct LatencyArgs {
    std::optional<std::filesystem::path> profile; // takes n and (R_j, l_j) from the profile
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> tuples; // (R, l)
    double t_pos = 1.0;
    double t_min = 0.0;
    double t_max = 0.05;
    std::size_t steps = 11;
    std::size_t mc_trials = 0;
    std::uint64_t seed = 1;
    std::size_t streams = 1;
    std::optional<std::filesystem::path> output; // default: stdout
};
int cmd_latency(const LatencyArgs& args, std::ostream& out);

} // namespace flexcode
