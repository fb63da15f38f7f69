#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "launcher/lab/stats.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::lab {

/// JSON lines: a header object {"id", "launcher_state", "distance_m"}
/// followed by one {"t", "x", "y", "z"} object per sample. Several
/// trajectories may follow each other in one stream.
/// Keys of `header_extra` are merged into the header object.
void write_trajectory_jsonl(std::ostream& out, const Trajectory& traj,
                            const nlohmann::json& header_extra = nlohmann::json::object());
std::vector<Trajectory> read_trajectories_jsonl(std::istream& in);

/// CSV with header `t,x,y,z`.
Trajectory read_trajectory_csv(std::istream& in, std::string id = {});
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Dispatches on extension: .csv or JSON lines otherwise.
std::vector<Trajectory> load_trajectories(const std::filesystem::path& path);
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                     const nlohmann::json& header_extra = nlohmann::json::object());

/// All trajectory files of a directory in lexicographic order.
std::vector<Trajectory> load_trajectory_dir(const std::filesystem::path& dir);

struct StatsRow
{
    std::string series;
    AccuracyStats stats;
};

inline constexpr const char* stats_csv_header =
    "series,n,mean_x,mean_y,sigma_x,sigma_y,sigma_norm,area_sigma";

void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows);
std::vector<StatsRow> read_stats_csv(std::istream& in);

/// Locale-independent shortest round-trip formatting.
std::string format_number(double v);

} // namespace launcher::lab
