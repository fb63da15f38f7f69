#include "launcher/lab/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "launcher/error.hpp"

namespace launcher::lab {

namespace {

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep))
        parts.push_back(cur);
    if (!line.empty() && line.back() == sep)
        parts.emplace_back();
    return parts;
}

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_double(const std::string& text, std::size_t line_no)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + t + "'");
    return v;
}

Trajectory header_to_trajectory(const nlohmann::json& h)
{
    Trajectory traj;
    traj.id = h.at("id").get<std::string>();
    if (h.contains("launcher_state"))
        traj.control = h.at("launcher_state").get<LauncherState>();
    traj.launcher_distance_to_table = h.value("distance_m", 0.0);
    return traj;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path.string());
    return in;
}

} // namespace

std::string format_number(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_trajectory_jsonl(std::ostream& out, const Trajectory& traj,
                            const nlohmann::json& header_extra)
{
    nlohmann::json header = {{"id", traj.id},
                             {"launcher_state", traj.control},
                             {"distance_m", traj.launcher_distance_to_table}};
    for (const auto& [k, v] : header_extra.items())
        header[k] = v;
    out << header.dump() << '\n';
    for (const auto& s : traj.samples)
        out << nlohmann::json{{"t", s.t},
                              {"x", s.position.x()},
                              {"y", s.position.y()},
                              {"z", s.position.z()}}
                   .dump()
            << '\n';
}

std::vector<Trajectory> read_trajectories_jsonl(std::istream& in)
{
    std::vector<Trajectory> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            if (j.contains("id")) {
                out.push_back(header_to_trajectory(j));
            } else {
                if (out.empty())
                    throw FormatError("sample before any trajectory header");
                out.back().samples.push_back(
                    {j.at("t").get<double>(),
                     Vec3(j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>())});
            }
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    for (const auto& t : out)
        if (!t.well_formed())
            throw FormatError("trajectory " + t.id + ": timestamps not strictly increasing");
    return out;
}

Trajectory read_trajectory_csv(std::istream& in, std::string id)
{
    Trajectory traj;
    traj.id = std::move(id);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        const auto cols = split(line, ',');
        if (!header_seen) {
            if (cols.size() != 4 || trim(cols[0]) != "t" || trim(cols[1]) != "x"
                || trim(cols[2]) != "y" || trim(cols[3]) != "z")
                throw FormatError("expected header 't,x,y,z'");
            header_seen = true;
            continue;
        }
        if (cols.size() != 4)
            throw FormatError("line " + std::to_string(line_no) + ": expected 4 columns");
        traj.samples.push_back({parse_double(cols[0], line_no),
                                Vec3(parse_double(cols[1], line_no), parse_double(cols[2], line_no),
                                     parse_double(cols[3], line_no))});
    }
    if (!header_seen)
        throw FormatError("empty trajectory CSV");
    if (!traj.well_formed())
        throw FormatError("trajectory " + traj.id + ": timestamps not strictly increasing");
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << "t,x,y,z\n";
    for (const auto& s : traj.samples)
        out << format_number(s.t) << ',' << format_number(s.position.x()) << ','
            << format_number(s.position.y()) << ',' << format_number(s.position.z()) << '\n';
}

std::vector<Trajectory> load_trajectories(const std::filesystem::path& path)
{
    auto in = open_in(path);
    if (path.extension() == ".csv")
        return {read_trajectory_csv(in, path.stem().string())};
    return read_trajectories_jsonl(in);
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                     const nlohmann::json& header_extra)
{
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot write " + path.string());
    if (path.extension() == ".csv")
        write_trajectory_csv(out, traj);
    else
        write_trajectory_jsonl(out, traj, header_extra);
}

std::vector<Trajectory> load_trajectory_dir(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".csv" || ext == ".jsonl"))
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Trajectory> out;
    for (const auto& f : files)
        for (auto& t : load_trajectories(f))
            out.push_back(std::move(t));
    return out;
}

void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows)
{
    out << stats_csv_header << '\n';
    for (const auto& r : rows) {
        if (r.series.find_first_of(",\n\"") != std::string::npos)
            throw FormatError("series name must not contain commas, quotes or newlines");
        const auto& s = r.stats;
        out << r.series << ',' << s.n << ',' << format_number(s.mean_x) << ','
            << format_number(s.mean_y) << ',' << format_number(s.sigma_x) << ','
            << format_number(s.sigma_y) << ',' << format_number(s.sigma_norm) << ','
            << format_number(s.area_sigma) << '\n';
    }
}

std::vector<StatsRow> read_stats_csv(std::istream& in)
{
    std::vector<StatsRow> rows;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || trim(line) != stats_csv_header)
        throw FormatError(std::string("expected header '") + stats_csv_header + "'");
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        const auto cols = split(line, ',');
        if (cols.size() != 8)
            throw FormatError("line " + std::to_string(line_no) + ": expected 8 columns");
        StatsRow r;
        r.series = cols[0];
        r.stats.n = static_cast<std::size_t>(parse_double(cols[1], line_no));
        r.stats.mean_x = parse_double(cols[2], line_no);
        r.stats.mean_y = parse_double(cols[3], line_no);
        r.stats.sigma_x = parse_double(cols[4], line_no);
        r.stats.sigma_y = parse_double(cols[5], line_no);
        r.stats.sigma_norm = parse_double(cols[6], line_no);
        r.stats.area_sigma = parse_double(cols[7], line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace launcher::lab
