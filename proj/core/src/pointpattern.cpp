#include "gibbspp/pointpattern.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "gibbspp/errors.hpp"

namespace gibbspp {

namespace {
const char* kAxes[] = {"x", "y", "z", "w"};

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}
}  // namespace

Configuration read_point_pattern(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("point pattern: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t d = split_commas(line).size();
    if (d == 0 || split_commas(line)[0] != "x")
        throw ConfigError("point pattern: bad header '" + line + "'");

    std::vector<Point> pts;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != d)
            throw ConfigError("point pattern: expected " + std::to_string(d) + " fields");
        Point p(d);
        for (std::size_t i = 0; i < d; ++i) {
            std::size_t pos = 0;
            try {
                p[i] = std::stod(fields[i], &pos);
            } catch (const std::exception&) {
                throw ConfigError("point pattern: bad number '" + fields[i] + "'");
            }
            if (pos != fields[i].size())
                throw ConfigError("point pattern: bad number '" + fields[i] + "'");
        }
        pts.push_back(std::move(p));
    }
    return Configuration(std::move(pts));
}

Configuration read_point_pattern_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    return read_point_pattern(in);
}

void write_point_pattern(std::ostream& out, const Configuration& config) {
    const int d = config.size() > 0 ? static_cast<int>(config.points()[0].size()) : 2;
    for (int i = 0; i < d; ++i) {
        if (i) out << ',';
        if (i < 4)
            out << kAxes[i];
        else
            out << 'c' << i;
    }
    out << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const Point& p : config.points()) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out << ',';
            out << p[i];
        }
        out << '\n';
    }
}

void write_point_pattern_file(const std::string& path, const Configuration& config) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    write_point_pattern(out, config);
}

}  // namespace gibbspp
