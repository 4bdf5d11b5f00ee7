#include "sdd/grid_map.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sdd {
namespace {

// Splits into lines, dropping a trailing '\r' so CRLF files parse.
std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) {
        if (cur.back() == '\r') cur.pop_back();
        lines.push_back(cur);
    }
    return lines;
}

bool cell_char(char ch, std::uint8_t& blocked_out) {
    switch (ch) {
        case '.':
        case 'G':
            blocked_out = 0;
            return true;
        case '@':
        case 'O':
        case 'T':
        case 'W':
            blocked_out = 1;
            return true;
        default:
            return false;
    }
}

int parse_header_int(const std::string& line, const std::string& key, int line_no) {
    std::istringstream is(line);
    std::string k;
    long long value = -1;
    if (!(is >> k >> value) || k != key || value <= 0) {
        std::string rest;
        std::getline(is, rest);
        throw ParseError(line_no, "expected '" + key + " <positive integer>'");
    }
    return static_cast<int>(value);
}

void parse_rows(const std::vector<std::string>& lines, std::size_t first_row,
                GridMap& map) {
    const std::size_t rows = static_cast<std::size_t>(map.height) * map.depth;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t idx = first_row + r;
        const int line_no = static_cast<int>(idx) + 1;
        if (idx >= lines.size())
            throw ParseError(static_cast<int>(lines.size()) + 1,
                             "missing map row " + std::to_string(r + 1));
        const std::string& row = lines[idx];
        if (static_cast<int>(row.size()) != map.width)
            throw ParseError(line_no, "row has " + std::to_string(row.size()) +
                                          " cells, expected " + std::to_string(map.width));
        for (int ix = 0; ix < map.width; ++ix) {
            std::uint8_t b = 0;
            if (!cell_char(row[ix], b))
                throw ParseError(line_no, std::string("invalid cell character '") +
                                              row[ix] + "' at column " + std::to_string(ix + 1));
            const int iz = static_cast<int>(r) / map.height;
            const int iy = static_cast<int>(r) % map.height;
            map.at(ix, iy, iz) = b;
        }
    }
    for (std::size_t idx = first_row + rows; idx < lines.size(); ++idx) {
        if (!lines[idx].empty())
            throw ParseError(static_cast<int>(idx) + 1,
                             "unexpected content after map row " + std::to_string(rows));
    }
}

}  // namespace

GridMap parse_movingai_map(const std::string& text, double cell_size) {
    if (cell_size <= 0.0) throw std::invalid_argument("cell_size must be positive");
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty map file");
    if (lines[0] != "type octile")
        throw ParseError(1, "expected 'type octile'");

    GridMap map;
    map.cell_size = cell_size;
    map.depth = 1;
    int height = -1, width = -1;
    bool saw_map = false;
    std::size_t li = 1;
    for (; li < lines.size(); ++li) {
        const int line_no = static_cast<int>(li) + 1;
        std::istringstream is(lines[li]);
        std::string key;
        is >> key;
        if (key == "height") {
            height = parse_header_int(lines[li], "height", line_no);
        } else if (key == "width") {
            width = parse_header_int(lines[li], "width", line_no);
        } else if (key == "map") {
            saw_map = true;
            ++li;
            break;
        } else {
            throw ParseError(line_no, "expected 'height', 'width', or 'map', got '" +
                                          lines[li] + "'");
        }
    }
    if (!saw_map)
        throw ParseError(static_cast<int>(lines.size()) + 1, "missing 'map' line");
    if (height <= 0 || width <= 0)
        throw ParseError(static_cast<int>(li),
                         "header must declare height and width before 'map'");
    map.height = height;
    map.width = width;
    map.blocked.assign(map.cell_count(), 0);
    parse_rows(lines, li, map);
    return map;
}

std::string serialize_movingai_map(const GridMap& map) {
    if (map.depth != 1)
        throw std::invalid_argument("movingai maps are planar; use the voxel format");
    std::ostringstream os;
    os << "type octile\nheight " << map.height << "\nwidth " << map.width << "\nmap\n";
    for (int iy = 0; iy < map.height; ++iy) {
        for (int ix = 0; ix < map.width; ++ix)
            os << (map.at(ix, iy, 0) ? '@' : '.');
        os << '\n';
    }
    return os.str();
}

GridMap parse_voxel_map(const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty map file");
    std::istringstream is(lines[0]);
    std::string key;
    long long w = 0, h = 0, d = 0;
    double cell = 0.0;
    if (!(is >> key >> w >> h >> d >> cell) || key != "voxel" || w <= 0 || h <= 0 ||
        d <= 0 || cell <= 0.0)
        throw ParseError(1, "expected 'voxel <W> <H> <D> <cell_size>'");

    GridMap map;
    map.width = static_cast<int>(w);
    map.height = static_cast<int>(h);
    map.depth = static_cast<int>(d);
    map.cell_size = cell;
    map.blocked.assign(map.cell_count(), 0);
    parse_rows(lines, 1, map);
    return map;
}

std::string serialize_voxel_map(const GridMap& map) {
    std::ostringstream os;
    os << "voxel " << map.width << ' ' << map.height << ' ' << map.depth << ' '
       << map.cell_size << '\n';
    for (int iz = 0; iz < map.depth; ++iz)
        for (int iy = 0; iy < map.height; ++iy) {
            for (int ix = 0; ix < map.width; ++ix)
                os << (map.at(ix, iy, iz) ? '@' : '.');
            os << '\n';
        }
    return os.str();
}

GridMap load_map_file(const std::string& path, double cell_size) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.rfind("voxel", 0) == 0) return parse_voxel_map(text);
    return parse_movingai_map(text, cell_size);
}

bool state_valid(const GridMap& map, const StateC& s) {
    const double inv = 1.0 / map.cell_size;
    const int ix = static_cast<int>(std::floor(s.x * inv));
    const int iy = static_cast<int>(std::floor(s.y * inv));
    const int iz = map.depth == 1 ? 0 : static_cast<int>(std::floor(s.z * inv));
    if (!map.in_bounds(ix, iy, iz)) return false;
    return map.at(ix, iy, iz) == 0;
}

bool edge_valid(const GridMap& map, const MotionPrimitive& prim) {
    for (const StateC& s : prim.samples)
        if (!state_valid(map, s)) return false;
    return true;
}

double valid_successor_ratio(const GridMap& map, const DynamicsModel& model, const StateC& s) {
    const std::vector<Successor> succ = model.successors(s);
    if (succ.empty()) return 0.0;
    int valid = 0;
    for (const Successor& sc : succ)
        if (edge_valid(map, sc.primitive)) ++valid;
    return static_cast<double>(valid) / static_cast<double>(succ.size());
}

}  // namespace sdd
