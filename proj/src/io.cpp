#include "prandtl/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace prandtl {

namespace {

void atomic_write(const std::string& path, const char* data, size_t size) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(data, static_cast<std::streamsize>(size));
        if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

} // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    atomic_write(path, content.data(), content.size());
}

void atomic_write_bytes(const std::string& path, const std::vector<char>& bytes) {
    atomic_write(path, bytes.data(), bytes.size());
}

void save_snapshot(const std::string& path, const State& s) {
    const SpectralGrid& g = *s.grid;
    std::ostringstream head;
    head.precision(17);
    head << "PRANDTL-SNAP 1 nx=" << g.nx() << " ny=" << g.ny() << " y_max=" << g.y_max()
         << " t=" << s.t << "\n";
    const std::string h = head.str();

    std::vector<char> bytes;
    bytes.reserve(h.size() + 2 * sizeof(double) * g.nx() * g.ny());
    bytes.insert(bytes.end(), h.begin(), h.end());
    auto append_field = [&](const Field& f) {
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny(); ++j) {
                const double v = f(i, j);
                const char* p = reinterpret_cast<const char*>(&v);
                bytes.insert(bytes.end(), p, p + sizeof(double));
            }
    };
    append_field(s.u);
    append_field(s.omega);
    atomic_write_bytes(path, bytes);
}

namespace {

SnapshotHeader parse_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("snapshot '" + path + "': missing header");
    SnapshotHeader h;
    char tag[32];
    int version = 0;
    if (std::sscanf(line.c_str(), "%31s %d nx=%d ny=%d y_max=%lf t=%lf", tag, &version,
                    &h.nx, &h.ny, &h.y_max, &h.t) != 6 ||
        std::strcmp(tag, "PRANDTL-SNAP") != 0 || version != 1)
        throw std::runtime_error("snapshot '" + path + "': malformed header");
    return h;
}

} // namespace

SnapshotHeader peek_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
    return parse_header(in, path);
}

State load_snapshot(const std::string& path, std::shared_ptr<const SpectralGrid> grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
    const SnapshotHeader h = parse_header(in, path);
    const SpectralGrid& g = *grid;
    if (h.nx != g.nx() || h.ny != g.ny() || std::abs(h.y_max - g.y_max()) > 1e-12)
        throw std::runtime_error("snapshot '" + path + "': grid mismatch (header " +
                                 std::to_string(h.nx) + "x" + std::to_string(h.ny) + ")");

    auto read_field = [&](Field& f) {
        f.resize(g.nx(), g.ny());
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny(); ++j) {
                double v;
                in.read(reinterpret_cast<char*>(&v), sizeof(double));
                if (!in)
                    throw std::runtime_error("snapshot '" + path + "': truncated payload");
                f(i, j) = v;
            }
    };
    State s;
    s.t = h.t;
    read_field(s.u);
    read_field(s.omega);
    s.v = recover_v(g, s.u);
    s.grid = std::move(grid);
    return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    os.precision(17);
    for (size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << "\n";
    }
    atomic_write_text(path, os.str());
}

} // namespace prandtl
