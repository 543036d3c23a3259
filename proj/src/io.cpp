#include "slfv/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slfv {

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_header(const std::string& config_hash) {
    return std::string("# ") + kToolVersion + " config=" + config_hash;
}

void write_snapshot(const PopulationField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
    const ModelParams& p = field.params();
    out << "# " << kToolVersion << " snapshot time=" << format_g17(field.time())
        << " grid_len=" << p.grid_len << " u=" << format_g17(p.u) << " mu=" << format_g17(p.mu)
        << " R=" << p.R << " n_max=" << format_g17(p.n_max)
        << " boundary=" << (p.boundary == Boundary::clip ? "clip" : "wrap") << "\n";
    out << "site,type,mass\n";
    for (int x = 0; x < p.grid_len; ++x) {
        const SiteState& s = field.site(x);
        double um = s.stored_uniform * s.factor;
        if (um != 0.0) out << x << ",UNIFORM," << format_g17(um) << "\n";
        for (const auto& e : s.entries) {
            double m = e.stored * s.factor;
            if (m != 0.0) out << x << "," << e.id << "," << format_g17(m) << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failure on snapshot: " + path);
}

PopulationField load_snapshot(const std::string& path, const ModelParams& params, int type_capacity) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("snapshot missing header: " + path);
    double time = 0.0;
    {
        auto pos = line.find("time=");
        if (pos == std::string::npos) throw std::runtime_error("snapshot header lacks time");
        time = std::stod(line.substr(pos + 5));
        pos = line.find("grid_len=");
        if (pos != std::string::npos) {
            int gl = std::stoi(line.substr(pos + 9));
            if (gl != params.grid_len)
                throw std::runtime_error("snapshot grid length does not match configuration");
        }
    }
    PopulationField field(params, 0.0, type_capacity);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("site,", 0) == 0) continue;
        auto parts = split(line, ',');
        if (parts.size() != 3) throw std::runtime_error("malformed snapshot row: " + line);
        int x = std::stoi(parts[0]);
        if (x < 0 || x >= params.grid_len) throw std::runtime_error("snapshot site out of range");
        double mass = std::stod(parts[2]);
        if (parts[1] == "UNIFORM") {
            auto& s = field.site_mut(x);
            s.stored_uniform += mass;
            s.total += mass;
        } else {
            field.deposit(x, std::stoi(parts[1]), mass);
        }
    }
    for (int x = 0; x < params.grid_len; ++x) field.site_mut(x).last_touch = time;
    field.set_time(time);
    return field;
}

void write_profile_csv(const std::string& path, const std::string& header,
                       const std::vector<double>& values,
                       const std::vector<std::string>& extra_comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << header << "\n";
    for (const auto& c : extra_comments) out << "# " << c << "\n";
    out << "site,mass\n";
    for (size_t i = 0; i < values.size(); ++i) out << i << "," << format_g17(values[i]) << "\n";
    if (!out) throw std::runtime_error("write failure: " + path);
}

void write_matrix_csv(const std::string& path, const std::string& header, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& extra_comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << header << "\n";
    for (const auto& c : extra_comments) out << "# " << c << "\n";
    out << "site";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << "," << j;
    out << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << i;
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << "," << format_g17(m(i, j));
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace slfv
