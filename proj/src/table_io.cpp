#include "vmm/table_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vmm {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("malformed number '" + s + "'");
    return v;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

constexpr const char* kTableHeader =
    "eps,h,l2_err,l2_order,h1_err,h1_order,lap_err,lap_order";

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

}  // namespace

void write_table(const ConvergenceTable& table, const std::string& path) {
    if (table.rows.empty()) throw std::invalid_argument("write_table: empty table");
    std::string out = std::string(kTableHeader) + "\n";
    for (const auto& r : table.rows) {
        out += format_double(r.eps);
        out += ",";
        out += format_double(r.h);
        out += ",";
        out += format_double(r.l2_err);
        out += ",";
        out += opt_field(r.l2_order);
        out += ",";
        out += format_double(r.h1_err);
        out += ",";
        out += opt_field(r.h1_order);
        out += ",";
        out += format_double(r.lap_err);
        out += ",";
        out += opt_field(r.lap_order);
        out += "\n";
    }
    atomic_write(path, out);
}

ConvergenceTable read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kTableHeader)
        throw std::runtime_error("unexpected table header in " + path);
    ConvergenceTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 8) throw std::runtime_error("malformed table row: " + line);
        ConvergenceRow r;
        r.eps = parse_double(f[0]);
        r.h = parse_double(f[1]);
        r.l2_err = parse_double(f[2]);
        if (!f[3].empty()) r.l2_order = parse_double(f[3]);
        r.h1_err = parse_double(f[4]);
        if (!f[5].empty()) r.h1_order = parse_double(f[5]);
        r.lap_err = parse_double(f[6]);
        if (!f[7].empty()) r.lap_order = parse_double(f[7]);
        table.rows.push_back(r);
    }
    return table;
}

void write_field(const SolutionField& field, const ExactBundle* exact,
                 int grid_resolution, const std::string& path) {
    if (grid_resolution < 2)
        throw std::invalid_argument("write_field: grid resolution must be >= 2");
    const Mesh& mesh = *field.mesh;

    double x0 = mesh.vertices.front().x(), x1 = x0;
    double y0 = mesh.vertices.front().y(), y1 = y0;
    for (const auto& v : mesh.vertices) {
        x0 = std::min(x0, v.x());
        x1 = std::max(x1, v.x());
        y0 = std::min(y0, v.y());
        y1 = std::max(y1, v.y());
    }

    std::string out = "x,y,u_h,u_exact,err,lap_err\n";
    const int ny = mesh.dimension == 1 ? 1 : grid_resolution;
    for (int j = 0; j < ny; ++j) {
        double y = mesh.dimension == 1
                       ? 0.0
                       : y0 + (y1 - y0) * (static_cast<double>(j) / (grid_resolution - 1));
        for (int i = 0; i < grid_resolution; ++i) {
            double x = x0 + (x1 - x0) * (static_cast<double>(i) / (grid_resolution - 1));
            Vec2 p(x, y);
            auto eval = field.try_eval(p);
            if (!eval) continue;  // outside the mesh (disk corners etc.)
            out += format_double(x);
            out += ",";
            out += format_double(y);
            out += ",";
            out += format_double(eval->value);
            out += ",";
            if (exact) {
                double ue = exact->u(p);
                out += format_double(ue);
                out += ",";
                out += format_double(eval->value - ue);
                out += ",";
                out += format_double(eval->laplacian - exact->lap(p));
            } else {
                out += ",,";
            }
            out += "\n";
        }
    }
    atomic_write(path, out);
}

void write_cz_reports(const std::vector<CZReport>& reports, const std::string& path) {
    std::string out = "eps,h,ndofs,c_h,adjoint\n";
    for (const auto& r : reports) {
        out += format_double(r.eps);
        out += ",";
        out += format_double(r.h);
        out += ",";
        out += std::to_string(r.dof_count);
        out += ",";
        out += format_double(r.c_h);
        out += ",";
        out += r.adjoint ? "1" : "0";
        out += "\n";
    }
    atomic_write(path, out);
}

}  // namespace vmm
