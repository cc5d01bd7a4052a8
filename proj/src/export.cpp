#include "pinncontact/harness/export.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pinncontact/error.hpp"
#include "pinncontact/harness/metrics.hpp"

namespace pinncontact::harness {

namespace {

constexpr const char* kFieldNames[] = {"ux", "uy", "uz", "sxx", "syy", "szz", "sxy", "syz", "sxz"};

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::array<double, 9> channels(const MixedField& f) {
    return {f.u[0], f.u[1], f.u[2], f.sigma[0], f.sigma[1], f.sigma[2], f.sigma[3], f.sigma[4], f.sigma[5]};
}

void check_sizes(std::span<const Vec3> points, std::span<const MixedField> fields) {
    if (points.size() != fields.size()) {
        throw ConfigurationError("field export: point and field counts differ");
    }
}

} // namespace

void write_fields_csv(const std::filesystem::path& path, std::span<const Vec3> points,
                      std::span<const MixedField> fields, bool polar) {
    check_sizes(points, fields);
    auto out = open_out(path);
    out << "x,y,z";
    for (const char* name : kFieldNames) {
        out << ',' << name;
    }
    if (polar) {
        out << ",srr,stt";
    }
    out << '\n';
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto& x = points[p];
        std::string row = fmt::format("{:.17g},{:.17g},{:.17g}", x[0], x[1], x[2]);
        for (double v : channels(fields[p])) {
            row += fmt::format(",{:.17g}", v);
        }
        if (polar) {
            const auto ps = polar_stress(x, fields[p].sigma);
            row += fmt::format(",{:.17g},{:.17g}", ps.srr, ps.stt);
        }
        out << row << '\n';
    }
    finish(out, path);
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw ConfigurationError("CSV has no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path.string() + " is empty");
    }
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
        table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        if (row.size() != table.header.size()) {
            throw IoError(path.string() + ": ragged row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_fields_vtk(const std::filesystem::path& path, std::span<const Vec3> points,
                      std::span<const MixedField> fields, bool polar) {
    check_sizes(points, fields);
    auto out = open_out(path);
    const std::size_t n = points.size();
    out << "# vtk DataFile Version 3.0\npinncontact fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << fmt::format("POINTS {} double\n", n);
    for (const auto& x : points) {
        out << fmt::format("{:.17g} {:.17g} {:.17g}\n", x[0], x[1], x[2]);
    }
    out << fmt::format("CELLS {} {}\n", n, 2 * n);
    for (std::size_t p = 0; p < n; ++p) {
        out << "1 " << p << '\n';
    }
    out << fmt::format("CELL_TYPES {}\n", n);
    for (std::size_t p = 0; p < n; ++p) {
        out << "1\n";
    }
    out << fmt::format("POINT_DATA {}\n", n);
    out << "VECTORS displacement double\n";
    for (const auto& f : fields) {
        out << fmt::format("{:.17g} {:.17g} {:.17g}\n", f.u[0], f.u[1], f.u[2]);
    }
    const auto scalar = [&](const char* name, auto&& value) {
        out << fmt::format("SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
        for (std::size_t p = 0; p < n; ++p) {
            out << fmt::format("{:.17g}\n", value(p));
        }
    };
    for (std::size_t c = 0; c < 6; ++c) {
        scalar(kFieldNames[3 + c], [&](std::size_t p) { return fields[p].sigma[c]; });
    }
    if (polar) {
        scalar("srr", [&](std::size_t p) { return polar_stress(points[p], fields[p].sigma).srr; });
        scalar("stt", [&](std::size_t p) { return polar_stress(points[p], fields[p].sigma).stt; });
    }
    finish(out, path);
}

nlohmann::ordered_json report_to_json(const BenchmarkReport& report) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = BenchmarkReport::kSchemaVersion;
    doc["benchmark"] = to_string(report.benchmark);
    doc["data_enhanced"] = report.data_enhanced;
    doc["seed"] = report.seed;
    nlohmann::ordered_json errors = nlohmann::ordered_json::object();
    for (const auto& [name, value] : report.rel_l2) {
        errors[name] = value;
    }
    doc["rel_l2_percent"] = errors;
    doc["max_contact_pressure"] = report.max_contact_pressure;
    doc["kkt"] = {{"min_gap", report.kkt.min_gap},
                  {"max_pressure", report.kkt.max_pressure},
                  {"max_abs_gap_times_pressure", report.kkt.max_complementarity}};
    nlohmann::ordered_json loss = nlohmann::ordered_json::object();
    const auto parts = report.final_loss.parts();
    for (std::size_t k = 0; k < kLossPartCount; ++k) {
        loss[loss_part_names()[k]] = parts[k];
    }
    loss["total"] = report.final_loss.total;
    doc["final_loss"] = loss;
    doc["training"] = {{"adam_steps", report.adam_steps},
                       {"lbfgs_iterations", report.lbfgs_iterations},
                       {"lbfgs_termination", report.lbfgs_reason}};
    nlohmann::ordered_json artifacts = nlohmann::ordered_json::object();
    for (const auto& [name, file] : report.artifacts) {
        artifacts[name] = file;
    }
    doc["artifacts"] = artifacts;
    return doc;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
    finish(out, path);
}

void write_checkpoint(const std::filesystem::path& path, const ParameterVector& theta, const Architecture& arch,
                      std::uint64_t seed, const std::string& benchmark) {
    arch.check_parameters(theta);
    auto out = open_out(path, std::ios::out | std::ios::binary);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        auto bits = std::bit_cast<std::uint64_t>(theta[i]);
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap64(bits);
        }
        char bytes[8];
        std::memcpy(bytes, &bits, 8);
        out.write(bytes, 8);
    }
    finish(out, path);

    nlohmann::ordered_json side;
    side["format"] = "pinncontact-theta";
    side["version"] = 1;
    side["dtype"] = "float64";
    side["byte_order"] = "little";
    side["parameter_count"] = theta.size();
    side["architecture"] = {{"input_dim", arch.input_dim},
                            {"hidden_layers", arch.hidden_layers},
                            {"hidden_width", arch.hidden_width},
                            {"output_dim", arch.output_dim},
                            {"activation", "tanh"},
                            {"layout", "per layer: weights column-major (fan_out x fan_in), then bias"}};
    side["seed"] = seed;
    side["benchmark"] = benchmark;
    write_json(std::filesystem::path(path.string() + ".json"), side);
}

ParameterVector read_checkpoint(const std::filesystem::path& path, const Architecture& arch) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read checkpoint " + path.string());
    }
    const auto count = arch.parameter_count();
    ParameterVector theta(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
        char bytes[8];
        if (!in.read(bytes, 8)) {
            throw IoError("checkpoint " + path.string() + " is shorter than the architecture requires");
        }
        std::uint64_t bits = 0;
        std::memcpy(&bits, bytes, 8);
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap64(bits);
        }
        theta[static_cast<Eigen::Index>(i)] = std::bit_cast<double>(bits);
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw IoError("checkpoint " + path.string() + " is longer than the architecture requires");
    }
    return theta;
}

} // namespace pinncontact::harness
