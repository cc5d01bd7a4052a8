#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinncontact/architecture.hpp"
#include "pinncontact/harness/benchmark.hpp"

namespace pinncontact::harness {

/// Header x,y,z,ux,uy,uz,sxx,syy,szz,sxy,syz,sxz (+ srr,stt with polar),
/// values with 17 significant digits.
void write_fields_csv(const std::filesystem::path& path, std::span<const Vec3> points,
                      std::span<const MixedField> fields, bool polar);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Legacy VTK unstructured grid of vertex cells with the same point arrays.
void write_fields_vtk(const std::filesystem::path& path, std::span<const Vec3> points,
                      std::span<const MixedField> fields, bool polar);

nlohmann::ordered_json report_to_json(const BenchmarkReport& report);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

/// θ as raw little-endian float64 in `path` plus a JSON sidecar `path.json`.
void write_checkpoint(const std::filesystem::path& path, const ParameterVector& theta, const Architecture& arch,
                      std::uint64_t seed, const std::string& benchmark);
ParameterVector read_checkpoint(const std::filesystem::path& path, const Architecture& arch);

} // namespace pinncontact::harness
