#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pinncontact/architecture.hpp"
#include "pinncontact/geometry.hpp"
#include "pinncontact/loss.hpp"
#include "pinncontact/optimize.hpp"

namespace pinncontact::harness {

enum class Benchmark { patch, hertz };

std::string to_string(Benchmark b);
Benchmark benchmark_from_string(const std::string& name);

/// Everything one benchmark run depends on. Defaults per benchmark come from
/// RunConfig::defaults; the text form is a flat list of `key = value` lines.
struct RunConfig {
    Benchmark benchmark = Benchmark::patch;
    bool data_enhanced = false;
    std::uint64_t seed = 0;
    Architecture arch;

    double young = 1.33;
    double poisson = 0.33;
    double pressure = 0.1;

    PatchDomain patch;
    PatchCounts patch_counts;
    HertzDomain hertz;
    HertzCounts hertz_counts;
    std::size_t data_per_line = 50;
    /// Extra interior points in the box |x| <= refine_width, depth <=
    /// refine_depth below the contact line (0 disables).
    std::size_t hertz_refine_points = 0;
    double hertz_refine_width = 0.3;
    double hertz_refine_depth = 0.3;

    LossWeights weights;
    optimize::AdamConfig adam;
    optimize::LbfgsConfig lbfgs;

    std::filesystem::path output_dir = "out";
    std::size_t log_interval = 100;
    bool write_vtk = true;
    bool write_checkpoint = true;

    static RunConfig defaults(Benchmark b);

    /// Sets one key from its text value; throws ConfigurationError for an
    /// unknown key or a malformed value.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    static const std::vector<std::string>& keys();

    /// Reads `key = value` lines ('#' starts a comment) on top of the current values.
    void load(const std::filesystem::path& path);
    void apply_text(const std::string& text, const std::string& origin = "<text>");
    std::string to_text() const;
    void save(const std::filesystem::path& path) const;

    void validate() const;
};

} // namespace pinncontact::harness
