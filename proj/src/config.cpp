#include "pinncontact/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "pinncontact/error.hpp"

namespace pinncontact::harness {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigurationError(fmt::format("{}: '{}' is not a number", key, text));
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigurationError(fmt::format("{}: '{}' is not a non-negative integer", key, text));
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off") {
        return false;
    }
    throw ConfigurationError(fmt::format("{}: '{}' is not a boolean", key, text));
}

template <std::size_t N>
void parse_list(const std::string& key, const std::string& text, std::array<double, N>& out) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        items.push_back(item);
    }
    if (items.size() == 1) {
        out.fill(parse_double(key, items[0]));
        return;
    }
    if (items.size() != N) {
        throw ConfigurationError(fmt::format("{}: expected 1 or {} comma-separated values", key, N));
    }
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = parse_double(key, items[i]);
    }
}

std::string show(double v) { return fmt::format("{}", v); }
std::string show(std::uint64_t v) { return fmt::format("{}", v); }
std::string show(bool v) { return v ? "true" : "false"; }
template <std::size_t N>
std::string show(const std::array<double, N>& v) {
    return fmt::format("{}", fmt::join(v, ", "));
}

struct Key {
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

#define PC_DOUBLE(expr)                                                                                              \
    Key {                                                                                                            \
        [](const RunConfig& c) { return show(c.expr); },                                                             \
            [](RunConfig& c, const std::string& k, const std::string& v) { c.expr = parse_double(k, v); }            \
    }
#define PC_SIZE(expr)                                                                                                \
    Key {                                                                                                            \
        [](const RunConfig& c) { return show(static_cast<std::uint64_t>(c.expr)); },                                 \
            [](RunConfig& c, const std::string& k, const std::string& v) {                                           \
                c.expr = static_cast<decltype(c.expr)>(parse_unsigned(k, v));                                        \
            }                                                                                                        \
    }
#define PC_BOOL(expr)                                                                                                \
    Key {                                                                                                            \
        [](const RunConfig& c) { return show(c.expr); },                                                             \
            [](RunConfig& c, const std::string& k, const std::string& v) { c.expr = parse_bool(k, v); }              \
    }
#define PC_LIST(expr)                                                                                                \
    Key {                                                                                                            \
        [](const RunConfig& c) { return show(c.expr); },                                                             \
            [](RunConfig& c, const std::string& k, const std::string& v) { parse_list(k, v, c.expr); }               \
    }

// Ordered as written by to_text().
const std::vector<std::pair<std::string, Key>>& table() {
    static const std::vector<std::pair<std::string, Key>> t = {
        {"benchmark",
         {[](const RunConfig& c) { return to_string(c.benchmark); },
          [](RunConfig& c, const std::string&, const std::string& v) { c.benchmark = benchmark_from_string(trim(v)); }}},
        {"data_enhanced", PC_BOOL(data_enhanced)},
        {"seed", PC_SIZE(seed)},
        {"arch.hidden_layers", PC_SIZE(arch.hidden_layers)},
        {"arch.hidden_width", PC_SIZE(arch.hidden_width)},
        {"material.young", PC_DOUBLE(young)},
        {"material.poisson", PC_DOUBLE(poisson)},
        {"load.pressure", PC_DOUBLE(pressure)},
        {"patch.l", PC_DOUBLE(patch.l)},
        {"patch.h", PC_DOUBLE(patch.h)},
        {"patch.w", PC_DOUBLE(patch.w)},
        {"patch.interior", PC_SIZE(patch_counts.interior)},
        {"patch.contact", PC_SIZE(patch_counts.contact)},
        {"patch.evaluation_per_axis", PC_SIZE(patch_counts.evaluation_per_axis)},
        {"hertz.radius", PC_DOUBLE(hertz.radius)},
        {"hertz.width", PC_DOUBLE(hertz.width)},
        {"hertz.contact_angle_deg", PC_DOUBLE(hertz.contact_angle_deg)},
        {"hertz.interior", PC_SIZE(hertz_counts.interior)},
        {"hertz.curved", PC_SIZE(hertz_counts.curved)},
        {"hertz.contact", PC_SIZE(hertz_counts.contact)},
        {"hertz.evaluation", PC_SIZE(hertz_counts.evaluation)},
        {"hertz.evaluation_z", PC_DOUBLE(hertz_counts.evaluation_z)},
        {"hertz.evaluation_y_end", PC_DOUBLE(hertz_counts.evaluation_y_end)},
        {"hertz.data_per_line", PC_SIZE(data_per_line)},
        {"hertz.refine_points", PC_SIZE(hertz_refine_points)},
        {"hertz.refine_width", PC_DOUBLE(hertz_refine_width)},
        {"hertz.refine_depth", PC_DOUBLE(hertz_refine_depth)},
        {"weights.momentum", PC_LIST(weights.momentum)},
        {"weights.coupling", PC_LIST(weights.coupling)},
        {"weights.dirichlet", PC_LIST(weights.dirichlet)},
        {"weights.neumann", PC_LIST(weights.neumann)},
        {"weights.data", PC_LIST(weights.data)},
        {"weights.fs_xi", PC_DOUBLE(weights.fs_xi)},
        {"weights.fs_eta", PC_DOUBLE(weights.fs_eta)},
        {"weights.kkt", PC_DOUBLE(weights.kkt)},
        {"adam.lr", PC_DOUBLE(adam.lr)},
        {"adam.epochs", PC_SIZE(adam.epochs)},
        {"adam.beta1", PC_DOUBLE(adam.beta1)},
        {"adam.beta2", PC_DOUBLE(adam.beta2)},
        {"adam.epsilon", PC_DOUBLE(adam.epsilon)},
        {"lbfgs.memory", PC_SIZE(lbfgs.memory)},
        {"lbfgs.max_iterations", PC_SIZE(lbfgs.max_iterations)},
        {"lbfgs.gradient_norm_tol", PC_DOUBLE(lbfgs.gradient_norm_tol)},
        {"lbfgs.loss_change_tol", PC_DOUBLE(lbfgs.loss_change_tol)},
        {"lbfgs.c1", PC_DOUBLE(lbfgs.c1)},
        {"lbfgs.c2", PC_DOUBLE(lbfgs.c2)},
        {"lbfgs.max_line_search_evaluations", PC_SIZE(lbfgs.max_line_search_evaluations)},
        {"output.dir",
         {[](const RunConfig& c) { return c.output_dir.string(); },
          [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); }}},
        {"output.log_interval", PC_SIZE(log_interval)},
        {"output.vtk", PC_BOOL(write_vtk)},
        {"output.checkpoint", PC_BOOL(write_checkpoint)},
    };
    return t;
}

#undef PC_DOUBLE
#undef PC_SIZE
#undef PC_BOOL
#undef PC_LIST

const Key& lookup(const std::string& key) {
    static const std::map<std::string, const Key*> index = [] {
        std::map<std::string, const Key*> m;
        for (const auto& [name, k] : table()) {
            m[name] = &k;
        }
        return m;
    }();
    const auto it = index.find(key);
    if (it == index.end()) {
        throw ConfigurationError("unknown configuration key '" + key + "'");
    }
    return *it->second;
}

} // namespace

std::string to_string(Benchmark b) { return b == Benchmark::patch ? "patch" : "hertz"; }

Benchmark benchmark_from_string(const std::string& name) {
    if (name == "patch") {
        return Benchmark::patch;
    }
    if (name == "hertz") {
        return Benchmark::hertz;
    }
    throw ConfigurationError("unknown benchmark '" + name + "' (expected patch or hertz)");
}

RunConfig RunConfig::defaults(Benchmark b) {
    RunConfig c;
    c.benchmark = b;
    if (b == Benchmark::hertz) {
        c.young = 200.0;
        c.poisson = 0.3;
        c.pressure = 0.5;
        c.weights.kkt = 500.0;
    }
    return c;
}

void RunConfig::set(const std::string& key, const std::string& value) { lookup(key).set(*this, key, value); }

std::string RunConfig::get(const std::string& key) const { return lookup(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& entry : table()) {
            v.push_back(entry.first);
        }
        return v;
    }();
    return names;
}

void RunConfig::apply_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigurationError(fmt::format("{}:{}: expected 'key = value'", origin, number));
        }
        try {
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigurationError& e) {
            throw ConfigurationError(fmt::format("{}:{}: {}", origin, number, e.what()));
        }
    }
}

void RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    apply_text(buffer.str(), path.string());
}

std::string RunConfig::to_text() const {
    std::string out;
    for (const auto& [name, key] : table()) {
        out += fmt::format("{} = {}\n", name, key.get(*this));
    }
    return out;
}

void RunConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write config file " + path.string());
    }
    out << "# pinncontact run configuration (key = value, '#' comments)\n" << to_text();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

void RunConfig::validate() const {
    arch.validate();
    if (arch.input_dim != kSpatialDim || arch.output_dim != kOutputCount) {
        throw ConfigurationError("the network must map 3 coordinates to 9 outputs");
    }
    [[maybe_unused]] const MaterialParams material(young, poisson);
    if (!(pressure > 0.0)) {
        throw ConfigurationError("load.pressure must be positive");
    }
    if (data_enhanced && benchmark != Benchmark::hertz) {
        throw ConfigurationError("data_enhanced applies to the hertz benchmark only");
    }
    if (!(hertz.contact_angle_deg > 0.0 && hertz.contact_angle_deg < 90.0)) {
        throw ConfigurationError("hertz.contact_angle_deg must lie in (0, 90)");
    }
    for (double v : {patch.l, patch.h, patch.w, hertz.radius, hertz.width, hertz_refine_width, hertz_refine_depth}) {
        if (!(v > 0.0)) {
            throw ConfigurationError("geometry lengths must be positive");
        }
    }
    if (log_interval == 0) {
        throw ConfigurationError("output.log_interval must be positive");
    }
    weights.validate();
    adam.validate();
    lbfgs.validate();
}

} // namespace pinncontact::harness
