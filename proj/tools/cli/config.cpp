#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "manifest.hpp"

namespace failsim::cli
{

ConfigError::ConfigError(const std::string& path, int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("config line {}: {}: {}", line, path, message)
                                  : fmt::format("config: {}: {}", path, message)),
      path_(path), line_(line)
{
}

namespace
{

std::string describe(const std::vector<Violation>& violations)
{
    std::string text = "invalid config";
    for (const auto& v : violations)
        text += fmt::format("\n  {}: {}", v.path, v.message);
    return text;
}

int line_of(const YAML::Node& node)
{
    const auto mark = node.Mark();
    return mark.is_null() ? 0 : mark.line + 1;
}

/// A YAML mapping whose keys are checked against a fixed set as they are read.
class Section
{
  public:
    Section(YAML::Node node, std::string path, std::set<std::string> allowed)
        : node_(std::move(node)), path_(std::move(path))
    {
        if (!node_.IsMap())
            throw ConfigError(path_, line_of(node_), "expected a mapping");
        for (const auto& entry : node_)
        {
            const auto key = entry.first.as<std::string>();
            if (!allowed.count(key))
                throw ConfigError(join(key), line_of(entry.first), "unknown key");
        }
    }

    bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

    double number(const std::string& key) const
    {
        const auto value = required(key);
        try
        {
            return value.as<double>();
        }
        catch (const YAML::Exception&)
        {
            throw ConfigError(join(key), line_of(value), "expected a number");
        }
    }

    double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) const
    {
        if (!has(key))
            return fallback;
        const auto value = node_[key];
        try
        {
            return value.as<std::uint64_t>();
        }
        catch (const YAML::Exception&)
        {
            throw ConfigError(join(key), line_of(value), "expected a non-negative integer");
        }
    }

    std::string text(const std::string& key) const
    {
        const auto value = required(key);
        if (!value.IsScalar())
            throw ConfigError(join(key), line_of(value), "expected a scalar");
        return value.as<std::string>();
    }

  private:
    YAML::Node required(const std::string& key) const
    {
        const auto value = node_[key];
        if (!value)
            throw ConfigError(join(key), line_of(node_), "missing key");
        return value;
    }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    YAML::Node node_;
    std::string path_;
};

ComponentSpec read_component(const Section& s, double& u)
{
    ComponentSpec c;
    c.name = s.text("name");
    c.soft_threshold = s.number("H");
    c.hard_threshold = s.number("D");
    c.degradation = {s.number("alpha"), s.number("beta")};
    c.shock_magnitude = {s.number("w_mean"), s.number("w_std")};
    const NormalParams damage{s.number("y_mean"), s.number("y_std")};
    if (damage.mean != 0.0 || damage.std != 0.0)
        c.shock_damage = damage;
    u = s.number("u");
    return c;
}

} // namespace

ValidationFailure::ValidationFailure(std::vector<Violation> violations)
    : std::runtime_error(describe(violations)), violations_(std::move(violations))
{
}

ExperimentConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException& e)
    {
        throw ConfigError("<document>", e.mark.line + 1, e.msg);
    }
    if (root.IsNull())
        throw ConfigError("<document>", 0, "config is empty");

    const Section top(root, "", {"system", "components", "costs", "sim", "grids"});
    ExperimentConfig config;

    if (!top.has("system"))
        throw ConfigError("system", 0, "missing section");
    const Section system(root["system"], "system", {"lambda0", "eta", "gamma", "mode"});
    config.system.shock_model = {system.number("lambda0"), system.number("eta"), system.number("gamma")};
    const auto mode_text = system.text("mode");
    const auto mode = parse_shock_mode(mode_text);
    if (!mode)
        throw ConfigError("system.mode", line_of(root["system"]["mode"]),
                          fmt::format("unknown mode '{}' (poisson or facilitation)", mode_text));
    config.system.mode = *mode;

    const auto components = root["components"];
    if (!components || !components.IsSequence())
        throw ConfigError("components", components ? line_of(components) : 0, "expected a list of components");
    for (std::size_t i = 0; i < components.size(); ++i)
    {
        const Section c(components[i], fmt::format("components[{}]", i),
                        {"name", "H", "D", "alpha", "beta", "w_mean", "w_std", "y_mean", "y_std", "u"});
        double u = 0.0;
        config.system.components.push_back(read_component(c, u));
        config.ages.u.push_back(u);
    }

    if (!top.has("costs"))
        throw ConfigError("costs", 0, "missing section");
    const Section costs(root["costs"], "costs", {"c_i", "c_r", "c_rho"});
    config.costs = {costs.number("c_i"), costs.number("c_r"), costs.number("c_rho")};

    if (top.has("sim"))
    {
        const Section sim(root["sim"], "sim",
                          {"replications", "max_shocks", "path_steps", "seed", "truncation_tol"});
        config.sim.replications = sim.count("replications", config.sim.replications);
        config.sim.max_shocks = static_cast<int>(sim.count("max_shocks", static_cast<std::uint64_t>(config.sim.max_shocks)));
        config.sim.path_steps = sim.count("path_steps", config.sim.path_steps);
        config.sim.seed = sim.count("seed", config.sim.seed);
        config.sim.truncation_tolerance = sim.number("truncation_tol", config.sim.truncation_tolerance);
    }
    if (top.has("grids"))
    {
        const Section grids(root["grids"], "grids",
                            {"t_min", "t_max", "t_points", "tau_min", "tau_max", "tau_points"});
        config.grid.t_min = grids.number("t_min", config.grid.t_min);
        config.grid.t_max = grids.number("t_max", config.grid.t_max);
        config.grid.t_points = grids.count("t_points", config.grid.t_points);
        config.tau.tau_min = grids.number("tau_min", config.tau.tau_min);
        config.tau.tau_max = grids.number("tau_max", config.tau.tau_max);
        config.tau.steps = grids.count("tau_points", config.tau.steps);
    }

    config.digest = sha256_hex(text);
    validate_config(config);
    config.sim.t_grid = config.grid.points();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string(), 0, "cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& config)
{
    auto violations = validate_system(config.system, config.ages, config.costs).violations;

    const bool system_ok = violations.empty();
    const auto& g = config.grid;
    if (!(g.t_min > 0.0 && g.t_max > g.t_min) || g.t_points < 2)
        violations.push_back({"grids.t", "need 0 < t_min < t_max and t_points >= 2"});
    else if (system_ok) // the truncation check evaluates the system's parameters
    {
        SimConfig sim = config.sim;
        sim.t_grid = g.points();
        auto more = check_sim_config(sim, config.system);
        violations.insert(violations.end(), more.begin(), more.end());
    }
    auto tau = check_tau_grid(config.tau);
    violations.insert(violations.end(), tau.begin(), tau.end());

    if (!violations.empty())
        throw ValidationFailure(std::move(violations));
}

} // namespace failsim::cli
