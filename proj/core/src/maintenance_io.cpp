#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "failsim/csv.hpp"
#include "failsim/error.hpp"
#include "failsim/maintenance.hpp"

namespace failsim
{

namespace
{

void write_ages_header(std::ostream& out, std::size_t components)
{
    for (std::size_t i = 1; i <= components; ++i)
        out << ",u_" << i;
}

void write_ages(std::ostream& out, const InitialAges& ages)
{
    for (double u : ages.u)
        out << ',' << format_double(u);
}

std::size_t count_age_columns(const std::vector<std::string>& header, std::size_t first)
{
    std::size_t n = 0;
    while (first + n < header.size() && header[first + n] == "u_" + std::to_string(n + 1))
        ++n;
    return n;
}

} // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, std::size_t components)
{
    out << "scenario";
    write_ages_header(out, components);
    out << ",model,tau_star,cr_star,R_at_tau,E_rho\n";
    for (const auto& row : rows)
    {
        if (!row.result)
            continue;
        const auto& r = *row.result;
        out << row.scenario;
        write_ages(out, row.ages);
        out << ',' << model_number(row.mode) << ',' << format_double(r.tau_star) << ',' << format_double(r.cr_star)
            << ',' << format_double(r.star().reliability) << ',' << format_double(r.star().expected_downtime) << '\n';
    }
}

void write_sweep_diagnostics_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << "scenario,model,tau,R,E_rho,CR\n";
    for (const auto& row : rows)
    {
        if (!row.result)
            continue;
        for (const auto& rec : row.result->records)
            out << row.scenario << ',' << model_number(row.mode) << ',' << format_double(rec.tau) << ','
                << format_double(rec.reliability) << ',' << format_double(rec.expected_downtime) << ','
                << format_double(rec.cost_rate) << '\n';
    }
}

std::vector<InitialAges> read_scenarios_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw DomainError("scenarios CSV: empty file");
    const auto header = split_csv_line(line);
    const std::size_t n = header.empty() || header[0] != "scenario" ? 0 : count_age_columns(header, 1);
    if (n == 0 || header.size() != n + 1)
        throw DomainError("scenarios CSV: expected header 'scenario,u_1,...,u_n'");

    std::vector<InitialAges> scenarios;
    for (int line_no = 2; std::getline(in, line); ++line_no)
    {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != n + 1)
            throw DomainError("scenarios CSV line " + std::to_string(line_no) + ": expected " +
                              std::to_string(n + 1) + " fields");
        InitialAges ages;
        try
        {
            for (std::size_t i = 1; i <= n; ++i)
                ages.u.push_back(parse_double(fields[i]));
        }
        catch (const DomainError& e)
        {
            throw DomainError("scenarios CSV line " + std::to_string(line_no) + ": " + e.what());
        }
        scenarios.push_back(std::move(ages));
    }
    if (scenarios.empty())
        throw DomainError("scenarios CSV: no scenarios");
    return scenarios;
}

void write_maintenance_result(std::ostream& out, const MaintenanceResult& result)
{
    out << "model,failed_at_inspection";
    write_ages_header(out, result.ages.u.size());
    out << ",tau,R,E_rho,CR,star\n";
    for (std::size_t k = 0; k < result.records.size(); ++k)
    {
        const auto& rec = result.records[k];
        out << model_number(result.mode) << ',' << (result.failed_at_inspection ? 1 : 0);
        write_ages(out, result.ages);
        out << ',' << format_double(rec.tau) << ',' << format_double(rec.reliability) << ','
            << format_double(rec.expected_downtime) << ',' << format_double(rec.cost_rate) << ','
            << (k == result.star_index ? 1 : 0) << '\n';
    }
}

MaintenanceResult read_maintenance_result(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw DomainError("maintenance result CSV: empty input");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "model" || header[1] != "failed_at_inspection")
        throw DomainError("maintenance result CSV: unexpected header");
    const std::size_t n = count_age_columns(header, 2);
    const std::vector<std::string> tail{"tau", "R", "E_rho", "CR", "star"};
    if (header.size() != 2 + n + tail.size() || !std::equal(tail.begin(), tail.end(), header.begin() + 2 + n))
        throw DomainError("maintenance result CSV: unexpected header");

    MaintenanceResult result;
    bool have_star = false;
    for (int line_no = 2; std::getline(in, line); ++line_no)
    {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw DomainError("maintenance result CSV line " + std::to_string(line_no) + ": wrong field count");
        InitialAges ages;
        for (std::size_t i = 0; i < n; ++i)
            ages.u.push_back(parse_double(f[2 + i]));
        const ShockMode mode = f[0] == "1" ? ShockMode::poisson : ShockMode::facilitation;
        const bool failed = f[1] == "1";
        if (result.records.empty())
        {
            result.mode = mode;
            result.failed_at_inspection = failed;
            result.ages = ages;
        }
        else if (mode != result.mode || failed != result.failed_at_inspection || ages.u != result.ages.u)
            throw DomainError("maintenance result CSV line " + std::to_string(line_no) + ": inconsistent scenario");

        result.records.push_back({parse_double(f[2 + n]), parse_double(f[3 + n]), parse_double(f[4 + n]),
                                  parse_double(f[5 + n])});
        if (f[6 + n] == "1")
        {
            result.star_index = result.records.size() - 1;
            have_star = true;
        }
    }
    if (result.records.empty() || !have_star)
        throw DomainError("maintenance result CSV: no records or no marked optimum");
    result.tau_star = result.star().tau;
    result.cr_star = result.star().cost_rate;
    return result;
}

} // namespace failsim
