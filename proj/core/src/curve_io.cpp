#include <algorithm>
#include <charconv>
#include <ostream>
#include <string>

#include "failsim/csv.hpp"
#include "failsim/error.hpp"
#include "failsim/reliability.hpp"

namespace failsim
{

std::string format_double(double value)
{
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc() || result.ptr != text.data() + text.size() || text.empty())
        throw DomainError("not a number: '" + std::string(text) + "'");
    return value;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

const char* to_string(CurveMethod method)
{
    return method == CurveMethod::closed_form ? "closed-form" : "monte-carlo";
}

double ReliabilityCurve::reliability_at(double t) const
{
    require(!points.empty(), "reliability_at: empty curve");
    require(t <= points.back().t, "reliability_at: t beyond the curve grid");
    if (t <= 0.0)
        return initial_reliability;
    const auto it =
        std::lower_bound(points.begin(), points.end(), t, [](const CurvePoint& p, double x) { return p.t < x; });
    const double t1 = it->t;
    const double r1 = it->reliability;
    double t0 = 0.0;
    double r0 = initial_reliability;
    if (it != points.begin())
    {
        t0 = std::prev(it)->t;
        r0 = std::prev(it)->reliability;
    }
    if (t1 == t0)
        return r1;
    return r0 + (t - t0) / (t1 - t0) * (r1 - r0);
}

void write_curve_csv(std::ostream& out, const ReliabilityCurve& curve)
{
    out << "t,R,stderr,method,seed,N\n";
    for (const auto& p : curve.points)
        out << format_double(p.t) << ',' << format_double(p.reliability) << ',' << format_double(p.standard_error)
            << ',' << to_string(curve.method) << ',' << curve.seed << ',' << curve.replications << '\n';
}

} // namespace failsim
