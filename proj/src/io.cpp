#include "mildrep/io.hpp"

#include <cmath>
#include <cstdio>

#include "mildrep/errors.hpp"

namespace mildrep {

namespace {

nlohmann::json real_or_null(double x)
{
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_real(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json measure_to_json(const DiscreteMeasure& mu)
{
    nlohmann::json points = nlohmann::json::array();
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        nlohmann::json p = nlohmann::json::array();
        for (int d = 0; d < mu.dim(); ++d)
            p.push_back(mu.points()(d, i));
        points.push_back(std::move(p));
    }
    nlohmann::json weights = nlohmann::json::array();
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        weights.push_back(mu.weight(i));
    return {{"dim", mu.dim()}, {"points", std::move(points)}, {"weights", std::move(weights)}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& doc)
{
    try {
        const int dim = doc.at("dim").get<int>();
        const auto& points = doc.at("points");
        const auto& weights = doc.at("weights");
        if (dim < 1 || !points.is_array() || !weights.is_array() || points.size() != weights.size())
            throw DomainError("measure document: inconsistent dim/points/weights");
        const auto size = static_cast<Eigen::Index>(points.size());
        Eigen::MatrixXd x(dim, size);
        Eigen::VectorXd w(size);
        for (Eigen::Index i = 0; i < size; ++i) {
            const auto& p = points[static_cast<std::size_t>(i)];
            if (!p.is_array() || static_cast<int>(p.size()) != dim)
                throw DomainError("measure document: point " + std::to_string(i) + " has wrong dimension");
            for (int d = 0; d < dim; ++d)
                x(d, i) = p[static_cast<std::size_t>(d)].get<double>();
            w(i) = weights[static_cast<std::size_t>(i)].get<double>();
        }
        return DiscreteMeasure(std::move(x), std::move(w));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("measure document: ") + e.what());
    }
}

std::string reports_to_csv(const std::vector<ThresholdReport>& reports)
{
    std::string out = "n,beta,underline_alpha,alpha_plus_lo,alpha_plus_hi,alpha_star\n";
    for (const auto& r : reports) {
        out += std::to_string(r.n);
        for (double v : {r.beta, r.underline_alpha, r.alpha_plus.lo, r.alpha_plus.hi, r.alpha_star}) {
            out += ',';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json reports_to_json(const std::vector<ThresholdReport>& reports)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) {
        out.push_back({{"n", r.n},
                       {"beta", r.beta},
                       {"underline_alpha", r.underline_alpha},
                       {"alpha_plus_lo", r.alpha_plus.lo},
                       {"alpha_plus_hi", r.alpha_plus.hi},
                       {"alpha_star", r.alpha_star}});
    }
    return out;
}

nlohmann::json flow_result_to_json(const FlowResult& result)
{
    nlohmann::json trace = nlohmann::json::array();
    for (double e : result.energy_trace)
        trace.push_back(real_or_null(e));
    return {{"measure", measure_to_json(result.final)},
            {"energy", real_or_null(result.energy)},
            {"classification", to_string(result.classification.label)},
            {"classification_radius", real_or_null(result.classification.radius)},
            {"converged", result.converged},
            {"status", to_string(result.status)},
            {"steps", result.steps},
            {"max_gradient", real_or_null(result.max_gradient)},
            {"barycenter_drift", real_or_null(result.barycenter_drift)},
            {"restart_index", result.restart_index},
            {"diagnostics", result.diagnostics},
            {"energy_trace", std::move(trace)}};
}

std::string trace_to_csv(const std::vector<double>& trace)
{
    std::string out = "step,energy\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_real(trace[k]);
        out += '\n';
    }
    return out;
}

}  // namespace mildrep
