#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/flow.hpp"
#include "mildrep/io.hpp"
#include "mildrep/measures.hpp"
#include "mildrep/potentials.hpp"
#include "mildrep/thresholds.hpp"

namespace mildrep::cli {

namespace {

using nlohmann::json;

/// Argument combinations the parser itself cannot reject.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KernelSpec {
    std::string kind = "powerlaw";
    double alpha = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> beta;
};

Kernel make_kernel(const KernelSpec& spec)
{
    auto need_beta = [&] {
        if (!spec.beta)
            throw UsageError("--beta is required for kind " + spec.kind);
        return *spec.beta;
    };
    if (spec.kind == "powerlaw")
        return Kernel::power_law(spec.alpha, need_beta());
    if (spec.kind == "rescaled")
        return Kernel::rescaled(spec.alpha, need_beta());
    if (spec.kind == "loglimit")
        return Kernel::log_limit(spec.alpha);
    if (spec.kind == "attractive")
        return Kernel::pure_attractive(spec.alpha);
    throw UsageError("unknown kernel kind '" + spec.kind + "'");
}

/// Flow and threshold computations live in the range beta >= 2, alpha > beta.
void require_mild_exponents(const KernelSpec& spec)
{
    if (spec.kind != "powerlaw" && spec.kind != "rescaled")
        return;
    if (!spec.beta || !(*spec.beta >= 2.0) || !(spec.alpha > *spec.beta))
        throw UsageError("kind " + spec.kind + " requires alpha > beta >= 2");
}

void add_kernel_options(CLI::App* cmd, KernelSpec& spec, bool with_kind)
{
    if (with_kind)
        cmd->add_option("--kind", spec.kind, "powerlaw | rescaled | loglimit | attractive")
            ->check(CLI::IsMember({"powerlaw", "rescaled", "loglimit", "attractive"}));
    cmd->add_option("--alpha", spec.alpha, "attractive exponent")->required();
    cmd->add_option("--beta", spec.beta, "repulsive exponent");
}

void echo_kernel(json& config, const KernelSpec& spec)
{
    config["kind"] = spec.kind;
    config["alpha"] = spec.alpha;
    if (spec.beta)
        config["beta"] = *spec.beta;
}

std::string scalar_text(const json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_float())
        return format_real(v.get<double>());
    return v.dump();
}

/// "# key=value" lines in key order.
std::string csv_preamble(const json& config)
{
    std::string out;
    for (const auto& [key, value] : config.items())
        out += "# " + key + "=" + scalar_text(value) + "\n";
    return out;
}

std::string json_text(const json& doc)
{
    return doc.dump(2) + "\n";
}

void write_text(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw UsageError("cannot open output file " + path);
    file << text;
    if (!file)
        throw UsageError("failed writing " + path);
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buf;
}

json real_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

// ---- potential -------------------------------------------------------------

struct PotentialArgs {
    KernelSpec kernel;
    double rmin = 0.0;
    double rmax = 2.0;
    int steps = 201;
    std::string output;
};

void cmd_potential(const PotentialArgs& a, std::ostream& out)
{
    if (a.steps < 2)
        throw UsageError("--steps must be at least 2 grid points");
    if (!(a.rmin >= 0.0) || !(a.rmax > a.rmin) || !std::isfinite(a.rmax))
        throw UsageError("need 0 <= rmin < rmax");
    const Kernel kernel = make_kernel(a.kernel);

    json config;
    config["command"] = "potential";
    echo_kernel(config, a.kernel);
    config["rmin"] = a.rmin;
    config["rmax"] = a.rmax;
    config["steps"] = a.steps;

    std::string text = csv_preamble(config) + "r,w,dw\n";
    for (int k = 0; k < a.steps; ++k) {
        const double r = k == a.steps - 1 ? a.rmax : a.rmin + (a.rmax - a.rmin) * k / (a.steps - 1);
        text += format_real(r) + "," + format_real(kernel.value(r)) + "," + format_real(kernel.derivative(r)) + "\n";
    }
    write_text(text, a.output, out);
}

// ---- thresholds ------------------------------------------------------------

struct ThresholdArgs {
    int n = 2;
    std::vector<double> betas;
    std::optional<double> beta_min;
    std::optional<double> beta_max;
    double beta_step = 0.1;
    std::string format = "csv";
    double alpha_tol = 1e-3;
    double el_tol = 1e-7;
    double root_tol = 1e-12;
    int starts = 64;
    std::uint64_t seed = 0;
    std::string output;
};

std::vector<double> threshold_grid(const ThresholdArgs& a)
{
    if (!a.betas.empty()) {
        if (a.beta_min || a.beta_max)
            throw UsageError("use either --beta or --beta-min/--beta-max");
        return a.betas;
    }
    if (!a.beta_min || !a.beta_max)
        throw UsageError("give --beta or both --beta-min and --beta-max");
    if (!(a.beta_step > 0.0) || !(*a.beta_max >= *a.beta_min))
        throw UsageError("need beta-step > 0 and beta-max >= beta-min");
    const auto count = static_cast<long>(std::floor((*a.beta_max - *a.beta_min) / a.beta_step + 1e-9)) + 1;
    std::vector<double> grid;
    for (long k = 0; k < count; ++k)
        grid.push_back(*a.beta_min + static_cast<double>(k) * a.beta_step);
    return grid;
}

void cmd_thresholds(const ThresholdArgs& a, std::ostream& out)
{
    const std::vector<double> grid = threshold_grid(a);
    AlphaPlusOptions options;
    options.alpha_tol = a.alpha_tol;
    options.el_tol = a.el_tol;
    options.root_tol = a.root_tol;
    options.margin.starts = a.starts;
    options.margin.seed = a.seed;
    if (!(options.alpha_tol > 0.0) || !(options.el_tol >= 0.0) || !(options.root_tol > 0.0))
        throw UsageError("tolerances must be positive");

    const std::vector<ThresholdReport> reports = phase_sweep(a.n, grid, options);

    json config;
    config["command"] = "thresholds";
    config["n"] = a.n;
    config["betas"] = grid;
    config["alpha_tol"] = a.alpha_tol;
    config["el_tol"] = a.el_tol;
    config["root_tol"] = a.root_tol;
    config["starts"] = a.starts;
    config["seed"] = a.seed;
    config["format"] = a.format;

    if (a.format == "json") {
        write_text(json_text({{"config", config}, {"reports", reports_to_json(reports)}}), a.output, out);
        return;
    }
    json echo = config;
    echo["betas"] = [&] {
        std::string s;
        for (double b : grid)
            s += (s.empty() ? "" : ";") + format_real(b);
        return s;
    }();
    write_text(csv_preamble(echo) + reports_to_csv(reports), a.output, out);
}

// ---- flow ------------------------------------------------------------------

struct FlowArgs {
    int n = 2;
    KernelSpec kernel;
    int particles = 40;
    int restarts = 20;
    std::uint64_t seed = 0;
    int max_steps = 20000;
    double grad_tol = 1e-10;
    std::optional<double> init_radius;
    double classify_tol = 1e-3;
    std::string output;
    std::string trace_csv;
};

double max_support_radius(const DiscreteMeasure& mu)
{
    double r = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        if (mu.weight(i) > 0.0)
            r = std::max(r, mu.point(i).norm());
    return r;
}

void cmd_flow(const FlowArgs& a, std::ostream& out)
{
    require_mild_exponents(a.kernel);
    const Kernel kernel = make_kernel(a.kernel);
    FlowConfig config;
    config.n = a.n;
    config.particles = a.particles;
    config.restarts = a.restarts;
    config.seed = a.seed;
    config.max_steps = a.max_steps;
    config.grad_tol = a.grad_tol;
    config.init_radius = a.init_radius;
    config.classify_tol = a.classify_tol;

    const MultistartResult run = multistart(config, kernel);
    const FlowResult& best = run.best;

    json echo;
    echo["command"] = "flow";
    echo["n"] = a.n;
    echo_kernel(echo, a.kernel);
    echo["particles"] = a.particles;
    echo["restarts"] = a.restarts;
    echo["seed"] = a.seed;
    echo["max_steps"] = a.max_steps;
    echo["grad_tol"] = a.grad_tol;
    echo["init_radius"] = config.init_radius.value_or(default_init_radius(kernel));
    echo["classify_tol"] = a.classify_tol;
    echo["step_initial"] = config.step.initial_step;
    echo["step_shrink"] = config.step.shrink;
    echo["step_sufficient_decrease"] = config.step.sufficient_decrease;
    echo["step_growth"] = config.step.growth;

    json restarts = json::array();
    for (const auto& s : run.restarts)
        restarts.push_back({{"index", s.index},
                            {"ok", s.ok},
                            {"energy", real_or_null(s.energy)},
                            {"status", to_string(s.status)},
                            {"steps", s.steps},
                            {"error", s.error}});

    json doc;
    doc["config"] = echo;
    doc["timestamp"] = utc_timestamp();
    doc["kernel"] = kernel.describe();
    doc["result"] = flow_result_to_json(best);
    doc["radius"] = max_support_radius(best.final);
    doc["simplex_energy"] = real_or_null(simplex_energy(a.n, 1.0, kernel));
    doc["verify_min42"] = verify_min42(best.final, a.classify_tol);
    doc["restarts"] = std::move(restarts);

    write_text(json_text(doc), a.output, out);
    if (!a.trace_csv.empty())
        write_text(trace_to_csv(best.energy_trace), a.trace_csv, out);
}

// ---- fgrid -----------------------------------------------------------------

struct FgridArgs {
    std::vector<int> ns{1, 2, 3, 10, 100, 1000};
    double tmin = 2.0;
    double tmax = 4.0;
    int steps = 21;
    std::string output;
};

// Comparisons between f_n columns tolerate this much rounding.
constexpr double kColumnSlack = 1e-12;

void cmd_fgrid(const FgridArgs& a, std::ostream& out)
{
    if (!(a.tmin > 0.0))
        throw UsageError("f_n is defined for t > 0");
    if (a.steps < 1 || (a.steps > 1 && !(a.tmax > a.tmin)))
        throw UsageError("need steps >= 1 and tmax > tmin");
    for (int n : a.ns)
        if (n < 1)
            throw UsageError("dimensions must be >= 1");

    std::vector<double> ts;
    for (int k = 0; k < a.steps; ++k)
        ts.push_back(a.steps == 1 || k == a.steps - 1 ? (a.steps == 1 ? a.tmin : a.tmax)
                                                      : a.tmin + (a.tmax - a.tmin) * k / (a.steps - 1));

    json config;
    config["command"] = "fgrid";
    config["ns"] = [&] {
        std::string s;
        for (int n : a.ns)
            s += (s.empty() ? "" : ";") + std::to_string(n);
        return s;
    }();
    config["tmin"] = a.tmin;
    config["tmax"] = a.tmax;
    config["steps"] = a.steps;

    std::string text = csv_preamble(config) + "n,t,f_n,f_inf\n";
    for (int n : a.ns)
        for (double t : ts)
            text += std::to_string(n) + "," + format_real(t) + "," + format_real(f_n(n, t)) + "," +
                    format_real(f_inf(t, regime_for(n))) + "\n";

    // f_n nondecreasing in n (n >= 2) at every grid t in [2, 4].
    std::vector<int> sorted;
    for (int n : a.ns)
        if (n >= 2)
            sorted.push_back(n);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    bool monotone = true;
    for (double t : ts) {
        if (t < 2.0 || t > 4.0)
            continue;
        for (std::size_t k = 1; k < sorted.size(); ++k)
            if (f_n(sorted[k], t) < f_n(sorted[k - 1], t) - kColumnSlack)
                monotone = false;
    }
    text += std::string("# summary: monotone_in_n_on_[2,4]=") + (monotone ? "true" : "false") + "\n";
    write_text(text, a.output, out);
}

// ---- measure / energy --------------------------------------------------------

struct MeasureArgs {
    std::string type = "simplex";
    int n = 2;
    double scale = 1.0;
    int points = 64;
    std::string output;
};

void cmd_measure(const MeasureArgs& a, std::ostream& out)
{
    std::optional<DiscreteMeasure> mu;
    if (a.type == "simplex")
        mu = unit_simplex(a.n, a.scale);
    else if (a.type == "cross")
        mu = cross_polytope(a.n, a.scale);
    else
        mu = sphere_quadrature(a.n, a.scale, a.points);

    json config;
    config["command"] = "measure";
    config["type"] = a.type;
    config["n"] = a.n;
    config["scale"] = a.scale;
    if (a.type == "sphere")
        config["points"] = a.points;
    write_text(json_text({{"config", config}, {"measure", measure_to_json(*mu)}}), a.output, out);
}

struct EnergyArgs {
    std::string input;
    KernelSpec kernel;
    double classify_tol = 1e-3;
    std::string output;
};

void cmd_energy(const EnergyArgs& a, std::ostream& out)
{
    const Kernel kernel = make_kernel(a.kernel);
    std::ifstream file(a.input);
    if (!file)
        throw UsageError("cannot read " + a.input);
    json doc;
    try {
        doc = json::parse(file);
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid JSON in ") + a.input + ": " + e.what());
    }
    const DiscreteMeasure mu = measure_from_json(doc.contains("measure") ? doc.at("measure") : doc);
    const Classification label = classify(mu, a.classify_tol);

    json config;
    config["command"] = "energy";
    config["input"] = a.input;
    echo_kernel(config, a.kernel);
    config["classify_tol"] = a.classify_tol;

    json result;
    result["energy"] = real_or_null(energy(mu, kernel));
    result["classification"] = to_string(label.label);
    result["classification_radius"] = real_or_null(label.radius);
    result["points"] = mu.size();
    write_text(json_text({{"config", config}, {"result", result}}), a.output, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Power-law interaction energies: thresholds, kernels and particle flows", "mildrep"};
    app.require_subcommand(1);

    PotentialArgs potential;
    auto* p = app.add_subcommand("potential", "tabulate r, w(r), w'(r) on a uniform grid");
    add_kernel_options(p, potential.kernel, true);
    p->add_option("--rmin", potential.rmin, "first grid radius");
    p->add_option("--rmax", potential.rmax, "last grid radius");
    p->add_option("--steps", potential.steps, "number of grid points (>= 2)");
    p->add_option("--output", potential.output, "write to file instead of stdout");

    ThresholdArgs thresholds;
    auto* t = app.add_subcommand("thresholds", "lower bound, EL bracket and upper bound per beta");
    t->add_option("--n", thresholds.n, "dimension")->required();
    t->add_option("--beta", thresholds.betas, "comma separated beta values")->delimiter(',');
    t->add_option("--beta-min", thresholds.beta_min, "first beta of a uniform grid");
    t->add_option("--beta-max", thresholds.beta_max, "last beta of a uniform grid");
    t->add_option("--beta-step", thresholds.beta_step, "grid spacing");
    t->add_option("--format", thresholds.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    t->add_option("--alpha-tol", thresholds.alpha_tol, "EL bracket width");
    t->add_option("--el-tol", thresholds.el_tol, "margin >= -el-tol counts as satisfied");
    t->add_option("--root-tol", thresholds.root_tol, "tolerance of the closed-form bound solves");
    t->add_option("--starts", thresholds.starts, "Halton starts of the EL search");
    t->add_option("--seed", thresholds.seed, "offset of the Halton sequence");
    t->add_option("--output", thresholds.output, "write to file instead of stdout");

    FlowArgs flow;
    auto* f = app.add_subcommand("flow", "multistart particle gradient flow");
    f->add_option("--n", flow.n, "dimension")->required();
    add_kernel_options(f, flow.kernel, true);
    f->add_option("--particles", flow.particles, "particles per restart");
    f->add_option("--restarts", flow.restarts, "independent random initializations");
    f->add_option("--seed", flow.seed, "RNG seed");
    f->add_option("--max-steps", flow.max_steps, "accepted steps per restart");
    f->add_option("--grad-tol", flow.grad_tol, "max per-particle gradient norm at convergence");
    f->add_option("--init-radius", flow.init_radius, "radius of the initialization ball");
    f->add_option("--classify-tol", flow.classify_tol, "tolerance for classify and verify_min42");
    f->add_option("--output", flow.output, "write JSON to file instead of stdout");
    f->add_option("--trace-csv", flow.trace_csv, "write the best energy trace as step,energy CSV");

    FgridArgs fgrid;
    auto* g = app.add_subcommand("fgrid", "tabulate f_n(t) and its large-n limit");
    g->add_option("--n", fgrid.ns, "comma separated dimensions")->delimiter(',');
    g->add_option("--tmin", fgrid.tmin, "first t");
    g->add_option("--tmax", fgrid.tmax, "last t");
    g->add_option("--steps", fgrid.steps, "number of grid points");
    g->add_option("--output", fgrid.output, "write to file instead of stdout");

    MeasureArgs measure;
    auto* m = app.add_subcommand("measure", "write a reference measure as JSON");
    m->add_option("--type", measure.type, "simplex | cross | sphere")
        ->check(CLI::IsMember({"simplex", "cross", "sphere"}));
    m->add_option("--n", measure.n, "dimension");
    m->add_option("--scale", measure.scale, "simplex diameter or radius");
    m->add_option("--points", measure.points, "sphere quadrature size");
    m->add_option("--output", measure.output, "write to file instead of stdout");

    EnergyArgs energy_args;
    auto* e = app.add_subcommand("energy", "evaluate the energy of a measure JSON file");
    e->add_option("--input", energy_args.input, "measure JSON")->required();
    add_kernel_options(e, energy_args.kernel, true);
    e->add_option("--classify-tol", energy_args.classify_tol, "classification tolerance");
    e->add_option("--output", energy_args.output, "write to file instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (p->parsed())
            cmd_potential(potential, out);
        else if (t->parsed())
            cmd_thresholds(thresholds, out);
        else if (f->parsed())
            cmd_flow(flow, out);
        else if (g->parsed())
            cmd_fgrid(fgrid, out);
        else if (m->parsed())
            cmd_measure(measure, out);
        else if (e->parsed())
            cmd_energy(energy_args, out);
        return kOk;
    } catch (const InvariantViolation& error) {
        err << "invariant violation: " << error.what() << "\n";
        return kInternal;
    } catch (const ConvergenceError& error) {
        err << "optimization failed: " << error.what() << "\n";
        return kNoConvergence;
    } catch (const BracketError& error) {
        err << "numerical bracket failure: " << error.what() << "\n";
        return kInternal;
    } catch (const DomainError& error) {
        err << "error: " << error.what() << "\n";
        return kUsage;
    } catch (const UsageError& error) {
        err << "error: " << error.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& error) {
        err << "error: " << error.what() << "\n";
        return kUsage;
    } catch (const std::exception& error) {
        err << "internal error: " << error.what() << "\n";
        return kInternal;
    }
}

}  // namespace mildrep::cli
