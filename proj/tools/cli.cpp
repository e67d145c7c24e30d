#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>

#include "dynper/equivalence.hpp"
#include "dynper/field_io.hpp"
#include "dynper/json.hpp"
#include "dynper/morphology.hpp"
#include "dynper/pairing.hpp"
#include "dynper/path_oracle.hpp"

namespace dynper::cli {

namespace {

class Divergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string connectivity = "axis";
    bool invert = false;
    std::string format = "auto";
    std::string out_format = "auto";
    std::string output = "-";
};

struct Streams {
    std::istream& in;
    std::ostream& out;
};

std::string slurp(const std::string& path, std::istream& in)
{
    if (path == "-")
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw ParseError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path == "-") {
        out << text;
        out.flush();
        if (!out)
            throw ParseError("failed to write to standard output");
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw ParseError("cannot open '" + path + "' for writing");
    file << text;
    if (!file)
        throw ParseError("failed to write '" + path + "'");
}

void emit(const Json& json, const std::string& path, std::ostream& out)
{
    emit(json.dump(2) + "\n", path, out);
}

ScalarField negated(const ScalarField& field)
{
    std::vector<double> values(field.values().begin(), field.values().end());
    for (double& v : values)
        v = -v;
    return field.with_values(std::move(values));
}

ScalarField load(const std::string& path, const Globals& g, std::istream& in)
{
    const std::string text = slurp(path, in);
    const FieldFormat format = g.format == "auto" ? detect_format(text) : parse_format(g.format);
    try {
        ScalarField field = parse_field(text, format, parse_connectivity(g.connectivity));
        return g.invert ? negated(field) : field;
    } catch (const ParseError& e) {
        throw ParseError((path == "-" ? std::string("<stdin>") : path) + ": " + e.what());
    }
}

/// Values the user sees: undo --invert.
double shown(const Globals& g, double v)
{
    return g.invert ? -v : v;
}

std::vector<PersistencePair> shown(const Globals& g, std::vector<PersistencePair> pairs)
{
    if (g.invert)
        for (PersistencePair& p : pairs) {
            p.birth = -p.birth;
            if (!p.essential())
                p.death = -p.death;
        }
    return pairs;
}

FieldFormat field_format(const Globals& g, const ScalarField& field)
{
    if (g.out_format != "auto")
        return parse_format(g.out_format);
    return field.ndim() == 1 ? FieldFormat::csv_1d : FieldFormat::field_nd;
}

void emit_field(const ScalarField& field, FieldFormat format, const std::string& path,
                std::ostream& out)
{
    emit(format_field(field, format), path, out);
}

void emit_labels(const WatershedLabels& labels, const ScalarField& field, const Globals& g,
                 const std::string& path, std::ostream& out)
{
    const VertexId top = labels.labels.empty()
                             ? 0
                             : *std::max_element(labels.labels.begin(), labels.labels.end());
    FieldFormat format;
    if (g.out_format != "auto")
        format = parse_format(g.out_format);
    else if (field.ndim() == 1)
        format = FieldFormat::csv_1d;
    else if (field.ndim() == 2 && top <= 65535)
        format = FieldFormat::pgm_2d;
    else
        format = FieldFormat::field_nd;
    if (format == FieldFormat::pgm_2d && top > 65535)
        throw UsageError("label id " + std::to_string(top) +
                         " does not fit pgm-2d (maxval 65535); use --out-format field-nd");
    std::vector<double> ids(labels.labels.begin(), labels.labels.end());
    emit_field(field.with_values(std::move(ids)), format, path, out);
}

std::vector<std::size_t> parse_shape(const std::string& text)
{
    std::vector<std::size_t> shape;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = std::min(text.find('x', start), text.size());
        std::size_t extent = 0;
        const char* first = text.data() + start;
        const char* last = text.data() + end;
        const auto [ptr, ec] = std::from_chars(first, last, extent);
        if (ec != std::errc{} || ptr != last || extent == 0)
            throw UsageError("shape '" + text + "' must look like 256 or 32x32");
        shape.push_back(extent);
        if (end == text.size())
            break;
        start = end + 1;
    }
    return shape;
}

struct GeneratorFlags {
    std::string kind = "uniform_random";
    std::string shape = "32x32";
    std::size_t bumps = 8;
    std::uint64_t seed = 0;
    double amp_lo = 1.0;
    double amp_hi = 2.0;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--kind", kind, "gaussian_mixture, poly_sine_1d or uniform_random")
            ->capture_default_str();
        cmd.add_option("--shape", shape, "grid extents, e.g. 256 or 32x32")->capture_default_str();
        cmd.add_option("--bumps", bumps, "Gaussian bumps or sinusoids (K >= 1)")
            ->capture_default_str();
        cmd.add_option("--seed", seed, "64-bit seed")->capture_default_str();
        cmd.add_option("--amp-lo", amp_lo, "lower amplitude bound")->capture_default_str();
        cmd.add_option("--amp-hi", amp_hi, "upper amplitude bound")->capture_default_str();
    }

    GeneratorSpec spec(const Globals& g) const
    {
        GeneratorSpec s;
        s.kind = parse_generator_kind(kind);
        s.shape = parse_shape(shape);
        s.bumps = bumps;
        s.seed = seed;
        s.amp_lo = amp_lo;
        s.amp_hi = amp_hi;
        s.connectivity = parse_connectivity(g.connectivity);
        return s;
    }
};

struct Flags {
    Globals global;
    std::string input = "-";
    std::string method = "persistence";
    VertexId min_index = 0;
    std::string essential = "omit";
    double threshold = 0.0;
    std::string saliency_as = "json";
    std::string labels_path;
    std::string filtered_path;
    GeneratorFlags gen;
    std::size_t trials = 100;
    bool fail_fast = false;
    unsigned threads = 0;
};

int dispatch(const std::string& name, const Flags& f, Streams io, std::ostream& err)
{
    const Globals& g = f.global;

    if (name == "gen") {
        const ScalarField field = generate(f.gen.spec(g));
        emit_field(g.invert ? negated(field) : field, field_format(g, field), g.output, io.out);
        return exit_ok;
    }
    if (name == "verify") {
        SweepOptions options;
        options.fail_fast = f.fail_fast;
        options.threads = f.threads;
        const EquivalenceReport report = sweep(seeded_specs(f.gen.spec(g), f.trials), options);
        emit(to_json(report), g.output, io.out);
        if (!report.pairings_identical) {
            err << "dynper: pairings diverge";
            if (report.first_counterexample)
                err << " at minimum " << report.first_counterexample->divergent_min << " ("
                    << report.first_counterexample->reason << ")";
            err << "\n";
            return exit_divergence;
        }
        return exit_ok;
    }

    const ScalarField field = load(f.input, g, io.in);

    if (name == "pairs") {
        std::vector<PersistencePair> pairs;
        if (f.method == "persistence") {
            pairs = pair_by_persistence(field);
        } else if (f.method == "dynamics") {
            pairs = pair_by_dynamics(field);
        } else {
            pairs = pair_by_persistence(field);
            const std::vector<PersistencePair> flooding = pair_by_dynamics(field);
            if (pairs != flooding) {
                const EquivalenceReport report = verify_equivalence(field);
                Json detail = to_json(report);
                detail["persistence"] = to_json(shown(g, pairs));
                detail["dynamics"] = to_json(shown(g, flooding));
                emit(detail, g.output, io.out);
                throw Divergence("persistence and dynamics pairings differ");
            }
        }
        emit(to_json(shown(g, pairs)), g.output, io.out);
    } else if (name == "dynamics") {
        emit(to_json(f.min_index, dynamics_oracle(field, f.min_index)), g.output, io.out);
    } else if (name == "diagram") {
        std::optional<double> top;
        if (f.essential == "max")
            top = field.max_value();
        std::vector<std::pair<double, double>> points =
            persistence_diagram(pair_by_persistence(field), top);
        for (auto& [birth, death] : points) {
            birth = shown(g, birth);
            death = shown(g, death);
        }
        emit(to_json(points), g.output, io.out);
    } else if (name == "curve") {
        emit(to_json(granulometric_curve(pair_by_persistence(field))), g.output, io.out);
    } else if (name == "filter") {
        const ScalarField filtered = filter_dynamics(field, f.threshold);
        emit_field(g.invert ? negated(filtered) : filtered, field_format(g, field), g.output,
                   io.out);
    } else if (name == "watershed") {
        emit_labels(watershed(field), field, g, g.output, io.out);
    } else if (name == "saliency") {
        const SaliencyMap map = saliency(field);
        if (f.saliency_as == "json") {
            emit(to_json(map), g.output, io.out);
        } else {
            Globals nd = g;
            if (nd.out_format == "auto")
                nd.out_format = "field-nd";
            const ScalarField grid = saliency_grid(field, map);
            emit_field(grid, field_format(nd, grid), g.output, io.out);
        }
    } else if (name == "segment") {
        const SegmentResult result = segment_pipeline(field, f.threshold);
        Json out;
        out["threshold"] = f.threshold;
        out["regions"] = result.labels.region_count();
        out["pairs"] = to_json(shown(g, result.pairs));
        out["curve"] = to_json(result.curve);
        if (!f.filtered_path.empty())
            emit_field(g.invert ? negated(result.filtered) : result.filtered,
                       field_format(g, field), f.filtered_path, io.out);
        if (!f.labels_path.empty())
            emit_labels(result.labels, field, g, f.labels_path, io.out);
        emit(out, g.output, io.out);
    }
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err)
{
    CLI::App app{"Dynamics and persistence pairing of minima on n-D scalar fields", "dynper"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Flags f;
    Globals& g = f.global;
    app.add_option("--connectivity", g.connectivity, "grid adjacency: axis or full")
        ->check(CLI::IsMember({"axis", "full"}))
        ->capture_default_str();
    app.add_flag("--invert", g.invert, "negate the input (work on maxima)");
    app.add_option("--format", g.format, "input format: auto, csv-1d, pgm-2d or field-nd")
        ->check(CLI::IsMember({"auto", "csv-1d", "pgm-2d", "field-nd"}))
        ->capture_default_str();
    app.add_option("--out-format", g.out_format, "field output format")
        ->check(CLI::IsMember({"auto", "csv-1d", "pgm-2d", "field-nd"}))
        ->capture_default_str();
    app.add_option("-o,--output", g.output, "output path, - for standard output")
        ->capture_default_str();

    auto with_input = [&](CLI::App* cmd) {
        cmd->add_option("input", f.input, "field file, - for standard input")->capture_default_str();
        return cmd;
    };

    auto* pairs = with_input(app.add_subcommand("pairs", "minimum/saddle pairs as JSON"));
    pairs->add_option("--method", f.method, "persistence, dynamics or both")
        ->check(CLI::IsMember({"persistence", "dynamics", "both"}))
        ->capture_default_str();

    auto* dyn = with_input(app.add_subcommand("dynamics", "dynamics of one minimum by path search"));
    dyn->add_option("--min", f.min_index, "linear index of a local minimum")->required();

    auto* diagram = with_input(app.add_subcommand("diagram", "persistence diagram points"));
    diagram->add_option("--essential", f.essential, "omit the essential pair or give it death = max")
        ->check(CLI::IsMember({"omit", "max"}))
        ->capture_default_str();

    with_input(app.add_subcommand("curve", "granulometric curve"));

    auto* filter = with_input(app.add_subcommand("filter", "remove minima with dynamics below t"));
    filter->add_option("--t", f.threshold, "dynamics threshold (> 0)")->required();

    with_input(app.add_subcommand("watershed", "basin labels by flooding"));

    auto* sal = with_input(app.add_subcommand("saliency", "extinction values of watershed edges"));
    sal->add_option("--as", f.saliency_as, "json edge list or doubled-resolution field")
        ->check(CLI::IsMember({"json", "field"}))
        ->capture_default_str();

    auto* segment = with_input(app.add_subcommand("segment", "filter, watershed and curve"));
    segment->add_option("--t", f.threshold, "dynamics threshold (> 0)")->required();
    segment->add_option("--labels", f.labels_path, "also write the label field here");
    segment->add_option("--filtered", f.filtered_path, "also write the filtered field here");

    auto* verify = app.add_subcommand("verify", "check both pairings agree on generated fields");
    f.gen.attach(*verify);
    verify->add_option("--trials", f.trials, "number of seeded fields")->capture_default_str();
    verify->add_flag("--fail-fast", f.fail_fast, "stop at the first divergence");
    verify->add_option("--threads", f.threads, "worker threads, 0 = all cores")
        ->capture_default_str();

    auto* generate_cmd = app.add_subcommand("gen", "write a seeded synthetic field");
    f.gen.attach(*generate_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), f, {in, out}, err);
    } catch (const UsageError& e) {
        err << "dynper: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        err << "dynper: " << e.what() << "\n";
        return exit_input;
    } catch (const Divergence& e) {
        err << "dynper: " << e.what() << "\n";
        return exit_divergence;
    } catch (const std::bad_alloc&) {
        err << "dynper: out of memory\n";
        return exit_input;
    }
}

} // namespace dynper::cli
